#include "levyspec/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levyspec/error.hpp"

namespace levyspec {

namespace {
// Keeps 2*half+1 well inside size_t and the dense loops sane.
constexpr double kMaxHalfPoints = 1.0e9;
}  // namespace

Grid make_grid(double a, double dx) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::invalid_argument, "grid half-width a must be positive and finite");
  if (!(dx > 0.0) || !std::isfinite(dx))
    throw Error(ErrorKind::invalid_argument, "grid spacing dx must be positive and finite");
  const double ratio = a / dx;
  if (!std::isfinite(ratio) || ratio > kMaxHalfPoints)
    throw Error(ErrorKind::invalid_argument,
                "a/dx = " + std::to_string(ratio) + " exceeds the supported point count");
  const double rounded = std::round(ratio);
  if (rounded < 1.0)
    throw Error(ErrorKind::invalid_argument, "dx must not exceed a (grid needs at least 3 points)");

  Grid g;
  g.a_ = a;
  g.half_ = static_cast<std::size_t>(rounded);
  g.requested_dx_ = dx;
  g.dx_ = (rounded == ratio) ? dx : a / rounded;
  return g;
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(size());
  for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = x(j);
  return xs;
}

GridFunction::GridFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw Error(ErrorKind::incompatible_grids,
                "value count " + std::to_string(values.size()) + " does not match grid size " +
                    std::to_string(grid.size()));
}

void require_same_grid(const Grid& lhs, const Grid& rhs) {
  if (!(lhs == rhs)) throw Error(ErrorKind::incompatible_grids, "functions live on different grids");
}

double inner_product(std::span<const double> f, std::span<const double> g, double dx) {
  if (f.size() != g.size()) throw Error(ErrorKind::incompatible_grids, "length mismatch in inner product");
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += f[j] * g[j];
  return sum * dx;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid, g.grid);
  return inner_product(f.span(), g.span(), f.grid.dx());
}

double norm(const GridFunction& f) { return std::sqrt(inner_product(f, f)); }

GridFunction normalize(const GridFunction& f) {
  const double n = norm(f);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::degenerate_vector, "cannot normalize a zero-norm function");
  GridFunction out = f;
  for (double& v : out.values) v /= n;
  return out;
}

std::vector<GridFunction> trial_basis(std::size_t n, const Grid& grid) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "trial basis needs at least one function");
  if (grid.a() < 1.0)
    throw Error(ErrorKind::domain_too_small, "trial basis is supported on [-1,1]; grid half-width must be >= 1");
  std::vector<GridFunction> basis;
  basis.reserve(n);
  for (std::size_t label = 1; label <= n; ++label) {
    const double k = static_cast<double>(label) * std::numbers::pi / 2.0;
    const bool even_function = (label % 2) == 1;
    GridFunction phi(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.x(j);
      if (std::abs(x) >= 1.0) continue;
      phi[j] = even_function ? std::cos(k * x) : std::sin(k * x);
    }
    basis.push_back(normalize(phi));
  }
  return basis;
}

}  // namespace levyspec
