#ifndef LEVYSPEC_GRID_HPP
#define LEVYSPEC_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace levyspec {

/// Uniform symmetric lattice x_j = (j - half) * dx on [-a, a]; the point
/// count is always odd so x = 0 and both endpoints are lattice points.
class Grid {
 public:
  Grid() = default;

  double a() const noexcept { return a_; }
  double dx() const noexcept { return dx_; }
  /// Spacing the caller asked for; differs from dx() when a/dx was not an integer.
  double requested_dx() const noexcept { return requested_dx_; }
  std::size_t size() const noexcept { return 2 * half_ + 1; }
  std::size_t half() const noexcept { return half_; }
  std::size_t center() const noexcept { return half_; }
  bool adjusted() const noexcept { return dx_ != requested_dx_; }

  double x(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(half_)) * dx_;
  }
  std::vector<double> points() const;

  friend bool operator==(const Grid& l, const Grid& r) noexcept {
    return l.half_ == r.half_ && l.a_ == r.a_ && l.dx_ == r.dx_;
  }

 private:
  friend Grid make_grid(double a, double dx);

  double a_ = 0.0;
  double dx_ = 0.0;
  double requested_dx_ = 0.0;
  std::size_t half_ = 0;
};

Grid make_grid(double a, double dx);

/// Real samples on a grid; implicitly zero outside [-a, a].
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  GridFunction(const Grid& g, std::vector<double> v);

  template <typename F>
  static GridFunction sample(const Grid& g, F&& f) {
    GridFunction out(g);
    for (std::size_t j = 0; j < g.size(); ++j) out.values[j] = f(g.x(j));
    return out;
  }

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t j) const noexcept { return values[j]; }
  double& operator[](std::size_t j) noexcept { return values[j]; }
  std::span<const double> span() const noexcept { return values; }
  std::span<double> span() noexcept { return values; }
};

void require_same_grid(const Grid& lhs, const Grid& rhs);

/// Rectangle rule: sum_j f_j g_j dx, endpoints included with full weight.
double inner_product(const GridFunction& f, const GridFunction& g);
double inner_product(std::span<const double> f, std::span<const double> g, double dx);
double norm(const GridFunction& f);

GridFunction normalize(const GridFunction& f);

/// Infinite-well eigenbasis on [-1, 1], zero-extended: odd labels are
/// cos(n pi x / 2), even labels sin(n pi x / 2). Amplitude sign fixed to +1.
std::vector<GridFunction> trial_basis(std::size_t n, const Grid& grid);

}  // namespace levyspec

#endif  // LEVYSPEC_GRID_HPP
