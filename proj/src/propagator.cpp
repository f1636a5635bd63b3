#include "levyspec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyspec/error.hpp"
#include "levyspec/format.hpp"
#include "levyspec/parallel.hpp"

namespace levyspec {

namespace {

constexpr double kRepassRatio = 0.5;
constexpr double kRankRatio = 1e-12;

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw Error(ErrorKind::config, std::string("field '") + field + "': " + what);
}

double dot(std::span<const double> f, std::span<const double> g, double dx) { return inner_product(f, g, dx); }

// out = e^{-hV/2} (1 - hT) e^{-hV/2} in; `half` holds e^{-hV/2}, `scratch` is caller-owned.
void shift_into(const Hamiltonian& H, double h, std::span<const double> half, std::span<const double> in,
                std::span<double> out, std::vector<double>& scratch) {
  const std::size_t n = in.size();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = half[i] * in[i];
  H.apply_kinetic(scratch, out);
  for (std::size_t i = 0; i < n; ++i) out[i] = half[i] * (scratch[i] - h * out[i]);
}

std::vector<double> half_step_factors(const Hamiltonian& H, double h) {
  std::vector<double> half(H.potential().size());
  for (std::size_t i = 0; i < half.size(); ++i) half[i] = std::exp(-0.5 * h * H.potential()[i]);
  return half;
}

void check_step(const Hamiltonian& H, double h) {
  const double bound = H.kinetic_bound();
  if (h * bound >= 2.0)
    throw Error(ErrorKind::unstable_step,
                "time step h=" + format_double(h) + " exceeds the stability limit 2/lambda_max=" +
                    format_double(2.0 / bound) + " of the discretized kinetic term");
}

double energy_from_expectation(double expectation, double h, long index) {
  if (!(expectation > 0.0) || !std::isfinite(expectation))
    throw Error(ErrorKind::spectral_breakdown,
                "non-positive expectation <phi, S(h) phi> = " + format_double(expectation), index);
  return -std::log(expectation) / h;
}

// In-place modified Gram-Schmidt over row vectors.
void orthonormalize(std::vector<std::vector<double>>& vs, double dx) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto& v = vs[i];
    const double original = std::sqrt(dot(v, v, dx));
    if (!(original > 0.0) || !std::isfinite(original))
      throw Error(ErrorKind::rank_deficient, "vector has zero or non-finite norm", static_cast<long>(i));
    auto project_out = [&]() {
      for (std::size_t j = 0; j < i; ++j) {
        const double c = dot(vs[j], v, dx);
        for (std::size_t p = 0; p < v.size(); ++p) v[p] -= c * vs[j][p];
      }
      return std::sqrt(dot(v, v, dx));
    };
    double remaining = project_out();
    if (remaining < kRankRatio * original)
      throw Error(ErrorKind::rank_deficient, "vector is linearly dependent on its predecessors",
                  static_cast<long>(i));
    if (remaining < kRepassRatio * original) remaining = project_out();
    const double inv = 1.0 / remaining;
    for (double& x : v) x *= inv;
  }
}

}  // namespace

void SolverConfig::validate() const {
  hamiltonian.validate();
  require(a > 0.0 && std::isfinite(a), "a", "must be > 0");
  require(a >= 1.0, "a", "must be >= 1 so the trial basis fits");
  require(dx > 0.0 && std::isfinite(dx), "dx", "must be > 0");
  require(dx < a, "dx", "must be smaller than a");
  require(h > 0.0 && std::isfinite(h), "h", "must be > 0");
  require(n_states >= 1, "n_states", "must be >= 1");
  require(tol > 0.0 && std::isfinite(tol), "tol", "must be > 0");
  require(window >= 1, "window", "must be >= 1");
  require(effective_k_max() >= window, "k_max", "must be >= window");
}

std::size_t SolverConfig::effective_k_max() const {
  if (k_max > 0) return k_max;
  return hamiltonian.potential.kind == PotentialKind::finite_well ? 5000 : 2500;
}

bool SpectralResult::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

std::size_t SpectralResult::bound_count() const {
  return static_cast<std::size_t>(std::count(bound.begin(), bound.end(), true));
}

GridFunction strang_shift(const Hamiltonian& H, double h, const GridFunction& f) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "time step h must be > 0");
  require_same_grid(H.grid(), f.grid);
  const auto half = half_step_factors(H, h);
  GridFunction out(f.grid);
  std::vector<double> scratch;
  shift_into(H, h, half, f.span(), out.span(), scratch);
  return out;
}

GridFunction strang_shift(const HamiltonianSpec& H, double h, const GridFunction& f) {
  return strang_shift(Hamiltonian(H, f.grid), h, f);
}

std::vector<GridFunction> gram_schmidt(const std::vector<GridFunction>& vs) {
  if (vs.empty()) return {};
  const Grid& grid = vs.front().grid;
  std::vector<std::vector<double>> rows;
  rows.reserve(vs.size());
  for (const auto& v : vs) {
    require_same_grid(grid, v.grid);
    rows.push_back(v.values);
  }
  orthonormalize(rows, grid.dx());
  std::vector<GridFunction> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.emplace_back(grid, std::move(r));
  return out;
}

double energy_estimate(const GridFunction& phi, const GridFunction& s_phi, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "time step h must be > 0");
  return energy_from_expectation(inner_product(phi, s_phi), h, -1);
}

std::vector<bool> convergence_check(const std::vector<std::vector<double>>& history, double tol,
                                    std::size_t window) {
  std::vector<bool> flags(history.size(), false);
  if (window == 0) return flags;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& seq = history[i];
    if (seq.size() < window) continue;
    const auto first = seq.end() - static_cast<std::ptrdiff_t>(window);
    const auto [lo, hi] = std::minmax_element(first, seq.end());
    flags[i] = std::isfinite(*lo) && std::isfinite(*hi) && (*hi - *lo) < tol;
  }
  return flags;
}

SpectralResult run_spectrum(const SolverConfig& config, const ProgressCallback& progress) {
  config.validate();
  const Grid grid = make_grid(config.a, config.dx);
  const Hamiltonian H(config.hamiltonian, grid);
  check_step(H, config.h);

  const std::size_t n = config.n_states;
  const std::size_t k_max = config.effective_k_max();
  const unsigned workers = config.workers == 0 ? default_workers() : config.workers;
  const double h = config.h;
  const double dx = grid.dx();
  const auto half = half_step_factors(H, h);

  std::vector<std::vector<double>> phi;
  phi.reserve(n);
  for (auto& f : trial_basis(n, grid)) phi.push_back(std::move(f.values));
  std::vector<std::vector<double>> psi(n, std::vector<double>(grid.size()));
  std::vector<std::vector<double>> scratch(n);

  SpectralResult result;
  result.grid = grid;
  result.history.assign(n, {});
  for (auto& seq : result.history) seq.reserve(k_max);
  std::vector<double> energies(n, 0.0);
  std::vector<bool> flags(n, false);

  for (std::size_t k = 1; k <= k_max; ++k) {
    parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        shift_into(H, h, half, phi[i], psi[i], scratch[i]);
        energies[i] = energy_from_expectation(dot(phi[i], psi[i], dx), h, static_cast<long>(i));
      }
    });
    orthonormalize(psi, dx);
    std::swap(phi, psi);
    for (std::size_t i = 0; i < n; ++i) result.history[i].push_back(energies[i]);
    result.iterations = k;
    if (progress) progress(k, energies);
    flags = convergence_check(result.history, config.tol, config.window);
    if (std::all_of(flags.begin(), flags.end(), [](bool b) { return b; })) break;
  }

  result.energies = energies;
  result.converged = flags;
  result.bound.resize(n);
  const auto& pot = config.hamiltonian.potential;
  for (std::size_t i = 0; i < n; ++i) {
    bool bound = flags[i];
    if (pot.kind == PotentialKind::finite_well) bound = bound && energies[i] < pot.V0 - 10.0 * config.tol;
    result.bound[i] = bound;
  }
  result.eigenfunctions.reserve(n);
  for (auto& v : phi) result.eigenfunctions.emplace_back(grid, std::move(v));
  return result;
}

}  // namespace levyspec
