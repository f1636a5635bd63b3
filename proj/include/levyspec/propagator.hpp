#ifndef LEVYSPEC_PROPAGATOR_HPP
#define LEVYSPEC_PROPAGATOR_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "levyspec/grid.hpp"
#include "levyspec/operators.hpp"

namespace levyspec {

struct SolverConfig {
  HamiltonianSpec hamiltonian;
  double a = 50.0;
  double dx = 0.001;
  double h = 0.001;
  std::size_t n_states = 5;
  std::size_t k_max = 0;  // 0 picks 2500 for the oscillator, 5000 for the well
  double tol = 1e-6;
  std::size_t window = 100;
  unsigned workers = 0;  // 0 defers to default_workers()

  /// Throws Error(config) naming the offending field.
  void validate() const;
  std::size_t effective_k_max() const;
};

struct SpectralResult {
  Grid grid;
  std::vector<double> energies;
  std::vector<GridFunction> eigenfunctions;
  std::vector<std::vector<double>> history;  // history[i][k-1] = E_i^(k)
  std::vector<bool> converged;
  std::vector<bool> bound;
  std::size_t iterations = 0;

  bool all_converged() const;
  std::size_t bound_count() const;
};

/// Called after every completed iteration with k and E_1^(k)..E_n^(k).
using ProgressCallback = std::function<void(std::size_t, std::span<const double>)>;

/// e^{-hV/2} (1 - hT) e^{-hV/2} f
GridFunction strang_shift(const Hamiltonian& H, double h, const GridFunction& f);
GridFunction strang_shift(const HamiltonianSpec& H, double h, const GridFunction& f);

/// Modified Gram-Schmidt with one re-pass when a vector loses more than
/// half its norm to the projections. Throws rank_deficient with the index.
std::vector<GridFunction> gram_schmidt(const std::vector<GridFunction>& vs);

/// -ln<phi, s_phi> / h
double energy_estimate(const GridFunction& phi, const GridFunction& s_phi, double h);

/// Per state: true when the last `window` recorded energies span less than tol.
std::vector<bool> convergence_check(const std::vector<std::vector<double>>& history, double tol,
                                    std::size_t window);

SpectralResult run_spectrum(const SolverConfig& config, const ProgressCallback& progress = {});

}  // namespace levyspec

#endif  // LEVYSPEC_PROPAGATOR_HPP
