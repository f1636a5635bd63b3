#ifndef LEVYSPEC_OPERATORS_HPP
#define LEVYSPEC_OPERATORS_HPP

#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "levyspec/grid.hpp"
#include "levyspec/kernels.hpp"

namespace levyspec {

// censored: jumps leaving [-a, a] are suppressed, so the diagonal only
// collects in-domain weights. zero_extension: jumps out of the domain land
// on zero and the diagonal carries the full measure, truncated tail included.
enum class Boundary { censored, zero_extension };
enum class Backend { automatic, direct, transform };

std::string_view to_string(Boundary b);
std::string_view to_string(Backend b);
Boundary boundary_from_string(std::string_view name);
Backend backend_from_string(std::string_view name);

struct NonlocalOptions {
  Boundary boundary = Boundary::censored;
  bool singular_correction = false;  // add the c0 second-difference for the origin cell
  Backend backend = Backend::automatic;
};

/// Discretized Levy operator bound to one grid:
///   (Tf)_i = d_i f_i - sum_{j != 0} w_|j| f_{i+j}
/// with f = 0 off the grid. Precomputes the diagonal and the kernel spectrum.
class NonlocalOperator {
 public:
  explicit NonlocalOperator(KernelTable table, NonlocalOptions options = {});
  ~NonlocalOperator();
  NonlocalOperator(NonlocalOperator&&) noexcept;
  NonlocalOperator& operator=(NonlocalOperator&&) noexcept;

  const Grid& grid() const noexcept;
  const KernelTable& table() const noexcept;
  const NonlocalOptions& options() const noexcept;
  Backend backend() const noexcept;  // resolved, never automatic
  std::span<const double> diagonal() const noexcept;
  /// Upper bound on the largest eigenvalue (sup of the lattice symbol).
  double spectral_bound() const noexcept;

  void apply(std::span<const double> in, std::span<double> out, unsigned workers = 1) const;
  void apply(std::span<const double> in, std::span<double> out, Backend backend, unsigned workers) const;
  GridFunction apply(const GridFunction& f) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridFunction apply_nonlocal(const KernelTable& table, const GridFunction& f, NonlocalOptions options = {});

/// -(f_{i+1} - 2 f_i + f_{i-1}) / (2 m dx^2), zero beyond the grid.
GridFunction apply_local_kinetic(double m, const GridFunction& f);
void apply_local_kinetic(double m, double dx, std::span<const double> in, std::span<double> out);

enum class PotentialKind { harmonic, finite_well, none };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::harmonic;
  double V0 = 0.0;

  static PotentialSpec harmonic() { return {PotentialKind::harmonic, 0.0}; }
  static PotentialSpec finite_well(double depth) { return {PotentialKind::finite_well, depth}; }
  static PotentialSpec none() { return {PotentialKind::none, 0.0}; }
  void validate() const;
};

std::string_view to_string(PotentialKind k);
PotentialKind potential_kind_from_string(std::string_view name);

GridFunction potential_values(const PotentialSpec& spec, const Grid& grid);

struct NonlocalKinetic {
  KernelSpec kernel;
  NonlocalOptions options;
};
struct LocalKinetic {
  double mass = 1.0;
};
struct NullKinetic {};

struct HamiltonianSpec {
  std::variant<NonlocalKinetic, LocalKinetic, NullKinetic> kinetic = NonlocalKinetic{};
  PotentialSpec potential;

  void validate() const;
};

/// A HamiltonianSpec realized on a grid, ready for repeated application.
class Hamiltonian {
 public:
  Hamiltonian(const HamiltonianSpec& spec, const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  const HamiltonianSpec& spec() const noexcept { return spec_; }
  std::span<const double> potential() const noexcept { return potential_; }
  const NonlocalOperator* nonlocal() const noexcept { return nonlocal_.get(); }
  double kinetic_bound() const noexcept;

  void apply_kinetic(std::span<const double> in, std::span<double> out, unsigned workers = 1) const;
  void apply(std::span<const double> in, std::span<double> out, unsigned workers = 1) const;
  GridFunction apply(const GridFunction& f) const;

 private:
  HamiltonianSpec spec_;
  Grid grid_;
  std::vector<double> potential_;
  std::shared_ptr<const NonlocalOperator> nonlocal_;
};

GridFunction apply_hamiltonian(const HamiltonianSpec& spec, const GridFunction& f);

}  // namespace levyspec

#endif  // LEVYSPEC_OPERATORS_HPP
