#ifndef LEVYSPEC_KERNELS_HPP
#define LEVYSPEC_KERNELS_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "levyspec/grid.hpp"

namespace levyspec {

/// Modified Bessel function of the second kind K_1(x), x > 0.
double bessel_k1(double x);
/// K_0(x), x > 0. Produced alongside K_1 by the same evaluation.
double bessel_k0(double x);

enum class KernelFamily { cauchy, quasirelativistic };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

struct KernelSpec {
  KernelFamily family = KernelFamily::cauchy;
  double mass = 0.0;  // ignored for cauchy

  static KernelSpec cauchy() { return {KernelFamily::cauchy, 0.0}; }
  static KernelSpec quasirelativistic(double m) { return {KernelFamily::quasirelativistic, m}; }

  /// Throws invalid_argument for a quasirelativistic spec with m <= 0.
  void validate() const;
  double effective_mass() const noexcept { return family == KernelFamily::cauchy ? 0.0 : mass; }
};

/// Levy density nu(z): 1/(pi z^2) for Cauchy, (m/pi) K_1(m|z|)/|z| otherwise.
double levy_density(const KernelSpec& spec, double z);

/// One-sided lattice weights w_j = nu(j dx) dx for offsets j = 1..J.
struct KernelTable {
  Grid grid;
  KernelSpec spec;
  std::vector<double> weights;  // weights[j-1] is the weight at offset j
  double singular_coeff = 0.0;  // c0 = int_0^{dx/2} z^2 nu(z) dz
  double truncation_radius = 0.0;  // z_max = J dx
  double tail_mass = 0.0;  // int_{z_max}^inf nu(z) dz, one side

  std::size_t offsets() const noexcept { return weights.size(); }
  double weight(std::size_t j) const noexcept { return weights[j - 1]; }
};

KernelTable tabulate_kernel(const KernelSpec& spec, const Grid& grid);

/// CSV with header "z,weight", one row per offset. Table metadata is carried
/// in leading '#' comment lines so a dump can be loaded back.
void write_kernel_csv(const KernelTable& table, std::ostream& out);
KernelTable read_kernel_csv(std::istream& in);

}  // namespace levyspec

#endif  // LEVYSPEC_KERNELS_HPP
