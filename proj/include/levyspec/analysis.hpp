#ifndef LEVYSPEC_ANALYSIS_HPP
#define LEVYSPEC_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "levyspec/grid.hpp"
#include "levyspec/operators.hpp"

namespace levyspec {

// ---- Cauchy oscillator -------------------------------------------------

struct CauchyReferenceEntry {
  int n;
  double exact;
  double approx;
  int approx_decimals;  // digits after the point as printed
};

/// Embedded reference levels E_1..E_19 of |p| + x^2 with their asymptotic approximants.
std::span<const CauchyReferenceEntry> cauchy_reference_table();
void write_reference_csv(std::ostream& out);

/// (3 pi (2n - 1) / 8)^{2/3}
double cauchy_oscillator_asymptotic(int n);

/// (2n - 1) / sqrt(2m): spectrum of -Laplacian/2m + x^2.
double nonrel_oscillator_energy(double m, int n);

// ---- Fits ----------------------------------------------------------------

/// For fit_line: y = slope * x + intercept.
/// For fit_power: E = intercept * n^slope (intercept is the prefactor alpha,
/// its error propagated from the log-space fit).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
  double intercept_error = 0.0;
  std::size_t n_points = 0;
};

using Point = std::pair<double, double>;

FitResult fit_line(std::span<const Point> points);
FitResult fit_power(std::span<const Point> points);

/// Label implied by the intercept b of ln E versus ln 2m: (e^b + 1) / 2.
double label_from_intercept(double b);

// ---- Finite well ---------------------------------------------------------

/// Smallest N >= 1 with m <= pi^2 N^2 / (8 V0).
int bound_state_count(double m, double V0);

/// (n pi / 2 - pi / 8) / b, energy above the rest mass.
double infinite_well_asymptotic(int n, double b, double m);

/// (pi^2 n^2 / 8m) (1 - 4 / (pi sqrt(V0)))
double deep_well_nonrel(int n, double m, double V0);

// ---- Units ---------------------------------------------------------------

inline constexpr double kHbarC = 1.975e-6;              // eV m
inline constexpr double kElectronCompton = 386e-15;     // m, reduced
inline constexpr double kElectronNeutrinoMassRatio = 232.3e3;

struct UnitScales {
  double hbar_c = kHbarC;
  double b = 0.0;                   // well half-width, m
  double energy_unit = 0.0;         // hbar c / b, eV
  double compton_wavelength = 0.0;  // m
  double mass = 0.0;                // dimensionless b / compton_wavelength
};

UnitScales well_unit_scales(double b, double compton_wavelength = kElectronCompton);
double well_to_dimensional(double energy, double b);
double well_from_dimensional(double energy_ev, double b);

/// Reduced Compton wavelength of a particle lighter than the reference by `ratio`.
double compton_from_mass_ratio(double reference_compton, double ratio);

/// Oscillator with spring constant k (eV/m^2): energy unit hbar c (k / 2 hbar c)^{1/3}.
double oscillator_energy_scale(double k);
/// Inverse length (k / 2 hbar c)^{1/3}, 1/m: x_check = factor * x.
double oscillator_length_factor(double k);
double oscillator_to_dimensional(double energy, double k);
double oscillator_from_dimensional(double energy_ev, double k);
/// Physical integration bound a for a dimensionless bound a_check.
double oscillator_domain_bound(double a_check, double k);

// ---- Operator limits -----------------------------------------------------

struct LimitEntry {
  double m = 0.0;
  double r_ur = 0.0;  // |(T_m - T_0) g| / |T_0 g|
  double r_nr = 0.0;  // |(T_m + Laplacian/2m) g| / |Laplacian g / 2m|, NaN at m = 0
};

std::vector<LimitEntry> operator_limit_report(std::span<const double> masses, const GridFunction& g,
                                              NonlocalOptions options);

}  // namespace levyspec

#endif  // LEVYSPEC_ANALYSIS_HPP
