#include "levyspec/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "levyspec/error.hpp"
#include "levyspec/format.hpp"

namespace levyspec {

namespace {

constexpr std::array<CauchyReferenceEntry, 19> kCauchyReference{{
    {1, 1.0188, 1.11546, 5},    {2, 2.3381, 2.32025, 5},    {3, 3.2482, 3.26163, 5},
    {4, 4.0879, 4.08181, 5},    {5, 4.8201, 4.82632, 5},    {6, 5.5206, 5.51716, 5},
    {7, 6.1633, 6.16712, 5},    {8, 6.7867, 6.78445, 5},    {9, 7.3721, 7.37485, 5},
    {10, 7.9440, 7.94248, 5},   {11, 8.4884, 8.49050, 5},   {12, 9.0226, 9.02137, 5},
    {13, 9.5354, 9.53705, 5},   {14, 10.0402, 10.03914, 5}, {15, 10.5276, 10.52897, 5},
    {16, 11.0085, 11.00776, 5}, {17, 11.4751, 11.4762, 4},  {18, 11.9360, 11.93532, 5},
    {19, 12.3848, 12.3857, 4},
}};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::invalid_argument, std::string(what) + " must be finite and > 0");
}

void require_label(int n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "state label n must be >= 1");
}

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double l2_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

std::span<const CauchyReferenceEntry> cauchy_reference_table() { return kCauchyReference; }

void write_reference_csv(std::ostream& out) {
  out << "n,exact,approx\n";
  for (const auto& e : kCauchyReference)
    out << e.n << ',' << format_double(e.exact) << ',' << format_double(e.approx) << '\n';
}

double cauchy_oscillator_asymptotic(int n) {
  require_label(n);
  return std::pow(3.0 * std::numbers::pi * (2.0 * n - 1.0) / 8.0, 2.0 / 3.0);
}

double nonrel_oscillator_energy(double m, int n) {
  require_positive(m, "mass m");
  require_label(n);
  return (2.0 * n - 1.0) / std::sqrt(2.0 * m);
}

FitResult fit_line(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(ErrorKind::invalid_argument, "a line fit needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorKind::invalid_argument, "non-finite fit data");
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double scale = std::max(1.0, std::abs(mx));
  if (!(sxx > 1e-28 * scale * scale * static_cast<double>(n)))
    throw Error(ErrorKind::rank_deficient, "fit abscissae are all equal");

  FitResult r;
  r.n_points = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  if (n > 2) {
    double ssr = 0.0;
    double sx2 = 0.0;
    for (const auto& [x, y] : points) {
      const double res = y - (r.slope * x + r.intercept);
      ssr += res * res;
      sx2 += x * x;
    }
    const double sigma2 = ssr / static_cast<double>(n - 2);
    r.slope_error = std::sqrt(sigma2 / sxx);
    r.intercept_error = std::sqrt(sigma2 * sx2 / (static_cast<double>(n) * sxx));
  }
  return r;
}

FitResult fit_power(std::span<const Point> points) {
  std::vector<Point> logs;
  logs.reserve(points.size());
  for (const auto& [n, e] : points) {
    if (!(n > 0.0)) throw Error(ErrorKind::invalid_argument, "power fit needs n > 0");
    if (!(e > 0.0)) throw Error(ErrorKind::invalid_argument, "power fit needs E > 0");
    logs.emplace_back(std::log(n), std::log(e));
  }
  FitResult r = fit_line(logs);
  r.intercept = std::exp(r.intercept);
  r.intercept_error *= r.intercept;
  return r;
}

double label_from_intercept(double b) { return (std::exp(b) + 1.0) / 2.0; }

int bound_state_count(double m, double V0) {
  require_positive(m, "mass m");
  require_positive(V0, "well depth V0");
  const double c = std::numbers::pi * std::numbers::pi / (8.0 * V0);
  auto admits = [&](long N) { return m <= c * static_cast<double>(N) * static_cast<double>(N); };
  long N = std::max(1L, static_cast<long>(std::ceil(std::sqrt(m / c))));
  while (N > 1 && admits(N - 1)) --N;
  while (!admits(N)) ++N;
  return static_cast<int>(N);
}

double infinite_well_asymptotic(int n, double b, double m) {
  require_label(n);
  require_positive(b, "half-width b");
  if (!(m >= 0.0)) throw Error(ErrorKind::invalid_argument, "mass m must be >= 0");
  return (n * std::numbers::pi / 2.0 - std::numbers::pi / 8.0) / b;
}

double deep_well_nonrel(int n, double m, double V0) {
  require_label(n);
  require_positive(m, "mass m");
  const double correction = 4.0 / (std::numbers::pi * std::sqrt(V0));
  if (!(V0 > 0.0) || !(correction < 1.0))
    throw Error(ErrorKind::invalid_argument, "deep-well formula needs V0 > 16/pi^2");
  return std::numbers::pi * std::numbers::pi * n * n / (8.0 * m) * (1.0 - correction);
}

UnitScales well_unit_scales(double b, double compton_wavelength) {
  require_positive(b, "half-width b");
  require_positive(compton_wavelength, "Compton wavelength");
  UnitScales s;
  s.b = b;
  s.energy_unit = kHbarC / b;
  s.compton_wavelength = compton_wavelength;
  s.mass = b / compton_wavelength;
  return s;
}

double well_to_dimensional(double energy, double b) {
  require_positive(b, "half-width b");
  return energy * kHbarC / b;
}

double well_from_dimensional(double energy_ev, double b) {
  require_positive(b, "half-width b");
  return energy_ev * b / kHbarC;
}

double compton_from_mass_ratio(double reference_compton, double ratio) {
  require_positive(reference_compton, "reference Compton wavelength");
  require_positive(ratio, "mass ratio");
  return reference_compton * ratio;
}

double oscillator_length_factor(double k) {
  require_positive(k, "spring constant k");
  return std::cbrt(k / (2.0 * kHbarC));
}

double oscillator_energy_scale(double k) { return kHbarC * oscillator_length_factor(k); }

double oscillator_to_dimensional(double energy, double k) { return energy * oscillator_energy_scale(k); }

double oscillator_from_dimensional(double energy_ev, double k) { return energy_ev / oscillator_energy_scale(k); }

double oscillator_domain_bound(double a_check, double k) { return a_check / oscillator_length_factor(k); }

std::vector<LimitEntry> operator_limit_report(std::span<const double> masses, const GridFunction& g,
                                              NonlocalOptions options) {
  const Grid& grid = g.grid;
  const GridFunction t0 = NonlocalOperator(tabulate_kernel(KernelSpec::cauchy(), grid), options).apply(g);
  const double t0_norm = l2(t0.span());
  if (!(t0_norm > 0.0)) throw Error(ErrorKind::degenerate_vector, "test function is annihilated by T_0");

  std::vector<LimitEntry> out;
  out.reserve(masses.size());
  for (double m : masses) {
    if (!(m >= 0.0)) throw Error(ErrorKind::invalid_argument, "masses must be >= 0");
    LimitEntry e;
    e.m = m;
    if (m == 0.0) {
      e.r_ur = 0.0;
      e.r_nr = std::numeric_limits<double>::quiet_NaN();
      out.push_back(e);
      continue;
    }
    const GridFunction tm =
        NonlocalOperator(tabulate_kernel(KernelSpec::quasirelativistic(m), grid), options).apply(g);
    const GridFunction local = apply_local_kinetic(m, g);
    e.r_ur = l2_diff(tm.span(), t0.span()) / t0_norm;
    e.r_nr = l2_diff(tm.span(), local.span()) / l2(local.span());
    out.push_back(e);
  }
  return out;
}

}  // namespace levyspec
