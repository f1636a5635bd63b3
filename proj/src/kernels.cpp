#include "levyspec/kernels.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include "levyspec/error.hpp"
#include "levyspec/format.hpp"
#include "quadrature.hpp"

namespace levyspec {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kSeriesLimit = 2.0;
// Weights below this fraction of nu(dx) are dropped from the table.
constexpr double kTruncationRatio = 1.0e-16;

struct BesselPair {
  double k0;
  double k1;
};

// Ascending series around the origin; used for 0 < x <= 2.
BesselPair bessel_k_series(double x) {
  const double t = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);

  double i0 = 0.0, k0_tail = 0.0;
  double i1 = 0.0, k1_tail = 0.0;
  double term0 = 1.0;          // t^k / (k!)^2
  double term1 = 1.0;          // t^k / (k! (k+1)!)
  double harmonic = 0.0;       // H_k
  double psi_k1 = -kEulerGamma;       // psi(k+1)
  double psi_k2 = 1.0 - kEulerGamma;  // psi(k+2)
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term0 *= t / (static_cast<double>(k) * k);
      term1 *= t / (static_cast<double>(k) * (k + 1));
      harmonic += 1.0 / k;
      psi_k1 += 1.0 / k;
      psi_k2 += 1.0 / (k + 1);
    }
    i0 += term0;
    k0_tail += harmonic * term0;
    i1 += term1;
    k1_tail += (psi_k1 + psi_k2) * term1;
    if (term0 < 1e-18 * i0 && term1 < 1e-18 * i1) break;
  }
  i1 *= 0.5 * x;
  BesselPair out;
  out.k0 = -(log_half + kEulerGamma) * i0 + k0_tail;
  out.k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail;
  return out;
}

// Steed's continued fraction (Temme's CF2) for K_0, K_1 at x > 2.
BesselPair bessel_k_cf2(double x) {
  constexpr double kEps = 1e-17;
  constexpr int kMaxIter = 10000;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double scaled_k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double scaled_k1 = scaled_k0 * (x + 0.5 - h) / x;
  const double decay = std::exp(-x);  // underflows to 0 past x ~ 745
  return {scaled_k0 * decay, scaled_k1 * decay};
}

BesselPair bessel_k01(double x) {
  if (!(x > 0.0) || std::isnan(x))
    throw Error(ErrorKind::invalid_argument, "modified Bessel K needs x > 0");
  if (std::isinf(x)) return {0.0, 0.0};
  return x <= kSeriesLimit ? bessel_k_series(x) : bessel_k_cf2(x);
}

double quasirelativistic_tail(double m, double z_max) {
  // int_{z_max}^inf (m/pi) K1(m z)/z dz = (m/pi) int_{ln t0}^{..} K1(e^u) du with t = m z.
  const double t0 = m * z_max;
  const double u0 = std::log(t0);
  const double u1 = std::log(t0 + 60.0);
  auto integrand = [](double u) { return bessel_k1(std::exp(u)); };
  const double rough = detail::gauss_legendre20(integrand, u0, u1);
  const double tol = 1e-13 * std::abs(rough) + 1e-300;
  return m * detail::integrate_adaptive(integrand, u0, u1, tol) / std::numbers::pi;
}

}  // namespace

double bessel_k1(double x) { return bessel_k01(x).k1; }
double bessel_k0(double x) { return bessel_k01(x).k0; }

std::string_view to_string(KernelFamily family) {
  return family == KernelFamily::cauchy ? "cauchy" : "quasirelativistic";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "cauchy") return KernelFamily::cauchy;
  if (name == "quasirelativistic") return KernelFamily::quasirelativistic;
  throw Error(ErrorKind::invalid_argument, "unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (family == KernelFamily::quasirelativistic && !(mass > 0.0 && std::isfinite(mass)))
    throw Error(ErrorKind::invalid_argument, "quasirelativistic kernel requires mass m > 0");
}

double levy_density(const KernelSpec& spec, double z) {
  if (z == 0.0) throw Error(ErrorKind::singular_point, "Levy density is singular at z = 0");
  const double r = std::abs(z);
  if (spec.family == KernelFamily::cauchy) return 1.0 / (std::numbers::pi * r * r);
  spec.validate();
  return spec.mass / std::numbers::pi * bessel_k1(spec.mass * r) / r;
}

KernelTable tabulate_kernel(const KernelSpec& spec, const Grid& grid) {
  spec.validate();
  const double dx = grid.dx();
  const std::size_t max_offset = grid.size() - 1;

  KernelTable table;
  table.grid = grid;
  table.spec = spec;

  const double nu_first = levy_density(spec, dx);
  const double threshold = kTruncationRatio * nu_first;
  table.weights.reserve(max_offset);
  for (std::size_t j = 1; j <= max_offset; ++j) {
    const double nu = levy_density(spec, static_cast<double>(j) * dx);
    if (nu < threshold) break;
    table.weights.push_back(nu * dx);
  }
  table.truncation_radius = static_cast<double>(table.weights.size()) * dx;

  const double half_cell = 0.5 * dx;
  if (spec.family == KernelFamily::cauchy) {
    table.singular_coeff = half_cell / std::numbers::pi;
    table.tail_mass = 1.0 / (std::numbers::pi * table.truncation_radius);
  } else {
    const double m = spec.mass;
    // z^2 nu_m(z) = (1/pi) m z K1(m z); the 1/pi part integrates exactly.
    const double remainder = detail::gauss_legendre20(
        [m](double z) { return m * z * bessel_k1(m * z) - 1.0; }, 0.0, half_cell);
    table.singular_coeff = (half_cell + remainder) / std::numbers::pi;
    table.tail_mass = quasirelativistic_tail(m, table.truncation_radius);
  }
  return table;
}

void write_kernel_csv(const KernelTable& table, std::ostream& out) {
  out << "# family=" << to_string(table.spec.family) << '\n';
  out << "# mass=" << format_double(table.spec.mass) << '\n';
  out << "# a=" << format_double(table.grid.a()) << '\n';
  out << "# dx=" << format_double(table.grid.requested_dx()) << '\n';
  out << "# singular_coeff=" << format_double(table.singular_coeff) << '\n';
  out << "# tail_mass=" << format_double(table.tail_mass) << '\n';
  out << "z,weight\n";
  const double dx = table.grid.dx();
  for (std::size_t j = 1; j <= table.offsets(); ++j)
    out << format_double(static_cast<double>(j) * dx) << ',' << format_double(table.weight(j)) << '\n';
}

KernelTable read_kernel_csv(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::string line;
  bool header_seen = false;
  std::vector<double> weights;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != "z,weight")
        throw Error(ErrorKind::config, "kernel CSV line " + std::to_string(line_no) + ": expected header 'z,weight'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorKind::config, "kernel CSV line " + std::to_string(line_no) + ": missing comma");
    weights.push_back(parse_double(std::string_view(line).substr(comma + 1), "weight"));
  }
  for (const char* key : {"family", "mass", "a", "dx", "singular_coeff", "tail_mass"})
    if (!meta.contains(key)) throw Error(ErrorKind::config, std::string("kernel CSV missing metadata '") + key + "'");

  KernelTable table;
  table.spec.family = kernel_family_from_string(meta["family"]);
  table.spec.mass = parse_double(meta["mass"], "mass");
  table.grid = make_grid(parse_double(meta["a"], "a"), parse_double(meta["dx"], "dx"));
  table.singular_coeff = parse_double(meta["singular_coeff"], "singular_coeff");
  table.tail_mass = parse_double(meta["tail_mass"], "tail_mass");
  table.weights = std::move(weights);
  table.truncation_radius = static_cast<double>(table.weights.size()) * table.grid.dx();
  return table;
}

}  // namespace levyspec
