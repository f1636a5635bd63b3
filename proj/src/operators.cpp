#include "levyspec/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

#include "levyspec/error.hpp"
#include "levyspec/parallel.hpp"

namespace levyspec {

namespace {

// The FFTW planner is not reentrant; plan creation and destruction go through here.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Below this many offsets the direct sum beats the transform round trip.
constexpr std::size_t kDirectCutoff = 48;

bool is_7_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u})
    while (n % p == 0) n /= p;
  return n == 1;
}

std::size_t transform_length(std::size_t minimum) {
  std::size_t m = std::max<std::size_t>(minimum, 2);
  while (!is_7_smooth(m)) ++m;
  return m;
}

struct Workspace {
  double* real = nullptr;
  fftw_complex* freq = nullptr;

  Workspace(std::size_t m) {
    real = fftw_alloc_real(m);
    freq = fftw_alloc_complex(m / 2 + 1);
    if (!real || !freq) {
      release();
      throw std::bad_alloc();
    }
  }
  ~Workspace() { release(); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  void release() {
    if (real) fftw_free(real);
    if (freq) fftw_free(freq);
    real = nullptr;
    freq = nullptr;
  }
};

}  // namespace

std::string_view to_string(Boundary b) {
  return b == Boundary::censored ? "censored" : "zero_extension";
}

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::direct: return "direct";
    case Backend::transform: return "transform";
    default: return "auto";
  }
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "censored") return Boundary::censored;
  if (name == "zero_extension") return Boundary::zero_extension;
  throw Error(ErrorKind::invalid_argument, "unknown boundary '" + std::string(name) + "'");
}

Backend backend_from_string(std::string_view name) {
  if (name == "auto" || name == "automatic") return Backend::automatic;
  if (name == "direct") return Backend::direct;
  if (name == "transform" || name == "fft") return Backend::transform;
  throw Error(ErrorKind::invalid_argument, "unknown backend '" + std::string(name) + "'");
}

struct NonlocalOperator::Impl {
  KernelTable table;
  NonlocalOptions options;
  Backend backend = Backend::direct;
  std::size_t n = 0;
  std::size_t offsets = 0;
  std::size_t length = 0;       // transform length M
  std::vector<double> weights;  // effective w_j, index j-1
  std::vector<double> diag;
  std::vector<double> spectrum;  // real kernel transform, M/2+1 entries, includes 1/M
  double bound = 0.0;

  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  mutable std::mutex pool_mutex;
  mutable std::vector<std::unique_ptr<Workspace>> pool;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  std::unique_ptr<Workspace> acquire() const {
    {
      std::lock_guard lock(pool_mutex);
      if (!pool.empty()) {
        auto ws = std::move(pool.back());
        pool.pop_back();
        return ws;
      }
    }
    return std::make_unique<Workspace>(length);
  }

  void give_back(std::unique_ptr<Workspace> ws) const {
    std::lock_guard lock(pool_mutex);
    pool.push_back(std::move(ws));
  }

  void apply_transform(const double* in, double* out) const;
  void apply_direct(const double* in, const double* rev, double* out, std::size_t begin, std::size_t end) const;
};

void NonlocalOperator::Impl::apply_transform(const double* in, double* out) const {
  auto ws = acquire();
  std::copy(in, in + n, ws->real);
  std::fill(ws->real + n, ws->real + length, 0.0);
  fftw_execute_dft_r2c(forward, ws->real, ws->freq);
  const std::size_t bins = length / 2 + 1;
  for (std::size_t k = 0; k < bins; ++k) {
    ws->freq[k][0] *= spectrum[k];
    ws->freq[k][1] *= spectrum[k];
  }
  fftw_execute_dft_c2r(backward, ws->freq, ws->real);
  for (std::size_t i = 0; i < n; ++i) out[i] = diag[i] * in[i] - ws->real[i];
  give_back(std::move(ws));
}

void NonlocalOperator::Impl::apply_direct(const double* in, const double* rev, double* out,
                                          std::size_t begin, std::size_t end) const {
  // rev[k] = in[n-1-k], so the left neighbours of point i are read forward
  // from rev + (n-1-i). Lanes are two 2-wide vectors; the final combination
  // order is fixed, so results do not depend on how points are scheduled.
  using v2 = double __attribute__((vector_size(16)));
  const double* w = weights.data() - 1;  // w[j] for j >= 1
  auto load = [](const double* p) {
    v2 v;
    std::memcpy(&v, p, sizeof v);
    return v;
  };
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t left = std::min(offsets, i);
    const std::size_t right = std::min(offsets, n - 1 - i);
    const std::size_t both = std::min(left, right);
    const double* fp = in + i;
    const double* fm = rev + (n - 1 - i);
    v2 acc0 = {0.0, 0.0};
    v2 acc1 = {0.0, 0.0};
    double tail = 0.0;
    std::size_t j = 1;
    for (; j + 3 <= both; j += 4) {
      acc0 += load(w + j) * (load(fp + j) + load(fm + j));
      acc1 += load(w + j + 2) * (load(fp + j + 2) + load(fm + j + 2));
    }
    for (; j <= both; ++j) tail += w[j] * (fp[j] + fm[j]);
    const double* side = right > both ? fp : fm;
    const std::size_t last = std::max(left, right);
    for (; j + 3 <= last; j += 4) {
      acc0 += load(w + j) * load(side + j);
      acc1 += load(w + j + 2) * load(side + j + 2);
    }
    for (; j <= last; ++j) tail += w[j] * side[j];
    const double sum = ((acc0[0] + acc0[1]) + (acc1[0] + acc1[1])) + tail;
    out[i] = diag[i] * in[i] - sum;
  }
}

NonlocalOperator::NonlocalOperator(KernelTable table, NonlocalOptions options)
    : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.table = std::move(table);
  s.options = options;
  s.n = s.table.grid.size();
  s.offsets = std::min(s.table.offsets(), s.n - 1);
  if (s.offsets == 0) throw Error(ErrorKind::invalid_argument, "kernel table has no offsets");
  s.weights.assign(s.table.weights.begin(), s.table.weights.begin() + static_cast<std::ptrdiff_t>(s.offsets));
  const double dx = s.table.grid.dx();
  if (options.singular_correction) s.weights[0] += s.table.singular_coeff / (dx * dx);

  std::vector<double> prefix(s.offsets + 1, 0.0);
  for (std::size_t j = 1; j <= s.offsets; ++j) prefix[j] = prefix[j - 1] + s.weights[j - 1];
  const double total = prefix[s.offsets];
  s.diag.resize(s.n);
  if (options.boundary == Boundary::zero_extension) {
    std::fill(s.diag.begin(), s.diag.end(), 2.0 * total + 2.0 * s.table.tail_mass);
  } else {
    for (std::size_t i = 0; i < s.n; ++i)
      s.diag[i] = prefix[std::min(s.offsets, s.n - 1 - i)] + prefix[std::min(s.offsets, i)];
  }

  s.backend = options.backend;
  if (s.backend == Backend::automatic)
    s.backend = s.offsets > kDirectCutoff ? Backend::transform : Backend::direct;

  // Kernel laid out circularly so its transform is real and even.
  s.length = transform_length(s.n + s.offsets);
  auto ws = std::make_unique<Workspace>(s.length);
  {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(s.length);
    s.forward = fftw_plan_dft_r2c_1d(len, ws->real, ws->freq, FFTW_ESTIMATE);
    s.backward = fftw_plan_dft_c2r_1d(len, ws->freq, ws->real, FFTW_ESTIMATE);
  }
  if (!s.forward || !s.backward) throw Error(ErrorKind::invalid_argument, "FFTW plan creation failed");
  std::fill(ws->real, ws->real + s.length, 0.0);
  for (std::size_t j = 1; j <= s.offsets; ++j) {
    ws->real[j] = s.weights[j - 1];
    ws->real[s.length - j] = s.weights[j - 1];
  }
  fftw_execute_dft_r2c(s.forward, ws->real, ws->freq);
  const std::size_t bins = s.length / 2 + 1;
  s.spectrum.resize(bins);
  const double scale = 1.0 / static_cast<double>(s.length);
  double symbol_max = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double khat = ws->freq[k][0];
    symbol_max = std::max(symbol_max, 2.0 * total - khat);
    s.spectrum[k] = khat * scale;
  }
  s.bound = symbol_max + (options.boundary == Boundary::zero_extension ? 2.0 * s.table.tail_mass : 0.0);
  s.give_back(std::move(ws));
}

NonlocalOperator::~NonlocalOperator() = default;
NonlocalOperator::NonlocalOperator(NonlocalOperator&&) noexcept = default;
NonlocalOperator& NonlocalOperator::operator=(NonlocalOperator&&) noexcept = default;

const Grid& NonlocalOperator::grid() const noexcept { return impl_->table.grid; }
const KernelTable& NonlocalOperator::table() const noexcept { return impl_->table; }
const NonlocalOptions& NonlocalOperator::options() const noexcept { return impl_->options; }
Backend NonlocalOperator::backend() const noexcept { return impl_->backend; }
std::span<const double> NonlocalOperator::diagonal() const noexcept { return impl_->diag; }
double NonlocalOperator::spectral_bound() const noexcept { return impl_->bound; }

void NonlocalOperator::apply(std::span<const double> in, std::span<double> out, unsigned workers) const {
  apply(in, out, impl_->backend, workers);
}

void NonlocalOperator::apply(std::span<const double> in, std::span<double> out, Backend backend,
                             unsigned workers) const {
  const Impl& s = *impl_;
  if (in.size() != s.n || out.size() != s.n)
    throw Error(ErrorKind::incompatible_grids, "operator applied to a vector of the wrong length");
  if (backend == Backend::automatic) backend = s.backend;
  if (backend == Backend::transform) {
    s.apply_transform(in.data(), out.data());
    return;
  }
  const std::vector<double> rev(in.rbegin(), in.rend());
  parallel_for(s.n, workers,
               [&](std::size_t b, std::size_t e) { s.apply_direct(in.data(), rev.data(), out.data(), b, e); });
}

GridFunction NonlocalOperator::apply(const GridFunction& f) const {
  require_same_grid(impl_->table.grid, f.grid);
  GridFunction out(f.grid);
  apply(f.span(), out.span());
  return out;
}

GridFunction apply_nonlocal(const KernelTable& table, const GridFunction& f, NonlocalOptions options) {
  require_same_grid(table.grid, f.grid);
  return NonlocalOperator(table, options).apply(f);
}

void apply_local_kinetic(double m, double dx, std::span<const double> in, std::span<double> out) {
  if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, "local kinetic term requires mass m > 0");
  const std::size_t n = in.size();
  const double c = 1.0 / (2.0 * m * dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? in[i - 1] : 0.0;
    const double right = i + 1 < n ? in[i + 1] : 0.0;
    out[i] = -(right - 2.0 * in[i] + left) * c;
  }
}

GridFunction apply_local_kinetic(double m, const GridFunction& f) {
  GridFunction out(f.grid);
  apply_local_kinetic(m, f.grid.dx(), f.span(), out.span());
  return out;
}

std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::finite_well: return "finite_well";
    default: return "none";
  }
}

PotentialKind potential_kind_from_string(std::string_view name) {
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "finite_well" || name == "well") return PotentialKind::finite_well;
  if (name == "none") return PotentialKind::none;
  throw Error(ErrorKind::invalid_argument, "unknown potential '" + std::string(name) + "'");
}

void PotentialSpec::validate() const {
  if (kind == PotentialKind::finite_well && !(V0 >= 0.0 && std::isfinite(V0)))
    throw Error(ErrorKind::invalid_argument, "finite well depth V0 must be finite and >= 0");
}

GridFunction potential_values(const PotentialSpec& spec, const Grid& grid) {
  spec.validate();
  GridFunction v(grid);
  // Lattice points meant to sit on |x| = 1 may carry a rounding error of a few ulps.
  const double edge = 1.0 - 1e-9 * grid.dx();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    switch (spec.kind) {
      case PotentialKind::harmonic: v[j] = x * x; break;
      case PotentialKind::finite_well: v[j] = std::abs(x) >= edge ? spec.V0 : 0.0; break;
      case PotentialKind::none: v[j] = 0.0; break;
    }
  }
  return v;
}

void HamiltonianSpec::validate() const {
  potential.validate();
  if (const auto* nl = std::get_if<NonlocalKinetic>(&kinetic)) nl->kernel.validate();
  if (const auto* loc = std::get_if<LocalKinetic>(&kinetic))
    if (!(loc->mass > 0.0 && std::isfinite(loc->mass)))
      throw Error(ErrorKind::invalid_argument, "nonrelativistic kinetic term requires mass m > 0");
}

Hamiltonian::Hamiltonian(const HamiltonianSpec& spec, const Grid& grid) : spec_(spec), grid_(grid) {
  spec_.validate();
  potential_ = potential_values(spec_.potential, grid_).values;
  if (const auto* nl = std::get_if<NonlocalKinetic>(&spec_.kinetic))
    nonlocal_ = std::make_shared<NonlocalOperator>(tabulate_kernel(nl->kernel, grid_), nl->options);
}

double Hamiltonian::kinetic_bound() const noexcept {
  if (nonlocal_) return nonlocal_->spectral_bound();
  if (const auto* loc = std::get_if<LocalKinetic>(&spec_.kinetic))
    return 2.0 / (loc->mass * grid_.dx() * grid_.dx());
  return 0.0;
}

void Hamiltonian::apply_kinetic(std::span<const double> in, std::span<double> out, unsigned workers) const {
  if (in.size() != grid_.size() || out.size() != grid_.size())
    throw Error(ErrorKind::incompatible_grids, "Hamiltonian applied to a vector of the wrong length");
  if (nonlocal_) {
    nonlocal_->apply(in, out, workers);
  } else if (const auto* loc = std::get_if<LocalKinetic>(&spec_.kinetic)) {
    apply_local_kinetic(loc->mass, grid_.dx(), in, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
}

void Hamiltonian::apply(std::span<const double> in, std::span<double> out, unsigned workers) const {
  apply_kinetic(in, out, workers);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] += potential_[i] * in[i];
}

GridFunction Hamiltonian::apply(const GridFunction& f) const {
  require_same_grid(grid_, f.grid);
  GridFunction out(f.grid);
  apply(f.span(), out.span());
  return out;
}

GridFunction apply_hamiltonian(const HamiltonianSpec& spec, const GridFunction& f) {
  return Hamiltonian(spec, f.grid).apply(f);
}

}  // namespace levyspec
