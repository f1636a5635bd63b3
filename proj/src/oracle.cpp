#include "levyspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "levyspec/error.hpp"
#include "levyspec/parallel.hpp"

namespace levyspec {

namespace {

// Householder reduction to tridiagonal form. On exit V holds the accumulated
// transform, d the diagonal and e the subdiagonal in e[1..n-1].
void tridiagonalize(std::size_t n, std::vector<double>& V, std::vector<double>& d, std::vector<double>& e) {
  auto v = [&](std::size_t i, std::size_t j) -> double& { return V[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal matrix, rotating the columns of V.
void tridiagonal_ql(std::size_t n, std::vector<double>& V, std::vector<double>& d, std::vector<double>& e) {
  auto v = [&](std::size_t i, std::size_t j) -> double& { return V[i * n + j]; };
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 300) throw Error(ErrorKind::invalid_matrix, "QL iteration failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

double DenseOperator::max_abs() const {
  double m = 0.0;
  for (double x : entries) m = std::max(m, std::abs(x));
  return m;
}

DenseOperator assemble_dense(const HamiltonianSpec& spec, const Grid& grid, unsigned workers) {
  const std::size_t n = grid.size();
  if (n > kMaxDenseDimension)
    throw Error(ErrorKind::too_large, "dense assembly limited to " + std::to_string(kMaxDenseDimension) +
                                          " points, grid has " + std::to_string(n));
  const Hamiltonian H(spec, grid);
  DenseOperator A;
  A.dimension = n;
  A.entries.assign(n * n, 0.0);
  parallel_for(n, workers == 0 ? default_workers() : workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> unit(n, 0.0), column(n);
    for (std::size_t j = b; j < e; ++j) {
      unit[j] = 1.0;
      H.apply(unit, column);
      unit[j] = 0.0;
      for (std::size_t i = 0; i < n; ++i) A(i, j) = column[i];
    }
  });
  return A;
}

DenseEigenpairs dense_eigensolve(const DenseOperator& A, std::size_t count) {
  const std::size_t n = A.dimension;
  if (n == 0 || A.entries.size() != n * n) throw Error(ErrorKind::invalid_matrix, "matrix has inconsistent shape");
  if (count < 1 || count > n) throw Error(ErrorKind::invalid_argument, "requested eigenpair count out of range");
  const double limit = 1e-12 * A.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(A(i, j) - A(j, i)) > limit)
        throw Error(ErrorKind::invalid_matrix,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");

  // Work on the symmetrized matrix so rounding-level asymmetry cannot leak in.
  std::vector<double> V(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) V[i * n + j] = 0.5 * (A(i, j) + A(j, i));
  std::vector<double> d(n), e(n);
  if (n == 1) {
    return {{V[0]}, {{1.0}}};
  }
  tridiagonalize(n, V, d, e);
  tridiagonal_ql(n, V, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  DenseEigenpairs out;
  out.values.reserve(count);
  out.vectors.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t c = order[k];
    out.values.push_back(d[c]);
    std::vector<double> vec(n);
    for (std::size_t i = 0; i < n; ++i) vec[i] = V[i * n + c];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

}  // namespace levyspec
