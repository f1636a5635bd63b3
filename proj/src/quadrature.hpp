#ifndef LEVYSPEC_SRC_QUADRATURE_HPP
#define LEVYSPEC_SRC_QUADRATURE_HPP

#include <array>
#include <cmath>

namespace levyspec::detail {

template <typename F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
template <typename F>
double integrate_adaptive(F f, double a, double b, double tol, int max_depth = 48) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// 20-point Gauss-Legendre on [a, b].
template <typename F>
double gauss_legendre20(F f, double a, double b) {
  static constexpr std::array<double, 10> x = {
      0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
      0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
      0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
      0.9931285991850949247861224};
  static constexpr std::array<double, 10> w = {
      0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
      0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
      0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
      0.0176140071391521183118620};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  return sum * half;
}

}  // namespace levyspec::detail

#endif  // LEVYSPEC_SRC_QUADRATURE_HPP
