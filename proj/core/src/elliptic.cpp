#include "alqes/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "detail.hpp"

namespace alqes {

namespace {

template <typename T>
T agm_k(T m) {
  // AGM(1, sqrt(1-m)) converges quadratically; a handful of sweeps reach
  // machine precision for any m in [0, 1).
  const T eps = std::numeric_limits<T>::epsilon();
  T a = 1;
  T b = std::sqrt(1 - m);
  for (int i = 0; i < 60 && (a - b) > eps * a; ++i) {
    T an = (a + b) / 2;
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi_v<T> / (a + b);
}

template <typename T>
struct Triple {
  T sn, cn, dn;
};

template <typename T>
Triple<T> agm_jacobi(T x, T m) {
  if (m == 0) return {std::sin(x), std::cos(x), T(1)};

  const T k_quarter = agm_k(m);
  // Reduce modulo the full period before the descent; remainder() lands in
  // [-2K, 2K], which keeps the accumulated phase small.
  const T u = std::remainder(x, 4 * k_quarter);

  // Descending Landen/AGM chain a_i, c_i, then the phase recursion
  //   sin(2 phi_{i-1} - phi_i) = (c_i / a_i) sin phi_i
  // walked down from phi_n = 2^n a_n u. sn = sin phi_0, cn = cos phi_0;
  // dn is recovered from dn^2 = 1 - m sn^2, which is stable because
  // 1 - m sn^2 >= 1 - m > 0.
  const T eps = std::numeric_limits<T>::epsilon();
  std::array<T, 64> agm_a{};
  std::array<T, 64> agm_c{};
  T a = 1;
  T b = std::sqrt(1 - m);
  T c = std::sqrt(m);
  int n = 0;
  agm_a[0] = a;
  agm_c[0] = c;
  while (std::abs(c) > eps * a && n < 60) {
    const T an = (a + b) / 2;
    c = (a - b) / 2;
    b = std::sqrt(a * b);
    a = an;
    ++n;
    agm_a[n] = a;
    agm_c[n] = c;
  }

  T phi = std::ldexp(a * u, n);
  for (int i = n; i >= 1; --i) {
    const T s = std::clamp(agm_c[i] / agm_a[i] * std::sin(phi), T(-1), T(1));
    phi = (phi + std::asin(s)) / 2;
  }

  const T sn = std::sin(phi);
  const T cn = std::cos(phi);
  const T dn = std::sqrt(1 - m * sn * sn);
  return {sn, cn, dn};
}

}  // namespace

double complete_k(ModulusParam m) { return agm_k<double>(m.value()); }

EllipticTriple jacobi(double x, ModulusParam mp) {
  if (!std::isfinite(x)) throw std::invalid_argument("jacobi: argument must be finite");
  const Triple<double> t = agm_jacobi<double>(x, mp.value());
  return {t.sn, t.cn, t.dn};
}

namespace detail {

long double complete_k_ld(long double m) { return agm_k<long double>(m); }

TripleLd jacobi_ld(long double x, long double m) {
  const Triple<long double> t = agm_jacobi<long double>(x, m);
  return {t.sn, t.cn, t.dn};
}

}  // namespace detail

}  // namespace alqes
