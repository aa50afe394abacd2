#pragma once

#include <stdexcept>

namespace alqes {

/// Elliptic parameter m = k^2 in [0, 1). Everything in this project,
/// including the potential definition, uses the parameter convention
/// sn(x, m); libraries disagree on whether the second argument is the
/// modulus k or the parameter m, so the type exists to pin it down once.
class ModulusParam {
 public:
  explicit ModulusParam(double m) : m_(m) {
    if (!(m >= 0.0 && m < 1.0))
      throw std::domain_error("elliptic parameter m must lie in [0, 1)");
  }
  double value() const { return m_; }

 private:
  double m_;
};

struct EllipticTriple {
  double sn;
  double cn;
  double dn;
};

/// Complete elliptic integral of the first kind, K(m) = pi / (2 AGM(1, sqrt(1-m))).
double complete_k(ModulusParam m);

/// Jacobi sn, cn, dn at real x. The argument is reduced modulo the full
/// period 4K(m) before the Landen/AGM descent, so large |x| keeps full
/// accuracy. m = 0 degenerates to (sin x, cos x, 1).
EllipticTriple jacobi(double x, ModulusParam m);

}  // namespace alqes
