#pragma once

// Internal extended-precision elliptic kernels. The Schrodinger-residual
// diagnostic divides wave-function values by (12 h^2) = 1.2e-7, so the
// double-precision noise floor of psi would surface in the reported defect;
// these long double variants keep that noise below the measurement.

namespace alqes::detail {

struct TripleLd {
  long double sn, cn, dn;
};

long double complete_k_ld(long double m);
TripleLd jacobi_ld(long double x, long double m);

}  // namespace alqes::detail
