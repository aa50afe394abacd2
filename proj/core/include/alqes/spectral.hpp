#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "alqes/qes.hpp"

namespace alqes {

/// Raised when the algebraic construction breaks down: a residue fails to
/// cancel when clearing denominators, the matched linear system is not
/// square, or the determinant degree does not match the pencil dimension.
class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimal dense square real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return a_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Linear matrix pencil M0 + E * M1 obtained by matching coefficients of
/// the cleared polynomial ODE on one parity class of monomials in t = sn x.
/// Its singular energies are the band-edge eigenvalues of the record's
/// family. basis_degrees lists the spanned powers of t (all of the record's
/// parity, floor(n/2)+1 of them); coefficient vectors are indexed against it.
struct Pencil {
  DenseMatrix m0;
  DenseMatrix m1;
  std::vector<int> basis_degrees;
};

/// One band-edge eigenstate. coeffs are the polynomial coefficients of
/// P_n over the record's parity basis (coeffs[i] multiplies
/// t^(n%2 + 2i)), scaled so the leading nonzero coefficient is +-1 with
/// the sign fixed by P_n(1) >= 0 (by P_n'(1) >= 0 when P_n(1) = 0).
struct BandEdgeSolution {
  double energy_unshifted = 0.0;  // eigenvalue of the bare potential
  double energy = 0.0;            // energy_unshifted + params.shift
  std::vector<double> coeffs;
  SolvabilityRecord record;
  std::vector<int> degeneracy_partners;  // indices into the deduped list
};

/// Builds the pencil for one record by substituting
/// chi = 2 b1 t/(t^2-1) + 2 m d1 t/(m t^2-1) + P'/P into the Riccati
/// equation for the quantum momentum function and clearing
/// (t^2-1)(m t^2-1). Throws DerivationError if a residue survives at
/// t = +-1 or t = +-1/sqrt(m) (inconsistent residue pair) or if the
/// matched system is not square.
Pencil build_pencil(const SolvabilityRecord& r, const PotentialParams& p);

/// All real singular energies of the pencil with their kernel vectors.
/// The determinant is interpolated from dim+1 Chebyshev samples, real
/// roots are isolated by recursive monotone bracketing (with double-root
/// probing at the derivative's roots) and polished against the directly
/// evaluated determinant to |dE| <= 1e-12 max(1, |E|). A root whose kernel
/// has dimension > 1 yields one solution per kernel basis vector.
/// Solutions come back sorted by energy.
std::vector<BandEdgeSolution> solve_pencil(const Pencil& pc,
                                           const PotentialParams& p,
                                           const SolvabilityRecord& r);

/// psi(x) = (cn x)^alpha (dn x)^beta P_n(sn x) for the stored coefficients.
double eval_wavefunction(const BandEdgeSolution& s, double x, const PotentialParams& p);

/// max over xs of |-psi'' + (V - E) psi| / max |psi|, with the second
/// derivative from the 5-point central stencil at h = 1e-4.
double schrodinger_residual(const BandEdgeSolution& s,
                            const PotentialParams& p,
                            std::span<const double> xs);

/// Groups solutions from all residue sets by energy (relative tolerance
/// 1e-9), drops exact repeats (same eigenfunction reached through two
/// residue sets, detected by normalized wave-function fingerprints on 32
/// fixed grid points) and cross-links genuine degeneracies via
/// degeneracy_partners. Returns the list sorted by energy.
std::vector<BandEdgeSolution> dedupe_degeneracies(std::vector<BandEdgeSolution> all,
                                                  const PotentialParams& p);

/// Full analytic spectrum for p: every admissible record's pencil solved,
/// deduplicated, sorted by energy.
std::vector<BandEdgeSolution> solve_band_edges(const PotentialParams& p);

}  // namespace alqes
