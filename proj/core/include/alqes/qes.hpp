#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "alqes/elliptic.hpp"
#include "alqes/rational.hpp"

namespace alqes {

/// Raised when one of a, b is an integer and the other a half-integer.
/// That regime has genuinely different band structure (mid-band states)
/// and is rejected rather than guessed at.
class MixedCaseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the associated Lame potential
///
///   V(x) = a(a+1) m sn^2(x,m) + b(b+1) m cn^2(x,m)/dn^2(x,m) + shift.
///
/// a and b are exact rationals with a > b > 0 and 2a, 2b integers, either
/// both integers or both half-integers. The potential has period 2K(m):
/// shifting by K(m) swaps the two terms, so K is a period only when a = b.
/// `shift` is an additive constant applied to reported energies; the
/// published worked cases quote energies for specific shifted potentials.
struct PotentialParams {
  Rational a;
  Rational b;
  ModulusParam m;
  double shift = 0.0;

  PotentialParams(Rational a_in, Rational b_in, ModulusParam m_in, double shift_in = 0.0);
};

/// V(x) for the given parameters (shift included).
double potential_value(double x, const PotentialParams& p);

/// One admissible residue pair of the quantum momentum function in
/// t = sn x: b1 at the fixed poles t = +-1, d1 at t = +-1/sqrt(m).
/// The double poles of the Riccati equation cancel only for
/// b1 in {3/4, 1/4} and d1 in {3/4 + b/2, 1/4 - b/2}.
struct ResidueSet {
  int set_id = 0;  // 1..4 in the conventional order
  Rational b1;
  Rational d1;
};

enum class Parity { even, odd };
enum class PeriodClass { two_k, four_k };

/// A residue choice that survives the termination condition
/// 2 b1 + 2 d1 + n = a + 1 with integer n >= 0. Each record describes one
/// family of band-edge eigenfunctions
///
///   psi(x) = (cn x)^alpha (dn x)^beta P_n(sn x),
///
/// where P_n has definite parity (even powers of sn iff n is even) and the
/// family contains li_count linearly independent solutions.
///
/// Records are generated on the lambda1 = a + 1 branch of the residue at
/// infinity; the other branch, lambda1 = -a, adds nothing because the
/// potential is invariant under a -> -a - 1 (and likewise b -> -b - 1),
/// which maps that branch back onto this one.
struct SolvabilityRecord {
  ResidueSet residue_set;
  int n = 0;           // polynomial degree
  Rational lambda1;    // residue at infinity, always a + 1
  Rational alpha;      // cn exponent, (4 b1 - 1)/2, always 0 or 1
  Rational beta;       // dn exponent, (4 d1 - 1)/2, i.e. 1 + b or -b
  Parity poly_parity = Parity::even;
  PeriodClass period_class = PeriodClass::two_k;
  int li_count = 0;    // linearly independent solutions in the family
};

/// Outcome of the termination condition for one residue set, kept also for
/// inadmissible sets so callers can report the full four-row structure.
struct SetEvaluation {
  ResidueSet set;
  Rational n_exact;     // a + 1 - 2 b1 - 2 d1 before the n >= 0 cut
  bool admissible = false;
  SolvabilityRecord record;  // meaningful only when admissible
};

/// The four (b1, d1) pairs for arbitrary rational b, no domain checks.
/// Exposed unchecked so the b -> -b-1 relabeling symmetry (which swaps the
/// two d1 values and hence pairs the sets 1<->2 and 3<->4) can be exercised
/// directly.
std::array<ResidueSet, 4> residue_pairs(const Rational& b);

/// Validated residue sets in set-id order. Requires b > 0 with 2b integer.
std::vector<ResidueSet> residue_sets(const Rational& b);

std::vector<SetEvaluation> evaluate_sets(const PotentialParams& p);

/// Admissible records only, in set-id order.
std::vector<SolvabilityRecord> solvability_records(const PotentialParams& p);

/// Bloch period of the family: sn and cn flip sign across half a period,
/// so psi(x + 2K) = (-1)^(alpha + n) psi(x); even alpha + n means period
/// 2K, odd means period 4K.
PeriodClass classify_period(const SolvabilityRecord& r);

}  // namespace alqes
