#include "alqes/qes.hpp"

namespace alqes {

namespace {

void validate(const Rational& a, const Rational& b) {
  auto representable = [](const Rational& r) { return r.is_integer() || r.is_half_integer(); };
  if (!representable(a) || !representable(b))
    throw std::invalid_argument("a and b must be integers or half-integers (2a, 2b integer)");
  if (a.is_integer() != b.is_integer())
    throw MixedCaseError("mixed integer/half-integer case unsupported");
  if (!(b > Rational(0))) throw std::invalid_argument("require b > 0");
  if (!(a > b)) throw std::invalid_argument("require a > b");
}

// The published solution tables organize the families by the parity of the
// combination that fixes each set's polynomial degree: a - b for sets 1 and
// 3 (even: a-b = 2M; odd: a-b = 2M'+1), a + b for sets 2 and 4 (even:
// a+b = 2N; odd: a+b = 2N'+1). The tabulated count of linearly independent
// solutions always equals floor(n/2) + 1, the number of free coefficients
// of a fixed-parity polynomial of degree n; both are computed and must
// agree, so a bookkeeping slip cannot pass silently.
int li_count_from_tables(const PotentialParams& p, int set_id, int n) {
  const long long sum = (p.a + p.b).num();   // integer for valid params
  const long long diff = (p.a - p.b).num();
  long long li = 0;
  switch (set_id) {
    case 1: li = (diff % 2 == 0) ? diff / 2 : (diff - 1) / 2; break;  // M   | M'
    case 2: li = (sum % 2 == 0) ? sum / 2 : (sum + 1) / 2; break;     // N   | N'+1
    case 3: li = (diff % 2 == 0) ? diff / 2 : (diff + 1) / 2; break;  // M   | M'+1
    case 4: li = (sum % 2 == 0) ? sum / 2 + 1 : (sum + 1) / 2; break; // N+1 | N'+1
    default: throw std::logic_error("bad set id");
  }
  if (li != n / 2 + 1)
    throw std::logic_error("solution-count bookkeeping disagrees with the parity-basis dimension");
  return static_cast<int>(li);
}

}  // namespace

PotentialParams::PotentialParams(Rational a_in, Rational b_in, ModulusParam m_in, double shift_in)
    : a(a_in), b(b_in), m(m_in), shift(shift_in) {
  validate(a, b);
}

double potential_value(double x, const PotentialParams& p) {
  const EllipticTriple e = jacobi(x, p.m);
  const double aa1 = (p.a * (p.a + 1)).to_double();
  const double bb1 = (p.b * (p.b + 1)).to_double();
  const double mv = p.m.value();
  return aa1 * mv * e.sn * e.sn + bb1 * mv * e.cn * e.cn / (e.dn * e.dn) + p.shift;
}

std::array<ResidueSet, 4> residue_pairs(const Rational& b) {
  const Rational b1_hi(3, 4);
  const Rational b1_lo(1, 4);
  const Rational d1_hi = Rational(3, 4) + b / 2;
  const Rational d1_lo = Rational(1, 4) - b / 2;
  return {{{1, b1_hi, d1_hi}, {2, b1_hi, d1_lo}, {3, b1_lo, d1_hi}, {4, b1_lo, d1_lo}}};
}

std::vector<ResidueSet> residue_sets(const Rational& b) {
  if (!(b > Rational(0)) || !(b.is_integer() || b.is_half_integer()))
    throw std::invalid_argument("residue_sets: require b > 0 with 2b integer");
  const auto pairs = residue_pairs(b);
  return {pairs.begin(), pairs.end()};
}

std::vector<SetEvaluation> evaluate_sets(const PotentialParams& p) {
  std::vector<SetEvaluation> out;
  const Rational lambda1 = p.a + 1;
  for (const ResidueSet& rs : residue_pairs(p.b)) {
    SetEvaluation ev;
    ev.set = rs;
    ev.n_exact = lambda1 - rs.b1 * 2 - rs.d1 * 2;
    ev.admissible = ev.n_exact.is_integer() && ev.n_exact >= Rational(0);
    if (ev.admissible) {
      SolvabilityRecord r;
      r.residue_set = rs;
      r.n = static_cast<int>(ev.n_exact.num());
      r.lambda1 = lambda1;
      r.alpha = (rs.b1 * 4 - 1) / 2;
      r.beta = (rs.d1 * 4 - 1) / 2;
      r.poly_parity = (r.n % 2 == 0) ? Parity::even : Parity::odd;
      r.li_count = li_count_from_tables(p, rs.set_id, r.n);
      r.period_class = classify_period(r);
      ev.record = r;
    }
    out.push_back(ev);
  }
  return out;
}

std::vector<SolvabilityRecord> solvability_records(const PotentialParams& p) {
  std::vector<SolvabilityRecord> out;
  for (const SetEvaluation& ev : evaluate_sets(p))
    if (ev.admissible) out.push_back(ev.record);
  return out;
}

PeriodClass classify_period(const SolvabilityRecord& r) {
  const long long alpha = r.alpha.num();  // 0 or 1
  return ((alpha + r.n) % 2 == 0) ? PeriodClass::two_k : PeriodClass::four_k;
}

}  // namespace alqes
