#include "alqes/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"

namespace alqes {

namespace {

// Dense polynomials in t, coefficient of t^i at index i.
using Poly = std::vector<double>;

double max_abs(const Poly& f) {
  double s = 0.0;
  for (double c : f) s = std::max(s, std::abs(c));
  return s;
}

Poly poly_mul(const Poly& f, const Poly& g) {
  Poly r(f.size() + g.size() - 1, 0.0);
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  return r;
}

struct DivResult {
  Poly quotient;
  Poly remainder;
};

DivResult poly_divmod(Poly f, Poly g) {
  // Trim to the true degree: at m = 0 divisors like m t^2 - 1 degenerate.
  while (g.size() > 1 && g.back() == 0.0) g.pop_back();
  DivResult out;
  out.quotient.assign(std::max<size_t>(1, f.size() >= g.size() ? f.size() - g.size() + 1 : 1), 0.0);
  while (f.size() >= g.size()) {
    const double c = f.back() / g.back();
    const size_t d = f.size() - g.size();
    out.quotient[d] = c;
    for (size_t i = 0; i < g.size(); ++i) f[d + i] -= c * g[i];
    f.pop_back();
  }
  out.remainder = std::move(f);
  return out;
}

double poly_eval(const Poly& f, double x) {
  double r = 0.0;
  for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

Poly poly_derivative(const Poly& f) {
  if (f.size() <= 1) return {0.0};
  Poly d(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i] * static_cast<double>(i);
  return d;
}

// Evaluation-error bound used to decide whether f "vanishes" at x; a root
// of even multiplicity only dips this close to zero.
double eval_tolerance(const Poly& f, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (double c : f) {
    s += std::abs(c) * std::abs(xp);
    xp *= x;
  }
  return 1e-11 * std::max(1.0, s);
}

double bisect(const Poly& f, double lo, double hi) {
  double flo = poly_eval(f, lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) return mid;
    const double fm = poly_eval(f, mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All real roots in [-bound, bound] by recursive monotone bracketing: the
// derivative's roots cut the interval into monotone pieces, each holding at
// most one sign change; a derivative root where f itself (nearly) vanishes
// is a multiple root. Companion-free and immune to even-multiplicity roots.
std::vector<double> real_roots(Poly f, double bound) {
  const double scale = max_abs(f);
  if (scale == 0.0) return {};
  while (f.size() > 1 && std::abs(f.back()) < 1e-13 * scale) f.pop_back();
  const size_t deg = f.size() - 1;
  std::vector<double> roots;
  if (deg == 0) return roots;
  if (deg == 1) {
    const double r = -f[0] / f[1];
    if (std::abs(r) <= bound) roots.push_back(r);
    return roots;
  }
  const std::vector<double> crits = real_roots(poly_derivative(f), bound);
  std::vector<double> pts = {-bound};
  pts.insert(pts.end(), crits.begin(), crits.end());
  pts.push_back(bound);
  std::sort(pts.begin(), pts.end());
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i];
    const double hi = pts[i + 1];
    if (hi <= lo) continue;
    const double flo = poly_eval(f, lo);
    const double fhi = poly_eval(f, hi);
    if ((flo < 0.0) != (fhi < 0.0)) roots.push_back(bisect(f, lo, hi));
  }
  for (double c : crits)
    if (std::abs(poly_eval(f, c)) <= eval_tolerance(f, c)) roots.push_back(c);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) {
                            return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x));
                          }),
              roots.end());
  return roots;
}

using EMatrix = Eigen::MatrixXd;

EMatrix to_eigen(const DenseMatrix& m) {
  EMatrix out(m.dim(), m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m(i, j);
  return out;
}

double jacobi_quarter_period(const PotentialParams& p) { return complete_k(p.m); }

}  // namespace

Pencil build_pencil(const SolvabilityRecord& r, const PotentialParams& p) {
  const double m = p.m.value();
  const double b1 = r.residue_set.b1.to_double();  // quarter-integers, exact in binary
  const double d1 = r.residue_set.d1.to_double();
  const double aa1 = (p.a * (p.a + 1)).to_double();
  const double bb1 = (p.b * (p.b + 1)).to_double();
  const int n = r.n;

  // Substituting chi = S + P'/P with S = 2 b1 t/(t^2-1) + 2 m d1 t/(m t^2-1)
  // into chi^2 + chi' + R = 0 gives P'' + 2S P' + (S^2 + S' + R) P = 0.
  // Multiplying by (t^2-1)(m t^2-1) clears every denominator provided the
  // residue choices cancel the double poles; the three cleared coefficient
  // polynomials are assembled below.
  const Poly tsq_minus_1 = {-1.0, 0.0, 1.0};
  const Poly mtsq_minus_1 = {-1.0, 0.0, m};

  // multiplies P''
  const Poly q2 = poly_mul(tsq_minus_1, mtsq_minus_1);
  // 2 S (t^2-1)(m t^2-1) = 4 b1 t (m t^2-1) + 4 m d1 t (t^2-1), multiplies P'
  Poly q1(4, 0.0);
  q1[1] = -4.0 * b1 - 4.0 * m * d1;
  q1[3] = 4.0 * m * b1 + 4.0 * m * d1;

  // S^2 + S' + R splits into A(t)/(t^2-1)^2 + B(t)/(m t^2-1)^2 plus a part
  // with the simple product denominator. After one multiplication by the
  // product, A must be divisible by t^2-1 and B by m t^2-1; a nonzero
  // remainder is precisely a surviving residue at the corresponding poles.
  const Poly a_num = {0.5 - 2.0 * b1, 0.0, 4.0 * b1 * b1 - 2.0 * b1 + 0.25};
  const Poly b_num = {0.5 * m * (1.0 - 2.0 * bb1) - 2.0 * m * d1, 0.0,
                      m * m * (4.0 * d1 * d1 - 2.0 * d1 + 0.25)};
  const DivResult da = poly_divmod(a_num, tsq_minus_1);
  const DivResult db = poly_divmod(b_num, mtsq_minus_1);
  if (max_abs(da.remainder) > 1e-9 * (1.0 + max_abs(a_num)))
    throw DerivationError("residue survives at t = +-1: residue pair is inconsistent");
  if (max_abs(db.remainder) > 1e-9 * (1.0 + max_abs(b_num)))
    throw DerivationError("residue survives at t = +-1/sqrt(m): residue pair is inconsistent");

  // Energy-free part of the P coefficient; E itself enters only through the
  // constant term of C(t) = E + (8 b1 d1 - 1/2 - a(a+1)) m t^2, which is
  // what keeps the pencil linear in E with M1 = identity on the basis.
  Poly q0 = poly_mul(da.quotient, mtsq_minus_1);
  {
    const Poly qb = poly_mul(db.quotient, tsq_minus_1);
    if (q0.size() < qb.size()) q0.resize(qb.size(), 0.0);
    for (size_t i = 0; i < qb.size(); ++i) q0[i] += qb[i];
  }
  if (q0.size() < 3) q0.resize(3, 0.0);
  q0[2] += (8.0 * b1 * d1 - 0.5 - aa1) * m;

  std::vector<int> basis;
  for (int k = n % 2; k <= n; k += 2) basis.push_back(k);
  const int dim = static_cast<int>(basis.size());

  Pencil pc;
  pc.m0 = DenseMatrix(dim);
  pc.m1 = DenseMatrix(dim);
  pc.basis_degrees = basis;

  for (int c = 0; c < dim; ++c) {
    const int k = basis[c];
    Poly col(static_cast<size_t>(n) + 3, 0.0);
    auto accumulate = [&col](double s, const Poly& f, int shift) {
      if (s == 0.0) return;
      for (size_t i = 0; i < f.size(); ++i) col[i + shift] += s * f[i];
    };
    if (k >= 2) accumulate(static_cast<double>(k) * (k - 1), q2, k - 2);
    if (k >= 1) accumulate(static_cast<double>(k), q1, k - 1);
    accumulate(1.0, q0, k);

    const double scale = std::max(1.0, max_abs(col));
    for (size_t j = 0; j < col.size(); ++j) {
      const auto it = std::find(basis.begin(), basis.end(), static_cast<int>(j));
      if (it != basis.end()) {
        pc.m0(static_cast<int>(it - basis.begin()), c) = col[j];
      } else if (std::abs(col[j]) > 1e-9 * scale) {
        // A power outside the basis survived: either the termination
        // condition was violated (degree n+2 term) or parity leaked.
        throw DerivationError("matched system is not square: stray power of t in the cleared ODE");
      }
    }
    pc.m1(c, c) = 1.0;
  }
  return pc;
}

std::vector<BandEdgeSolution> solve_pencil(const Pencil& pc,
                                           const PotentialParams& p,
                                           const SolvabilityRecord& r) {
  const int dim = static_cast<int>(pc.basis_degrees.size());
  if (dim <= 0 || pc.m0.dim() != dim || pc.m1.dim() != dim)
    throw std::invalid_argument("solve_pencil: malformed pencil");

  const EMatrix m0 = to_eigen(pc.m0);
  const EMatrix m1 = to_eigen(pc.m1);
  if (m1.cwiseAbs().maxCoeff() == 0.0)
    throw DerivationError("pencil has identically zero energy part");

  const auto det_at = [&](double e) -> double { return (m0 + e * m1).fullPivLu().determinant(); };

  const double strength = (p.a * (p.a + 1) + p.b * (p.b + 1)).to_double();
  const double bound = 10.0 * strength * std::max(p.m.value(), 1.0) + 10.0;

  // Determinant as a polynomial in E: values at dim+1 Chebyshev nodes,
  // Newton divided differences, expanded to monomial coefficients.
  const int npts = dim + 1;
  std::vector<double> nodes(npts);
  std::vector<double> dd(npts);
  for (int i = 0; i < npts; ++i) {
    nodes[i] = bound * std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * npts));
    dd[i] = det_at(nodes[i]);
  }
  for (int level = 1; level < npts; ++level)
    for (int i = npts - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
  Poly det_poly = {dd[npts - 1]};
  for (int i = npts - 2; i >= 0; --i) {
    det_poly.insert(det_poly.begin(), 0.0);
    for (size_t j = 0; j < det_poly.size() - 1; ++j) det_poly[j] -= nodes[i] * det_poly[j + 1];
    det_poly[0] += dd[i];
  }
  if (std::abs(det_poly[dim]) < 1e-8 * std::max(1.0, max_abs(det_poly)))
    throw DerivationError("determinant degree does not match pencil dimension: defective pencil");

  std::vector<double> roots = real_roots(det_poly, bound);

  // Polish each simple root against the directly evaluated determinant so
  // interpolation conditioning cannot limit accuracy.
  for (double& root : roots) {
    double width = 1e-5 * std::max(1.0, std::abs(root));
    for (int widen = 0; widen < 10; ++widen) {
      double lo = root - width;
      double hi = root + width;
      double flo = det_at(lo);
      double fhi = det_at(hi);
      if ((flo < 0.0) != (fhi < 0.0)) {
        for (int i = 0; i < 120; ++i) {
          const double mid = 0.5 * (lo + hi);
          if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) break;
          const double fm = det_at(mid);
          if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
            fhi = fm;
          }
        }
        root = 0.5 * (lo + hi);
        break;
      }
      width *= 4.0;  // even-multiplicity root: no sign change; keep isolated value
      if (widen == 9) break;
    }
  }

  // A 1x1 pencil has the closed-form root -m0/m1; taking it directly makes
  // the matrix vanish exactly (m1 is the identity), not just to rounding.
  if (dim == 1)
    for (double& root : roots) root = -m0(0, 0) / m1(0, 0);

  std::vector<BandEdgeSolution> out;
  for (double e : roots) {
    const EMatrix me = m0 + e * m1;
    const double mscale = std::max(1.0, me.cwiseAbs().maxCoeff());
    std::vector<Eigen::VectorXd> kernel_vectors;
    if (dim == 1) {
      if (std::abs(me(0, 0)) > 1e-8 * mscale)
        throw DerivationError("pencil root does not annihilate the matrix");
      kernel_vectors.emplace_back(Eigen::VectorXd::Ones(1));
    } else {
      Eigen::FullPivLU<EMatrix> lu(me);
      lu.setThreshold(1e-7);
      const Eigen::Index kdim = dim - lu.rank();
      if (kdim <= 0) throw DerivationError("no null vector at pencil root");
      const EMatrix kernel = lu.kernel();
      for (Eigen::Index kcol = 0; kcol < kernel.cols(); ++kcol) {
        Eigen::VectorXd v = kernel.col(kcol);
        if (kdim == 1) {
          // One step of regularized inverse iteration tightens the vector
          // against the exactly singular matrix.
          const EMatrix reg = me + 1e-13 * mscale * EMatrix::Identity(dim, dim);
          Eigen::VectorXd w = reg.fullPivLu().solve(v);
          if (w.allFinite() && w.norm() > 0.0) v = w;
        }
        kernel_vectors.push_back(std::move(v));
      }
    }

    for (const Eigen::VectorXd& v : kernel_vectors) {
      const double vmax = v.cwiseAbs().maxCoeff();
      if (vmax == 0.0) throw DerivationError("zero kernel vector at pencil root");
      int lead = -1;
      for (int i = dim - 1; i >= 0; --i) {
        if (std::abs(v[i]) > 1e-9 * vmax) {
          lead = i;
          break;
        }
      }
      if (lead < 0) throw std::invalid_argument("cannot normalize an all-zero coefficient vector");

      BandEdgeSolution s;
      s.energy_unshifted = e;
      s.energy = e + p.shift;
      s.record = r;
      s.coeffs.resize(dim);
      for (int i = 0; i < dim; ++i) s.coeffs[i] = v[i] / v[lead];
      // Fix the overall sign so P(1) >= 0, falling back to P'(1) when P(1)
      // vanishes (a node at x = K); keeps output deterministic across kernel
      // solvers, which are free to negate a null vector.
      double p_at_1 = 0.0, dp_at_1 = 0.0, scale = 0.0;
      for (int i = 0; i < dim; ++i) {
        p_at_1 += s.coeffs[i];
        dp_at_1 += s.coeffs[i] * pc.basis_degrees[static_cast<size_t>(i)];
        scale += std::abs(s.coeffs[i]);
      }
      const double pick = std::abs(p_at_1) > 1e-12 * scale ? p_at_1 : dp_at_1;
      if (pick < 0.0)
        for (double& c : s.coeffs) c = -c;
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(), [](const BandEdgeSolution& x, const BandEdgeSolution& y) {
    return x.energy < y.energy;
  });
  return out;
}

double eval_wavefunction(const BandEdgeSolution& s, double x, const PotentialParams& p) {
  const EllipticTriple e = jacobi(x, p.m);
  const double t2 = e.sn * e.sn;
  double poly = 0.0;
  for (size_t i = s.coeffs.size(); i-- > 0;) poly = poly * t2 + s.coeffs[i];
  if (s.record.n % 2 == 1) poly *= e.sn;
  double value = poly;
  if (s.record.alpha.num() == 1) value *= e.cn;
  const double beta = s.record.beta.to_double();
  if (beta != 0.0) value *= std::pow(e.dn, beta);
  return value;
}

double schrodinger_residual(const BandEdgeSolution& s,
                            const PotentialParams& p,
                            std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("schrodinger_residual: empty sample set");
  // The stencil divides by 12 h^2 = 1.2e-7, which would amplify the
  // double-precision noise floor of psi into the reported defect; the
  // five evaluations therefore run in extended precision.
  const long double m = p.m.value();
  const long double aa1 = (p.a * (p.a + 1)).to_double();
  const long double bb1 = (p.b * (p.b + 1)).to_double();
  const long double energy = s.energy;
  const long double shift = p.shift;
  const bool odd = s.record.n % 2 == 1;
  const bool has_cn = s.record.alpha.num() == 1;
  const long double beta = s.record.beta.to_double();

  const auto psi = [&](long double x) {
    const detail::TripleLd e = detail::jacobi_ld(x, m);
    const long double t2 = e.sn * e.sn;
    long double poly = 0.0;
    for (size_t i = s.coeffs.size(); i-- > 0;) poly = poly * t2 + s.coeffs[i];
    if (odd) poly *= e.sn;
    if (has_cn) poly *= e.cn;
    if (beta != 0.0) poly *= std::pow(e.dn, beta);
    return poly;
  };

  constexpr long double h = 1e-4;
  long double max_psi = 0.0;
  long double worst = 0.0;
  for (double x : xs) {
    const long double f_2 = psi(x - 2 * h);
    const long double f_1 = psi(x - h);
    const long double f0 = psi(x);
    const long double f1 = psi(x + h);
    const long double f2 = psi(x + 2 * h);
    const long double second = (-f_2 + 16 * f_1 - 30 * f0 + 16 * f1 - f2) / (12 * h * h);
    const detail::TripleLd e = detail::jacobi_ld(x, m);
    const long double v = aa1 * m * e.sn * e.sn + bb1 * m * e.cn * e.cn / (e.dn * e.dn) + shift;
    worst = std::max(worst, std::abs(-second + (v - energy) * f0));
    max_psi = std::max(max_psi, std::abs(f0));
  }
  if (max_psi == 0.0)
    throw std::invalid_argument("schrodinger_residual: wave function vanishes on all samples");
  return static_cast<double>(worst / max_psi);
}

std::vector<BandEdgeSolution> dedupe_degeneracies(std::vector<BandEdgeSolution> all,
                                                  const PotentialParams& p) {
  std::sort(all.begin(), all.end(), [](const BandEdgeSolution& x, const BandEdgeSolution& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return x.record.residue_set.set_id < y.record.residue_set.set_id;
  });

  constexpr int kFingerprintPoints = 32;
  const double period = 4.0 * jacobi_quarter_period(p);
  const auto fingerprint = [&](const BandEdgeSolution& s) {
    std::vector<double> f(kFingerprintPoints);
    double norm = 0.0;
    for (int j = 0; j < kFingerprintPoints; ++j) {
      f[j] = eval_wavefunction(s, (j + 0.5) * period / kFingerprintPoints, p);
      norm += f[j] * f[j];
    }
    norm = std::sqrt(norm);
    int lead = 0;
    for (int j = 1; j < kFingerprintPoints; ++j)
      if (std::abs(f[j]) > std::abs(f[lead])) lead = j;
    const double sign = (f[lead] < 0.0) ? -1.0 : 1.0;
    for (double& v : f) v /= sign * norm;
    return f;
  };

  std::vector<BandEdgeSolution> kept;
  std::vector<std::vector<double>> kept_prints;
  std::vector<std::vector<int>> groups;  // indices into kept, per energy cluster

  size_t i = 0;
  while (i < all.size()) {
    size_t j = i + 1;
    while (j < all.size() &&
           std::abs(all[j].energy - all[i].energy) <= 1e-9 * std::max(1.0, std::abs(all[i].energy)))
      ++j;
    std::vector<int> group;
    for (size_t k = i; k < j; ++k) {
      const std::vector<double> f = fingerprint(all[k]);
      bool duplicate = false;
      for (int idx : group) {
        double dist_minus = 0.0;
        double dist_plus = 0.0;
        for (int q = 0; q < kFingerprintPoints; ++q) {
          const double d = f[q] - kept_prints[idx][q];
          const double sum = f[q] + kept_prints[idx][q];
          dist_minus += d * d;
          dist_plus += sum * sum;
        }
        if (std::sqrt(std::min(dist_minus, dist_plus)) <= 1e-6) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      group.push_back(static_cast<int>(kept.size()));
      kept.push_back(all[k]);
      kept_prints.push_back(f);
    }
    groups.push_back(std::move(group));
    i = j;
  }

  for (const std::vector<int>& group : groups) {
    if (group.size() < 2) continue;
    for (int idx : group) {
      kept[idx].degeneracy_partners.clear();
      for (int other : group)
        if (other != idx) kept[idx].degeneracy_partners.push_back(other);
    }
  }
  return kept;
}

std::vector<BandEdgeSolution> solve_band_edges(const PotentialParams& p) {
  std::vector<BandEdgeSolution> all;
  for (const SolvabilityRecord& r : solvability_records(p)) {
    const Pencil pc = build_pencil(r, p);
    std::vector<BandEdgeSolution> sols = solve_pencil(pc, p, r);
    all.insert(all.end(), sols.begin(), sols.end());
  }
  return dedupe_degeneracies(std::move(all), p);
}

}  // namespace alqes
