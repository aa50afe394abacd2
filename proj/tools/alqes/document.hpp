#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alqes/qes.hpp"
#include "alqes/spectral.hpp"
#include "alqes/verify.hpp"

namespace alqes::cli {

/// Everything one solve run produced, ready for serialization: the echoed
/// parameters, the four-set structural breakdown, the deduplicated
/// solutions, and (for the verify command) the oracle crosscheck.
struct SolutionDocument {
  PotentialParams params;
  std::vector<SetEvaluation> records;
  std::vector<BandEdgeSolution> solutions;
  std::vector<int> degeneracy_group;  // parallel to solutions, -1 when absent
  std::optional<CrosscheckReport> verification;
  int verify_steps = 0;
};

SolutionDocument make_document(const PotentialParams& p);

/// The published additive constant for the two worked potentials:
/// -4m for (a, b) = (2, 1) and -2 - 29m/4 + sqrt(4 - 4m + 25 m^2) for
/// (7/2, 1/2). Any other pair has no published convention -> nullopt.
std::optional<double> paper_shift(const Rational& a, const Rational& b, double m);

/// e.g. "cn(x) dn(x)^{-1} P2(sn x)".
std::string eigenfunction_descriptor(const SolvabilityRecord& r);

/// Byte-stable JSON: fixed key order, %.17g numbers, LF line endings.
std::string render_json(const SolutionDocument& doc);
std::string render_text(const SolutionDocument& doc);

/// Reproduction of the published band-edge table for the integer case
/// (which = 4) or the half-integer case (which = 5) at the given m:
/// per-set rows of residues, degree, solution count, eigenfunction and
/// symbolic energy label, with solver-computed numeric energies.
/// Throws std::invalid_argument for any other `which`.
std::string render_table(int which, double m, bool as_json);

}  // namespace alqes::cli
