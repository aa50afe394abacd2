#pragma once

#include <string>
#include <vector>

#include "alqes/spectral.hpp"

namespace alqes {

/// Transfer matrix of -psi'' + V psi = E psi across one potential period
/// [0, 2K]: columns are the solutions launched with (psi, psi') = (1, 0)
/// and (0, 1). Its determinant is the Wronskian and must equal 1; its
/// trace is the Floquet discriminant.
struct Monodromy {
  double m11 = 0.0, m12 = 0.0;
  double m21 = 0.0, m22 = 0.0;
  double trace() const { return m11 + m22; }
  double determinant() const { return m11 * m22 - m12 * m21; }
};

struct DiscriminantSample {
  double energy;
  double delta;
};

/// delta = +2 marks a 2K-periodic band edge, delta = -2 a 4K-antiperiodic
/// one; a tangential touch of +-2 is a closed gap, i.e. a doubly
/// degenerate edge.
enum class EdgeKind { periodic_2k, antiperiodic_4k, degenerate_2k, degenerate_4k };

struct BandEdge {
  double energy;
  EdgeKind kind;
};

/// Numerically located edges plus any resolution-limit warnings (extrema
/// whose |delta| lands within 1e-4 of 2 but outside the 1e-6 degeneracy
/// tolerance).
struct BandEdgeScan {
  std::vector<BandEdge> edges;  // sorted by energy
  std::vector<std::string> warnings;
};

struct FindEdgeOptions {
  int steps = 20000;       // RK4 steps per monodromy evaluation
  int scan_points = 4000;  // coarse discriminant grid
};

/// Reusable discriminant evaluator. The potential is sampled once on the
/// half-step RK4 grid; each energy afterwards costs one arithmetic sweep,
/// which is what makes dense E-grid scans cheap. Evaluations at distinct
/// energies are independent, so scans can safely run in parallel.
class FloquetIntegrator {
 public:
  FloquetIntegrator(const PotentialParams& p, int steps);
  Monodromy monodromy(double energy) const;
  double discriminant(double energy) const { return monodromy(energy).trace(); }
  double period() const { return period_; }
  int steps() const { return steps_; }

 private:
  double period_;
  int steps_;
  std::vector<double> v_;  // V on the half-step grid, 2*steps + 1 values
};

/// One-shot monodromy across [0, 2K]. Contract requires steps >= 1000 (the
/// classical RK4 global error at coarser grids is no longer negligible
/// against the crosscheck tolerances); throws std::invalid_argument below
/// that, and std::runtime_error if the state leaves the finite range.
Monodromy monodromy(double energy, const PotentialParams& p, int steps);

/// Discriminant on a uniform inclusive energy grid; deterministic ordering.
std::vector<DiscriminantSample> discriminant_trace(const PotentialParams& p,
                                                   double e_min, double e_max,
                                                   int samples, int steps = 20000);

/// Locates every edge in [e_min, e_max]: sign changes of delta -+ 2 are
/// bisected to 1e-10, and local extrema grazing +-2 within 1e-6 are
/// reported as degenerate (closed-gap) edges.
BandEdgeScan find_band_edges(const PotentialParams& p, double e_min, double e_max,
                             const FindEdgeOptions& opts = {});

/// Per-energy comparison of the analytic solutions against the oracle.
struct CrosscheckEntry {
  double energy = 0.0;
  double delta = 0.0;
  double discriminant_defect = 0.0;  // ||delta| - 2|
  bool discriminant_ok = false;      // defect <= 1e-5
  double nearest_edge = 0.0;
  double edge_distance = 0.0;
  bool edge_ok = false;              // distance <= 1e-6
  bool tangential = false;           // nearest edge is a degenerate touch
  bool period_ok = false;            // sign of delta vs record period class
  bool passed = false;
};

struct CrosscheckReport {
  std::vector<CrosscheckEntry> entries;
  std::vector<std::string> warnings;
  bool all_passed = false;
};

/// Validates every analytic band edge against the independent Floquet
/// oracle: |delta(E)| must return to 2 within 1e-5, the nearest numerically
/// located edge must lie within 1e-6, and the sign of delta must match the
/// record's period class. Failures are reported per entry; the operation
/// itself does not abort. Any steps >= 2 is accepted so that deliberately
/// under-resolved runs can demonstrate their resolution limit.
CrosscheckReport crosscheck(const std::vector<BandEdgeSolution>& analytic,
                            const PotentialParams& p, int steps = 20000);

}  // namespace alqes
