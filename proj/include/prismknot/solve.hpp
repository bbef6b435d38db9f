#pragma once

#include "prismknot/curve.hpp"
#include "prismknot/hexknot.hpp"
#include "prismknot/projgeom.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace prismknot {

struct SearchParams {
  int grid_per_axis = 12;
  double tol_converge = 1e-12;  // Newton target
  double tol_accept = 1e-8;     // acceptance after polish
  double dedup_radius = 1e-6;   // flat torus metric on (t2..t6)
  int max_newton_iters = 50;
  double cond_limit = 1e12;     // non-transversality flag
};

// An accepted point of M /\ Q_gamma^p: strictly ordered parameters within
// one period starting at the basepoint, the six S^3 points, and the
// certified prism structure.
struct ConfigTuple {
  std::array<double, 6> t;
  std::array<Vec4, 6> x;
  double residual_norm = 0.0;
  PrismConfig prism;
  std::optional<int> sign;  // nullopt when the root is non-transverse
  double jacobian_cond = 0.0;
};

// Seeded Newton search over the basepoint slice Q_gamma^p. Seeds walk a
// simplex grid in the gap coordinates; every converged root is filtered
// through make_prism_config and deduplicated. Deterministic.
std::vector<ConfigTuple> find_inscribed_prisms(const Curve4& curve, double basepoint,
                                               const SearchParams& params = {});

// Sign of det of the 6x6 residual Jacobian at the root, coordinate order
// (t2..t6, phi). Throws std::domain_error for non-transverse roots.
int intersection_sign(const ConfigTuple& sol);

struct ThicknessReport {
  double tau = 0.0;
  std::array<double, 3> triple{};  // minimizing parameters
  bool diagonal = false;           // osculating-circle phase produced the minimum
};

// Infimum circumradius over triples of curve points (coarse grid + local
// descent) together with the diagonal osculating-circle phase.
ThicknessReport thickness(const Curve4& curve, int coarse_grid = 64, int fine_grid = 4096);

struct SeparationReport {
  double tau = 0.0;
  double min_pairwise = 0.0;
  bool ok = false;  // every solution clears 2*tau - 1e-6
};

SeparationReport check_separation(const Curve4& curve, const std::vector<ConfigTuple>& sols,
                                  std::optional<double> tau = std::nullopt);

struct InvariantReport {
  std::vector<ConfigTuple> solutions;
  int kappa = 0;   // sum of intersection signs; valid when all_transverse
  int parity = 0;  // solution count mod 2
  bool all_transverse = true;
  std::optional<int> a2_value;  // of the stereographic projection
  bool matches_a2 = false;      // |kappa| == |a2|
};

InvariantReport kappa(const KnotCurve& curve, double basepoint,
                      const SearchParams& params = {});

struct QuadrisecantConfig {
  std::array<double, 4> s;
  Vec3 point;      // point on the fitted line
  Vec3 direction;  // unit direction, sign-canonicalized
  std::array<int, 4> line_order;  // indices 0..3 sorted by position along the line
  bool alternating = false;
  double residual = 0.0;  // max point-to-line distance
};

std::vector<QuadrisecantConfig> find_quadrisecants(const Curve3& curve, int grid = 12);

struct CertifiedTrefoil {
  std::array<double, 6> t;
  HexClass cls;
};

struct CertifyResult {
  std::optional<CertifiedTrefoil> trefoil;  // nullopt = Unresolved
  std::string note;                         // branch used, or failure reason
};

// Perturbs an accepted solution into a genuine on-curve trefoil hexagon:
// direct classification, cap-rotation slides, the planar big-sphere and
// co-circular lift constructions, then a margin-maximizing local search
// (bounded by `budget` classifier calls).
CertifyResult certify_trefoil(const KnotCurve& curve, const ConfigTuple& sol,
                              std::uint64_t seed = 0x7ef01ULL, int budget = 10000);

struct ProximityRow {
  int trefoil_index = 0;
  int quadrisecant_index = 0;
  double proximity = 0.0;  // max_i min_j |gamma(t_i) - gamma(s_j)|
};

// Proximity table between certified trefoils and alternating
// quadrisecants (Conjecture-1 experiment; exploratory output).
std::vector<ProximityRow> conjecture1_experiment(const KnotCurve& curve,
                                                 const std::vector<CertifiedTrefoil>& trefoils,
                                                 const std::vector<QuadrisecantConfig>& quads);

// End-to-end variant: searches basepoints {0, 0.1, ..., 0.9}, certifies
// what it finds, and pairs the results with alternating quadrisecants.
std::vector<ProximityRow> conjecture1_experiment(const KnotCurve& curve,
                                                 std::uint64_t seed = 0x7ef01ULL);

}  // namespace prismknot
