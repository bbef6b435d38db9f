// Independent cross-checks used only by the test suites. None of these
// share code paths with the library implementations they verify.
#pragma once

#include "prismknot/curve.hpp"
#include "prismknot/gauss.hpp"
#include "prismknot/hexknot.hpp"

#include <vector>

namespace prismknot::oracles {

// Link diagram for the skein-relation evaluator: per-component passage
// sequences. Crossing ids are arbitrary but must appear exactly twice.
struct OraclePassage {
  int id;
  bool over;
  int sign;
};
using OracleComponent = std::vector<OraclePassage>;
struct OracleDiagram {
  std::vector<OracleComponent> components;
};

// Conway polynomial in z via the skein relation
//   conway(L+) - conway(L-) = z * conway(L0),
// resolving toward descending diagrams (unknot -> 1, split link -> 0).
LaurentPoly conway(const OracleDiagram& d);

// Coefficient of z^k.
long long coefficient(const LaurentPoly& p, int k);

OracleDiagram to_oracle_diagram(const GaussDiagram& d);

// a2 by the skein route (coefficient of z^2 of the Conway polynomial).
long long a2_by_skein(const GaussDiagram& d);

// Least-squares circle fit of points in R^n restricted to their affine
// 2-plane. Returns the radius; `worst_residual` receives the largest
// distance deviation.
double fit_circle_radius(const std::vector<Eigen::VectorXd>& points,
                         double* worst_residual = nullptr);

// Exhaustive symmetry-reduced grid minimum of the triple circumradius
// (the dense-sampling thickness oracle).
double dense_thickness(const Curve4& curve, int grid = 200);

// 3-crossing rule: a diagram with exactly three crossings is a trefoil
// iff its passage sequence alternates over/under and all signs agree.
// Returns +1 (right), -1 (left) or 0 (not a trefoil by this rule).
int trefoil_by_crossing_rule(const GaussDiagram& d);

// Verifies theta(t) >= C * h(t)^(1-1/n) near a tangential contact, with
// C fitted from the sample closest to t0 and the window truncated to the
// monotone regime of theta (the bound is local; its delta depends on the
// curve).
bool tangential_bound_holds(const Curve3& curve, const PlaneR3& plane,
                            const ContactReport& contact);

}  // namespace prismknot::oracles
