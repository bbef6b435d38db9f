#pragma once

#include "prismknot/geom.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace prismknot {

enum class Ambient { R3, S3 };

// Truncated Fourier series with period 1:
//   x_c(t) = sum_k coeffs[c][k][0]*cos(2 pi k t) + coeffs[c][k][1]*sin(2 pi k t).
// Analytic by construction, so Theorem-1-style contact analysis is exact.
struct TrigCurve {
  int dim = 3;
  std::vector<std::vector<std::array<double, 2>>> coeffs;  // [dim][degree+1]

  int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].size()) - 1; }
  Eigen::VectorXd eval(double t) const;
  Eigen::VectorXd deriv(double t, int order) const;
  // Taylor coefficients around t, one Jet per coordinate.
  void expand(double t, int terms, Jet* out) const;
};

struct KnotCurve {
  Ambient ambient = Ambient::R3;
  TrigCurve poly;
};

// Validates periodic-curve invariants (unit norm for S3, non-vanishing
// derivative on a 10^4 sample); throws std::invalid_argument on failure.
KnotCurve make_knot_curve(Ambient ambient, TrigCurve poly);

// Named models: paper-trefoil-s3, great-circle-s3, trefoil-r3,
// figure-eight-r3, torus(p,q)-r3.
KnotCurve preset(const std::string& name);
std::vector<std::string> preset_names();

Eigen::VectorXd eval(const KnotCurve& c, double t);
Eigen::VectorXd deriv(const KnotCurve& c, double t, int order);

// Stereographic pair, pole fixed at (0,0,0,1):
//   lift(x) = (2x, |x|^2-1)/(|x|^2+1),  project(y) = (y1,y2,y3)/(1-y4).
Vec4 lift_to_s3(const Vec3& x);
Vec3 project_from_s3(const Vec4& y);

// ---------------------------------------------------------------------------
// Curve views: closed period-1 curves given by local Taylor expansions.
// These let the solver and the diagram code run on composite curves
// (stereographic lifts/projections, renormalized perturbations) with exact
// derivatives instead of finite differences.

struct Curve3 {
  std::function<void(double t, int terms, JetPoint<3>&)> expand;
  Vec3 pos(double t) const;
  Vec3 d1(double t) const;
  Vec3 d2(double t) const;
};

struct Curve4 {
  std::function<void(double t, int terms, JetPoint<4>&)> expand;
  Vec4 pos(double t) const;
  Vec4 d1(double t) const;
  Vec4 d2(double t) const;
};

// Native R3 view. Requires ambient R3.
Curve3 r3_view(const KnotCurve& c);
// S3 view: native for ambient S3, pointwise stereographic lift for R3.
Curve4 s3_view(const KnotCurve& c);
// Stereographic projection of an S3 curve from an arbitrary pole: the pole
// is rotated onto (0,0,0,1) and the standard projection applied.
Curve3 project_view(const Curve4& c, const Vec4& pole);
// Pointwise normalization y = g/|g| of a 4-coordinate Fourier curve.
Curve4 normalized_s3_view(const TrigCurve& raw4);

// Pole on S3 far from the curve (best of `candidates` Fibonacci points by
// minimum chordal distance over `samples` curve points).
Vec4 admissible_pole(const Curve4& c, int candidates = 64, int samples = 512);

// ---------------------------------------------------------------------------
// Plane contact analysis (curves in R3).

struct PlaneR3 {
  Vec3 normal;    // unit
  double offset;  // plane is {x : <normal,x> = offset}
};

PlaneR3 make_plane(const Vec3& normal, double offset);

enum class SideClass { TwoSided, OneSidedPositive, OneSidedNegative };

struct ContactReport {
  double t0 = 0.0;
  int contact_order = 1;  // smallest n with nonzero n-th Taylor coefficient of h
  SideClass side_class = SideClass::TwoSided;
};

// Contact analysis of h(t) = <n, curve(t)> - offset at a root t0.
// Returns nullopt when the contact order exceeds 6 (indeterminate).
// Throws std::invalid_argument if |h(t0)| >= 1e-10 (t0 not on the plane).
std::optional<ContactReport> plane_contact(const Curve3& c, const PlaneR3& plane, double t0);
std::optional<ContactReport> plane_contact(const KnotCurve& c, const PlaneR3& plane, double t0);

// All intersections of the curve with the plane in [0,1): dense sampling
// (2^14 by default) plus bisection/Newton polish, each root classified.
// Throws std::domain_error when the curve lies in the plane or the root
// count is unstable between two sampling densities.
std::vector<ContactReport> plane_intersections(const Curve3& c, const PlaneR3& plane,
                                               int samples = 1 << 14);
std::vector<ContactReport> plane_intersections(const KnotCurve& c, const PlaneR3& plane,
                                               int samples = 1 << 14);

}  // namespace prismknot
