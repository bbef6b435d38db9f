#pragma once

#include "prismknot/geom.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace prismknot {

// Point of RP^4 as a unit 5-vector (x1..x4, w), sign-canonicalized so the
// first coordinate above tolerance is positive. w = 0 is a point at
// infinity of the affine chart w = 1; the reference 4-ball B^4 is the
// closed unit ball of that chart and S^3 its boundary.
struct HomPoint {
  Vec5 v;

  static HomPoint from_raw(const Vec5& raw);
  static HomPoint from_affine(const Vec4& x);  // (x, 1) normalized
  bool at_infinity(double tol = 1e-12) const { return std::fabs(v[4]) < tol; }
  Vec4 spatial() const { return v.head<4>(); }
  double w() const { return v[4]; }
};

// Projective line through two points of S^3, stored as an orthonormal
// 2-frame of the corresponding 2-dimensional subspace of R^5.
struct ChordLine {
  Eigen::Matrix<double, 5, 2> frame;
  Vec4 a, b;  // the S^3 endpoints
};

ChordLine chord_line(const Vec4& a, const Vec4& b);

// The unique common projective point of three pairwise-distinct chord
// lines, or nullopt when no common point exists (principal-angle test at
// tolerance 1e-8). Throws std::invalid_argument if two lines coincide.
std::optional<HomPoint> concurrency_point(const ChordLine& l1, const ChordLine& l2,
                                          const ChordLine& l3);

// Concurrency residual of a labeled 6-tuple. `components` parameterizes a
// unit direction p(phi) in the (x1,x4) chord plane and stacks its
// projections onto the orthogonal complements of the other two chord
// planes (closed-form minimum over phi). `norm` is the symmetric measure
// lambda_min(sum of complement projectors)^(1/2), which is exactly
// invariant under relabelings that preserve the chord set; it vanishes
// iff the configuration is concurrent. `p_hat` estimates the common point.
struct ConcurrencyResidual {
  Vec6 components;
  double norm;
  HomPoint p_hat;
};

ConcurrencyResidual concurrency_residual(const std::array<Vec4, 6>& points);

// Side of the tangency locus T_p: sign(<p_spatial, y> - w), zero within
// 1e-10 of T_p. Requires p outside the closed unit ball (or at infinity).
int side_of_tangency_locus(const HomPoint& p, const Vec4& y);

struct PrismConfig {
  std::array<Vec4, 6> points;
  HomPoint concurrency;
  std::array<ChordLine, 3> chords;  // pairs (1,4), (2,5), (3,6)
  std::array<int, 6> sides;
  bool is_m0 = false;
  double residual_norm = 0.0;
};

enum class RejectReason { NotConcurrent, PInsideBall, BadSidePattern, TangentChord };

std::string to_string(RejectReason r);

std::variant<PrismConfig, RejectReason> make_prism_config(const std::array<Vec4, 6>& points,
                                                          double tol = 1e-8);

// Radius of the circle through three points of R^4 (+infinity if collinear).
double circumradius(const Vec4& a, const Vec4& b, const Vec4& c);

// Incircle radius of a triangle in R^3; throws on degenerate input.
double incircle_radius(const Vec3& a, const Vec3& b, const Vec3& c);

struct PlaneR3;  // curve.hpp
// Angle between two planes, in [0, pi/2].
double plane_angle(const Vec3& normal1, const Vec3& normal2);

// Moebius transformations of R^3 as words in the generators: translation,
// scaling by a nonzero real, and rotation of S^3 in the lifted model.
struct MobiusTransform {
  struct Translate {
    Vec3 v;
  };
  struct Scale {
    double s;
  };
  struct Rotate {
    Mat4 r;  // orthogonal (either determinant)
  };
  using Step = std::variant<Translate, Scale, Rotate>;
  std::vector<Step> word;  // applied left to right

  MobiusTransform& translate(const Vec3& v);
  MobiusTransform& scale(double s);
  MobiusTransform& rotate(const Mat4& r);
};

// Throws std::domain_error when the point is sent to infinity (pole hit).
Vec3 mobius_apply(const MobiusTransform& m, const Vec3& x);

// Rotates the positive-side triple of a prism configuration about the
// axis of the circle C = T_p /\ P inside the 2-sphere P spanned by the
// configuration, by angle epsilon. Requires the configuration off M0.
std::array<Vec4, 6> cap_rotation(const PrismConfig& config, double epsilon);

namespace detail {
// Shared homogeneous-coordinate kernels (used by the solver's residual).
Vec5 homogenize(const Vec4& x);
Eigen::Matrix<double, 5, 2> span_frame(const Vec5& u, const Vec5& v);
Eigen::Matrix<double, 5, 3> complement_basis(const Eigen::Matrix<double, 5, 2>& frame);
}  // namespace detail

}  // namespace prismknot
