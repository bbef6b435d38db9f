#include "prismknot/projgeom.hpp"

#include "prismknot/curve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <limits>
#include <stdexcept>

namespace prismknot {

namespace detail {

Vec5 homogenize(const Vec4& x) {
  Vec5 h;
  h << x[0], x[1], x[2], x[3], 1.0;
  return h.normalized();
}

Eigen::Matrix<double, 5, 2> span_frame(const Vec5& u, const Vec5& v) {
  Eigen::Matrix<double, 5, 2> f;
  f.col(0) = u.normalized();
  Vec5 w = v - v.dot(f.col(0)) * f.col(0);
  double n = w.norm();
  if (n < 1e-12) throw std::invalid_argument("chord endpoints coincide projectively");
  f.col(1) = w / n;
  return f;
}

// Orthonormal basis of the 3-dimensional orthogonal complement of a
// 2-frame in R^5 (trailing columns of the full Householder Q).
Eigen::Matrix<double, 5, 3> complement_basis(const Eigen::Matrix<double, 5, 2>& frame) {
  Eigen::HouseholderQR<Eigen::Matrix<double, 5, 2>> qr(frame);
  Eigen::Matrix<double, 5, 5> q = qr.householderQ();
  return q.rightCols<3>();
}

}  // namespace detail

using detail::complement_basis;
using detail::homogenize;
using detail::span_frame;

HomPoint HomPoint::from_raw(const Vec5& raw) {
  double n = raw.norm();
  if (n < 1e-300) throw std::invalid_argument("zero homogeneous vector");
  Vec5 v = raw / n;
  for (int i = 0; i < 5; ++i) {
    if (std::fabs(v[i]) > 1e-10) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return HomPoint{v};
}

HomPoint HomPoint::from_affine(const Vec4& x) {
  Vec5 h;
  h << x[0], x[1], x[2], x[3], 1.0;
  return from_raw(h);
}

ChordLine chord_line(const Vec4& a, const Vec4& b) {
  if ((a - b).norm() < 1e-9) throw std::invalid_argument("chord endpoints coincide");
  ChordLine l;
  l.frame = span_frame(homogenize(a), homogenize(b));
  l.a = a;
  l.b = b;
  return l;
}

std::optional<HomPoint> concurrency_point(const ChordLine& l1, const ChordLine& l2,
                                          const ChordLine& l3) {
  const ChordLine* lines[3] = {&l1, &l2, &l3};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Mat2 overlap = lines[i]->frame.transpose() * lines[j]->frame;
      Eigen::JacobiSVD<Mat2> svd(overlap);
      if (svd.singularValues().minCoeff() > 1.0 - 1e-10)
        throw std::invalid_argument("two chord lines coincide");
    }

  // Common direction = minimizer of the summed squared distances to the
  // three 2-planes; accepted when it lies in each plane to tolerance.
  Eigen::Matrix<double, 5, 5> a = 3.0 * Eigen::Matrix<double, 5, 5>::Identity();
  for (const ChordLine* l : lines) a -= l->frame * l->frame.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> eig(a);
  Vec5 v = eig.eigenvectors().col(0);
  for (const ChordLine* l : lines) {
    Vec5 residual = v - l->frame * (l->frame.transpose() * v);
    if (residual.norm() > 1e-8) return std::nullopt;
  }
  return HomPoint::from_raw(v);
}

ConcurrencyResidual concurrency_residual(const std::array<Vec4, 6>& points) {
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if ((points[i] - points[j]).norm() < 1e-9)
        throw std::invalid_argument("configuration has coincident points");

  std::array<Vec5, 6> h;
  for (int i = 0; i < 6; ++i) h[i] = homogenize(points[i]);

  Eigen::Matrix<double, 5, 2> f1 = span_frame(h[0], h[3]);
  Eigen::Matrix<double, 5, 2> f2 = span_frame(h[1], h[4]);
  Eigen::Matrix<double, 5, 2> f3 = span_frame(h[2], h[5]);

  Eigen::Matrix<double, 5, 3> b2 = complement_basis(f2);
  Eigen::Matrix<double, 5, 3> b3 = complement_basis(f3);
  Eigen::Matrix<double, 3, 2> m2 = b2.transpose() * f1;
  Eigen::Matrix<double, 3, 2> m3 = b3.transpose() * f1;

  // Minimize |m2 u|^2 + |m3 u|^2 over unit u = (cos phi, sin phi).
  Mat2 k = m2.transpose() * m2 + m3.transpose() * m3;
  Eigen::SelfAdjointEigenSolver<Mat2> eig2(k);
  Vec2 u = eig2.eigenvectors().col(0);

  ConcurrencyResidual out;
  out.components.head<3>() = m2 * u;
  out.components.tail<3>() = m3 * u;

  // Symmetric residual: minimize the summed squared distances to the
  // three chord planes, a quantity invariant under any relabeling that
  // preserves the chord set. The eigensolver locates the minimizer; the
  // norm is then re-evaluated directly at that direction, which avoids
  // the sqrt(machine-eps) floor of the eigenvalue itself.
  Eigen::Matrix<double, 5, 5> a = 3.0 * Eigen::Matrix<double, 5, 5>::Identity();
  a -= f1 * f1.transpose();
  a -= f2 * f2.transpose();
  a -= f3 * f3.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> eig(a);
  Vec5 v = eig.eigenvectors().col(0);
  double sq = 0.0;
  for (const auto& f : {f1, f2, f3}) sq += (v - f * (f.transpose() * v)).squaredNorm();
  out.norm = std::sqrt(sq);
  out.p_hat = HomPoint::from_raw(v);
  return out;
}

int side_of_tangency_locus(const HomPoint& p, const Vec4& y) {
  double spatial = p.spatial().norm();
  double w = std::fabs(p.w());
  if (spatial <= w + 1e-9)
    throw std::invalid_argument("tangency locus needs p outside the closed unit ball");
  double f = p.spatial().dot(y) - p.w();
  if (std::fabs(f) < 1e-10) return 0;
  return f > 0 ? 1 : -1;
}

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::NotConcurrent: return "NotConcurrent";
    case RejectReason::PInsideBall: return "PInsideBall";
    case RejectReason::BadSidePattern: return "BadSidePattern";
    case RejectReason::TangentChord: return "TangentChord";
  }
  return "?";
}

std::variant<PrismConfig, RejectReason> make_prism_config(const std::array<Vec4, 6>& points,
                                                          double tol) {
  ConcurrencyResidual res = concurrency_residual(points);
  if (res.norm >= tol) return RejectReason::NotConcurrent;

  const HomPoint& p = res.p_hat;
  if (p.spatial().norm() <= std::fabs(p.w()) + 1e-9) return RejectReason::PInsideBall;

  std::array<int, 6> sides{};
  for (int i = 0; i < 6; ++i) {
    sides[i] = side_of_tangency_locus(p, points[i]);
    if (sides[i] == 0) return RejectReason::TangentChord;
  }
  bool alternating = sides[0] == sides[2] && sides[2] == sides[4] && sides[1] == sides[3] &&
                     sides[3] == sides[5] && sides[0] == -sides[1];
  if (!alternating) return RejectReason::BadSidePattern;

  PrismConfig config;
  config.points = points;
  config.concurrency = p;
  config.chords = {chord_line(points[0], points[3]), chord_line(points[1], points[4]),
                   chord_line(points[2], points[5])};
  config.sides = sides;
  config.residual_norm = res.norm;

  // M0: all six points on one circle, i.e. centered affine rank <= 2.
  Eigen::Matrix<double, 6, 4> centered;
  Vec4 mean = Vec4::Zero();
  for (const auto& x : points) mean += x / 6.0;
  for (int i = 0; i < 6; ++i) centered.row(i) = (points[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(centered);
  config.is_m0 = svd.singularValues()[2] <= 1e-8;
  return config;
}

double circumradius(const Vec4& a, const Vec4& b, const Vec4& c) {
  // Kahan's stable triangle area from side lengths; the Gram-determinant
  // form cancels catastrophically for near-collapsed triples, which the
  // thickness minimizer probes constantly.
  double s0 = (b - a).norm(), s1 = (c - a).norm(), s2 = (c - b).norm();
  double big = std::max({s0, s1, s2});
  double small = std::min({s0, s1, s2});
  double mid = s0 + s1 + s2 - big - small;
  double prod = (big + (mid + small)) * (small - (big - mid)) * (small + (big - mid)) *
                (big + (mid - small));
  if (prod <= 0.0) return std::numeric_limits<double>::infinity();
  double area = 0.25 * std::sqrt(prod);
  return s0 * s1 * s2 / (4.0 * area);
}

double incircle_radius(const Vec3& a, const Vec3& b, const Vec3& c) {
  double la = (b - c).norm(), lb = (a - c).norm(), lc = (a - b).norm();
  double s = 0.5 * (la + lb + lc);
  double area = 0.5 * (b - a).cross(c - a).norm();
  if (area < 1e-14 * s * s || s < 1e-300) throw std::invalid_argument("degenerate triangle");
  return area / s;
}

double plane_angle(const Vec3& normal1, const Vec3& normal2) {
  double c = std::fabs(normal1.normalized().dot(normal2.normalized()));
  return std::acos(std::min(1.0, c));
}

MobiusTransform& MobiusTransform::translate(const Vec3& v) {
  word.emplace_back(Translate{v});
  return *this;
}
MobiusTransform& MobiusTransform::scale(double s) {
  if (s == 0.0) throw std::invalid_argument("Moebius scaling must be nonzero");
  word.emplace_back(Scale{s});
  return *this;
}
MobiusTransform& MobiusTransform::rotate(const Mat4& r) {
  if ((r * r.transpose() - Mat4::Identity()).norm() > 1e-12)
    throw std::invalid_argument("Moebius rotation factor is not orthogonal");
  word.emplace_back(Rotate{r});
  return *this;
}

Vec3 mobius_apply(const MobiusTransform& m, const Vec3& x) {
  Vec3 cur = x;
  for (const auto& step : m.word) {
    if (const auto* t = std::get_if<MobiusTransform::Translate>(&step)) {
      cur += t->v;
    } else if (const auto* s = std::get_if<MobiusTransform::Scale>(&step)) {
      cur *= s->s;
    } else {
      const auto& r = std::get<MobiusTransform::Rotate>(step).r;
      Vec4 y = r * lift_to_s3(cur);
      if (1.0 - y[3] < 1e-12) throw std::domain_error("Moebius word sends point to infinity");
      cur = project_from_s3(y);
    }
  }
  return cur;
}

std::array<Vec4, 6> cap_rotation(const PrismConfig& config, double epsilon) {
  if (config.is_m0)
    throw std::domain_error("cap_rotation undefined on M0 (circle) configurations");
  if (std::fabs(epsilon) > 0.3 + 1e-12)
    throw std::invalid_argument("cap_rotation angle must satisfy |epsilon| <= 0.3");

  // Affine 3-space A through the six points.
  Vec4 mean = Vec4::Zero();
  for (const auto& x : config.points) mean += x / 6.0;
  Eigen::Matrix<double, 6, 4> centered;
  for (int i = 0; i < 6; ++i) centered.row(i) = (config.points[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(centered, Eigen::ComputeFullV);
  if (svd.singularValues()[3] > 1e-6)
    throw std::domain_error("cap_rotation: sphere fit ill-conditioned");
  Eigen::Matrix<double, 4, 3> basis = svd.matrixV().leftCols<3>();

  // Center of the 2-sphere P = A /\ S^3 (the point of A nearest the origin).
  Vec4 q = mean - basis * (basis.transpose() * mean);

  // Axis of C = T_p /\ P inside A: the in-A component of the T_p normal.
  Vec3 g = basis.transpose() * config.concurrency.spatial();
  double gn = g.norm();
  if (gn < 1e-10) throw std::domain_error("cap_rotation: tangency locus contains the sphere");
  Vec3 ghat = g / gn;
  auto [e1, e2] = plane_frame(ghat);
  Vec4 axis = basis * ghat;
  Vec4 w1 = basis * e1;
  Vec4 w2 = basis * e2;

  double ce = std::cos(epsilon), se = std::sin(epsilon);
  std::array<Vec4, 6> out;
  for (int i = 0; i < 6; ++i) {
    const Vec4& x = config.points[i];
    if (config.sides[i] > 0) {
      Vec4 d = x - q;
      double a = d.dot(axis), b1 = d.dot(w1), b2 = d.dot(w2);
      Vec4 rest = d - a * axis - b1 * w1 - b2 * w2;
      out[i] = q + a * axis + (b1 * ce - b2 * se) * w1 + (b1 * se + b2 * ce) * w2 + rest;
      out[i].normalize();
    } else {
      out[i] = x;
    }
  }
  return out;
}

}  // namespace prismknot
