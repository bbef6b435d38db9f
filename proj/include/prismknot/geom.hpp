#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace prismknot {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kTau = 6.28318530717958647692528676655900577;  // 2*pi

inline double wrap_unit(double t) { return t - std::floor(t); }

// Distance on the circle R/Z.
inline double circle_dist(double a, double b) {
  double d = wrap_unit(a - b);
  return std::min(d, 1.0 - d);
}

// sup-distance between parameter tuples in the flat torus metric.
template <std::size_t N>
double torus_dist(const std::array<double, N>& a, const std::array<double, N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, circle_dist(a[i], b[i]));
  return m;
}

// Truncated Taylor expansion of a scalar function: c[k] = f^(k)(t0)/k!.
// Capacity covers orders 0..7, enough for order-6 contact analysis.
class Jet {
 public:
  static constexpr int kCap = 8;

  Jet() = default;
  Jet(double value, int terms) : n_(terms) { c_[0] = value; }

  int terms() const { return n_; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  double value() const { return c_[0]; }

  // k-th derivative (not the Taylor coefficient).
  double deriv(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(0.0, a.n_);
    for (int k = 0; k < a.n_; ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(0.0, a.n_);
    for (int k = 0; k < a.n_; ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(0.0, a.n_);
    for (int k = 0; k < a.n_; ++k)
      for (int i = 0; i <= k; ++i) r.c_[k] += a.c_[i] * b.c_[k - i];
    return r;
  }
  friend Jet operator*(double s, const Jet& a) {
    Jet r(0.0, a.n_);
    for (int k = 0; k < a.n_; ++k) r.c_[k] = s * a.c_[k];
    return r;
  }
  Jet& operator+=(const Jet& b) {
    for (int k = 0; k < n_; ++k) c_[k] += b.c_[k];
    return *this;
  }

  static Jet div(const Jet& a, const Jet& b) {
    Jet q(0.0, a.n_);
    q.c_[0] = a.c_[0] / b.c_[0];
    for (int k = 1; k < a.n_; ++k) {
      double s = a.c_[k];
      for (int i = 1; i <= k; ++i) s -= b.c_[i] * q.c_[k - i];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  static Jet sqrt(const Jet& a) {
    Jet s(0.0, a.n_);
    s.c_[0] = std::sqrt(a.c_[0]);
    for (int k = 1; k < a.n_; ++k) {
      double acc = a.c_[k];
      for (int i = 1; i < k; ++i) acc -= s.c_[i] * s.c_[k - i];
      s.c_[k] = acc / (2.0 * s.c_[0]);
    }
    return s;
  }

 private:
  int n_ = 1;
  std::array<double, kCap> c_{};
};

template <int Dim>
using JetPoint = std::array<Jet, Dim>;

template <int Dim>
Jet jet_dot(const JetPoint<Dim>& a, const JetPoint<Dim>& b) {
  Jet s = a[0] * b[0];
  for (int i = 1; i < Dim; ++i) s += a[i] * b[i];
  return s;
}

// Deterministic orthonormal frame (e1, e2, d) with det[e1 e2 d] = +1.
inline std::pair<Vec3, Vec3> plane_frame(const Vec3& d) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(d[i]) < std::fabs(d[k])) k = i;
  Vec3 h = Vec3::Zero();
  h[k] = 1.0;
  Vec3 e1 = h.cross(d).normalized();
  Vec3 e2 = d.cross(e1);
  return {e1, e2};
}

// Low-discrepancy directions on S^2 (spherical Fibonacci lattice).
inline std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> dirs;
  dirs.reserve(n);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = kTau * std::fmod(i / golden, 1.0);
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

// Rotation of R^4 sending unit vector `from` to unit vector `to`,
// acting only in their common 2-plane.
inline Mat4 rotation_aligning(const Vec4& from, const Vec4& to) {
  double c = from.dot(to);
  if (c < -1.0 + 1e-14) {
    // Antipodal: rotate by pi in a 2-plane containing `from`.
    int j = 0;
    for (int i = 1; i < 4; ++i)
      if (std::fabs(from[i]) < std::fabs(from[j])) j = i;
    Vec4 e = Vec4::Zero();
    e[j] = 1.0;
    e = (e - e.dot(from) * from).normalized();
    return Mat4::Identity() - 2.0 * from * from.transpose() - 2.0 * e * e.transpose();
  }
  Vec4 v = from + to;
  return Mat4::Identity() - v * v.transpose() / (1.0 + c) +
         2.0 * to * from.transpose();
}

}  // namespace prismknot
