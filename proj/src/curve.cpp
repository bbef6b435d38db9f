#include "prismknot/curve.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

namespace prismknot {

namespace {

constexpr int kValidationSamples = 10000;

}  // namespace

Eigen::VectorXd TrigCurve::eval(double t) const {
  Eigen::VectorXd out(dim);
  for (int c = 0; c < dim; ++c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs[c].size(); ++k) {
      double w = kTau * static_cast<double>(k) * t;
      acc += coeffs[c][k][0] * std::cos(w) + coeffs[c][k][1] * std::sin(w);
    }
    out[c] = acc;
  }
  return out;
}

Eigen::VectorXd TrigCurve::deriv(double t, int order) const {
  Eigen::VectorXd out(dim);
  for (int c = 0; c < dim; ++c) {
    double acc = 0.0;
    for (std::size_t k = 1; k < coeffs[c].size(); ++k) {
      double w = kTau * static_cast<double>(k);
      // d/dt maps (a, b) -> (w b, -w a).
      double a = coeffs[c][k][0], b = coeffs[c][k][1];
      for (int m = 0; m < order; ++m) {
        double an = w * b, bn = -w * a;
        a = an;
        b = bn;
      }
      acc += a * std::cos(w * t) + b * std::sin(w * t);
    }
    out[c] = acc;
  }
  return out;
}

void TrigCurve::expand(double t, int terms, Jet* out) const {
  for (int c = 0; c < dim; ++c) {
    Jet j(0.0, terms);
    for (std::size_t k = 0; k < coeffs[c].size(); ++k) {
      double w = kTau * static_cast<double>(k);
      double a = coeffs[c][k][0], b = coeffs[c][k][1];
      double cw = std::cos(w * t), sw = std::sin(w * t);
      double scale = 1.0;
      for (int m = 0; m < terms; ++m) {
        j[m] += scale * (a * cw + b * sw);
        double an = w * b, bn = -w * a;
        a = an;
        b = bn;
        scale /= (m + 1.0);
      }
    }
    out[c] = j;
  }
}

KnotCurve make_knot_curve(Ambient ambient, TrigCurve poly) {
  const int want = ambient == Ambient::S3 ? 4 : 3;
  if (poly.dim != want || static_cast<int>(poly.coeffs.size()) != want)
    throw std::invalid_argument("curve dimension does not match ambient");
  std::size_t terms = 0;
  for (const auto& c : poly.coeffs) terms = std::max(terms, c.size());
  if (terms == 0) throw std::invalid_argument("empty coefficient list");
  for (auto& c : poly.coeffs) c.resize(terms, {0.0, 0.0});

  KnotCurve curve{ambient, std::move(poly)};
  double min_speed = 1e300, max_speed = 0.0, worst_norm = 0.0;
  for (int i = 0; i < kValidationSamples; ++i) {
    double t = static_cast<double>(i) / kValidationSamples;
    double speed = curve.poly.deriv(t, 1).norm();
    min_speed = std::min(min_speed, speed);
    max_speed = std::max(max_speed, speed);
    if (ambient == Ambient::S3)
      worst_norm = std::max(worst_norm, std::fabs(curve.poly.eval(t).norm() - 1.0));
  }
  if (ambient == Ambient::S3 && worst_norm > 1e-12)
    throw std::invalid_argument("S3 curve is not unit-norm");
  if (min_speed <= 1e-6 * std::max(1.0, max_speed))
    throw std::invalid_argument("curve derivative vanishes");
  return curve;
}

namespace {

TrigCurve zero_curve(int dim, int degree) {
  TrigCurve c;
  c.dim = dim;
  c.coeffs.assign(dim, std::vector<std::array<double, 2>>(degree + 1, {0.0, 0.0}));
  return c;
}

KnotCurve torus_knot_r3(int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("torus knot needs positive p, q");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("torus knot needs gcd(p,q) = 1");
  // ((2 + cos q s) cos p s, (2 + cos q s) sin p s, sin q s), s = 2 pi t,
  // expanded by product-to-sum into a plain Fourier series.
  TrigCurve c = zero_curve(3, std::max(p + q, q));
  c.coeffs[0][p][0] += 2.0;
  c.coeffs[0][p + q][0] += 0.5;
  c.coeffs[0][std::abs(p - q)][0] += 0.5;
  c.coeffs[1][p][1] += 2.0;
  c.coeffs[1][p + q][1] += 0.5;
  if (p > q)
    c.coeffs[1][p - q][1] += 0.5;
  else if (q > p)
    c.coeffs[1][q - p][1] -= 0.5;
  c.coeffs[2][q][1] += 1.0;
  return make_knot_curve(Ambient::R3, std::move(c));
}

}  // namespace

KnotCurve preset(const std::string& name) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (name == "paper-trefoil-s3") {
    // (1/sqrt2)(cos 4 pi t, sin 4 pi t, cos 6 pi t, sin 6 pi t)
    TrigCurve c = zero_curve(4, 3);
    c.coeffs[0][2][0] = inv_sqrt2;
    c.coeffs[1][2][1] = inv_sqrt2;
    c.coeffs[2][3][0] = inv_sqrt2;
    c.coeffs[3][3][1] = inv_sqrt2;
    return make_knot_curve(Ambient::S3, std::move(c));
  }
  if (name == "great-circle-s3") {
    TrigCurve c = zero_curve(4, 1);
    c.coeffs[0][1][0] = 1.0;
    c.coeffs[1][1][1] = 1.0;
    return make_knot_curve(Ambient::S3, std::move(c));
  }
  if (name == "trefoil-r3") {
    // (sin 2 pi t + 2 sin 4 pi t, cos 2 pi t - 2 cos 4 pi t, -sin 6 pi t)
    TrigCurve c = zero_curve(3, 3);
    c.coeffs[0][1][1] = 1.0;
    c.coeffs[0][2][1] = 2.0;
    c.coeffs[1][1][0] = 1.0;
    c.coeffs[1][2][0] = -2.0;
    c.coeffs[2][3][1] = -1.0;
    return make_knot_curve(Ambient::R3, std::move(c));
  }
  if (name == "figure-eight-r3") {
    // ((2 + cos 2s) cos 3s, (2 + cos 2s) sin 3s, sin 4s), s = 2 pi t.
    TrigCurve c = zero_curve(3, 5);
    c.coeffs[0][1][0] = 0.5;
    c.coeffs[0][3][0] = 2.0;
    c.coeffs[0][5][0] = 0.5;
    c.coeffs[1][1][1] = 0.5;
    c.coeffs[1][3][1] = 2.0;
    c.coeffs[1][5][1] = 0.5;
    c.coeffs[2][4][1] = 1.0;
    return make_knot_curve(Ambient::R3, std::move(c));
  }
  int p = 0, q = 0;
  if (std::sscanf(name.c_str(), "torus(%d,%d)-r3", &p, &q) == 2) return torus_knot_r3(p, q);
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"paper-trefoil-s3", "great-circle-s3", "trefoil-r3", "figure-eight-r3",
          "torus(p,q)-r3"};
}

Eigen::VectorXd eval(const KnotCurve& c, double t) { return c.poly.eval(t); }

Eigen::VectorXd deriv(const KnotCurve& c, double t, int order) {
  if (order < 1 || order > 6) throw std::invalid_argument("derivative order must be in [1,6]");
  return c.poly.deriv(t, order);
}

Vec4 lift_to_s3(const Vec3& x) {
  double n2 = x.squaredNorm();
  return Vec4(2.0 * x[0], 2.0 * x[1], 2.0 * x[2], n2 - 1.0) / (n2 + 1.0);
}

Vec3 project_from_s3(const Vec4& y) {
  double denom = 1.0 - y[3];
  if (std::fabs(denom) < 1e-12)
    throw std::domain_error("stereographic projection at the pole");
  return Vec3(y[0], y[1], y[2]) / denom;
}

// ---------------------------------------------------------------------------
// Views

Vec3 Curve3::pos(double t) const {
  JetPoint<3> j;
  expand(t, 1, j);
  return Vec3(j[0][0], j[1][0], j[2][0]);
}
Vec3 Curve3::d1(double t) const {
  JetPoint<3> j;
  expand(t, 2, j);
  return Vec3(j[0][1], j[1][1], j[2][1]);
}
Vec3 Curve3::d2(double t) const {
  JetPoint<3> j;
  expand(t, 3, j);
  return 2.0 * Vec3(j[0][2], j[1][2], j[2][2]);
}

Vec4 Curve4::pos(double t) const {
  JetPoint<4> j;
  expand(t, 1, j);
  return Vec4(j[0][0], j[1][0], j[2][0], j[3][0]);
}
Vec4 Curve4::d1(double t) const {
  JetPoint<4> j;
  expand(t, 2, j);
  return Vec4(j[0][1], j[1][1], j[2][1], j[3][1]);
}
Vec4 Curve4::d2(double t) const {
  JetPoint<4> j;
  expand(t, 3, j);
  return 2.0 * Vec4(j[0][2], j[1][2], j[2][2], j[3][2]);
}

Curve3 r3_view(const KnotCurve& c) {
  if (c.ambient != Ambient::R3) throw std::invalid_argument("r3_view needs an R3 curve");
  TrigCurve poly = c.poly;
  return Curve3{[poly](double t, int terms, JetPoint<3>& out) {
    poly.expand(t, terms, out.data());
  }};
}

Curve4 s3_view(const KnotCurve& c) {
  TrigCurve poly = c.poly;
  if (c.ambient == Ambient::S3) {
    return Curve4{[poly](double t, int terms, JetPoint<4>& out) {
      poly.expand(t, terms, out.data());
    }};
  }
  // Pointwise lift of an R3 curve: y = (2x, |x|^2 - 1) / (|x|^2 + 1).
  return Curve4{[poly](double t, int terms, JetPoint<4>& out) {
    JetPoint<3> x;
    poly.expand(t, terms, x.data());
    Jet u = jet_dot<3>(x, x) + Jet(1.0, terms);
    for (int i = 0; i < 3; ++i) out[i] = Jet::div(2.0 * x[i], u);
    out[3] = Jet(1.0, terms) - Jet::div(Jet(2.0, terms), u);
  }};
}

Curve3 project_view(const Curve4& c, const Vec4& pole) {
  Mat4 align = rotation_aligning(pole.normalized(), Vec4(0, 0, 0, 1));
  auto base = c.expand;
  return Curve3{[base, align](double t, int terms, JetPoint<3>& out) {
    JetPoint<4> y;
    base(t, terms, y);
    JetPoint<4> z;
    for (int r = 0; r < 4; ++r) {
      z[r] = Jet(0.0, terms);
      for (int k = 0; k < 4; ++k) z[r] += align(r, k) * y[k];
    }
    Jet denom = Jet(1.0, terms) - z[3];
    for (int i = 0; i < 3; ++i) out[i] = Jet::div(z[i], denom);
  }};
}

Curve4 normalized_s3_view(const TrigCurve& raw4) {
  if (raw4.dim != 4) throw std::invalid_argument("normalized_s3_view needs 4 coordinates");
  TrigCurve poly = raw4;
  return Curve4{[poly](double t, int terms, JetPoint<4>& out) {
    JetPoint<4> g;
    poly.expand(t, terms, g.data());
    Jet n = Jet::sqrt(jet_dot<4>(g, g));
    for (int i = 0; i < 4; ++i) out[i] = Jet::div(g[i], n);
  }};
}

Vec4 admissible_pole(const Curve4& c, int candidates, int samples) {
  std::vector<Vec4> pts(samples);
  for (int i = 0; i < samples; ++i) pts[i] = c.pos(static_cast<double>(i) / samples);

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss;
  Vec4 best = Vec4(0, 0, 0, 1);
  double best_dist = -1.0;
  for (int i = 0; i < candidates + 8; ++i) {
    Vec4 cand;
    if (i < 8) {
      cand = Vec4::Zero();
      cand[i / 2] = (i % 2 == 0) ? 1.0 : -1.0;
    } else {
      cand = Vec4(gauss(rng), gauss(rng), gauss(rng), gauss(rng)).normalized();
    }
    double d = 1e300;
    for (const auto& p : pts) d = std::min(d, (p - cand).norm());
    if (d > best_dist) {
      best_dist = d;
      best = cand;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Plane contact

PlaneR3 make_plane(const Vec3& normal, double offset) {
  double n = normal.norm();
  if (n < 1e-12) throw std::invalid_argument("plane normal is zero");
  return PlaneR3{normal / n, offset / n};
}

namespace {

Jet height_jet(const Curve3& c, const PlaneR3& plane, double t, int terms) {
  JetPoint<3> x;
  c.expand(t, terms, x);
  Jet h = plane.normal[0] * x[0] + plane.normal[1] * x[1] + plane.normal[2] * x[2];
  h = h - Jet(plane.offset, terms);
  return h;
}

}  // namespace

std::optional<ContactReport> plane_contact(const Curve3& c, const PlaneR3& plane, double t0) {
  Jet h = height_jet(c, plane, t0, 8);
  if (std::fabs(h[0]) >= 1e-10)
    throw std::invalid_argument("plane_contact: t0 is not an intersection point");
  for (int n = 1; n <= 6; ++n) {
    if (std::fabs(h[n]) > 1e-9) {
      SideClass side = SideClass::TwoSided;
      if (n % 2 == 0) side = h[n] > 0 ? SideClass::OneSidedPositive : SideClass::OneSidedNegative;
      return ContactReport{t0, n, side};
    }
  }
  return std::nullopt;  // indeterminate beyond order 6
}

std::optional<ContactReport> plane_contact(const KnotCurve& c, const PlaneR3& plane, double t0) {
  return plane_contact(r3_view(c), plane, t0);
}

namespace {

// Newton polish of a transverse root of h.
double polish_root(const Curve3& c, const PlaneR3& plane, double t) {
  for (int it = 0; it < 60; ++it) {
    Jet h = height_jet(c, plane, t, 2);
    double step = h[0] / h[1];
    t -= step;
    if (std::fabs(step) < 1e-15) break;
  }
  return wrap_unit(t);
}

// Newton polish of an extremum of h (candidate tangential root).
double polish_extremum(const Curve3& c, const PlaneR3& plane, double t) {
  for (int it = 0; it < 60; ++it) {
    Jet h = height_jet(c, plane, t, 3);
    double d1 = h.deriv(1), d2 = h.deriv(2);
    if (std::fabs(d2) < 1e-14) break;
    double step = d1 / d2;
    t -= step;
    if (std::fabs(step) < 1e-15) break;
  }
  return wrap_unit(t);
}

std::vector<double> find_plane_roots(const Curve3& c, const PlaneR3& plane, int samples) {
  std::vector<double> h(samples);
  double hmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    h[i] = height_jet(c, plane, static_cast<double>(i) / samples, 1)[0];
    hmax = std::max(hmax, std::fabs(h[i]));
  }
  if (hmax < 1e-12) throw std::domain_error("curve lies in the plane");

  std::vector<double> roots;
  auto add_root = [&](double t) {
    for (double r : roots)
      if (circle_dist(r, t) < 1e-9) return;
    roots.push_back(t);
  };

  for (int i = 0; i < samples; ++i) {
    int j = (i + 1) % samples;
    double ti = static_cast<double>(i) / samples;
    double tj = static_cast<double>(i + 1) / samples;
    if (h[i] == 0.0) {
      add_root(ti);
    } else if (h[i] * h[j] < 0.0) {
      // Bisection, then Newton.
      double a = ti, b = tj, ha = h[i];
      for (int it = 0; it < 50; ++it) {
        double m = 0.5 * (a + b);
        double hm = height_jet(c, plane, m, 1)[0];
        if (ha * hm <= 0.0)
          b = m;
        else
          a = m, ha = hm;
      }
      add_root(polish_root(c, plane, 0.5 * (a + b)));
    }
    // Local minimum of |h| below a loose threshold: tangential candidate.
    int k = (i + samples - 1) % samples;
    if (std::fabs(h[i]) <= std::fabs(h[k]) && std::fabs(h[i]) <= std::fabs(h[j]) &&
        std::fabs(h[i]) < 1e-5 * hmax) {
      double t = polish_extremum(c, plane, ti);
      if (std::fabs(height_jet(c, plane, t, 1)[0]) < 1e-10) add_root(t);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<ContactReport> plane_intersections(const Curve3& c, const PlaneR3& plane,
                                               int samples) {
  auto roots = find_plane_roots(c, plane, samples);
  auto check = find_plane_roots(c, plane, 2 * samples);
  if (roots.size() != check.size())
    throw std::domain_error("plane_intersections: root count unstable under refinement");

  std::vector<ContactReport> out;
  out.reserve(roots.size());
  for (double t : roots) {
    auto rep = plane_contact(c, plane, t);
    if (!rep) throw std::domain_error("plane_intersections: contact order above cap");
    out.push_back(*rep);
  }
  return out;
}

std::vector<ContactReport> plane_intersections(const KnotCurve& c, const PlaneR3& plane,
                                               int samples) {
  return plane_intersections(r3_view(c), plane, samples);
}

}  // namespace prismknot
