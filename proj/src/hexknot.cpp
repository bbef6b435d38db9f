#include "prismknot/hexknot.hpp"

#include "prismknot/curve.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace prismknot {

// ---------------------------------------------------------------------------
// Laurent polynomials

LaurentPoly LaurentPoly::monomial(long long coeff, int exponent) {
  LaurentPoly p;
  if (coeff != 0) {
    p.lo_ = exponent;
    p.coeff_ = {coeff};
  }
  return p;
}

void LaurentPoly::trim() {
  std::size_t head = 0;
  while (head < coeff_.size() && coeff_[head] == 0) ++head;
  std::size_t tail = coeff_.size();
  while (tail > head && coeff_[tail - 1] == 0) --tail;
  coeff_ = std::vector<long long>(coeff_.begin() + head, coeff_.begin() + tail);
  lo_ += static_cast<int>(head);
  if (coeff_.empty()) lo_ = 0;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (coeff_.empty()) return o;
  if (o.coeff_.empty()) return *this;
  int lo = std::min(lo_, o.lo_);
  int hi = std::max(lo_ + static_cast<int>(coeff_.size()), o.lo_ + static_cast<int>(o.coeff_.size()));
  LaurentPoly r;
  r.lo_ = lo;
  r.coeff_.assign(hi - lo, 0);
  for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[lo_ - lo + i] += coeff_[i];
  for (std::size_t i = 0; i < o.coeff_.size(); ++i) r.coeff_[o.lo_ - lo + i] += o.coeff_[i];
  r.trim();
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  if (coeff_.empty() || o.coeff_.empty()) return LaurentPoly();
  LaurentPoly r;
  r.lo_ = lo_ + o.lo_;
  r.coeff_.assign(coeff_.size() + o.coeff_.size() - 1, 0);
  for (std::size_t i = 0; i < coeff_.size(); ++i)
    for (std::size_t j = 0; j < o.coeff_.size(); ++j) r.coeff_[i + j] += coeff_[i] * o.coeff_[j];
  r.trim();
  return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return lo_ == o.lo_ && coeff_ == o.coeff_;
}

LaurentPoly LaurentPoly::mirrored() const {
  LaurentPoly r;
  if (coeff_.empty()) return r;
  r.coeff_.assign(coeff_.rbegin(), coeff_.rend());
  r.lo_ = -(lo_ + static_cast<int>(coeff_.size()) - 1);
  return r;
}

long long LaurentPoly::coeff(int exponent) const {
  int i = exponent - lo_;
  if (i < 0 || i >= static_cast<int>(coeff_.size())) return 0;
  return coeff_[i];
}

std::string LaurentPoly::to_string() const {
  if (coeff_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeff_.size(); ++i) {
    long long c = coeff_[i];
    if (c == 0) continue;
    int e = lo_ + static_cast<int>(i);
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    long long a = std::llabs(c);
    if (a != 1 || e == 0) os << a;
    if (e != 0) {
      if (a != 1) os << "*";
      os << "A^" << e;
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Bracket state sum

namespace {

struct UnionFind {
  std::array<int, 40> parent;
  void init(int n) { std::iota(parent.begin(), parent.begin() + n, 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

LaurentPoly kauffman_bracket(const KnotDiagram& d) {
  const int n = static_cast<int>(d.crossings.size());
  if (n == 0) return LaurentPoly::monomial(1, 0);
  if (n > 18) throw std::invalid_argument("bracket state sum limited to 18 crossings");

  const LaurentPoly delta =
      LaurentPoly::monomial(-1, 2) + LaurentPoly::monomial(-1, -2);
  std::vector<LaurentPoly> delta_pow(n + 1);
  delta_pow[0] = LaurentPoly::monomial(1, 0);
  for (int k = 1; k <= n; ++k) delta_pow[k] = delta_pow[k - 1] * delta;

  // Half-edges: in(p) = 2p, out(p) = 2p+1; arcs join out(p) to in(p+1).
  LaurentPoly total;
  UnionFind uf;
  const int ends = 2 * d.passages;
  for (unsigned long state = 0; state < (1ul << n); ++state) {
    uf.init(ends);
    int components = ends;
    for (int p = 0; p < d.passages; ++p)
      if (uf.unite(2 * p + 1, 2 * ((p + 1) % d.passages))) --components;
    int a_count = 0;
    for (int c = 0; c < n; ++c) {
      const auto& cr = d.crossings[c];
      bool choose_a = (state >> c) & 1u;
      if (choose_a) ++a_count;
      // A-smoothing is the orientation-coherent one iff the crossing is
      // positive (over-strand rotated CCW onto the under-strand sweeps
      // the regions the A-channel joins).
      bool oriented = choose_a == (cr.sign > 0);
      if (oriented) {
        if (uf.unite(2 * cr.over_pos, 2 * cr.under_pos + 1)) --components;
        if (uf.unite(2 * cr.under_pos, 2 * cr.over_pos + 1)) --components;
      } else {
        if (uf.unite(2 * cr.over_pos, 2 * cr.under_pos)) --components;
        if (uf.unite(2 * cr.over_pos + 1, 2 * cr.under_pos + 1)) --components;
      }
    }
    int loops = components;
    total = total + LaurentPoly::monomial(1, 2 * a_count - n) * delta_pow[loops - 1];
  }
  return total;
}

LaurentPoly kauffman_f(const KnotDiagram& d) {
  int w = 0;
  for (const auto& c : d.crossings) w += c.sign;
  LaurentPoly norm = LaurentPoly::monomial((w % 2 == 0) ? 1 : -1, -3 * w);
  return norm * kauffman_bracket(d);
}

const LaurentPoly& f_unknot() {
  static const LaurentPoly p = LaurentPoly::monomial(1, 0);
  return p;
}

const LaurentPoly& f_trefoil_right() {
  static const LaurentPoly p = [] {
    // Standard alternating diagram, Gauss sequence O1 U2 O3 U1 O2 U3,
    // all crossings positive.
    KnotDiagram d;
    d.passages = 6;
    d.crossings = {{0, 3, 1}, {4, 1, 1}, {2, 5, 1}};
    return kauffman_f(d);
  }();
  return p;
}

const LaurentPoly& f_trefoil_left() {
  static const LaurentPoly p = f_trefoil_right().mirrored();
  return p;
}

// ---------------------------------------------------------------------------
// Hexagon projection

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

constexpr double kGenericTol = 1e-9;

}  // namespace

std::optional<CrossingList> project_hexagon(const Hexagon& hex, const Vec3& direction) {
  Vec3 dir = direction.normalized();
  auto [e1, e2] = plane_frame(dir);

  double diam = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) diam = std::max(diam, (hex.v[i] - hex.v[j]).norm());
  if (diam <= 0.0) return std::nullopt;

  std::array<Vec2, 6> p;
  std::array<double, 6> depth;
  for (int i = 0; i < 6; ++i) {
    p[i] = Vec2(e1.dot(hex.v[i]), e2.dot(hex.v[i]));
    depth[i] = dir.dot(hex.v[i]);
  }

  std::array<Vec2, 6> d;
  std::array<double, 6> len;
  for (int i = 0; i < 6; ++i) {
    d[i] = p[(i + 1) % 6] - p[i];
    len[i] = d[i].norm();
    if (len[i] < kGenericTol * diam) return std::nullopt;  // segment seen end-on
  }
  // Fold-back at a vertex makes adjacent projected segments overlap.
  for (int i = 0; i < 6; ++i) {
    int j = (i + 1) % 6;
    double c = cross2(d[i], d[j]) / (len[i] * len[j]);
    if (std::fabs(c) < kGenericTol && d[i].dot(d[j]) < 0) return std::nullopt;
  }

  CrossingList out;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 2; j < 6; ++j) {
      if (i == 0 && j == 5) continue;  // adjacent around the cycle
      double det = cross2(d[i], d[j]);
      double rel_det = std::fabs(det) / (len[i] * len[j]);
      if (rel_det < kGenericTol) {
        // Near-parallel: only safe if the segments are well separated.
        double sep = 1e300;
        for (double ti : {0.0, 0.5, 1.0})
          for (double tj : {0.0, 0.5, 1.0})
            sep = std::min(sep, ((p[i] + ti * d[i]) - (p[j] + tj * d[j])).norm());
        if (sep < 1e-6 * diam) return std::nullopt;
        continue;
      }
      Vec2 rhs = p[j] - p[i];
      double ti = cross2(rhs, d[j]) / det;
      double tj = cross2(rhs, d[i]) / det;
      if (ti < -kGenericTol || ti > 1 + kGenericTol || tj < -kGenericTol || tj > 1 + kGenericTol)
        continue;  // lines meet outside both segments
      double end_margin = std::min(std::min(ti, 1 - ti), std::min(tj, 1 - tj));
      if (end_margin < kGenericTol) return std::nullopt;  // hits a vertex
      double zi = depth[i] + ti * (depth[(i + 1) % 6] - depth[i]);
      double zj = depth[j] + tj * (depth[(j + 1) % 6] - depth[j]);
      double rel_dz = std::fabs(zi - zj) / diam;
      if (rel_dz < kGenericTol) return std::nullopt;  // segments touch in 3D

      Crossing c;
      bool i_over = zi > zj;  // larger depth along `dir` is closer to the viewer
      c.seg_over = i_over ? i : j;
      c.seg_under = i_over ? j : i;
      c.u_over = i_over ? ti : tj;
      c.u_under = i_over ? tj : ti;
      const Vec2& du = i_over ? d[i] : d[j];
      const Vec2& dv = i_over ? d[j] : d[i];
      c.sign = cross2(du, dv) > 0 ? 1 : -1;
      out.crossings.push_back(c);
      out.margin = std::min({out.margin, rel_det, end_margin, rel_dz});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(HexKind k) {
  switch (k) {
    case HexKind::Unknot: return "Unknot";
    case HexKind::TrefoilLeft: return "TrefoilLeft";
    case HexKind::TrefoilRight: return "TrefoilRight";
    case HexKind::Degenerate: return "Degenerate";
  }
  return "?";
}

namespace {

KnotDiagram diagram_from_crossings(const CrossingList& cl) {
  // Walk the hexagon; passages are crossing traversals ordered along it.
  struct Passage {
    int seg;
    double u;
    int crossing;
    bool over;
  };
  std::vector<Passage> passages;
  for (std::size_t c = 0; c < cl.crossings.size(); ++c) {
    passages.push_back({cl.crossings[c].seg_over, cl.crossings[c].u_over, static_cast<int>(c), true});
    passages.push_back({cl.crossings[c].seg_under, cl.crossings[c].u_under, static_cast<int>(c), false});
  }
  std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
    return a.seg != b.seg ? a.seg < b.seg : a.u < b.u;
  });
  KnotDiagram d;
  d.passages = static_cast<int>(passages.size());
  d.crossings.resize(cl.crossings.size());
  for (int pos = 0; pos < d.passages; ++pos) {
    const Passage& p = passages[pos];
    if (p.over)
      d.crossings[p.crossing].over_pos = pos;
    else
      d.crossings[p.crossing].under_pos = pos;
    d.crossings[p.crossing].sign = cl.crossings[p.crossing].sign;
  }
  return d;
}

std::optional<HexKind> kind_from_f(const LaurentPoly& f) {
  if (f == f_unknot()) return HexKind::Unknot;
  if (f == f_trefoil_right()) return HexKind::TrefoilRight;
  if (f == f_trefoil_left()) return HexKind::TrefoilLeft;
  return std::nullopt;  // inconsistent extraction; caller treats as non-generic
}

}  // namespace

HexClass classify_hexagon(const Hexagon& hex) {
  double diam = 0.0, min_gap = 1e300;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      double g = (hex.v[i] - hex.v[j]).norm();
      diam = std::max(diam, g);
      min_gap = std::min(min_gap, g);
    }
  if (diam <= 0.0 || min_gap <= 1e-9 * diam) return HexClass{HexKind::Degenerate, 0.0};

  static const std::vector<Vec3> dirs = fibonacci_sphere(32);
  std::optional<HexKind> agreed;
  double best_margin = 0.0;
  for (const Vec3& dir : dirs) {
    auto cl = project_hexagon(hex, dir);
    if (!cl) continue;
    auto kind = kind_from_f(kauffman_f(diagram_from_crossings(*cl)));
    if (!kind) continue;
    if (agreed && *agreed != *kind) return HexClass{HexKind::Degenerate, 0.0};
    agreed = kind;
    best_margin = std::max(best_margin, cl->margin);
  }
  if (!agreed) return HexClass{HexKind::Degenerate, 0.0};
  return HexClass{*agreed, best_margin};
}

StereoResult is_stereographic_trefoil(const std::array<Vec4, 6>& points) {
  Eigen::Matrix<double, 6, 5> hom;
  for (int i = 0; i < 6; ++i) {
    hom.row(i).head<4>() = points[i].transpose();
    hom(i, 4) = 1.0;
    hom.row(i).normalize();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 5>> hsvd(hom);
  if (hsvd.singularValues()[4] > 1e-8)
    throw std::invalid_argument("points are not co-spherical in S^3");

  Vec4 mean = Vec4::Zero();
  for (const auto& x : points) mean += x / 6.0;
  Eigen::Matrix<double, 6, 4> centered;
  for (int i = 0; i < 6; ++i) centered.row(i) = (points[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(centered, Eigen::ComputeFullV);
  if (svd.singularValues()[2] <= 1e-8) return StereoResult{StereoResult::Coplanar, {}};

  // The affine span is a hyperplane <n,y> = c; its two S^3 poles are +-n.
  Vec4 n = svd.matrixV().col(3);
  double c = n.dot(mean);
  if (std::fabs(c) > 1.0 - 1e-9)
    throw std::invalid_argument("degenerate 2-sphere through the points");
  Vec4 pole = (c <= 0.0) ? n : Vec4(-n);

  Mat4 align = rotation_aligning(pole, Vec4(0, 0, 0, 1));
  Hexagon hex;
  for (int i = 0; i < 6; ++i) hex.v[i] = project_from_s3(align * points[i]);
  HexClass cls = classify_hexagon(hex);
  if (cls.kind == HexKind::TrefoilLeft || cls.kind == HexKind::TrefoilRight)
    return StereoResult{StereoResult::Yes, cls};
  return StereoResult{StereoResult::No, cls};
}

}  // namespace prismknot
