#include "prismknot/gauss.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace prismknot {

namespace {

constexpr double kGenericTol = 1e-7;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Projected {
  Vec2 q;
  double z;
};

}  // namespace

std::optional<GaussDiagram> gauss_diagram(const Curve3& c, const Vec3& direction, int samples) {
  if (samples < (1 << 12)) throw std::invalid_argument("gauss_diagram needs samples >= 4096");
  Vec3 dir = direction.normalized();
  auto [e1, e2] = plane_frame(dir);
  auto project = [&](double t) {
    Vec3 x = c.pos(t);
    return Projected{Vec2(e1.dot(x), e2.dot(x)), dir.dot(x)};
  };

  std::vector<Projected> s(samples);
  double diam = 0.0;
  for (int i = 0; i < samples; ++i) s[i] = project(static_cast<double>(i) / samples);
  for (int i = 0; i < samples; i += samples / 64)
    for (int j = 0; j < samples; j += samples / 64)
      diam = std::max(diam, (s[i].q - s[j].q).norm());
  if (diam <= 0.0) return std::nullopt;

  // Coarse pass: planar intersections of non-adjacent sample segments.
  std::vector<std::pair<double, double>> seeds;
  for (int i = 0; i < samples; ++i) {
    const Vec2& a = s[i].q;
    Vec2 da = s[(i + 1) % samples].q - a;
    double alo = std::min(a.x(), a.x() + da.x()), ahi = std::max(a.x(), a.x() + da.x());
    for (int j = i + 2; j < samples; ++j) {
      if (i == 0 && j == samples - 1) continue;
      const Vec2& b = s[j].q;
      Vec2 db = s[(j + 1) % samples].q - b;
      if (std::max(b.x(), b.x() + db.x()) < alo || std::min(b.x(), b.x() + db.x()) > ahi)
        continue;
      double det = cross2(da, db);
      if (det == 0.0) continue;
      Vec2 rhs = b - a;
      double u = cross2(rhs, db) / det;
      double v = cross2(rhs, da) / det;
      if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) continue;
      seeds.emplace_back((i + u) / samples, (j + v) / samples);
    }
  }

  // Newton refinement of each candidate pair on the exact curve.
  std::vector<std::pair<double, double>> found;
  for (auto [ts, tt] : seeds) {
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      Vec3 xs = c.pos(ts), xt = c.pos(tt);
      Vec2 f(e1.dot(xs - xt), e2.dot(xs - xt));
      if (f.norm() < 1e-13 * diam) {
        ok = true;
        break;
      }
      Vec3 ds = c.d1(ts), dt = c.d1(tt);
      Mat2 jac;
      jac << e1.dot(ds), -e1.dot(dt), e2.dot(ds), -e2.dot(dt);
      double det = jac.determinant();
      if (std::fabs(det) < 1e-14) break;
      Vec2 step = jac.inverse() * f;
      ts = wrap_unit(ts - step[0]);
      tt = wrap_unit(tt - step[1]);
    }
    if (!ok) continue;
    if (circle_dist(ts, tt) < kGenericTol) return std::nullopt;  // cusp-like
    double lo = std::min(ts, tt), hi = std::max(ts, tt);
    bool dup = false;
    for (auto& [a, b] : found)
      if (circle_dist(a, lo) < 1e-6 && circle_dist(b, hi) < 1e-6) dup = true;
    if (!dup) found.emplace_back(lo, hi);
  }

  // Genericity: depth separation, transversality, and no near-triple points.
  struct Pass {
    double t;
    int id;
    bool over;
    int sign;
  };
  std::vector<Pass> passes;
  std::vector<Vec2> positions;
  for (std::size_t k = 0; k < found.size(); ++k) {
    auto [ta, tb] = found[k];
    Projected pa = project(ta), pb = project(tb);
    if (std::fabs(pa.z - pb.z) < kGenericTol * diam) return std::nullopt;
    bool a_over = pa.z > pb.z;
    double t_over = a_over ? ta : tb, t_under = a_over ? tb : ta;
    Vec3 du3 = c.d1(t_over), dv3 = c.d1(t_under);
    Vec2 du(e1.dot(du3), e2.dot(du3)), dv(e1.dot(dv3), e2.dot(dv3));
    double transverse = std::fabs(cross2(du, dv)) / (du.norm() * dv.norm());
    if (transverse < kGenericTol) return std::nullopt;
    int sign = cross2(du, dv) > 0 ? 1 : -1;
    passes.push_back({t_over, static_cast<int>(k), true, sign});
    passes.push_back({t_under, static_cast<int>(k), false, sign});
    positions.push_back(pa.q);
  }
  for (std::size_t a = 0; a < positions.size(); ++a)
    for (std::size_t b = a + 1; b < positions.size(); ++b)
      if ((positions[a] - positions[b]).norm() < kGenericTol * diam)
        return std::nullopt;  // near-triple point

  std::sort(passes.begin(), passes.end(),
            [](const Pass& a, const Pass& b) { return a.t < b.t; });
  // Renumber ids by first appearance from the basepoint.
  std::vector<int> relabel(found.size(), -1);
  int next = 1;
  for (const auto& p : passes)
    if (relabel[p.id] < 0) relabel[p.id] = next++;

  GaussDiagram d;
  for (const auto& p : passes) d.entries.push_back({p.t, relabel[p.id], p.over, p.sign});
  return d;
}

int a2(const GaussDiagram& d) {
  // Polyak-Viro pattern for the quadratic Conway coefficient: interleaved
  // pairs met from the basepoint as (under of c1, over of c2), weighted
  // by the product of signs. Verified against the skein oracle in tests.
  const auto& e = d.entries;
  int n_cross = 0;
  for (const auto& en : e) n_cross = std::max(n_cross, en.id);
  std::vector<int> first(n_cross + 1, -1), second(n_cross + 1, -1);
  for (int p = 0; p < static_cast<int>(e.size()); ++p) {
    if (first[e[p].id] < 0)
      first[e[p].id] = p;
    else
      second[e[p].id] = p;
  }
  int total = 0;
  for (int c1 = 1; c1 <= n_cross; ++c1)
    for (int c2 = 1; c2 <= n_cross; ++c2) {
      if (c1 == c2) continue;
      bool interleaved = first[c1] < first[c2] && first[c2] < second[c1] &&
                         second[c1] < second[c2];
      if (!interleaved) continue;
      if (e[first[c1]].over || !e[first[c2]].over) continue;
      total += e[first[c1]].sign * e[first[c2]].sign;
    }
  return total;
}

int a2_of_curve(const Curve3& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::optional<int> value;
  int generic = 0;
  for (int attempt = 0; attempt < 50 && generic < 5; ++attempt) {
    Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
    if (dir.norm() < 1e-6) continue;
    auto d = gauss_diagram(c, dir.normalized());
    if (!d) continue;
    int v = a2(*d);
    if (value && *value != v)
      throw std::runtime_error("a2_of_curve: generic directions disagree");
    value = v;
    ++generic;
  }
  if (generic < 5) throw std::runtime_error("a2_of_curve: too few generic directions");
  return *value;
}

int a2_of_curve(const KnotCurve& c, std::uint64_t seed) {
  if (c.ambient == Ambient::R3) return a2_of_curve(r3_view(c), seed);
  Curve4 view = s3_view(c);
  return a2_of_curve(project_view(view, admissible_pole(view)), seed);
}

std::string canonical_line(const GaussDiagram& d) {
  std::ostringstream os;
  bool first = true;
  for (const auto& e : d.entries) {
    if (!first) os << ' ';
    os << (e.over ? 'O' : 'U') << e.id << (e.sign > 0 ? '+' : '-');
    first = false;
  }
  return os.str();
}

KnotDiagram to_knot_diagram(const GaussDiagram& d) {
  int n = 0;
  for (const auto& e : d.entries) n = std::max(n, e.id);
  KnotDiagram kd;
  kd.passages = static_cast<int>(d.entries.size());
  kd.crossings.resize(n);
  for (int pos = 0; pos < kd.passages; ++pos) {
    const auto& e = d.entries[pos];
    auto& c = kd.crossings[e.id - 1];
    if (e.over)
      c.over_pos = pos;
    else
      c.under_pos = pos;
    c.sign = e.sign;
  }
  return kd;
}

}  // namespace prismknot
