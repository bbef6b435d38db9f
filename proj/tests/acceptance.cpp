// Acceptance suite: one criterion per run line, executed at the stated
// tolerances. Exit code is the number of failed criteria.

#include "oracles.hpp"
#include "prismknot/gauss.hpp"
#include "prismknot/json_io.hpp"
#include "prismknot/solve.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

using namespace prismknot;

namespace {

int failures = 0;

void criterion(int number, const char* name, const std::function<bool()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%2d] %s  %s (%.1f s)%s%s\n", number, ok ? "PASS" : "FAIL", name, secs,
              error.empty() ? "" : " error: ", error.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = gauss(rng);
  Eigen::HouseholderQR<Mat3> qr(m);
  Mat3 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Hexagon random_hexagon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1, 1);
  for (;;) {
    Hexagon h;
    for (auto& v : h.v) v = Vec3(uni(rng), uni(rng), uni(rng));
    double diam = 0.0, gap = 1e300;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        diam = std::max(diam, (h.v[i] - h.v[j]).norm());
        gap = std::min(gap, (h.v[i] - h.v[j]).norm());
      }
    if (gap > 1e-3 * diam) return h;
  }
}

bool is_trefoil_kind(HexKind k) {
  return k == HexKind::TrefoilLeft || k == HexKind::TrefoilRight;
}

HexKind mirror_kind(HexKind k) {
  if (k == HexKind::TrefoilLeft) return HexKind::TrefoilRight;
  if (k == HexKind::TrefoilRight) return HexKind::TrefoilLeft;
  return k;
}

}  // namespace

int main() {
  std::printf("prismknot acceptance suite\n");

  const KnotCurve paper = preset("paper-trefoil-s3");
  const KnotCurve circle = preset("great-circle-s3");
  const KnotCurve fig8 = preset("figure-eight-r3");
  const KnotCurve tref3 = preset("trefoil-r3");

  criterion(1, "symmetric solution reproduction", [&] {
    auto t0 = std::chrono::steady_clock::now();
    auto sols = find_inscribed_prisms(s3_view(paper), 0.0);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) return false;
    std::array<double, 6> expected;
    for (int i = 0; i < 6; ++i) expected[i] = i / 6.0;
    for (const auto& sol : sols) {
      if (torus_dist(sol.t, expected) >= 1e-8) continue;
      Vec5 axis;
      axis << 0, 0, 1, 0, 0;
      return sol.prism.concurrency.at_infinity() &&
             std::fabs(sol.prism.concurrency.v.dot(axis)) > 1.0 - 1e-8;
    }
    return false;
  });

  criterion(2, "odd solution count at every basepoint", [&] {
    Curve4 view = s3_view(paper);
    for (int b = 0; b < 10; ++b) {
      auto sols = find_inscribed_prisms(view, b / 10.0);
      if (sols.size() % 2 != 1) return false;
    }
    return true;
  });

  criterion(3, "great circle yields no solutions and kappa 0", [&] {
    Curve4 view = s3_view(circle);
    for (int b = 0; b < 10; ++b)
      if (!find_inscribed_prisms(view, b / 10.0).empty()) return false;
    auto rep = kappa(circle, 0.1);
    return rep.kappa == 0 && rep.solutions.empty();
  });

  criterion(4, "kappa magnitude equals a2 (skein-confirmed)", [&] {
    SearchParams params;
    params.grid_per_axis = 16;
    auto rp = kappa(paper, 0.1, params);
    auto rc = kappa(circle, 0.1, params);
    auto rf = kappa(fig8, 0.1, params);
    if (!(rp.all_transverse && rc.all_transverse && rf.all_transverse)) return false;
    if (!(rp.matches_a2 && rc.matches_a2 && rf.matches_a2)) return false;
    if (std::abs(rp.kappa) != 1 || rc.kappa != 0 || std::abs(rf.kappa) != 1) return false;
    // independent skein confirmation of the a2 values
    auto confirm = [&](const KnotCurve& curve, int expected) {
      Curve3 view = curve.ambient == Ambient::R3
                        ? r3_view(curve)
                        : project_view(s3_view(curve), admissible_pole(s3_view(curve)));
      std::mt19937_64 rng(2024);
      std::normal_distribution<double> gauss;
      for (int attempt = 0; attempt < 40; ++attempt) {
        Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
        if (dir.norm() < 1e-6) continue;
        auto d = gauss_diagram(view, dir.normalized());
        if (!d) continue;
        return oracles::a2_by_skein(*d) == expected && a2(*d) == expected;
      }
      return false;
    };
    return confirm(paper, 1) && confirm(circle, 0) && confirm(fig8, -1);
  });

  criterion(5, "separation bound and great-circle thickness", [&] {
    auto gc_tau = thickness(s3_view(circle)).tau;
    if (std::fabs(gc_tau - 1.0) > 1e-9) return false;
    struct Run {
      const KnotCurve* curve;
      double basepoint;
      int grid;
    };
    std::vector<Run> runs;
    for (int b = 0; b < 10; ++b) runs.push_back({&paper, b / 10.0, 12});
    runs.push_back({&fig8, 0.1, 16});
    runs.push_back({&tref3, 0.0, 12});
    runs.push_back({&tref3, 0.1, 12});
    for (const auto& run : runs) {
      Curve4 view = s3_view(*run.curve);
      SearchParams params;
      params.grid_per_axis = run.grid;
      auto sols = find_inscribed_prisms(view, run.basepoint, params);
      auto rep = check_separation(view, sols);
      if (!rep.ok) return false;
    }
    return true;
  });

  criterion(6, "end-to-end certification of trefoil and figure-eight", [&] {
    for (const KnotCurve* curve : {&tref3, &fig8}) {
      auto t0 = std::chrono::steady_clock::now();
      Curve4 view = s3_view(*curve);
      SearchParams params;
      params.grid_per_axis = 16;
      bool certified = false;
      for (double b : {0.1, 0.0, 0.2}) {
        for (const auto& sol : find_inscribed_prisms(view, b, params)) {
          auto cert = certify_trefoil(*curve, sol);
          if (cert.trefoil && cert.trefoil->cls.margin > 1e-6 &&
              is_trefoil_kind(cert.trefoil->cls.kind)) {
            certified = true;
            break;
          }
        }
        if (certified) break;
      }
      double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!certified || secs >= 300.0) return false;
    }
    return true;
  });

  criterion(7, "hexagon classifier property suite (1000 hexagons)", [&] {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(-2, 2);
    std::uniform_int_distribution<int> shift(0, 5);
    for (int trial = 0; trial < 1000; ++trial) {
      Hexagon h = random_hexagon(rng);
      HexClass base = classify_hexagon(h);
      if (base.kind == HexKind::Degenerate) continue;
      Mat3 rot = random_rotation(rng);
      Vec3 offset(gauss(rng), gauss(rng), gauss(rng));
      double scale = std::exp(uni(rng));
      Hexagon moved, cyc, rev, refl;
      int s = shift(rng);
      for (int i = 0; i < 6; ++i) {
        moved.v[i] = scale * (rot * h.v[i]) + offset;
        cyc.v[i] = h.v[(i + s) % 6];
        rev.v[i] = h.v[(6 - i) % 6];
        refl.v[i] = Vec3(-h.v[i][0], h.v[i][1], h.v[i][2]);
      }
      if (classify_hexagon(moved).kind != base.kind) return false;
      if (classify_hexagon(cyc).kind != base.kind) return false;
      if (classify_hexagon(rev).kind != base.kind) return false;
      if (classify_hexagon(refl).kind != mirror_kind(base.kind)) return false;
    }
    // canonical prisms
    auto prism = [](double twist_deg) {
      Hexagon h;
      auto at = [&](double deg, double z) {
        double a = deg * kTau / 360.0;
        return Vec3(std::cos(a), std::sin(a), z);
      };
      h.v = {at(0, 0),          at(120 + twist_deg, 1), at(240, 0),
             at(0 + twist_deg, 1), at(120, 0),          at(240 + twist_deg, 1)};
      return h;
    };
    if (classify_hexagon(prism(0.0)).kind != HexKind::Degenerate) return false;
    return is_trefoil_kind(classify_hexagon(prism(15.0)).kind);
  });

  criterion(8, "cap rotation produces pole-independent stereographic trefoils", [&] {
    // straight prism inscribed in the unit sphere, lifted to S^3
    const double r = std::sqrt(3.0) / 2.0, z = 0.5, third = kTau / 3.0;
    auto vertex = [&](double angle, double height) {
      return lift_to_s3(Vec3(r * std::cos(angle), r * std::sin(angle), height));
    };
    std::array<Vec4, 6> pts{vertex(0, -z),     vertex(third, z),  vertex(2 * third, -z),
                            vertex(0, z),      vertex(third, -z), vertex(2 * third, z)};
    auto made = make_prism_config(pts);
    if (!std::holds_alternative<PrismConfig>(made)) return false;
    const auto& config = std::get<PrismConfig>(made);

    std::mt19937_64 rng(777);
    std::normal_distribution<double> gauss;
    for (double eps : {0.05, 0.1, 0.2}) {
      auto rotated = cap_rotation(config, eps);
      if (is_stereographic_trefoil(rotated).kind != StereoResult::Yes) return false;
      // pole independence up to mirror over 20 random admissible poles
      Vec4 mean = Vec4::Zero();
      for (const auto& x : rotated) mean += x / 6.0;
      Eigen::Matrix<double, 6, 4> centered;
      for (int i = 0; i < 6; ++i) centered.row(i) = (rotated[i] - mean).transpose();
      Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(centered, Eigen::ComputeFullV);
      Vec4 normal = svd.matrixV().col(3);
      double c = normal.dot(mean);
      int checked = 0;
      while (checked < 20) {
        Vec4 pole = Vec4(gauss(rng), gauss(rng), gauss(rng), gauss(rng)).normalized();
        if (std::fabs(normal.dot(pole) - c) < 0.1) continue;  // too close to the 2-sphere
        bool near_point = false;
        for (const auto& x : rotated)
          if ((x - pole).norm() < 0.15) near_point = true;
        if (near_point) continue;
        Mat4 align = rotation_aligning(pole, Vec4(0, 0, 0, 1));
        Hexagon hex;
        for (int i = 0; i < 6; ++i) hex.v[i] = project_from_s3(align * rotated[i]);
        if (!is_trefoil_kind(classify_hexagon(hex).kind)) return false;
        ++checked;
      }
    }
    return true;
  });

  criterion(9, "angle inequalities on random data", [&] {
    std::mt19937_64 rng(31337);
    std::normal_distribution<double> gauss;
    // triangle bound: theta <= (h(a)+h(b)+h(c))/r on 1000 pairs
    int checked = 0;
    while (checked < 1000) {
      Vec3 n(gauss(rng), gauss(rng), gauss(rng));
      if (n.norm() < 1e-6) continue;
      PlaneR3 plane = make_plane(n, gauss(rng));
      Vec3 a(gauss(rng), gauss(rng), gauss(rng));
      Vec3 b(gauss(rng), gauss(rng), gauss(rng));
      Vec3 c(gauss(rng), gauss(rng), gauss(rng));
      double r;
      try {
        r = incircle_radius(a, b, c);
      } catch (const std::invalid_argument&) {
        continue;
      }
      Vec3 tn = (b - a).cross(c - a);
      if (tn.norm() < 1e-9) continue;
      double theta = plane_angle(plane.normal, tn);
      auto h = [&](const Vec3& x) { return std::fabs(plane.normal.dot(x) - plane.offset); };
      if (theta > (h(a) + h(b) + h(c)) / r + 1e-12) return false;
      ++checked;
    }

    // tangential contact bound on 20 random curves
    std::uniform_real_distribution<double> uni(0, 1);
    int curves_checked = 0;
    while (curves_checked < 20) {
      TrigCurve poly;
      poly.dim = 3;
      poly.coeffs.assign(3, std::vector<std::array<double, 2>>(4, {0.0, 0.0}));
      for (int c = 0; c < 3; ++c)
        for (int k = 1; k <= 3; ++k)
          poly.coeffs[c][k] = {0.6 * gauss(rng) / k, 0.6 * gauss(rng) / k};
      KnotCurve curve;
      try {
        curve = make_knot_curve(Ambient::R3, poly);
      } catch (const std::invalid_argument&) {
        continue;
      }
      Curve3 view = r3_view(curve);
      double t0 = uni(rng);
      Vec3 tangent = view.d1(t0).normalized();
      auto [u, v] = plane_frame(tangent);
      Vec3 normal = (u + 0.41 * v).normalized();
      PlaneR3 plane = make_plane(normal, normal.dot(view.pos(t0)));
      std::vector<ContactReport> contacts;
      try {
        contacts = plane_intersections(curve, plane);
      } catch (const std::domain_error&) {
        continue;  // near-degenerate plane; take another curve
      }
      bool any_tangential = false;
      for (const auto& rep : contacts) {
        if (rep.contact_order < 2) continue;
        any_tangential = true;
        if (!oracles::tangential_bound_holds(view, plane, rep)) return false;
      }
      if (any_tangential) ++curves_checked;
    }
    return true;
  });

  criterion(10, "alternating quadrisecants", [&] {
    auto quads = find_quadrisecants(r3_view(tref3), 12);
    bool any = false;
    for (const auto& q : quads) {
      if (q.residual >= 1e-8) return false;
      if (q.alternating) any = true;
    }
    if (!any) return false;
    TrigCurve ellipse;
    ellipse.dim = 3;
    ellipse.coeffs = {{{0, 0}, {2, 0}}, {{0, 0}, {0, 1}}, {{0, 0}, {0, 0}}};
    KnotCurve flat = make_knot_curve(Ambient::R3, ellipse);
    return find_quadrisecants(r3_view(flat), 12).empty();
  });

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
