#include "prismknot/solve.hpp"

#include "prismknot/gauss.hpp"
#include "optim.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

namespace prismknot {

namespace {

using detail::complement_basis;
using detail::homogenize;
using detail::span_frame;

void parallel_for(int n, const std::function<void(int)>& body) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int chunks = std::min<int>(n, static_cast<int>(hw));
  if (chunks <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> futures;
  futures.reserve(chunks);
  for (int c = 0; c < chunks; ++c)
    futures.push_back(std::async(std::launch::async, [&] {
      int i;
      while ((i = next.fetch_add(1)) < n) body(i);
    }));
  for (auto& f : futures) f.get();
}

// ---------------------------------------------------------------------------
// Concurrency residual as a square 6x6 system in (t2..t6, phi).

struct PrismResidual {
  const Curve4* curve;
  double t1;
  Vec5 h1;

  Vec6 operator()(const Vec6& u) const {
    std::array<Vec5, 6> h;
    h[0] = h1;
    for (int i = 1; i < 6; ++i) h[i] = homogenize(curve->pos(u[i - 1]));
    try {
      auto f1 = span_frame(h[0], h[3]);
      auto f2 = span_frame(h[1], h[4]);
      auto f3 = span_frame(h[2], h[5]);
      Vec5 p = std::cos(u[5]) * f1.col(0) + std::sin(u[5]) * f1.col(1);
      Vec6 r;
      r.head<3>() = complement_basis(f2).transpose() * p;
      r.tail<3>() = complement_basis(f3).transpose() * p;
      return r;
    } catch (const std::invalid_argument&) {
      // coincident chord endpoints; drive the line search away
      return Vec6::Constant(1e6);
    }
  }
};

template <typename F>
Mat6 fd_jacobian(const F& f, const Vec6& u) {
  constexpr double h = 1e-7;
  Mat6 jac;
  for (int k = 0; k < 6; ++k) {
    Vec6 up = u, um = u;
    up[k] += h;
    um[k] -= h;
    jac.col(k) = (f(up) - f(um)) / (2.0 * h);
  }
  return jac;
}

struct NewtonResult {
  Vec6 u;
  double rnorm;
  Mat6 jac;
};

template <typename F>
std::optional<NewtonResult> newton_refine(const F& f, Vec6 u, double tol_converge,
                                          double tol_accept, int max_iters) {
  Vec6 r = f(u);
  double rn = r.norm();
  if (!std::isfinite(rn)) return std::nullopt;
  for (int it = 0; it < max_iters && rn >= tol_converge; ++it) {
    Mat6 jac = fd_jacobian(f, u);
    Vec6 d = Eigen::PartialPivLU<Mat6>(jac).solve(-r);
    if (!d.allFinite()) return std::nullopt;
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      Vec6 u2 = u + alpha * d;
      Vec6 r2 = f(u2);
      double rn2 = r2.norm();
      if (std::isfinite(rn2) && rn2 < (1.0 - 1e-4 * alpha) * rn) {
        u = u2;
        r = r2;
        rn = rn2;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  if (rn > tol_accept) return std::nullopt;
  return NewtonResult{u, rn, fd_jacobian(f, u)};
}

// Integer compositions of `total` into `parts` positive summands.
void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    if (total >= 1) {
      cur.push_back(total);
      emit(cur);
      cur.pop_back();
    }
    return;
  }
  for (int k = 1; k + (parts - 1) <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, emit);
    cur.pop_back();
  }
}

double phi_seed_from_points(const std::array<Vec4, 6>& pts) {
  ConcurrencyResidual res = concurrency_residual(pts);
  Vec5 h0 = homogenize(pts[0]), h3 = homogenize(pts[3]);
  auto f1 = span_frame(h0, h3);
  double c = f1.col(0).dot(res.p_hat.v);
  double s = f1.col(1).dot(res.p_hat.v);
  return std::atan2(s, c);
}

bool strictly_ordered_gaps(const std::array<double, 5>& gaps) {
  double prev = 0.0;
  for (double g : gaps) {
    if (g < prev + 1e-7) return false;
    prev = g;
  }
  return prev < 1.0 - 1e-7;
}

}  // namespace

std::vector<ConfigTuple> find_inscribed_prisms(const Curve4& curve, double basepoint,
                                               const SearchParams& params) {
  if (params.grid_per_axis < 4) throw std::invalid_argument("grid_per_axis must be >= 4");
  const double t1 = wrap_unit(basepoint);
  const Vec4 x1 = curve.pos(t1);
  PrismResidual residual{&curve, t1, homogenize(x1)};

  // Simplex seeds: positive gaps k_i/G with sum 1 (the diffeomorphism of
  // Q_gamma to the open 5-simplex times S^1).
  std::vector<Vec6> seeds;
  {
    std::vector<int> cur;
    compositions(params.grid_per_axis, 6, cur, [&](const std::vector<int>& k) {
      Vec6 u;
      double acc = 0.0;
      for (int i = 0; i < 5; ++i) {
        acc += static_cast<double>(k[i]) / params.grid_per_axis;
        u[i] = t1 + acc;
      }
      std::array<Vec4, 6> pts;
      pts[0] = x1;
      for (int i = 1; i < 6; ++i) pts[i] = curve.pos(u[i - 1]);
      try {
        u[5] = phi_seed_from_points(pts);
      } catch (const std::invalid_argument&) {
        return;  // coincident sample points; skip seed
      }
      seeds.push_back(u);
    });
  }

  std::vector<std::optional<NewtonResult>> refined(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    refined[i] = newton_refine(residual, seeds[i], params.tol_converge, params.tol_accept,
                               params.max_newton_iters);
  });

  std::vector<ConfigTuple> accepted;
  std::vector<std::array<double, 5>> accepted_gaps;
  for (const auto& root : refined) {
    if (!root) continue;
    std::array<double, 5> gaps;
    for (int i = 0; i < 5; ++i) gaps[i] = wrap_unit(root->u[i] - t1);
    if (!strictly_ordered_gaps(gaps)) continue;
    bool dup = false;
    for (const auto& g : accepted_gaps)
      if (torus_dist(g, gaps) < params.dedup_radius) {
        dup = true;
        break;
      }
    if (dup) continue;

    ConfigTuple sol;
    sol.t[0] = t1;
    sol.x[0] = x1;
    for (int i = 1; i < 6; ++i) {
      sol.t[i] = t1 + gaps[i - 1];
      sol.x[i] = curve.pos(sol.t[i]);
    }
    auto prism = make_prism_config(sol.x, params.tol_accept);
    if (std::holds_alternative<RejectReason>(prism)) continue;
    sol.prism = std::get<PrismConfig>(prism);
    sol.residual_norm = root->rnorm;

    Eigen::JacobiSVD<Mat6> svd(root->jac);
    double smin = svd.singularValues()[5], smax = svd.singularValues()[0];
    sol.jacobian_cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    // A residual stalled between the convergence and acceptance targets
    // is the signature of a tangential intersection; its Jacobian sign
    // is noise even when the condition number stays below the limit.
    if (sol.jacobian_cond < params.cond_limit && root->rnorm < params.tol_converge) {
      double det = Eigen::PartialPivLU<Mat6>(root->jac).determinant();
      sol.sign = det > 0 ? 1 : -1;
    }
    accepted.push_back(std::move(sol));
    accepted_gaps.push_back(gaps);
  }

  std::sort(accepted.begin(), accepted.end(),
            [](const ConfigTuple& a, const ConfigTuple& b) { return a.t[1] < b.t[1]; });
  return accepted;
}

int intersection_sign(const ConfigTuple& sol) {
  if (!sol.sign) throw std::domain_error("intersection sign of a non-transverse root");
  return *sol.sign;
}

// ---------------------------------------------------------------------------
// Thickness

namespace {

double osculating_radius(const Curve4& curve, double t) {
  Vec4 d1 = curve.d1(t), d2 = curve.d2(t);
  double g = d1.squaredNorm() * d2.squaredNorm() - std::pow(d1.dot(d2), 2);
  if (g <= 0.0) return std::numeric_limits<double>::infinity();
  return d1.squaredNorm() * d1.norm() / std::sqrt(g);
}

}  // namespace

ThicknessReport thickness(const Curve4& curve, int coarse_grid, int fine_grid) {
  std::vector<Vec4> pts(coarse_grid);
  for (int i = 0; i < coarse_grid; ++i)
    pts[i] = curve.pos(static_cast<double>(i) / coarse_grid);

  // Keep the few best coarse triples and descend from each.
  struct Cand {
    double r;
    std::array<double, 3> t;
  };
  std::vector<Cand> best;
  auto push = [&](double r, std::array<double, 3> t) {
    best.push_back({r, t});
    std::sort(best.begin(), best.end(), [](const Cand& a, const Cand& b) { return a.r < b.r; });
    if (best.size() > 8) best.pop_back();
  };
  for (int i = 0; i < coarse_grid; ++i)
    for (int j = i + 1; j < coarse_grid; ++j)
      for (int k = j + 1; k < coarse_grid; ++k) {
        double r = circumradius(pts[i], pts[j], pts[k]);
        if (std::isfinite(r))
          push(r, {static_cast<double>(i) / coarse_grid, static_cast<double>(j) / coarse_grid,
                   static_cast<double>(k) / coarse_grid});
      }
  if (best.empty()) throw std::domain_error("thickness: all sampled triples collinear");

  auto triple_radius = [&](const Eigen::VectorXd& v) {
    // Fully collapsed triples belong to the osculating phase; their
    // circumradius is pure cancellation noise at machine precision.
    double d01 = circle_dist(v[0], v[1]);
    double d02 = circle_dist(v[0], v[2]);
    double d12 = circle_dist(v[1], v[2]);
    if (std::max({d01, d02, d12}) < 1e-3) return std::numeric_limits<double>::infinity();
    return circumradius(curve.pos(v[0]), curve.pos(v[1]), curve.pos(v[2]));
  };
  double tau3 = best[0].r;
  std::array<double, 3> triple = best[0].t;
  for (const auto& cand : best) {
    Eigen::VectorXd start(3);
    start << cand.t[0], cand.t[1], cand.t[2];
    auto [arg, val] = detail::nelder_mead(triple_radius, start, 0.5 / coarse_grid, 300);
    if (val < tau3) {
      tau3 = val;
      triple = {wrap_unit(arg[0]), wrap_unit(arg[1]), wrap_unit(arg[2])};
    }
  }

  // Diagonal limit: osculating circles on a fine grid plus local descent.
  double tau_diag = std::numeric_limits<double>::infinity();
  double t_diag = 0.0;
  for (int i = 0; i < fine_grid; ++i) {
    double t = static_cast<double>(i) / fine_grid;
    double r = osculating_radius(curve, t);
    if (r < tau_diag) {
      tau_diag = r;
      t_diag = t;
    }
  }
  {
    Eigen::VectorXd start(1);
    start << t_diag;
    auto [arg, val] = detail::nelder_mead(
        [&](const Eigen::VectorXd& v) { return osculating_radius(curve, v[0]); }, start,
        0.5 / fine_grid, 200);
    if (val < tau_diag) {
      tau_diag = val;
      t_diag = wrap_unit(arg[0]);
    }
  }

  ThicknessReport report;
  report.diagonal = tau_diag < tau3;
  report.tau = std::min(tau3, tau_diag);
  report.triple = report.diagonal ? std::array<double, 3>{t_diag, t_diag, t_diag} : triple;
  if (report.tau <= 0.0 || !std::isfinite(report.tau))
    throw std::domain_error("thickness: degenerate minimum");
  return report;
}

SeparationReport check_separation(const Curve4& curve, const std::vector<ConfigTuple>& sols,
                                  std::optional<double> tau) {
  SeparationReport rep;
  rep.tau = tau ? *tau : thickness(curve).tau;
  rep.min_pairwise = std::numeric_limits<double>::infinity();
  for (const auto& sol : sols)
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        rep.min_pairwise = std::min(rep.min_pairwise, (sol.x[i] - sol.x[j]).norm());
  rep.ok = sols.empty() || rep.min_pairwise >= 2.0 * rep.tau - 1e-6;
  return rep;
}

// ---------------------------------------------------------------------------
// Invariant report

InvariantReport kappa(const KnotCurve& curve, double basepoint, const SearchParams& params) {
  Curve4 view = s3_view(curve);
  InvariantReport rep;
  rep.solutions = find_inscribed_prisms(view, basepoint, params);
  rep.parity = static_cast<int>(rep.solutions.size() % 2);
  for (const auto& sol : rep.solutions) {
    if (sol.sign)
      rep.kappa += *sol.sign;
    else
      rep.all_transverse = false;
  }
  if (!rep.all_transverse) rep.kappa = 0;

  if (curve.ambient == Ambient::R3)
    rep.a2_value = a2_of_curve(r3_view(curve));
  else
    rep.a2_value = a2_of_curve(project_view(view, admissible_pole(view)));
  rep.matches_a2 = rep.all_transverse && std::abs(rep.kappa) == std::abs(*rep.a2_value);
  return rep;
}

// ---------------------------------------------------------------------------
// Quadrisecants

namespace {

struct LineFit {
  Vec3 point;
  Vec3 direction;
  double residual;
};

LineFit fit_line(const std::array<Vec3, 4>& pts) {
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p / 4.0;
  Mat3 cov = Mat3::Zero();
  for (const auto& p : pts) cov += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  Vec3 dir = eig.eigenvectors().col(2);
  for (int i = 0; i < 3; ++i) {
    if (std::fabs(dir[i]) > 1e-10) {
      if (dir[i] < 0) dir = -dir;
      break;
    }
  }
  double res = 0.0;
  for (const auto& p : pts) {
    Vec3 d = p - centroid;
    res = std::max(res, (d - d.dot(dir) * dir).norm());
  }
  return {centroid, dir, res};
}

}  // namespace

std::vector<QuadrisecantConfig> find_quadrisecants(const Curve3& curve, int grid) {
  if (grid < 4) throw std::invalid_argument("quadrisecant grid must be >= 4");
  double scale = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int j = i + 1; j < 64; ++j)
      scale = std::max(scale, (curve.pos(i / 64.0) - curve.pos(j / 64.0)).norm());
  if (scale <= 0.0) throw std::invalid_argument("degenerate curve");

  struct Seed {
    std::array<double, 4> s;
    Vec3 d0;
    Vec3 u, v;
  };
  std::vector<Seed> seeds;
  {
    std::vector<int> cur;
    compositions(grid, 4, cur, [&](const std::vector<int>& k) {
      for (int off = 0; off < grid; ++off) {
        Seed seed;
        double acc = static_cast<double>(off) / grid;
        for (int i = 0; i < 4; ++i) {
          seed.s[i] = acc;
          acc += static_cast<double>(k[i]) / grid;
        }
        std::array<Vec3, 4> pts;
        for (int i = 0; i < 4; ++i) pts[i] = curve.pos(seed.s[i]);
        LineFit fit = fit_line(pts);
        seed.d0 = fit.direction;
        auto [u, v] = plane_frame(seed.d0);
        seed.u = u;
        seed.v = v;
        seeds.push_back(seed);
      }
    });
  }

  std::vector<std::optional<std::array<double, 4>>> roots(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int idx) {
    const Seed& seed = seeds[idx];
    auto residual = [&](const Vec6& w) {
      Vec3 d = (seed.d0 + w[4] * seed.u + w[5] * seed.v).normalized();
      Vec3 w1 = (seed.u - seed.u.dot(d) * d).normalized();
      Vec3 w2 = d.cross(w1);
      Vec3 base = curve.pos(w[0]);
      Vec6 r;
      for (int j = 1; j < 4; ++j) {
        Vec3 diff = curve.pos(w[j]) - base;
        r[2 * (j - 1)] = diff.dot(w1);
        r[2 * (j - 1) + 1] = diff.dot(w2);
      }
      return r;
    };
    Vec6 w0;
    w0 << seed.s[0], seed.s[1], seed.s[2], seed.s[3], 0.0, 0.0;
    auto res = newton_refine(residual, w0, 1e-13 * scale, 1e-9 * scale, 40);
    if (!res) return;
    std::array<double, 4> s;
    for (int i = 0; i < 4; ++i) s[i] = wrap_unit(res->u[i]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (circle_dist(s[i], s[j]) < 1e-6) return;  // collapsed points
    std::sort(s.begin(), s.end());
    roots[idx] = s;
  });

  std::vector<QuadrisecantConfig> out;
  for (const auto& root : roots) {
    if (!root) continue;
    bool dup = false;
    for (const auto& q : out)
      if (torus_dist(q.s, *root) < 1e-6) {
        dup = true;
        break;
      }
    if (dup) continue;

    std::array<Vec3, 4> pts;
    for (int i = 0; i < 4; ++i) pts[i] = curve.pos((*root)[i]);
    LineFit fit = fit_line(pts);
    if (fit.residual >= 1e-8) continue;

    QuadrisecantConfig q;
    q.s = *root;
    q.point = fit.point;
    q.direction = fit.direction;
    q.residual = fit.residual;
    std::array<double, 4> coords;
    for (int i = 0; i < 4; ++i) coords[i] = (pts[i] - fit.point).dot(fit.direction);
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return coords[a] < coords[b]; });
    q.line_order = order;
    q.alternating = (order == std::array<int, 4>{0, 2, 1, 3}) ||
                    (order == std::array<int, 4>{3, 1, 2, 0});
    out.push_back(q);
  }
  std::sort(out.begin(), out.end(),
            [](const QuadrisecantConfig& a, const QuadrisecantConfig& b) { return a.s[0] < b.s[0]; });
  return out;
}

// ---------------------------------------------------------------------------
// Certification

namespace {

bool cyclically_ordered(const std::array<double, 6>& t) {
  double total = 0.0;
  for (int i = 0; i < 6; ++i) {
    double gap = wrap_unit(t[(i + 1) % 6] - t[i]);
    if (gap < 1e-7 || gap > 1.0 - 1e-7) return false;
    total += gap;
  }
  return std::fabs(total - 1.0) < 1e-9;
}

struct Certifier {
  const Curve4& s3;
  const Curve3& r3;
  int budget;
  int calls = 0;

  std::optional<HexClass> classify(const std::array<double, 6>& t) {
    if (calls >= budget) return std::nullopt;
    ++calls;
    Hexagon hex;
    for (int i = 0; i < 6; ++i) hex.v[i] = r3.pos(t[i]);
    return classify_hexagon(hex);
  }

  double nearest_param(const Vec4& x, double t0) const {
    double t = t0;
    for (int it = 0; it < 30; ++it) {
      Vec4 p = s3.pos(t);
      Vec4 d1 = s3.d1(t), d2 = s3.d2(t);
      double g = (p - x).dot(d1);
      double gp = d1.squaredNorm() + (p - x).dot(d2);
      if (std::fabs(gp) < 1e-12) break;
      double step = g / gp;
      t -= step;
      if (std::fabs(step) < 1e-14) break;
    }
    return wrap_unit(t);
  }
};

bool is_trefoil(const HexClass& c) {
  return c.kind == HexKind::TrefoilLeft || c.kind == HexKind::TrefoilRight;
}

// Margin-maximizing polish around a trefoil-classified tuple.
std::optional<CertifiedTrefoil> polish_margin(Certifier& ct, std::array<double, 6> t) {
  auto objective = [&](const Eigen::VectorXd& v) {
    std::array<double, 6> tt;
    for (int i = 0; i < 6; ++i) tt[i] = v[i];
    if (!cyclically_ordered(tt)) return 1.0;
    auto cls = ct.classify(tt);
    if (!cls || !is_trefoil(*cls)) return 1.0;
    return -cls->margin;
  };
  Eigen::VectorXd start(6);
  for (int i = 0; i < 6; ++i) start[i] = t[i];
  auto [arg, val] = detail::nelder_mead(objective, start, 0.004, 150);
  std::array<double, 6> tt = t;
  if (val < 0.0)
    for (int i = 0; i < 6; ++i) tt[i] = wrap_unit(arg[i]);
  auto cls = ct.classify(tt);
  if (cls && is_trefoil(*cls) && cls->margin > 1e-6)
    return CertifiedTrefoil{tt, *cls};
  // fall back to the unpolished tuple
  cls = ct.classify(t);
  if (cls && is_trefoil(*cls) && cls->margin > 1e-6) {
    for (int i = 0; i < 6; ++i) t[i] = wrap_unit(t[i]);
    return CertifiedTrefoil{t, *cls};
  }
  return std::nullopt;
}

// Planar branch of the construction: the configuration lies in a plane P;
// cut a circle separating the one-sided points by sign and re-intersect
// the curve with large spheres through that circle.
std::vector<std::array<double, 6>> planar_branch_seeds(Certifier& ct,
                                                       const std::array<double, 6>& t,
                                                       const std::array<Vec3, 6>& pts,
                                                       const PlaneR3& plane) {
  std::vector<std::array<double, 6>> seeds;
  std::array<int, 6> side{};  // +1 / -1 one-sided, 0 two-sided
  for (int i = 0; i < 6; ++i) {
    std::optional<ContactReport> rep;
    try {
      rep = plane_contact(ct.r3, plane, t[i]);
    } catch (const std::invalid_argument&) {
      return seeds;  // point not actually on the plane
    }
    if (!rep) return seeds;
    if (rep->side_class == SideClass::OneSidedPositive) side[i] = 1;
    if (rep->side_class == SideClass::OneSidedNegative) side[i] = -1;
  }

  auto [e1, e2] = plane_frame(plane.normal);
  Vec3 origin = plane.offset * plane.normal;
  std::array<Vec2, 6> q;
  for (int i = 0; i < 6; ++i)
    q[i] = Vec2(e1.dot(pts[i] - origin), e2.dot(pts[i] - origin));
  double spread = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) spread = std::max(spread, (q[i] - q[j]).norm());
  if (spread <= 0.0) return seeds;

  // Candidate separating circles: enclose one sign class, exclude the other.
  struct Circle {
    Vec2 center;
    double radius;
    int inside_sign;
  };
  std::vector<Circle> circles;
  for (int inside : {1, -1}) {
    std::vector<Vec2> in_pts, out_pts;
    for (int i = 0; i < 6; ++i) {
      if (side[i] == inside) in_pts.push_back(q[i]);
      if (side[i] == -inside) out_pts.push_back(q[i]);
    }
    Vec2 center = Vec2::Zero();
    if (in_pts.empty()) {
      // Nothing to enclose: a tiny circle far from every point works.
      circles.push_back({Vec2(3.0 * spread, 0.0), 0.1 * spread, inside});
      continue;
    }
    for (const auto& p : in_pts) center += p / in_pts.size();
    double rin = 0.0;
    for (const auto& p : in_pts) rin = std::max(rin, (p - center).norm());
    double rout = 1e300;
    for (const auto& p : out_pts) rout = std::min(rout, (p - center).norm());
    if (rout > rin + 1e-9 * spread)
      circles.push_back({center, 0.5 * (rin + rout), inside});
  }

  for (const auto& circle : circles) {
    Vec3 c3 = origin + circle.center.x() * e1 + circle.center.y() * e2;
    for (double h : {4.0, 8.0, 16.0, 32.0}) {
      double axis_offset = h * std::max(circle.radius, 0.05 * spread);
      // Sphere through the circle whose cap over the inside matches the
      // inside sign.
      Vec3 center = c3 - static_cast<double>(circle.inside_sign) * axis_offset * plane.normal;
      double radius = std::sqrt(circle.radius * circle.radius + axis_offset * axis_offset);
      std::array<double, 6> tt;
      bool ok = true;
      for (int i = 0; i < 6 && ok; ++i) {
        double ti = t[i];
        bool converged = false;
        for (double nudge : {0.0, 1e-3, -1e-3, 3e-3, -3e-3}) {
          double s = ti + nudge;
          for (int it = 0; it < 40; ++it) {
            Vec3 p = ct.r3.pos(s);
            double g = (p - center).squaredNorm() - radius * radius;
            double gp = 2.0 * (p - center).dot(ct.r3.d1(s));
            if (std::fabs(gp) < 1e-14) break;
            double step = g / gp;
            s -= step;
            if (std::fabs(step) < 1e-15) break;
          }
          Vec3 p = ct.r3.pos(s);
          if (std::fabs((p - center).norm() - radius) < 1e-9 * radius &&
              circle_dist(s, ti) < 0.05) {
            tt[i] = s;
            converged = true;
            break;
          }
        }
        ok = converged;
      }
      if (ok) seeds.push_back(tt);
    }
  }
  return seeds;
}

// Co-circular branch: lift the points off the plane of their circle by a
// trefoil-producing height pattern, then slide along the curve into the
// matching parallel planes.
std::vector<std::array<double, 6>> cocircular_branch_seeds(Certifier& ct,
                                                           const std::array<double, 6>& t,
                                                           const std::array<Vec3, 6>& pts,
                                                           const PlaneR3& plane, double radius) {
  std::vector<std::array<double, 6>> seeds;
  std::array<int, 6> side{};
  for (int i = 0; i < 6; ++i) {
    std::optional<ContactReport> rep;
    try {
      rep = plane_contact(ct.r3, plane, t[i]);
    } catch (const std::invalid_argument&) {
      return seeds;
    }
    if (!rep) return seeds;
    if (rep->side_class == SideClass::OneSidedPositive) side[i] = 1;
    if (rep->side_class == SideClass::OneSidedNegative) side[i] = -1;
  }

  // Height patterns: signs must match the one-sided points; try unit and
  // mixed magnitudes, classify the lifted (off-curve) hexagon first.
  std::vector<std::array<double, 6>> patterns;
  for (int mask = 0; mask < 64; ++mask) {
    std::array<double, 6> w;
    bool ok = true;
    for (int i = 0; i < 6; ++i) {
      w[i] = (mask >> i) & 1 ? 1.0 : -1.0;
      if (side[i] != 0 && w[i] * side[i] < 0) ok = false;
    }
    if (ok) patterns.push_back(w);
  }
  for (int mask = 0; mask < 64; ++mask) {  // magnitude variants 1/2
    std::array<double, 6> w;
    bool ok = true;
    for (int i = 0; i < 6; ++i) {
      double mag = (mask >> i) & 1 ? 2.0 : 1.0;
      w[i] = (i % 2 == 0 ? 1.0 : -1.0) * mag;
      if (side[i] != 0 && w[i] * side[i] < 0) ok = false;
    }
    if (ok) patterns.push_back(w);
  }

  for (const auto& w : patterns) {
    double eps = 0.1 * radius;
    Hexagon lifted;
    for (int i = 0; i < 6; ++i) lifted.v[i] = pts[i] + eps * w[i] * plane.normal;
    if (ct.calls >= ct.budget) break;
    ++ct.calls;
    HexClass cls = classify_hexagon(lifted);
    if (!is_trefoil(cls)) continue;

    for (double scale : {0.1, 0.05, 0.02, 0.01}) {
      double e = scale * radius;
      std::array<double, 6> tt;
      bool ok = true;
      for (int i = 0; i < 6 && ok; ++i) {
        double target = plane.offset + e * w[i];
        double s = t[i];
        bool converged = false;
        for (double nudge : {0.0, 1e-3, -1e-3}) {
          s = t[i] + nudge;
          for (int it = 0; it < 40; ++it) {
            double g = plane.normal.dot(ct.r3.pos(s)) - target;
            double gp = plane.normal.dot(ct.r3.d1(s));
            if (std::fabs(gp) < 1e-14) break;
            double step = g / gp;
            s -= step;
            if (std::fabs(step) < 1e-15) break;
          }
          if (std::fabs(plane.normal.dot(ct.r3.pos(s)) - target) < 1e-10 &&
              circle_dist(s, t[i]) < 0.05) {
            converged = true;
            break;
          }
        }
        tt[i] = s;
        ok = converged;
      }
      if (ok) seeds.push_back(tt);
    }
  }
  return seeds;
}

}  // namespace

CertifyResult certify_trefoil(const KnotCurve& curve, const ConfigTuple& sol,
                              std::uint64_t seed, int budget) {
  Curve4 s3 = s3_view(curve);
  Curve3 r3 = curve.ambient == Ambient::R3 ? r3_view(curve)
                                           : project_view(s3, admissible_pole(s3));
  Certifier ct{s3, r3, budget};

  // Fast path: the solution may project to an already-genuine trefoil.
  if (auto cls = ct.classify(sol.t); cls && is_trefoil(*cls) && cls->margin > 1e-6)
    return {CertifiedTrefoil{sol.t, *cls}, "direct"};

  std::vector<std::pair<std::array<double, 6>, std::string>> candidates;

  // Cap-rotation slides: rotate the positive cap, then pull each image
  // point back onto the curve.
  for (double eps : {0.05, -0.05, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3}) {
    if (sol.prism.is_m0) break;
    std::array<Vec4, 6> rotated;
    try {
      rotated = cap_rotation(sol.prism, eps);
    } catch (const std::exception&) {
      break;
    }
    std::array<double, 6> tt;
    for (int i = 0; i < 6; ++i) tt[i] = ct.nearest_param(rotated[i], sol.t[i]);
    if (cyclically_ordered(tt)) candidates.emplace_back(tt, "cap-rotation");
  }

  // Coplanar / co-circular constructions when the projection degenerates.
  {
    std::array<Vec3, 6> pts;
    for (int i = 0; i < 6; ++i) pts[i] = r3.pos(sol.t[i]);
    Vec3 mean = Vec3::Zero();
    for (const auto& p : pts) mean += p / 6.0;
    Eigen::Matrix<double, 6, 3> centered;
    double scale = 0.0;
    for (int i = 0; i < 6; ++i) {
      centered.row(i) = (pts[i] - mean).transpose();
      scale = std::max(scale, (pts[i] - mean).norm());
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(centered, Eigen::ComputeFullV);
    if (svd.singularValues()[2] < 1e-6 * scale) {
      Vec3 normal = svd.matrixV().col(2);
      PlaneR3 plane = make_plane(normal, normal.dot(mean));
      bool cocircular = false;
      double circle_radius = 0.0;
      {
        // Least-squares circle in the plane.
        auto [e1, e2] = plane_frame(plane.normal);
        Eigen::MatrixXd a(6, 3);
        Eigen::VectorXd b(6);
        for (int i = 0; i < 6; ++i) {
          double x = e1.dot(pts[i] - mean), y = e2.dot(pts[i] - mean);
          a.row(i) << 2.0 * x, 2.0 * y, 1.0;
          b[i] = x * x + y * y;
        }
        Eigen::Vector3d fit = a.colPivHouseholderQr().solve(b);
        circle_radius = std::sqrt(std::max(0.0, fit[2] + fit[0] * fit[0] + fit[1] * fit[1]));
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) {
          double x = e1.dot(pts[i] - mean), y = e2.dot(pts[i] - mean);
          double d = std::hypot(x - fit[0], y - fit[1]);
          worst = std::max(worst, std::fabs(d - circle_radius));
        }
        cocircular = worst < 1e-6 * scale;
      }
      auto extra = cocircular
                       ? cocircular_branch_seeds(ct, sol.t, pts, plane, circle_radius)
                       : planar_branch_seeds(ct, sol.t, pts, plane);
      for (auto& tt : extra)
        candidates.emplace_back(tt, cocircular ? "cocircular-lift" : "planar-sphere");
    }
  }

  // Random multistart around the solution.
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (double sigma : {0.002, 0.005, 0.01, 0.02})
      for (int rep = 0; rep < 24; ++rep) {
        std::array<double, 6> tt;
        for (int i = 0; i < 6; ++i) tt[i] = sol.t[i] + sigma * gauss(rng);
        if (cyclically_ordered(tt)) candidates.emplace_back(tt, "multistart");
      }
  }

  for (const auto& [tt, branch] : candidates) {
    auto cls = ct.classify(tt);
    if (!cls || !is_trefoil(*cls)) continue;
    if (auto result = polish_margin(ct, tt)) return {*result, branch};
    if (ct.calls >= ct.budget) break;
  }
  return {std::nullopt, ct.calls >= ct.budget ? "budget exhausted" : "no trefoil found"};
}

// ---------------------------------------------------------------------------
// Conjecture 1 proximity experiment

std::vector<ProximityRow> conjecture1_experiment(const KnotCurve& curve,
                                                 const std::vector<CertifiedTrefoil>& trefoils,
                                                 const std::vector<QuadrisecantConfig>& quads) {
  Curve3 r3 = curve.ambient == Ambient::R3
                  ? r3_view(curve)
                  : project_view(s3_view(curve), admissible_pole(s3_view(curve)));
  std::vector<ProximityRow> rows;
  for (std::size_t a = 0; a < trefoils.size(); ++a) {
    for (std::size_t b = 0; b < quads.size(); ++b) {
      if (!quads[b].alternating) continue;
      double prox = 0.0;
      for (double ti : trefoils[a].t) {
        double best = std::numeric_limits<double>::infinity();
        for (double sj : quads[b].s)
          best = std::min(best, (r3.pos(ti) - r3.pos(sj)).norm());
        prox = std::max(prox, best);
      }
      rows.push_back({static_cast<int>(a), static_cast<int>(b), prox});
    }
  }
  return rows;
}

std::vector<ProximityRow> conjecture1_experiment(const KnotCurve& curve, std::uint64_t seed) {
  if (curve.ambient != Ambient::R3)
    throw std::invalid_argument("conjecture1_experiment runs on R3 curves");
  Curve4 view = s3_view(curve);
  std::vector<CertifiedTrefoil> trefoils;
  for (int b = 0; b < 10 && trefoils.empty(); ++b) {
    auto sols = find_inscribed_prisms(view, b / 10.0);
    for (const auto& sol : sols) {
      auto cert = certify_trefoil(curve, sol, seed);
      if (cert.trefoil) {
        trefoils.push_back(*cert.trefoil);
        break;
      }
    }
  }
  auto quads = find_quadrisecants(r3_view(curve));
  return conjecture1_experiment(curve, trefoils, quads);
}

}  // namespace prismknot
