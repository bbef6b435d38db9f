#include "oracles.hpp"

#include "prismknot/projgeom.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <map>
#include <stdexcept>

namespace prismknot::oracles {

namespace {

struct Location {
  int comp;
  int idx;
};

// Positions of both passages of crossing `id`.
std::pair<Location, Location> locate(const OracleDiagram& d, int id) {
  std::vector<Location> found;
  for (int c = 0; c < static_cast<int>(d.components.size()); ++c)
    for (int i = 0; i < static_cast<int>(d.components[c].size()); ++i)
      if (d.components[c][i].id == id) found.push_back({c, i});
  if (found.size() != 2) throw std::logic_error("oracle diagram: bad crossing multiplicity");
  return {found[0], found[1]};
}

OracleDiagram switch_crossing(OracleDiagram d, int id) {
  for (auto& comp : d.components)
    for (auto& p : comp)
      if (p.id == id) {
        p.over = !p.over;
        p.sign = -p.sign;
      }
  return d;
}

// Oriented smoothing: erase the crossing and rewire the strands.
OracleDiagram smooth_crossing(const OracleDiagram& d, int id) {
  auto [a, b] = locate(d, id);
  OracleDiagram out;
  if (a.comp == b.comp) {
    // Self-crossing: the component splits in two.
    const auto& comp = d.components[a.comp];
    int i = std::min(a.idx, b.idx), j = std::max(a.idx, b.idx);
    OracleComponent first, second;
    for (int k = 0; k < static_cast<int>(comp.size()); ++k) {
      if (k == i || k == j) continue;
      if (k < i || k > j)
        first.push_back(comp[k]);
      else
        second.push_back(comp[k]);
    }
    for (int c = 0; c < static_cast<int>(d.components.size()); ++c)
      if (c != a.comp) out.components.push_back(d.components[c]);
    out.components.push_back(first);
    out.components.push_back(second);
  } else {
    // Crossing between two components: they merge.
    const auto& ca = d.components[a.comp];
    const auto& cb = d.components[b.comp];
    OracleComponent merged;
    for (int k = 0; k < a.idx; ++k) merged.push_back(ca[k]);
    for (int k = b.idx + 1; k < static_cast<int>(cb.size()); ++k) merged.push_back(cb[k]);
    for (int k = 0; k < b.idx; ++k) merged.push_back(cb[k]);
    for (int k = a.idx + 1; k < static_cast<int>(ca.size()); ++k) merged.push_back(ca[k]);
    for (int c = 0; c < static_cast<int>(d.components.size()); ++c)
      if (c != a.comp && c != b.comp) out.components.push_back(d.components[c]);
    out.components.push_back(merged);
  }
  return out;
}

}  // namespace

LaurentPoly conway(const OracleDiagram& d) {
  // Find the first crossing met at its under-passage while walking the
  // components in order.
  std::map<int, bool> seen;
  for (const auto& comp : d.components) {
    for (const auto& p : comp) {
      if (seen.count(p.id)) continue;
      seen[p.id] = true;
      if (!p.over) {
        LaurentPoly switched = conway(switch_crossing(d, p.id));
        LaurentPoly smoothed = conway(smooth_crossing(d, p.id));
        LaurentPoly z = LaurentPoly::monomial(p.sign, 1);
        return switched + z * smoothed;
      }
    }
  }
  // Descending: an unlink (empty components are split unknot circles);
  // Conway vanishes unless the diagram is a single unknot.
  return d.components.size() == 1 ? LaurentPoly::monomial(1, 0) : LaurentPoly();
}

long long coefficient(const LaurentPoly& p, int k) { return p.coeff(k); }

OracleDiagram to_oracle_diagram(const GaussDiagram& d) {
  OracleComponent comp;
  for (const auto& e : d.entries) comp.push_back({e.id, e.over, e.sign});
  return OracleDiagram{{comp}};
}

long long a2_by_skein(const GaussDiagram& d) {
  LaurentPoly p = conway(to_oracle_diagram(d));
  return coefficient(p, 2);
}

double fit_circle_radius(const std::vector<Eigen::VectorXd>& points, double* worst_residual) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw std::invalid_argument("circle fit needs >= 3 points");
  const int dim = static_cast<int>(points[0].size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& p : points) mean += p / n;
  Eigen::MatrixXd centered(n, dim);
  for (int i = 0; i < n; ++i) centered.row(i) = (points[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  Eigen::MatrixXd basis = svd.matrixV().leftCols(2);  // affine 2-plane

  // Algebraic fit: |q - c|^2 = r^2 in plane coordinates.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d q = basis.transpose() * (points[i] - mean);
    a.row(i) << 2.0 * q.x(), 2.0 * q.y(), 1.0;
    b[i] = q.squaredNorm();
  }
  Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  Eigen::Vector2d center(sol[0], sol[1]);
  double radius = std::sqrt(std::max(0.0, sol[2] + center.squaredNorm()));
  if (worst_residual) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::Vector2d q = basis.transpose() * (points[i] - mean);
      worst = std::max(worst, std::fabs((q - center).norm() - radius));
      // distance out of plane also counts against the fit
      Eigen::VectorXd in_plane = mean + basis * q;
      worst = std::max(worst, (points[i] - in_plane).norm());
    }
    *worst_residual = worst;
  }
  return radius;
}

double dense_thickness(const Curve4& curve, int grid) {
  std::vector<Vec4> pts(grid);
  for (int i = 0; i < grid; ++i) pts[i] = curve.pos(static_cast<double>(i) / grid);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i)
    for (int j = i + 1; j < grid; ++j)
      for (int k = j + 1; k < grid; ++k)
        best = std::min(best, circumradius(pts[i], pts[j], pts[k]));

  // The infimum may live on the collapsed strata, which distinct-triple
  // grids approach only at first order. Sample both limit families at
  // doubled resolution through independent formulas: circles tangent to
  // the curve through one more point, and osculating circles.
  const int fine = 2 * grid;
  for (int i = 0; i < fine; ++i) {
    double s = static_cast<double>(i) / fine;
    Vec4 x = curve.pos(s);
    Vec4 tangent = curve.d1(s).normalized();
    for (int j = 0; j < fine; ++j) {
      if (i == j) continue;
      Vec4 d = curve.pos(static_cast<double>(j) / fine) - x;
      Vec4 perp = d - d.dot(tangent) * tangent;
      double beta = perp.norm();
      if (beta < 1e-12) continue;
      best = std::min(best, d.squaredNorm() / (2.0 * beta));
    }
    Vec4 d1 = curve.d1(s), d2 = curve.d2(s);
    Vec4 normal = d2 - d2.dot(d1) / d1.squaredNorm() * d1;
    if (normal.norm() > 1e-12) best = std::min(best, d1.squaredNorm() / normal.norm());
  }
  return best;
}

int trefoil_by_crossing_rule(const GaussDiagram& d) {
  if (d.entries.size() != 6) return 0;
  int sign = d.entries[0].sign;
  bool over = d.entries[0].over;
  for (int i = 0; i < 6; ++i) {
    if (d.entries[i].sign != sign) return 0;
    if (d.entries[i].over != (i % 2 == 0 ? over : !over)) return 0;
  }
  return sign;
}

bool tangential_bound_holds(const Curve3& curve, const PlaneR3& plane,
                            const ContactReport& contact) {
  auto theta = [&](double t) {
    Vec3 d = curve.d1(t);
    return std::asin(std::min(1.0, std::fabs(plane.normal.dot(d)) / d.norm()));
  };
  auto height = [&](double t) {
    return std::fabs(plane.normal.dot(curve.pos(t)) - plane.offset);
  };

  // Log-spaced offsets on both sides; the window extends only while
  // theta keeps growing away from the contact, staying inside the
  // asymptotic regime the proposition speaks about.
  const double power = 1.0 - 1.0 / contact.contact_order;
  for (double side : {1.0, -1.0}) {
    double tc = contact.t0 + side * 1e-5;
    if (height(tc) < 1e-16) continue;
    double c_fit = 0.5 * theta(tc) / std::pow(height(tc), power);
    if (!(c_fit > 0.0)) return false;
    double prev = theta(tc);
    int verified = 0;
    for (int k = 1; k <= 40; ++k) {
      double offset = 1e-5 * std::pow(1e3, k / 40.0);  // up to 1e-2
      double t = contact.t0 + side * offset;
      double th = theta(t);
      if (th < 0.7 * prev) break;  // leaving the monotone regime
      prev = std::max(prev, th);
      double h = height(t);
      if (h < 1e-14) continue;
      if (th < c_fit * std::pow(h, power)) return false;
      ++verified;
    }
    if (verified < 8) return false;  // window collapsed; nothing checked
  }
  return true;
}

}  // namespace prismknot::oracles
