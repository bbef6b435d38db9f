#include "prismknot/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace prismknot {

using nlohmann::json;

json curve_to_json(const KnotCurve& c) {
  json coeffs = json::array();
  for (const auto& coord : c.poly.coeffs) {
    json per_coord = json::array();
    for (const auto& [a, b] : coord) per_coord.push_back({a, b});
    coeffs.push_back(per_coord);
  }
  return json{{"ambient", c.ambient == Ambient::S3 ? "s3" : "r3"},
              {"degree", c.poly.degree()},
              {"coefficients", coeffs}};
}

KnotCurve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ambient") || !j.contains("coefficients"))
    throw std::invalid_argument("curve spec needs 'ambient' and 'coefficients'");
  std::string ambient_name = j.at("ambient").get<std::string>();
  Ambient ambient;
  if (ambient_name == "r3")
    ambient = Ambient::R3;
  else if (ambient_name == "s3")
    ambient = Ambient::S3;
  else
    throw std::invalid_argument("curve spec ambient must be 'r3' or 's3'");

  const auto& coeffs = j.at("coefficients");
  if (!coeffs.is_array() || coeffs.empty())
    throw std::invalid_argument("curve spec coefficients must be a non-empty array");
  TrigCurve poly;
  poly.dim = static_cast<int>(coeffs.size());
  for (const auto& coord : coeffs) {
    std::vector<std::array<double, 2>> list;
    for (const auto& pair : coord) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("curve spec coefficient entries must be [a, b] pairs");
      list.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    poly.coeffs.push_back(std::move(list));
  }
  if (j.contains("degree") && j.at("degree").get<int>() + 1 !=
                                  static_cast<int>(poly.coeffs[0].size()))
    throw std::invalid_argument("curve spec degree does not match coefficient count");
  return make_knot_curve(ambient, std::move(poly));
}

KnotCurve load_curve_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read curve spec: " + path);
  json j;
  in >> j;
  return curve_from_json(j);
}

void RunConfig::validate() const {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (grid < 4) throw std::invalid_argument("grid must be >= 4");
  if (curve_name.empty() == spec_path.empty() && command != "classify-hex")
    throw std::invalid_argument("exactly one of --curve / --spec is required");
}

json to_json(const HexClass& c) {
  return json{{"kind", to_string(c.kind)}, {"margin", c.margin}};
}

json to_json(const ConfigTuple& sol) {
  json points = json::array();
  for (const auto& x : sol.x) points.push_back({x[0], x[1], x[2], x[3]});
  json j{{"t", sol.t},
         {"points", points},
         {"residual", sol.residual_norm},
         {"jacobian_cond", sol.jacobian_cond},
         {"concurrency_point",
          {sol.prism.concurrency.v[0], sol.prism.concurrency.v[1], sol.prism.concurrency.v[2],
           sol.prism.concurrency.v[3], sol.prism.concurrency.v[4]}},
         {"sides", sol.prism.sides},
         {"is_m0", sol.prism.is_m0}};
  if (sol.sign)
    j["sign"] = *sol.sign;
  else
    j["sign"] = nullptr;
  return j;
}

json to_json(const ThicknessReport& r) {
  return json{{"tau", r.tau}, {"triple", r.triple}, {"diagonal", r.diagonal}};
}

json to_json(const InvariantReport& r) {
  json sols = json::array();
  for (const auto& s : r.solutions) sols.push_back(to_json(s));
  json j{{"solutions", sols},
         {"kappa", r.kappa},
         {"parity", r.parity},
         {"all_transverse", r.all_transverse},
         {"matches_a2", r.matches_a2}};
  if (r.a2_value)
    j["a2"] = *r.a2_value;
  else
    j["a2"] = nullptr;
  return j;
}

json to_json(const QuadrisecantConfig& q) {
  return json{{"s", q.s},
              {"point", {q.point[0], q.point[1], q.point[2]}},
              {"direction", {q.direction[0], q.direction[1], q.direction[2]}},
              {"line_order", q.line_order},
              {"alternating", q.alternating},
              {"residual", q.residual}};
}

json to_json(const CertifiedTrefoil& t) {
  return json{{"t", t.t}, {"class", to_json(t.cls)}};
}

json to_json(const SeparationReport& r) {
  return json{{"tau", r.tau}, {"min_pairwise", r.min_pairwise}, {"ok", r.ok}};
}

json result_document(const RunConfig& config, json results, json timings_ms) {
  json cfg{{"grid", config.grid},
           {"tol", config.tol},
           {"basepoints", config.basepoints},
           {"seed", config.seed}};
  if (!config.curve_name.empty()) cfg["curve"] = config.curve_name;
  if (!config.spec_path.empty()) cfg["spec"] = config.spec_path;
  if (!config.points_path.empty()) cfg["points"] = config.points_path;
  return json{{"schema_version", 1},
              {"tool", "prismknot"},
              {"version", "0.1.0"},
              {"command", config.command},
              {"config", cfg},
              {"results", std::move(results)},
              {"timings_ms", std::move(timings_ms)}};
}

namespace {

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace

void export_plot_data(const json& doc, const KnotCurve& curve, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Curve3 view = curve.ambient == Ambient::R3
                    ? r3_view(curve)
                    : project_view(s3_view(curve), admissible_pole(s3_view(curve)));

  std::vector<std::vector<double>> curve_rows;
  for (int i = 0; i < 1024; ++i) {
    double t = i / 1024.0;
    Vec3 p = view.pos(t);
    curve_rows.push_back({t, p[0], p[1], p[2]});
  }
  write_csv(out_dir + "/curve.csv", "t,x,y,z", curve_rows);

  const json& results = doc.at("results");
  if (results.contains("certified") && results.at("certified").is_object()) {
    std::vector<std::vector<double>> hex_rows;
    auto ts = results.at("certified").at("t").get<std::vector<double>>();
    for (int i = 0; i <= 6; ++i) {
      double t = ts[i % 6];
      Vec3 p = view.pos(t);
      hex_rows.push_back({t, p[0], p[1], p[2]});
    }
    write_csv(out_dir + "/hexagon.csv", "t,x,y,z", hex_rows);
  }
  if (results.contains("quadrisecants") && results.at("quadrisecants").is_array()) {
    std::vector<std::vector<double>> line_rows;
    for (const auto& q : results.at("quadrisecants")) {
      Vec3 point(q.at("point")[0], q.at("point")[1], q.at("point")[2]);
      Vec3 dir(q.at("direction")[0], q.at("direction")[1], q.at("direction")[2]);
      auto ss = q.at("s").get<std::vector<double>>();
      double lo = 1e300, hi = -1e300;
      for (double s : ss) {
        double u = (view.pos(s) - point).dot(dir);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
      }
      double pad = 0.1 * (hi - lo);
      Vec3 a = point + (lo - pad) * dir, b = point + (hi + pad) * dir;
      line_rows.push_back({a[0], a[1], a[2]});
      line_rows.push_back({b[0], b[1], b[2]});
    }
    write_csv(out_dir + "/line.csv", "x,y,z", line_rows);
  }
}

}  // namespace prismknot
