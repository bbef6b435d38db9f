// Command-line front end: search / invariant / thickness / certify /
// quadrisecants / classify-hex, JSON result documents, CSV plot export.

#include "prismknot/gauss.hpp"
#include "prismknot/json_io.hpp"
#include "prismknot/solve.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace pk = prismknot;
using nlohmann::json;

namespace {

class StageTimer {
 public:
  void start() { begin_ = std::chrono::steady_clock::now(); }
  void stop(const std::string& name) {
    auto end = std::chrono::steady_clock::now();
    timings_[name] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - begin_)
            .count();
  }
  json to_json() const { return timings_; }

 private:
  std::chrono::steady_clock::time_point begin_;
  std::map<std::string, double> timings_;
};

pk::KnotCurve resolve_curve(const pk::RunConfig& config) {
  if (!config.curve_name.empty()) return pk::preset(config.curve_name);
  return pk::load_curve_spec(config.spec_path);
}

void emit(const pk::RunConfig& config, const json& doc) {
  std::string text = doc.dump(2);
  text.push_back('\n');
  if (config.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.out_path);
    if (!out) throw std::runtime_error("cannot write " + config.out_path);
    out << text;
  }
}

int run_command(pk::RunConfig config) {
  config.validate();
  StageTimer timer;
  json results;
  int exit_code = 0;

  pk::SearchParams params;
  params.grid_per_axis = config.grid;
  params.tol_accept = config.tol;

  if (config.command == "classify-hex") {
    std::ifstream in(config.points_path);
    if (!in) throw std::invalid_argument("cannot read points file: " + config.points_path);
    json j;
    in >> j;
    auto pts = j.at("points");
    if (!pts.is_array() || pts.size() != 6)
      throw std::invalid_argument("points file needs exactly 6 points");
    pk::Hexagon hex;
    for (int i = 0; i < 6; ++i)
      hex.v[i] = pk::Vec3(pts[i][0].get<double>(), pts[i][1].get<double>(),
                          pts[i][2].get<double>());
    timer.start();
    pk::HexClass cls = pk::classify_hexagon(hex);
    timer.stop("classify");
    results["class"] = pk::to_json(cls);
    emit(config, pk::result_document(config, results, timer.to_json()));
    return 0;
  }

  pk::KnotCurve curve = resolve_curve(config);
  results["curve"] = pk::curve_to_json(curve);

  if (config.command == "search") {
    pk::Curve4 view = pk::s3_view(curve);
    json per_basepoint = json::array();
    timer.start();
    for (double b : config.basepoints) {
      auto sols = pk::find_inscribed_prisms(view, b, params);
      json sols_json = json::array();
      for (const auto& s : sols) sols_json.push_back(pk::to_json(s));
      per_basepoint.push_back(
          {{"basepoint", b}, {"count", sols.size()}, {"solutions", sols_json}});
    }
    timer.stop("search");
    results["runs"] = per_basepoint;
  } else if (config.command == "invariant") {
    json per_basepoint = json::array();
    timer.start();
    for (double b : config.basepoints) {
      auto rep = pk::kappa(curve, b, params);
      json j = pk::to_json(rep);
      j["basepoint"] = b;
      per_basepoint.push_back(j);
    }
    timer.stop("invariant");
    results["runs"] = per_basepoint;
  } else if (config.command == "thickness") {
    timer.start();
    auto rep = pk::thickness(pk::s3_view(curve));
    timer.stop("thickness");
    results["thickness"] = pk::to_json(rep);
  } else if (config.command == "certify") {
    timer.start();
    pk::Curve4 view = pk::s3_view(curve);
    std::optional<pk::CertifiedTrefoil> found;
    std::string note = "no solutions";
    for (double b : config.basepoints) {
      auto sols = pk::find_inscribed_prisms(view, b, params);
      for (const auto& sol : sols) {
        auto cert = pk::certify_trefoil(curve, sol, config.seed);
        note = cert.note;
        if (cert.trefoil) {
          found = cert.trefoil;
          break;
        }
      }
      if (found) break;
    }
    timer.stop("certify");
    if (found) {
      results["certified"] = pk::to_json(*found);
      results["note"] = note;
    } else {
      results["certified"] = nullptr;
      results["note"] = note;
      exit_code = 2;  // Unresolved
    }
  } else if (config.command == "quadrisecants") {
    if (curve.ambient != pk::Ambient::R3)
      throw std::invalid_argument("quadrisecants runs on R3 curves");
    timer.start();
    auto quads = pk::find_quadrisecants(pk::r3_view(curve), config.grid);
    timer.stop("quadrisecants");
    json arr = json::array();
    for (const auto& q : quads) arr.push_back(pk::to_json(q));
    results["quadrisecants"] = arr;
  } else {
    throw std::invalid_argument("unknown command: " + config.command);
  }

  json doc = pk::result_document(config, results, timer.to_json());
  emit(config, doc);
  if (!config.plot_dir.empty()) pk::export_plot_data(doc, curve, config.plot_dir);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inscribed-trefoil search and certification toolkit"};
  app.require_subcommand(1);

  pk::RunConfig config;
  auto add_common = [&](CLI::App* cmd, bool needs_curve) {
    if (needs_curve) {
      cmd->add_option("--curve", config.curve_name, "preset curve name");
      cmd->add_option("--spec", config.spec_path, "curve spec JSON file");
    }
    cmd->add_option("--grid", config.grid, "seed grid per axis");
    cmd->add_option("--tol", config.tol, "acceptance tolerance");
    cmd->add_option("--basepoint", config.basepoints, "basepoint list");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--out", config.out_path, "output JSON path (default stdout)");
    cmd->add_option("--plot-dir", config.plot_dir, "CSV plot export directory");
  };

  for (const char* name :
       {"search", "invariant", "thickness", "certify", "quadrisecants"}) {
    auto* cmd = app.add_subcommand(name);
    add_common(cmd, true);
    cmd->callback([&, name] { config.command = name; });
  }
  auto* hexcmd = app.add_subcommand("classify-hex");
  hexcmd->add_option("--points", config.points_path, "JSON file with 6 points")->required();
  add_common(hexcmd, false);
  hexcmd->callback([&] { config.command = "classify-hex"; });

  CLI11_PARSE(app, argc, argv);
  try {
    return run_command(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
