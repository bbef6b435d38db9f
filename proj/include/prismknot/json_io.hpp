#pragma once

#include "prismknot/curve.hpp"
#include "prismknot/hexknot.hpp"
#include "prismknot/solve.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace prismknot {

// Curve spec schema (schemas/curve_spec.schema.json):
//   {"ambient": "r3"|"s3", "degree": D, "coefficients": [[[a,b],...] x dim]}
nlohmann::json curve_to_json(const KnotCurve& c);
KnotCurve curve_from_json(const nlohmann::json& j);
KnotCurve load_curve_spec(const std::string& path);

struct RunConfig {
  std::string command;
  std::string curve_name;  // preset name, or empty when spec_path is used
  std::string spec_path;
  int grid = 12;
  double tol = 1e-8;
  std::vector<double> basepoints{0.0};
  std::uint64_t seed = 12345;
  std::string out_path;   // empty = stdout
  std::string plot_dir;   // empty = no plot export
  std::string points_path;  // classify-hex input

  void validate() const;  // throws std::invalid_argument
};

nlohmann::json to_json(const HexClass& c);
nlohmann::json to_json(const ConfigTuple& sol);
nlohmann::json to_json(const ThicknessReport& r);
nlohmann::json to_json(const InvariantReport& r);
nlohmann::json to_json(const QuadrisecantConfig& q);
nlohmann::json to_json(const CertifiedTrefoil& t);
nlohmann::json to_json(const SeparationReport& r);

// Document envelope shared by every command:
//   {schema_version, tool, version, command, config, results, timings_ms}
nlohmann::json result_document(const RunConfig& config, nlohmann::json results,
                               nlohmann::json timings_ms);

// CSV polylines for plotting: curve.csv (1024 stereographic R3 samples),
// hexagon.csv (7 rows, closed) when a certified hexagon is present, and
// line.csv (2 endpoint rows per quadrisecant). Byte-deterministic for a
// fixed document.
void export_plot_data(const nlohmann::json& doc, const KnotCurve& curve,
                      const std::string& out_dir);

}  // namespace prismknot
