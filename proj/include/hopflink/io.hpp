#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hopflink/defects.hpp"
#include "hopflink/fieldlab.hpp"
#include "hopflink/hopf.hpp"
#include "hopflink/linking.hpp"

namespace hopflink {

inline constexpr const char* kArtifactVersion = "hopflink 0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Fixed 17-significant-digit formatting; output JSON is byte-stable for
// identical inputs.
std::string format_float(double v);

// Everything a run needs to be reproduced; embedded in every output.
struct RunConfig {
  std::string command;      // hopf | defects | link | current | field | demo
  std::string field;        // field constructor name ("" when not used)
  std::string field_params; // JSON object with constructor parameters
  GridSpec grid;
  std::string backend;      // quadrature | montecarlo | crossing | intersection
  std::uint64_t seed = 1;
  long long samples = 1000000;
  int resolution = 256;
  double tolerance = 0.2;
  int threads = 1;  // accepted for interface compatibility; execution is serial
};

RunConfig run_config_from_json(const std::string& text);
std::string to_json(const RunConfig& cfg);

// Field constructors by name. Known names:
//   "hopf"       params: {"p": [px, py, pz]}   (default p = (1, 0, 0))
//   "milnor"     params: {"tag": "u2_minus_v2" | "z1z2" | "z1sq"}
R2Field make_field(const std::string& name, const std::string& params_json);
std::vector<std::string> known_fields();

// Lattice container: "HLLAT1\n", u32 header length, JSON header (grid spec,
// component count), little-endian f64 node values, row-major x-fastest.
void write_lattice(const std::string& path, const GridSpec& grid,
                   const std::vector<double>& values, int components);
struct LatticeFile {
  GridSpec grid;
  int components = 0;
  std::vector<double> values;
};
LatticeFile read_lattice(const std::string& path);

// Curves: JSON (vertices + winding data) and OBJ with `l` polyline elements.
std::string curves_to_json(const std::vector<DefectCurve>& curves,
                           const RunConfig& cfg);
std::string curves_to_obj(const std::vector<DefectCurve>& curves);

// Manifold specs:
//   {"type": "circle", "center": [...], "f1": [...], "f2": [...], "radius": r}
//   {"type": "torus_curve", "R": .., "r": .., "q": .., "phase": ..}
//   {"type": "polyline", "vertices": [[x,y,z], ...]}
//   {"type": "sphere", "center": [..], "frame": [[..] x4], "radius": r, "ambient": a}
//   {"type": "sphere_pair_standard", "n": 2|4, "which": "first"|"second"}
ParametricManifold manifold_from_json(const std::string& text);
std::vector<Vec3> polyline_from_obj(const std::string& text);

std::string to_json(const LinkingResult& res, const RunConfig& cfg);

// Versioned two-route report with embedded config.
std::string report_to_json(const PipelineResult& res, const RunConfig& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hopflink
