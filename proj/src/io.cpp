#include "hopflink/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hopflink {

using nlohmann::json;

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// Minimal deterministic JSON writer; nlohmann is used only for parsing so the
// output float formatting stays pinned.
struct Writer {
  std::string out;
  void raw(const std::string& s) { out += s; }
  void key(const std::string& k) {
    out += '"';
    out += k;
    out += "\": ";
  }
  void str(const std::string& s) {
    out += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
  }
  void num(double v) { out += format_float(v); }
  void num(long long v) { out += std::to_string(v); }
  void num(int v) { out += std::to_string(v); }
  void num(std::uint64_t v) { out += std::to_string(v); }
  void boolean(bool b) { out += b ? "true" : "false"; }
  template <typename Seq>
  void num_array(const Seq& seq) {
    out += '[';
    bool first = true;
    for (const auto& v : seq) {
      if (!first) out += ", ";
      first = false;
      num(double(v));
    }
    out += ']';
  }
};

void write_grid(Writer& w, const GridSpec& g) {
  w.raw("{");
  w.key("box_min");
  w.num_array(g.box_min);
  w.raw(", ");
  w.key("box_max");
  w.num_array(g.box_max);
  w.raw(", ");
  w.key("nodes");
  w.raw("[" + std::to_string(g.nodes[0]) + ", " + std::to_string(g.nodes[1]) +
        ", " + std::to_string(g.nodes[2]) + "]");
  w.raw("}");
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  if (j.contains("box_min"))
    for (int a = 0; a < 3; ++a) g.box_min[a] = j["box_min"][a].get<double>();
  if (j.contains("box_max"))
    for (int a = 0; a < 3; ++a) g.box_max[a] = j["box_max"][a].get<double>();
  if (j.contains("nodes"))
    for (int a = 0; a < 3; ++a) g.nodes[a] = j["nodes"][a].get<int>();
  g.validate();
  return g;
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunConfig c;
  if (j.contains("command")) c.command = j["command"].get<std::string>();
  if (j.contains("field")) c.field = j["field"].get<std::string>();
  if (j.contains("field_params")) c.field_params = j["field_params"].dump();
  if (j.contains("grid")) c.grid = grid_from_json(j["grid"]);
  if (j.contains("backend")) c.backend = j["backend"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("samples")) c.samples = j["samples"].get<long long>();
  if (j.contains("resolution")) c.resolution = j["resolution"].get<int>();
  if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  return c;
}

std::string to_json(const RunConfig& c) {
  Writer w;
  w.raw("{");
  w.key("command");
  w.str(c.command);
  w.raw(", ");
  w.key("field");
  w.str(c.field);
  w.raw(", ");
  w.key("field_params");
  w.raw(c.field_params.empty() ? "{}" : json::parse(c.field_params).dump());
  w.raw(", ");
  w.key("grid");
  write_grid(w, c.grid);
  w.raw(", ");
  w.key("backend");
  w.str(c.backend);
  w.raw(", ");
  w.key("seed");
  w.num(c.seed);
  w.raw(", ");
  w.key("samples");
  w.num(c.samples);
  w.raw(", ");
  w.key("resolution");
  w.num(c.resolution);
  w.raw(", ");
  w.key("tolerance");
  w.num(c.tolerance);
  w.raw(", ");
  w.key("threads");
  w.num(c.threads);
  w.raw("}");
  return w.out;
}

R2Field make_field(const std::string& name, const std::string& params_json) {
  const json p = params_json.empty() ? json::object() : json::parse(params_json);
  if (name == "hopf") {
    Vec3 pole{1.0, 0.0, 0.0};
    if (p.contains("p"))
      for (int a = 0; a < 3; ++a) pole[a] = p["p"][a].get<double>();
    return preimage_phi(hopf_unit_field(), pole);
  }
  if (name == "milnor") {
    const std::string tag =
        p.contains("tag") ? p["tag"].get<std::string>() : "u2_minus_v2";
    return milnor_field(milnor_tag_from_string(tag));
  }
  throw std::invalid_argument("make_field: unknown field '" + name +
                              "' (known: hopf, milnor)");
}

std::vector<std::string> known_fields() { return {"hopf", "milnor"}; }

// --- lattice container ------------------------------------------------------

static const char kLatticeMagic[] = "HLLAT1\n";

void write_lattice(const std::string& path, const GridSpec& grid,
                   const std::vector<double>& values, int components) {
  if (values.size() != grid.node_count() * std::size_t(components))
    throw std::invalid_argument("write_lattice: value count mismatch");
  Writer w;
  w.raw("{");
  w.key("grid");
  write_grid(w, grid);
  w.raw(", ");
  w.key("components");
  w.num(components);
  w.raw("}");
  const std::string header = w.out;

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_lattice: cannot open " + path);
  f.write(kLatticeMagic, sizeof(kLatticeMagic) - 1);
  const std::uint32_t hlen = std::uint32_t(header.size());
  f.write(reinterpret_cast<const char*>(&hlen), 4);
  f.write(header.data(), header.size());
  f.write(reinterpret_cast<const char*>(values.data()),
          std::streamsize(values.size() * sizeof(double)));
  if (!f) throw std::runtime_error("write_lattice: write failed for " + path);
}

LatticeFile read_lattice(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_lattice: cannot open " + path);
  char magic[sizeof(kLatticeMagic) - 1];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kLatticeMagic, sizeof(magic)) != 0)
    throw std::runtime_error("read_lattice: bad magic in " + path);
  std::uint32_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), 4);
  std::string header(hlen, '\0');
  f.read(header.data(), hlen);
  const json j = json::parse(header);
  LatticeFile out;
  out.grid = grid_from_json(j["grid"]);
  out.components = j["components"].get<int>();
  out.values.resize(out.grid.node_count() * std::size_t(out.components));
  f.read(reinterpret_cast<char*>(out.values.data()),
         std::streamsize(out.values.size() * sizeof(double)));
  if (!f) throw std::runtime_error("read_lattice: truncated file " + path);
  return out;
}

// --- curves -----------------------------------------------------------------

std::string curves_to_json(const std::vector<DefectCurve>& curves,
                           const RunConfig& cfg) {
  Writer w;
  w.raw("{");
  w.key("schema_version");
  w.num(kReportSchemaVersion);
  w.raw(", ");
  w.key("artifact");
  w.str(kArtifactVersion);
  w.raw(", ");
  w.key("config");
  w.raw(to_json(cfg));
  w.raw(", ");
  w.key("curves");
  w.raw("[");
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (c) w.raw(", ");
    const DefectCurve& cv = curves[c];
    w.raw("{");
    w.key("closed");
    w.boolean(cv.closed);
    w.raw(", ");
    w.key("W");
    w.num(cv.W);
    w.raw(", ");
    w.key("beta");
    w.num(cv.beta);
    w.raw(", ");
    w.key("eta");
    w.num(cv.eta);
    w.raw(", ");
    w.key("length");
    w.num(cv.length());
    w.raw(", ");
    w.key("vertices");
    w.raw("[");
    for (std::size_t i = 0; i < cv.vertices.size(); ++i) {
      if (i) w.raw(", ");
      w.num_array(cv.vertices[i]);
    }
    w.raw("]}");
  }
  w.raw("]}");
  return w.out;
}

std::string curves_to_obj(const std::vector<DefectCurve>& curves) {
  std::string out;
  std::size_t base = 1;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    out += "o curve_" + std::to_string(c) + "\n";
    for (const Vec3& v : curves[c].vertices)
      out += "v " + format_float(v[0]) + " " + format_float(v[1]) + " " +
             format_float(v[2]) + "\n";
    out += "l";
    for (std::size_t i = 0; i < curves[c].vertices.size(); ++i)
      out += " " + std::to_string(base + i);
    if (curves[c].closed) out += " " + std::to_string(base);
    out += "\n";
    base += curves[c].vertices.size();
  }
  return out;
}

// --- manifolds --------------------------------------------------------------

ParametricManifold manifold_from_json(const std::string& text) {
  const json j = json::parse(text);
  const std::string type = j.at("type").get<std::string>();
  if (type == "circle") {
    Vec3 c{}, f1{}, f2{};
    for (int a = 0; a < 3; ++a) {
      c[a] = j.at("center")[a].get<double>();
      f1[a] = j.at("f1")[a].get<double>();
      f2[a] = j.at("f2")[a].get<double>();
    }
    return circle_manifold(c, f1, f2, j.at("radius").get<double>());
  }
  if (type == "torus_curve")
    return torus_curve_manifold(j.at("R").get<double>(), j.at("r").get<double>(),
                                j.at("q").get<int>(),
                                j.value("phase", 0.0));
  if (type == "polyline") {
    std::vector<Vec3> verts;
    for (const auto& v : j.at("vertices"))
      verts.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    return polyline_manifold(verts);
  }
  if (type == "sphere") {
    const int ambient = j.value("ambient", 7);
    AmbientVec c{};
    for (int a = 0; a < ambient; ++a) c[a] = j.at("center")[a].get<double>();
    std::vector<AmbientVec> frame;
    for (const auto& fv : j.at("frame")) {
      AmbientVec f{};
      for (int a = 0; a < ambient; ++a) f[a] = fv[a].get<double>();
      frame.push_back(f);
    }
    return sphere_manifold(c, frame, j.at("radius").get<double>(), ambient);
  }
  if (type == "obj")
    return polyline_manifold(polyline_from_obj(j.at("text").get<std::string>()));
  if (type == "sphere_pair_standard") {
    const SpherePair pair = sphere_pair_standard(j.at("n").get<int>());
    const std::string which = j.value("which", "first");
    if (which == "first") return pair.first;
    if (which == "second") return pair.second;
    throw std::invalid_argument("manifold_from_json: which must be first|second");
  }
  throw std::invalid_argument("manifold_from_json: unknown type '" + type + "'");
}

std::vector<Vec3> polyline_from_obj(const std::string& text) {
  std::vector<Vec3> verts;
  std::vector<std::size_t> order;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 v{};
      ls >> v[0] >> v[1] >> v[2];
      verts.push_back(v);
    } else if (tag == "l") {
      long long idx;
      while (ls >> idx) {
        if (idx < 1 || std::size_t(idx) > verts.size())
          throw std::runtime_error("polyline_from_obj: vertex index out of range");
        order.push_back(std::size_t(idx) - 1);
      }
    }
  }
  if (order.size() < 3)
    throw std::runtime_error("polyline_from_obj: no polyline element found");
  if (order.front() == order.back()) order.pop_back();  // closed seam repeated
  std::vector<Vec3> out;
  for (std::size_t i : order) out.push_back(verts[i]);
  return out;
}

// --- results ----------------------------------------------------------------

std::string to_json(const LinkingResult& res, const RunConfig& cfg) {
  Writer w;
  w.raw("{");
  w.key("schema_version");
  w.num(kReportSchemaVersion);
  w.raw(", ");
  w.key("artifact");
  w.str(kArtifactVersion);
  w.raw(", ");
  w.key("config");
  w.raw(to_json(cfg));
  w.raw(", ");
  w.key("method");
  w.str(res.method);
  w.raw(", ");
  w.key("value");
  w.num(res.value);
  w.raw(", ");
  w.key("rounded");
  w.num(res.rounded);
  w.raw(", ");
  w.key("reliable");
  w.boolean(res.reliable);
  w.raw(", ");
  w.key("error_estimate");
  w.num(res.error_estimate);
  w.raw(", ");
  w.key("samples");
  w.num(res.samples);
  w.raw(", ");
  w.key("seed");
  w.num(res.seed);
  w.raw("}");
  return w.out;
}

std::string report_to_json(const PipelineResult& res, const RunConfig& cfg) {
  Writer w;
  w.raw("{");
  w.key("schema_version");
  w.num(kReportSchemaVersion);
  w.raw(", ");
  w.key("artifact");
  w.str(kArtifactVersion);
  w.raw(", ");
  w.key("config");
  w.raw(to_json(cfg));
  w.raw(", ");

  w.key("direct");
  w.raw("{");
  w.key("H");
  w.num(res.direct.H);
  w.raw(", ");
  w.key("divergence_residual");
  w.num(res.direct.divergence_residual);
  w.raw(", ");
  w.key("boundary_fraction");
  w.num(res.direct.boundary_fraction);
  w.raw("}, ");

  w.key("boundary_deviation");
  w.num(res.boundary_deviation);
  w.raw(", ");
  w.key("extraction");
  w.raw("{");
  w.key("degenerate_tets");
  w.num(res.stats.degenerate_tets);
  w.raw(", ");
  w.key("open_curves");
  w.num(res.stats.open_curves);
  w.raw(", ");
  w.key("discarded_fragments");
  w.num(res.stats.discarded_fragments);
  w.raw(", ");
  w.key("perturbed_nodes");
  w.num(res.stats.perturbed_nodes);
  w.raw(", ");
  w.key("pole_artifacts");
  w.num(res.stats.pole_artifacts);
  w.raw("}, ");

  w.key("curves");
  w.raw("[");
  for (std::size_t c = 0; c < res.links.curves.size(); ++c) {
    if (c) w.raw(", ");
    const CurveSummary& s = res.links.curves[c];
    w.raw("{");
    w.key("W");
    w.num(s.W);
    w.raw(", ");
    w.key("beta");
    w.num(s.beta);
    w.raw(", ");
    w.key("eta");
    w.num(s.eta);
    w.raw(", ");
    w.key("length");
    w.num(s.length);
    w.raw(", ");
    w.key("centroid");
    w.num_array(s.centroid);
    w.raw(", ");
    w.key("self_link");
    w.num(s.self_link);
    w.raw(", ");
    w.key("writhe");
    w.num(s.writhe);
    w.raw("}");
  }
  w.raw("], ");

  w.key("link_table");
  w.raw("[");
  for (std::size_t r = 0; r < res.links.link.size(); ++r) {
    if (r) w.raw(", ");
    w.num_array(res.links.link[r]);
  }
  w.raw("], ");

  w.key("H_links");
  w.num(res.links.H_links);
  w.raw(", ");
  w.key("summary");
  w.raw("{");
  w.key("H_direct");
  w.num(res.summary.H_direct);
  w.raw(", ");
  w.key("H_links");
  w.num(res.summary.H_links);
  w.raw(", ");
  w.key("rounded");
  w.num(res.summary.rounded);
  w.raw(", ");
  w.key("residual");
  w.num(res.summary.residual);
  w.raw(", ");
  w.key("tolerance");
  w.num(res.summary.tolerance);
  w.raw(", ");
  w.key("consistent");
  w.boolean(res.summary.consistent);
  w.raw(", ");
  w.key("integer_match");
  w.boolean(res.summary.integer_match);
  w.raw("}}");
  return w.out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace hopflink
