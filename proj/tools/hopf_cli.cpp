// Command-line front end; talks to the core exclusively through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hopflink.h"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string field = "hopf";
  std::string field_params;
  int grid = 64;
  double box = 8.0;
  std::string backend;
  std::uint64_t seed = 1;
  long long samples = 1000000;
  int resolution = 256;
  double tolerance = 0.2;
  int threads = 1;
  std::string report;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--field", o.field, "field constructor name");
  cmd->add_option("--param", o.field_params, "field parameters (JSON object)");
  cmd->add_option("--grid", o.grid, "nodes per axis");
  cmd->add_option("--box", o.box, "half-width L of the box [-L, L]^3");
  cmd->add_option("--backend", o.backend, "numeric backend");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
  cmd->add_option("--resolution", o.resolution, "quadrature/oracle resolution");
  cmd->add_option("--tolerance", o.tolerance, "consistency tolerance");
  cmd->add_option("--threads", o.threads,
                  "accepted for compatibility; execution is serial");
  cmd->add_option("--report", o.report, "write output JSON to this path");
}

std::string config_json(const CommonOpts& o, const std::string& command) {
  json grid = {{"box_min", {-o.box, -o.box, -o.box}},
               {"box_max", {o.box, o.box, o.box}},
               {"nodes", {o.grid, o.grid, o.grid}}};
  json cfg = {{"command", command},
              {"field", o.field},
              {"field_params",
               o.field_params.empty() ? json::object() : json::parse(o.field_params)},
              {"grid", grid},
              {"backend", o.backend},
              {"seed", o.seed},
              {"samples", o.samples},
              {"resolution", o.resolution},
              {"tolerance", o.tolerance},
              {"threads", o.threads}};
  return cfg.dump();
}

int emit(const std::string& text, const std::string& report_path) {
  if (report_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(report_path, std::ios::binary);
    f << text;
    if (!f) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return 1;
    }
  }
  return 0;
}

// Frees the C string and returns a std::string copy.
std::string take(char* s) {
  std::string out = s ? s : "";
  hl_free_string(s);
  return out;
}

int fail_with(int status) {
  std::cerr << "error: " << hl_last_error() << "\n";
  return status == HL_ERR_INVALID_ARGUMENT ? 2 : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CLI::ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Manifold argument: inline JSON, a .json file, or an .obj polyline file.
std::string manifold_spec(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  const std::string text = read_file(arg);
  if (arg.size() > 4 && arg.substr(arg.size() - 4) == ".obj") {
    json spec = {{"type", "obj"}, {"text", text}};
    return spec.dump();
  }
  return text;
}

// --- demo suite -------------------------------------------------------------

struct DemoCase {
  std::string name;
  std::string description;
};

const std::vector<DemoCase> kDemos = {
    {"link-circles-quadrature", "standard circle pair, Gauss quadrature"},
    {"link-circles-crossing", "standard circle pair, crossing oracle"},
    {"link-spheres-intersection", "standard 3-sphere pair, disk oracle"},
    {"current-conservation", "lifted unit field current is divergence-free"},
    {"hopf-two-routes", "direct integral vs defect-link sum"},
};

bool run_demo(const std::string& name, std::string& detail) {
  CommonOpts o;
  if (name == "link-circles-quadrature" || name == "link-circles-crossing") {
    o.backend = name == "link-circles-quadrature" ? "quadrature" : "crossing";
    o.resolution = 256;
    const json p = {{"type", "sphere_pair_standard"}, {"n", 2}, {"which", "first"}};
    const json q = {{"type", "sphere_pair_standard"}, {"n", 2}, {"which", "second"}};
    char* out = nullptr;
    if (hl_link_compute(config_json(o, "link").c_str(), p.dump().c_str(),
                        q.dump().c_str(), &out) != HL_OK) {
      detail = hl_last_error();
      return false;
    }
    const json r = json::parse(take(out));
    detail = "value " + r["value"].dump() + ", rounded " + r["rounded"].dump();
    return std::llabs(r["rounded"].get<long long>()) == 1 &&
           r["reliable"].get<bool>();
  }
  if (name == "link-spheres-intersection") {
    o.backend = "intersection";
    o.resolution = 24;
    const json p = {{"type", "sphere_pair_standard"}, {"n", 4}, {"which", "first"}};
    const json q = {{"type", "sphere_pair_standard"}, {"n", 4}, {"which", "second"}};
    char* out = nullptr;
    if (hl_link_compute(config_json(o, "link").c_str(), p.dump().c_str(),
                        q.dump().c_str(), &out) != HL_OK) {
      detail = hl_last_error();
      return false;
    }
    const json r = json::parse(take(out));
    detail = "rounded " + r["rounded"].dump();
    return std::llabs(r["rounded"].get<long long>()) == 1;
  }
  if (name == "current-conservation") {
    o.backend = "unitsphere";
    o.grid = 48;
    char* out = nullptr;
    if (hl_current_run(config_json(o, "current").c_str(), &out) != HL_OK) {
      detail = hl_last_error();
      return false;
    }
    const json r = json::parse(take(out));
    detail = "div residual " + r["divergence_residual"].dump();
    return r["divergence_residual"].get<double>() < 1.0;
  }
  if (name == "hopf-two-routes") {
    o.grid = 64;
    o.tolerance = 0.35;  // 64^3 discretization error of the direct route
    char* out = nullptr;
    if (hl_hopf_run(config_json(o, "hopf").c_str(), &out) != HL_OK) {
      detail = hl_last_error();
      return false;
    }
    const json r = json::parse(take(out));
    detail = "H_direct " + r["summary"]["H_direct"].dump() + ", H_links " +
             r["summary"]["H_links"].dump();
    return r["summary"]["consistent"].get<bool>() &&
           r["summary"]["integer_match"].get<bool>();
  }
  detail = "unknown demo";
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Defect extraction, linking numbers, and the two-route Hopf "
               "invariant check"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string out_path, obj_path, p_arg, q_arg;
  bool demo_list = false;

  auto* demo = app.add_subcommand("demo", "run the canonical verification suite");
  demo->add_flag("--list", demo_list, "list demo cases and exit");

  auto* field = app.add_subcommand("field", "sample a field to a lattice file");
  add_common(field, o);
  field->add_option("--out", out_path, "lattice output path")->required();

  auto* current = app.add_subcommand(
      "current", "build the topological current and check conservation");
  add_common(current, o);

  auto* defects =
      app.add_subcommand("defects", "extract defect curves with windings");
  add_common(defects, o);
  defects->add_option("--obj", obj_path, "also write an OBJ polyline export");

  auto* link = app.add_subcommand("link", "linking number of two manifolds");
  add_common(link, o);
  link->add_option("--p", p_arg, "first manifold (JSON, .json, or .obj)")
      ->required();
  link->add_option("--q", q_arg, "second manifold (JSON, .json, or .obj)")
      ->required();

  auto* hopf = app.add_subcommand("hopf", "two-route invariant evaluation");
  add_common(hopf, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (demo->parsed()) {
      if (demo_list) {
        for (const auto& d : kDemos)
          std::cout << d.name << "  -  " << d.description << "\n";
        return 0;
      }
      bool all_ok = true;
      for (const auto& d : kDemos) {
        std::string detail;
        const bool ok = run_demo(d.name, detail);
        all_ok = all_ok && ok;
        std::printf("%-28s %s  (%s)\n", d.name.c_str(), ok ? "PASS" : "FAIL",
                    detail.c_str());
      }
      return all_ok ? 0 : 1;
    }
    if (field->parsed()) {
      if (hl_field_sample(config_json(o, "field").c_str(), out_path.c_str()) !=
          HL_OK)
        return fail_with(HL_ERR_INVALID_ARGUMENT);
      return 0;
    }
    if (current->parsed()) {
      char* out = nullptr;
      const int st = hl_current_run(config_json(o, "current").c_str(), &out);
      if (st != HL_OK) return fail_with(st);
      return emit(take(out), o.report);
    }
    if (defects->parsed()) {
      char *curves = nullptr, *obj = nullptr;
      const int st = hl_defects_extract(config_json(o, "defects").c_str(),
                                        &curves, obj_path.empty() ? nullptr : &obj);
      if (st != HL_OK) return fail_with(st);
      if (!obj_path.empty()) {
        std::ofstream f(obj_path, std::ios::binary);
        f << take(obj);
      }
      return emit(take(curves), o.report);
    }
    if (link->parsed()) {
      if (o.backend.empty()) o.backend = "quadrature";
      char* out = nullptr;
      const int st =
          hl_link_compute(config_json(o, "link").c_str(),
                          manifold_spec(p_arg).c_str(),
                          manifold_spec(q_arg).c_str(), &out);
      if (st != HL_OK) return fail_with(st);
      return emit(take(out), o.report);
    }
    if (hopf->parsed()) {
      char* out = nullptr;
      const int st = hl_hopf_run(config_json(o, "hopf").c_str(), &out);
      if (st != HL_OK) return fail_with(st);
      const std::string text = take(out);
      const int rc = emit(text, o.report);
      if (rc != 0) return rc;
      return json::parse(text)["summary"]["consistent"].get<bool>() ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
