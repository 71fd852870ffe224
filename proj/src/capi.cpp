#include "hopflink.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hopflink/io.hpp"

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return HL_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return HL_ERR_INVALID_ARGUMENT;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return HL_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    const std::string msg = e.what();
    if (msg.find("cannot open") != std::string::npos ||
        msg.find("write failed") != std::string::npos ||
        msg.find("truncated") != std::string::npos)
      return HL_ERR_IO;
    return HL_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HL_ERR_INTERNAL;
  }
}

hopflink::RunConfig parse_config(const char* config_json) {
  if (!config_json) throw std::invalid_argument("config_json is NULL");
  return hopflink::run_config_from_json(config_json);
}

}  // namespace

struct hl_field {
  hopflink::R2Field fn;
};

extern "C" {

const char* hl_version(void) { return hopflink::kArtifactVersion; }

const char* hl_last_error(void) { return g_last_error.c_str(); }

void hl_free_string(char* s) { std::free(s); }

int hl_field_create(const char* name, const char* params_json, hl_field** out) {
  return guarded([&] {
    if (!name || !out) throw std::invalid_argument("NULL argument");
    auto f = new hl_field{hopflink::make_field(name, params_json ? params_json : "")};
    *out = f;
  });
}

int hl_field_eval(const hl_field* f, const double xyz[3], double out_phi[2]) {
  return guarded([&] {
    if (!f || !xyz || !out_phi) throw std::invalid_argument("NULL argument");
    const hopflink::Vec2 v = f->fn({xyz[0], xyz[1], xyz[2]});
    out_phi[0] = v[0];
    out_phi[1] = v[1];
  });
}

void hl_field_destroy(hl_field* f) { delete f; }

int hl_list_fields(char** out_json) {
  return guarded([&] {
    if (!out_json) throw std::invalid_argument("NULL argument");
    std::string s = "[";
    bool first = true;
    for (const auto& n : hopflink::known_fields()) {
      if (!first) s += ", ";
      first = false;
      s += "\"" + n + "\"";
    }
    s += "]";
    *out_json = dup_string(s);
  });
}

int hl_field_sample(const char* config_json, const char* out_path) {
  return guarded([&] {
    if (!out_path) throw std::invalid_argument("out_path is NULL");
    const auto cfg = parse_config(config_json);
    const auto field = hopflink::make_field(cfg.field, cfg.field_params);
    const auto lat = hopflink::sample(field, cfg.grid);
    std::vector<double> flat(lat.values.size() * 2);
    for (std::size_t i = 0; i < lat.values.size(); ++i) {
      flat[2 * i] = lat.values[i][0];
      flat[2 * i + 1] = lat.values[i][1];
    }
    hopflink::write_lattice(out_path, cfg.grid, flat, 2);
  });
}

int hl_defects_extract(const char* config_json, char** out_curves_json,
                       char** out_obj) {
  return guarded([&] {
    if (!out_curves_json) throw std::invalid_argument("out_curves_json is NULL");
    const auto cfg = parse_config(config_json);
    const auto field = hopflink::make_field(cfg.field, cfg.field_params);
    auto lat = hopflink::sample(field, cfg.grid);
    auto curves = hopflink::extract_zero_curves(lat);
    const double h = cfg.grid.max_spacing();
    for (auto& c : curves) {
      hopflink::orient_by_current(c, lat);
      hopflink::attach_winding(c, lat, 3, 3.0 * h);
    }
    *out_curves_json = dup_string(hopflink::curves_to_json(curves, cfg));
    if (out_obj) *out_obj = dup_string(hopflink::curves_to_obj(curves));
  });
}

int hl_link_compute(const char* config_json, const char* manifold_p_json,
                    const char* manifold_q_json, char** out_json) {
  return guarded([&] {
    if (!manifold_p_json || !manifold_q_json || !out_json)
      throw std::invalid_argument("NULL argument");
    const auto cfg = parse_config(config_json);
    const auto P = hopflink::manifold_from_json(manifold_p_json);
    const auto Q = hopflink::manifold_from_json(manifold_q_json);

    hopflink::LinkingResult res;
    if (cfg.backend == "quadrature") {
      res = hopflink::gauss_linking_quadrature(P, Q, cfg.resolution);
    } else if (cfg.backend == "montecarlo") {
      res = hopflink::gauss_linking_montecarlo(P, Q, cfg.samples, cfg.seed);
    } else if (cfg.backend == "crossing") {
      const auto pv = hopflink::sample_polyline(P, cfg.resolution);
      const auto qv = hopflink::sample_polyline(Q, cfg.resolution);
      res.method = "crossing";
      res.rounded = hopflink::polyline_linking_exact(pv, qv);
      res.value = double(res.rounded);
      res.samples = cfg.resolution;
      res.reliable = true;
    } else if (cfg.backend == "intersection") {
      // the disk spanning Q is only known for the standard sphere pairs
      const auto qspec = nlohmann::json::parse(manifold_q_json);
      if (qspec.value("type", "") != "sphere_pair_standard")
        throw std::invalid_argument(
            "intersection backend needs a sphere_pair_standard Q spec");
      const auto pair = hopflink::sphere_pair_standard(qspec.at("n").get<int>());
      res.method = "intersection";
      res.rounded = hopflink::intersection_linking(P, pair.second_disk,
                                                   cfg.resolution);
      res.value = double(res.rounded);
      res.samples = cfg.resolution;
      res.reliable = true;
    } else {
      throw std::invalid_argument("unknown backend '" + cfg.backend + "'");
    }
    *out_json = dup_string(hopflink::to_json(res, cfg));
  });
}

int hl_current_run(const char* config_json, char** out_json) {
  return guarded([&] {
    if (!out_json) throw std::invalid_argument("out_json is NULL");
    const auto cfg = parse_config(config_json);
    const auto field = hopflink::make_field(cfg.field, cfg.field_params);

    hopflink::CurrentLattice j;
    double masked_fraction = 0.0;
    if (cfg.backend.empty() || cfg.backend == "unitsphere") {
      const auto nl = hopflink::sample(hopflink::lift_to_sphere(field), cfg.grid);
      j = hopflink::pullback_volume(nl);
    } else if (cfg.backend == "direction") {
      const auto phil = hopflink::sample(field, cfg.grid);
      const auto m = hopflink::normalize_phi(phil);
      std::size_t masked = 0;
      for (auto v : m.mask) masked += (v == 0);
      masked_fraction = double(masked) / double(m.mask.size());
      const auto omega = hopflink::omega_from_direction(m);
      j = hopflink::current_from_omega(omega);
    } else {
      throw std::invalid_argument("current route must be direction|unitsphere");
    }
    const auto div = hopflink::divergence(j);
    const double bmass = hopflink::boundary_mass_fraction(j);
    const auto omega_t = hopflink::solve_omega_coulomb(j);
    const double omega_div = hopflink::divergence(omega_t).max_interior;

    std::string s = "{\"schema_version\": 1, \"artifact\": \"";
    s += hopflink::kArtifactVersion;
    s += "\", \"config\": " + hopflink::to_json(cfg);
    s += ", \"route\": \"" +
         (cfg.backend.empty() ? std::string("unitsphere") : cfg.backend) + "\"";
    s += ", \"divergence_residual\": " + hopflink::format_float(div.max_interior);
    s += ", \"boundary_mass_fraction\": " + hopflink::format_float(bmass);
    s += ", \"masked_volume_fraction\": " + hopflink::format_float(masked_fraction);
    s += ", \"omega_divergence_residual\": " + hopflink::format_float(omega_div);
    s += "}";
    *out_json = dup_string(s);
  });
}

int hl_hopf_run(const char* config_json, char** out_json) {
  return guarded([&] {
    if (!out_json) throw std::invalid_argument("out_json is NULL");
    const auto cfg = parse_config(config_json);
    const auto field = hopflink::make_field(cfg.field, cfg.field_params);
    hopflink::PipelineOptions opt;
    auto res = hopflink::run_pipeline(field, cfg.grid, opt);
    res.summary = hopflink::reconcile(res.direct, res.links, cfg.tolerance);
    *out_json = dup_string(hopflink::report_to_json(res, cfg));
  });
}

}  // extern "C"
