#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "hopflink.h"

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  hl_free_string(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kSmallHopfConfig = R"({
  "command": "hopf", "field": "hopf", "field_params": {"p": [1, 0, 0]},
  "grid": {"box_min": [-8, -8, -8], "box_max": [8, 8, 8], "nodes": [64, 64, 64]},
  "tolerance": 5.0, "threads": 1
})";

}  // namespace

TEST_CASE("version and field registry") {
  REQUIRE(hl_version() != nullptr);
  CHECK(std::strlen(hl_version()) > 0);
  char* names = nullptr;
  REQUIRE(hl_list_fields(&names) == HL_OK);
  const std::string list = take(names);
  CHECK(list.find("hopf") != std::string::npos);
  CHECK(list.find("milnor") != std::string::npos);
}

TEST_CASE("field handles evaluate and reject unknown names") {
  hl_field* f = nullptr;
  CHECK(hl_field_create("no_such_field", nullptr, &f) == HL_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(hl_last_error()) > 0);

  REQUIRE(hl_field_create("milnor", R"({"tag": "z1z2"})", &f) == HL_OK);
  double phi[2] = {1, 1};
  const double on_axis[3] = {0.0, 0.0, 2.5};
  REQUIRE(hl_field_eval(f, on_axis, phi) == HL_OK);
  CHECK(std::hypot(phi[0], phi[1]) < 1e-12);
  hl_field_destroy(f);

  REQUIRE(hl_field_create("milnor", R"({"tag": "bogus"})", &f) ==
          HL_ERR_INVALID_ARGUMENT);

  hl_field* a = nullptr;
  hl_field* b = nullptr;
  REQUIRE(hl_field_create("hopf", nullptr, &a) == HL_OK);
  REQUIRE(hl_field_create("hopf", R"({"p": [1, 0, 0]})", &b) == HL_OK);
  double va[2], vb[2];
  const double x[3] = {0.3, -1.2, 0.8};
  REQUIRE(hl_field_eval(a, x, va) == HL_OK);
  REQUIRE(hl_field_eval(b, x, vb) == HL_OK);
  CHECK(va[0] == vb[0]);
  CHECK(va[1] == vb[1]);
  hl_field_destroy(a);
  hl_field_destroy(b);
}

TEST_CASE("malformed config json is an invalid argument") {
  char* out = nullptr;
  CHECK(hl_hopf_run("{not json", &out) == HL_ERR_INVALID_ARGUMENT);
  CHECK(hl_current_run(R"({"grid": {"nodes": [2, 2, 2]}})", &out) ==
        HL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sampled lattice files are byte-identical across runs") {
  const char* cfg = R"({
    "command": "field", "field": "hopf",
    "grid": {"box_min": [-4, -4, -4], "box_max": [4, 4, 4], "nodes": [16, 16, 16]}
  })";
  const std::string p1 = "/tmp/hl_lat_a.bin", p2 = "/tmp/hl_lat_b.bin";
  REQUIRE(hl_field_sample(cfg, p1.c_str()) == HL_OK);
  REQUIRE(hl_field_sample(cfg, p2.c_str()) == HL_OK);
  const std::string a = slurp(p1), b = slurp(p2);
  CHECK(a == b);
  CHECK(a.rfind("HLLAT1\n", 0) == 0);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
  CHECK(hl_field_sample(cfg, "/nonexistent_dir/x.bin") == HL_ERR_IO);
}

TEST_CASE("defect extraction emits curves and obj export") {
  const char* cfg = R"({
    "command": "defects", "field": "milnor", "field_params": {"tag": "u2_minus_v2"},
    "grid": {"box_min": [-6, -6, -6], "box_max": [6, 6, 6], "nodes": [48, 48, 48]}
  })";
  char* curves = nullptr;
  char* obj = nullptr;
  REQUIRE(hl_defects_extract(cfg, &curves, &obj) == HL_OK);
  const std::string cj = take(curves), co = take(obj);
  CHECK(cj.find("\"curves\"") != std::string::npos);
  CHECK(cj.find("\"W\"") != std::string::npos);
  CHECK(co.find("l ") != std::string::npos);
  CHECK(co.rfind("o ", 0) == 0);
  CHECK(co.find("\nv ") != std::string::npos);
}

TEST_CASE("link computation across backends") {
  const char* p = R"({"type": "circle", "center": [0, 0, 0],
                      "f1": [1, 0, 0], "f2": [0, 1, 0], "radius": 1})";
  const char* q = R"({"type": "circle", "center": [1, 0, 0],
                      "f1": [0, 1, 0], "f2": [0, 0, 1], "radius": 1})";
  char* out = nullptr;
  REQUIRE(hl_link_compute(R"({"backend": "crossing"})", p, q, &out) == HL_OK);
  const std::string crossing = take(out);
  CHECK(crossing.find("\"rounded\": ") != std::string::npos);
  REQUIRE(hl_link_compute(R"({"backend": "quadrature", "resolution": 96})", p, q,
                          &out) == HL_OK);
  const std::string quad = take(out);
  // both backends agree on the rounded value
  auto rounded = [](const std::string& s) {
    const auto pos = s.find("\"rounded\": ");
    return s.substr(pos + 11, s.find_first_of(",\n", pos) - pos - 11);
  };
  CHECK(rounded(crossing) == rounded(quad));
  CHECK(hl_link_compute(R"({"backend": "warp"})", p, q, &out) ==
        HL_ERR_INVALID_ARGUMENT);
  CHECK(hl_link_compute(R"({"backend": "quadrature"})", "{\"type\": \"?\"}", q,
                        &out) == HL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("current run reports conservation diagnostics") {
  const char* cfg = R"({
    "command": "current", "field": "hopf", "backend": "direction",
    "grid": {"box_min": [-8, -8, -8], "box_max": [8, 8, 8], "nodes": [32, 32, 32]}
  })";
  char* out = nullptr;
  REQUIRE(hl_current_run(cfg, &out) == HL_OK);
  const std::string s = take(out);
  CHECK(s.find("divergence_residual") != std::string::npos);
  CHECK(s.find("boundary_mass_fraction") != std::string::npos);
  CHECK(s.find("masked_volume_fraction") != std::string::npos);
}

TEST_CASE("full run is byte-stable and reports both routes") {
  char* out1 = nullptr;
  char* out2 = nullptr;
  REQUIRE(hl_hopf_run(kSmallHopfConfig, &out1) == HL_OK);
  REQUIRE(hl_hopf_run(kSmallHopfConfig, &out2) == HL_OK);
  const std::string a = take(out1), b = take(out2);
  CHECK(a == b);
  CHECK(a.find("\"H_direct\"") != std::string::npos);
  CHECK(a.find("\"H_links\": 1") != std::string::npos);
  CHECK(a.find("\"config\"") != std::string::npos);
  CHECK(a.find("\"schema_version\"") != std::string::npos);
  CHECK(a.find("\"artifact\"") != std::string::npos);
}
