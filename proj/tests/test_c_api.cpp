#include <doctest.h>

#include <antoine/antoine.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Handle {
  antoine_necklace* n = nullptr;
  explicit Handle(int m) { REQUIRE(antoine_necklace_create(m, &n) == ANTOINE_OK); }
  ~Handle() { antoine_necklace_destroy(n); }
};

json take_json(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  antoine_string_free(s);
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "antoine_c_api_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("create reports invalid multiplicities") {
  antoine_necklace* n = reinterpret_cast<antoine_necklace*>(0x1);
  CHECK(antoine_necklace_create(7, &n) == ANTOINE_ERR_INVALID_MULTIPLICITY);
  CHECK(n == nullptr);
  CHECK(std::string(antoine_last_error()).find("7") != std::string::npos);
  CHECK(antoine_necklace_create(16, nullptr) == ANTOINE_ERR_INVALID_ARGUMENT);
  CHECK(std::string(antoine_status_string(ANTOINE_ERR_TOO_MANY_TORI)) == "too many tori");
}

TEST_CASE("default multiplicity validates") {
  CHECK(antoine_default_multiplicity() == 38);
  Handle h(antoine_default_multiplicity());
  CHECK(antoine_necklace_multiplicity(h.n) == 38);
  int pass = 0;
  char* out = nullptr;
  REQUIRE(antoine_validate(h.n, 0, 0, 1, &pass, &out) == ANTOINE_OK);
  CHECK(pass == 1);
  const json j = take_json(out);
  CHECK(j["validation"]["pass"] == true);
  CHECK(j["link_matrix"]["m"] == 38);
  CHECK(j["link_matrix"]["entries"].size() == 38u * 38u);
  CHECK(std::string(antoine_last_error()).empty());
}

TEST_CASE("minimal multiplicity scan") {
  int m = -1;
  REQUIRE(antoine_minimal_multiplicity(40, &m) == ANTOINE_OK);
  CHECK(m == 38);
  REQUIRE(antoine_minimal_multiplicity(30, &m) == ANTOINE_OK);
  CHECK(m == 0);
}

TEST_CASE("escape depth through the C API") {
  Handle h(38);
  antoine_escape e{};
  const double origin[3] = {0, 0, 0};
  REQUIRE(antoine_escape_depth(h.n, origin, 40, &e) == ANTOINE_OK);
  CHECK(e.kind == ANTOINE_EXTERIOR);
  const double on_core[3] = {1, 0, 0};
  REQUIRE(antoine_escape_depth(h.n, on_core, 40, &e) == ANTOINE_OK);
  CHECK(e.kind == ANTOINE_ESCAPED_AT_DEPTH);
  CHECK(e.depth == 0);
  CHECK(antoine_escape_depth(h.n, on_core, 0, &e) == ANTOINE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("periodic JSON carries round-trip residuals") {
  Handle h(38);
  char* out = nullptr;
  REQUIRE(antoine_periodic_json(h.n, 2, 100000, 1, &out) == ANTOINE_OK);
  const json j = take_json(out);
  CHECK(j["orbits"] == 38 + (38 * 38 - 38) / 2);
  CHECK(j["max_return_residual"].get<double>() <= 1e-9 * (2 + 16.0 / 38));
}

TEST_CASE("dimension JSON") {
  Handle h(38);
  char* out = nullptr;
  REQUIRE(antoine_dimension_json(h.n, 100000, 6, 1, &out) == ANTOINE_OK);
  const json j = take_json(out);
  const double target = j["similarity_dimension"];
  CHECK(std::abs(j["box_dimension"].get<double>() - target) <= 0.15 * target);
}

TEST_CASE("orbit JSON") {
  Handle h(38);
  char* out = nullptr;
  const double p[3] = {3, 0, 0};
  REQUIRE(antoine_orbit_json(h.n, p, 2, 4, 40, &out) == ANTOINE_OK);
  const json j = take_json(out);
  CHECK(j["orbit"]["exterior_norms_modeled"][1] == 9.0);
  CHECK(j["escape"]["kind"] == "Exterior");

  // The origin is pushed out to the radius-2 sphere before the model runs.
  const double origin[3] = {0, 0, 0};
  REQUIRE(antoine_orbit_json(h.n, origin, 2, 4, 40, &out) == ANTOINE_OK);
  const json o = take_json(out);
  CHECK(o["orbit"]["clamped_at_handoff"] == true);
  CHECK(o["orbit"]["exterior_norms_modeled"][0] == 2.0);
  CHECK(antoine_orbit_json(h.n, p, 1, 4, 40, &out) == ANTOINE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("exporters are deterministic") {
  Handle h(38);
  const fs::path v1 = scratch("a.vol"), v2 = scratch("b.vol");
  const int dims[3] = {6, 6, 6};
  const double bbox[6] = {-1.6, -1.6, -1.6, 1.6, 1.6, 1.6};
  REQUIRE(antoine_export_volume(h.n, dims, bbox, 10, 3, v1.c_str()) == ANTOINE_OK);
  REQUIRE(antoine_export_volume(h.n, dims, bbox, 10, 3, v2.c_str()) == ANTOINE_OK);
  CHECK(slurp(v1) == slurp(v2));
  CHECK(fs::exists(v1.string() + ".json"));

  const fs::path m1 = scratch("a.ply");
  CHECK(antoine_export_mesh(h.n, 1, 8, 8, ANTOINE_MESH_PLY, m1.c_str()) == ANTOINE_OK);
  CHECK(antoine_export_mesh(h.n, 5, 8, 8, ANTOINE_MESH_OBJ, m1.c_str()) == ANTOINE_ERR_TOO_MANY_TORI);

  const fs::path p1 = scratch("a.csv"), p2 = scratch("b.csv");
  REQUIRE(antoine_export_points(h.n, 50, 20, 9, ANTOINE_POINTS_CSV, p1.c_str()) == ANTOINE_OK);
  REQUIRE(antoine_export_points(h.n, 50, 20, 9, ANTOINE_POINTS_CSV, p2.c_str()) == ANTOINE_OK);
  CHECK(slurp(p1) == slurp(p2));
  const json side = json::parse(slurp(p1.string() + ".json"));
  CHECK(side["count"] == 50);
  CHECK(side["seed"] == 9);

  const fs::path bad = scratch("missing_dir") / "x" / "y.vol";
  CHECK(antoine_export_volume(h.n, dims, bbox, 10, 3, bad.c_str()) == ANTOINE_ERR_IO);
}
