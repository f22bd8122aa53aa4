// antoine: command-line front end over the C API.
//
// Exit codes: 0 success, 1 validation or runtime failure, 2 usage error.

#include <antoine/antoine.h>

#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  int m = antoine_default_multiplicity();
  std::uint64_t seed = 0x616e746f696e65ULL;  // "antoine"
  int budget = 40;
  int depth = -1;
  int grid = 64;
  std::vector<double> bbox{-1.6, -1.6, -1.6, 1.6, 1.6, 1.6};
  int poly_n = 0;
  int quad_n = 0;
  std::string out;
  std::string format;
  std::size_t count = 100000;
  int p_max = 2;
  std::size_t cap = 100000;
  int nu = 32;
  int nv = 16;
  std::vector<double> point{0.0, 0.0, 0.0};
  int degree = 2;
  int max_iter = 64;
};

struct Failure {
  int code;
};

int exit_code_for(antoine_status s) {
  switch (s) {
    case ANTOINE_OK: return kExitOk;
    case ANTOINE_ERR_INVALID_ARGUMENT:
    case ANTOINE_ERR_INVALID_MULTIPLICITY:
    case ANTOINE_ERR_TOO_MANY_TORI: return kExitUsage;
    default: return kExitFailure;
  }
}

void check(antoine_status s) {
  if (s == ANTOINE_OK) return;
  std::cerr << "antoine: " << antoine_status_string(s);
  if (*antoine_last_error()) std::cerr << ": " << antoine_last_error();
  std::cerr << "\n";
  throw Failure{exit_code_for(s)};
}

void usage_error(const std::string& what) {
  std::cerr << "antoine: " << what << "\n";
  throw Failure{kExitUsage};
}

struct NecklaceDeleter {
  void operator()(antoine_necklace* n) const { antoine_necklace_destroy(n); }
};
using NecklacePtr = std::unique_ptr<antoine_necklace, NecklaceDeleter>;

NecklacePtr make_necklace(int m) {
  antoine_necklace* raw = nullptr;
  check(antoine_necklace_create(m, &raw));
  return NecklacePtr(raw);
}

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { antoine_string_free(s); }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out, std::ios::binary);
  f << text << "\n";
  if (!f) usage_error("cannot write " + out);
}

void require_path(const Options& o) {
  if (o.out.empty()) usage_error("--out is required");
}

int run_build(const Options& o) {
  auto n = make_necklace(o.m);
  OwnedString js;
  check(antoine_necklace_json(n.get(), &js.s));
  emit(js.s, o.out);
  return kExitOk;
}

int run_verify(const Options& o) {
  auto n = make_necklace(o.m);
  int pass = 0;
  OwnedString js;
  check(antoine_validate(n.get(), o.poly_n, o.quad_n, o.seed, &pass, &js.s));
  emit(js.s, o.out);
  return pass ? kExitOk : kExitFailure;
}

int run_classify(const Options& o) {
  require_path(o);
  if (o.format != "" && o.format != "vol") usage_error("classify writes --format vol only");
  auto n = make_necklace(o.m);
  const int dims[3] = {o.grid, o.grid, o.grid};
  check(antoine_export_volume(n.get(), dims, o.bbox.data(), o.budget, o.seed, o.out.c_str()));
  return kExitOk;
}

int run_periodic(const Options& o) {
  auto n = make_necklace(o.m);
  OwnedString js;
  check(antoine_periodic_json(n.get(), o.p_max, o.cap, o.seed, &js.s));
  emit(js.s, o.out);
  return kExitOk;
}

int run_dimension(const Options& o) {
  auto n = make_necklace(o.m);
  OwnedString js;
  check(antoine_dimension_json(n.get(), o.count, o.depth < 0 ? 6 : o.depth, o.seed, &js.s));
  emit(js.s, o.out);
  return kExitOk;
}

int run_export(const Options& o) {
  require_path(o);
  auto n = make_necklace(o.m);
  if (o.format == "obj" || o.format == "ply") {
    check(antoine_export_mesh(n.get(), o.depth < 0 ? 1 : o.depth, o.nu, o.nv,
                              o.format == "ply" ? ANTOINE_MESH_PLY : ANTOINE_MESH_OBJ, o.out.c_str()));
  } else if (o.format == "xyz" || o.format == "csv") {
    check(antoine_export_points(n.get(), o.count, o.depth < 0 ? 20 : o.depth, o.seed,
                                o.format == "csv" ? ANTOINE_POINTS_CSV : ANTOINE_POINTS_XYZ, o.out.c_str()));
  } else if (o.format == "json") {
    OwnedString js;
    check(antoine_necklace_json(n.get(), &js.s));
    emit(js.s, o.out);
  } else if (o.format == "vol") {
    const int dims[3] = {o.grid, o.grid, o.grid};
    check(antoine_export_volume(n.get(), dims, o.bbox.data(), o.budget, o.seed, o.out.c_str()));
  } else {
    usage_error("export needs --format obj|ply|xyz|csv|json|vol");
  }
  return kExitOk;
}

int run_map(const Options& o) {
  auto n = make_necklace(o.m);
  OwnedString js;
  check(antoine_orbit_json(n.get(), o.point.data(), o.degree, o.max_iter, o.budget, &js.s));
  emit(js.s, o.out);
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--m", o.m, "Even multiplicity (>= 10)")->capture_default_str();
  sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", o.out, "Output path ('-' or empty for stdout where allowed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar Antoine necklaces: construction, verification and dynamics"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Print the necklace construction as JSON");
  add_common(build, o);

  auto* verify = app.add_subcommand("verify", "Validate the construction; exit 1 on any failed check");
  add_common(verify, o);
  verify->add_option("--poly-n", o.poly_n, "Polygon vertices per circle (default 512)");
  verify->add_option("--quad-n", o.quad_n, "Gauss quadrature nodes per circle (default 256)");

  auto* classify = app.add_subcommand("classify", "Escape-depth volume grid (.vol + .json sidecar)");
  add_common(classify, o);
  classify->add_option("--grid", o.grid, "Voxels per axis")->capture_default_str();
  classify->add_option("--bbox", o.bbox, "xmin ymin zmin xmax ymax zmax")->expected(6);
  classify->add_option("--budget", o.budget, "Escape-depth budget")->capture_default_str();
  classify->add_option("--format", o.format, "vol");

  auto* periodic = app.add_subcommand("periodic", "Repelling periodic points as JSON");
  add_common(periodic, o);
  periodic->add_option("--p-max,--depth", o.p_max, "Largest period")->capture_default_str();
  periodic->add_option("--cap", o.cap, "Enumeration cap before sampling")->capture_default_str();

  auto* dimension = app.add_subcommand("dimension", "Similarity and box-counting dimension");
  add_common(dimension, o);
  dimension->add_option("--count", o.count, "Chaos-game samples")->capture_default_str();
  dimension->add_option("--depth", o.depth, "Chaos-game depth (default 6)");

  auto* exporter = app.add_subcommand("export", "Export stage meshes, point clouds, JSON or volumes");
  add_common(exporter, o);
  exporter->add_option("--format", o.format, "obj|ply|xyz|csv|json|vol")->required();
  exporter->add_option("--depth", o.depth, "Mesh stage (default 1) or chaos-game depth (default 20)");
  exporter->add_option("--count", o.count, "Point count")->capture_default_str();
  exporter->add_option("--nu", o.nu, "Segments along the core")->capture_default_str();
  exporter->add_option("--nv", o.nv, "Segments around the tube")->capture_default_str();
  exporter->add_option("--grid", o.grid, "Voxels per axis")->capture_default_str();
  exporter->add_option("--bbox", o.bbox, "xmin ymin zmin xmax ymax zmax")->expected(6);
  exporter->add_option("--budget", o.budget, "Escape-depth budget")->capture_default_str();

  auto* map = app.add_subcommand("map", "Orbit of a point under the necklace map");
  add_common(map, o);
  map->add_option("--point", o.point, "x1 x2 x3")->expected(3);
  map->add_option("--degree", o.degree, "Exterior model degree")->capture_default_str();
  map->add_option("--max-iter", o.max_iter, "Iteration cap")->capture_default_str();
  map->add_option("--budget", o.budget, "Escape-depth budget")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return run_build(o);
    if (*verify) return run_verify(o);
    if (*classify) return run_classify(o);
    if (*periodic) return run_periodic(o);
    if (*dimension) return run_dimension(o);
    if (*exporter) return run_export(o);
    if (*map) return run_map(o);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "antoine: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
