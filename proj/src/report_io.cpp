#include "antoine/report_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "antoine/error.hpp"
#include "antoine/parallel.hpp"

namespace antoine {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

template <class T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string address_label(const Address& a) {
  std::string s = "torus";
  for (int d : a.digits) s += "_" + std::to_string(d);
  return s;
}

const char* kind_name(EscapeKind k) {
  switch (k) {
    case EscapeKind::Exterior: return "Exterior";
    case EscapeKind::EscapedAtDepth: return "EscapedAtDepth";
    case EscapeKind::SurvivedBudget: return "SurvivedBudget";
  }
  return "?";
}

const char* exit_name(ExitEvent e) {
  switch (e) {
    case ExitEvent::None: return "none";
    case ExitEvent::StartedOutside: return "started_outside_T0";
    case ExitEvent::LeftT0: return "left_T0";
  }
  return "?";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Vec3& v) { return Json::array({v.x1, v.x2, v.x3}); }

Json to_json(const Address& a) { return Json(a.digits); }

Json to_json(const CheckRecord& c) {
  Json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["margin"] = c.margin;
  j["tolerance"] = c.tolerance;
  return j;
}

Json to_json(const ValidationReport& r) {
  Json j;
  j["m"] = r.m;
  j["pass"] = r.pass();
  j["checks"] = Json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  Json constants;
  constants["tube"] = r.tube;
  constants["child_tube"] = r.child_tube;
  constants["min_pair_clearance"] = r.min_pair_clearance;
  constants["containment_clearance"] = r.containment_clearance;
  j["constants"] = constants;
  return j;
}

Json to_json(const LinkMatrix& lm) {
  Json j;
  j["m"] = lm.m;
  j["entries"] = lm.entries;
  j["max_gauss_gap"] = lm.max_gauss_gap;
  return j;
}

Json to_json(const EscapeOutcome& e) {
  Json j;
  j["kind"] = kind_name(e.kind);
  j["depth"] = e.depth;
  j["itinerary"] = to_json(e.itinerary);
  j["saturated"] = e.saturated;
  return j;
}

Json to_json(const PeriodicPoint& p) {
  Json j;
  j["word"] = to_json(p.word);
  j["period"] = p.period;
  j["point"] = to_json(p.point);
  j["multiplier"] = p.multiplier;
  return j;
}

Json to_json(const OrbitRecord& o) {
  Json j;
  j["itinerary"] = to_json(o.itinerary);
  j["exit"] = exit_name(o.exit);
  j["exit_step"] = o.exit_step;
  j["clamped_at_handoff"] = o.clamped;
  j["resolution_exhausted"] = o.resolution_exhausted;
  j["certified_escape"] = o.certified_escape;
  j["exterior_norms_modeled"] = o.exterior_norms;
  return j;
}

Json necklace_json(const Necklace& n) {
  Json j;
  j["m"] = n.m;
  j["even_square"] = n.even_square;
  j["tube"] = n.t0.tube;
  j["child_radius"] = n.ratio();
  j["child_tube"] = n.child_tube;
  j["diameter"] = stage_diameter(n, 0);
  j["similarity_dimension"] = similarity_dimension(n.m);
  j["children"] = Json::array();
  for (int i = 1; i <= n.m; ++i) {
    const Circle3& c = n.circles[static_cast<std::size_t>(i - 1)];
    const auto q = n.sim(i).rot.quaternion();
    Json child;
    child["index"] = i;
    child["center"] = to_json(c.center);
    child["radius"] = c.radius;
    child["normal"] = to_json(c.normal);
    child["similarity"] = {{"scale", n.sim(i).scale},
                           {"rotation_quaternion", Json::array({q[0], q[1], q[2], q[3]})},
                           {"shift", to_json(n.sim(i).shift)}};
    j["children"].push_back(child);
  }
  return j;
}

TriangleMesh torus_mesh(const SolidTorus& t, int nu, int nv) {
  if (nu < 8 || nv < 8) throw Error(ErrorKind::InvalidArgument, "torus tessellation needs nu, nv >= 8");
  const auto [e1, e2] = t.core.plane_basis();
  const Vec3 n = cross(e1, e2);
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nu * nv));
  for (int i = 0; i < nu; ++i) {
    const double u = kTwoPi * i / nu;
    const Vec3 dir = std::cos(u) * e1 + std::sin(u) * e2;
    for (int j = 0; j < nv; ++j) {
      const double v = kTwoPi * j / nv;
      mesh.vertices.push_back(t.core.center + (t.core.radius + t.tube * std::cos(v)) * dir + t.tube * std::sin(v) * n);
    }
  }
  auto idx = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const int a = idx(i, j), b = idx(i + 1, j), c = idx(i + 1, j + 1), d = idx(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  return mesh;
}

MeshStage mesh_stage(const Necklace& n, int k, int nu, int nv) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "stage must be non-negative");
  if (std::pow(static_cast<double>(n.m), k) > kMaxExportTori)
    throw Error(ErrorKind::TooManyTori, "stage " + std::to_string(k) + " has more than 10^6 tori");
  MeshStage stage{k, nu, nv, {}, {}};
  std::vector<int> digits(static_cast<std::size_t>(k), 1);
  for (;;) {
    Address a{digits};
    stage.meshes.push_back(torus_mesh(torus_at(n, a), nu, nv));
    stage.addresses.push_back(std::move(a));
    int pos = k - 1;
    while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == n.m) digits[static_cast<std::size_t>(pos--)] = 1;
    if (pos < 0) break;
    ++digits[static_cast<std::size_t>(pos)];
  }
  return stage;
}

MeshCheck check_mesh(const TriangleMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  MeshCheck check;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++directed[{t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]}];
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(t[2])];
    check.signed_volume += dot(a, cross(b, c)) / 6.0;
  }
  check.watertight = true;
  check.consistently_oriented = true;
  long undirected_edges = 0;
  for (const auto& [edge, count] : directed) {
    const auto rev = directed.find({edge.second, edge.first});
    const int back = rev == directed.end() ? 0 : rev->second;
    if (count != 1 || back != 1) check.consistently_oriented = false;
    if (count + back != 2) check.watertight = false;
    if (edge.first < edge.second || back == 0) ++undirected_edges;
  }
  check.euler_characteristic = static_cast<long>(mesh.vertices.size()) - undirected_edges +
                               static_cast<long>(mesh.triangles.size());
  return check;
}

void write_obj(std::ostream& out, const Necklace& n, const MeshStage& stage) {
  out << "# antoine necklace stage mesh\n";
  out << "# m " << n.m << "\n# stage " << stage.k << "\n# nu " << stage.nu << "\n# nv " << stage.nv << "\n";
  out << "# tori " << stage.meshes.size() << "\n";
  long base = 1;
  for (std::size_t t = 0; t < stage.meshes.size(); ++t) {
    const TriangleMesh& mesh = stage.meshes[t];
    out << "o " << address_label(stage.addresses[t]) << "\n";
    for (const Vec3& v : mesh.vertices)
      out << "v " << format_double(v.x1) << ' ' << format_double(v.x2) << ' ' << format_double(v.x3) << '\n';
    for (const auto& tri : mesh.triangles)
      out << "f " << tri[0] + base << ' ' << tri[1] + base << ' ' << tri[2] + base << '\n';
    base += static_cast<long>(mesh.vertices.size());
  }
}

void write_ply(std::ostream& out, const Necklace& n, const MeshStage& stage) {
  std::size_t nv = 0, nf = 0;
  for (const auto& mesh : stage.meshes) {
    nv += mesh.vertices.size();
    nf += mesh.triangles.size();
  }
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "comment antoine necklace stage mesh\n";
  out << "comment m " << n.m << "\ncomment stage " << stage.k << "\ncomment nu " << stage.nu << "\ncomment nv "
      << stage.nv << "\n";
  out << "element vertex " << nv << "\nproperty double x\nproperty double y\nproperty double z\n";
  out << "element face " << nf << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& mesh : stage.meshes)
    for (const Vec3& v : mesh.vertices) {
      put_le(out, v.x1);
      put_le(out, v.x2);
      put_le(out, v.x3);
    }
  std::int32_t base = 0;
  for (const auto& mesh : stage.meshes) {
    for (const auto& tri : mesh.triangles) {
      put_le(out, static_cast<std::uint8_t>(3));
      for (int i : tri) put_le(out, static_cast<std::int32_t>(i + base));
    }
    base += static_cast<std::int32_t>(mesh.vertices.size());
  }
}

std::vector<TriangleMesh> read_obj(std::istream& in) {
  std::vector<TriangleMesh> meshes;
  long base = 1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("o ", 0) == 0) {
      if (!meshes.empty()) base += static_cast<long>(meshes.back().vertices.size());
      meshes.emplace_back();
    } else if (line.rfind("v ", 0) == 0) {
      if (meshes.empty()) meshes.emplace_back();
      const char* s = line.c_str() + 2;
      char* end = nullptr;
      Vec3 v;
      v.x1 = std::strtod(s, &end);
      v.x2 = std::strtod(end, &end);
      v.x3 = std::strtod(end, &end);
      meshes.back().vertices.push_back(v);
    } else if (line.rfind("f ", 0) == 0) {
      std::istringstream ss(line.substr(2));
      long a, b, c;
      if (!(ss >> a >> b >> c)) throw Error(ErrorKind::Io, "malformed face line: " + line);
      meshes.back().triangles.push_back(
          {static_cast<int>(a - base), static_cast<int>(b - base), static_cast<int>(c - base)});
    }
  }
  return meshes;
}

void export_mesh(const Necklace& n, int k, int nu, int nv, MeshFormat format, const std::filesystem::path& path) {
  const MeshStage stage = mesh_stage(n, k, nu, nv);
  std::ofstream out = open_output(path, format == MeshFormat::Ply);
  if (format == MeshFormat::Obj)
    write_obj(out, n, stage);
  else
    write_ply(out, n, stage);
  finish(out, path);
}

Vec3 VolumeGrid::voxel_center(int i, int j, int k) const {
  const Vec3 span = box.hi - box.lo;
  return {box.lo.x1 + (i + 0.5) * span.x1 / dims[0], box.lo.x2 + (j + 0.5) * span.x2 / dims[1],
          box.lo.x3 + (k + 0.5) * span.x3 / dims[2]};
}

std::uint16_t encode_outcome(const EscapeOutcome& e) {
  switch (e.kind) {
    case EscapeKind::Exterior: return kVoxelExterior;
    case EscapeKind::SurvivedBudget: return kVoxelSurvived;
    case EscapeKind::EscapedAtDepth: return static_cast<std::uint16_t>(e.depth);
  }
  return kVoxelExterior;
}

VolumeGrid classify_grid(const Necklace& n, std::array<int, 3> dims, const Box3& box, int budget, double tol) {
  for (int d : dims)
    if (d < 2 || d > kMaxGridDim) throw Error(ErrorKind::InvalidArgument, "grid dims must lie in [2, 1024]");
  if (!(box.lo.x1 < box.hi.x1 && box.lo.x2 < box.hi.x2 && box.lo.x3 < box.hi.x3))
    throw Error(ErrorKind::InvalidArgument, "bounding box is degenerate");
  if (budget < 1 || budget >= kVoxelExterior) throw Error(ErrorKind::InvalidArgument, "budget out of range");
  VolumeGrid grid{dims, box, budget, {}};
  const std::size_t count = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  grid.values.resize(count);
  parallel_for(count, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % static_cast<std::size_t>(dims[0]));
    const int j = static_cast<int>((idx / static_cast<std::size_t>(dims[0])) % static_cast<std::size_t>(dims[1]));
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(dims[0]) * dims[1]));
    grid.values[idx] = encode_outcome(escape_depth(n, grid.voxel_center(i, j, k), budget, tol));
  });
  return grid;
}

void write_volume(std::ostream& out, const VolumeGrid& grid) {
  for (std::uint16_t v : grid.values) put_le(out, v);
}

std::vector<std::uint16_t> read_volume(std::istream& in, std::size_t count) {
  std::vector<std::uint16_t> values(count);
  for (auto& v : values) {
    unsigned char b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) throw Error(ErrorKind::Io, "volume file truncated");
    v = static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  return values;
}

Json volume_sidecar(const Necklace& n, const VolumeGrid& grid, std::uint64_t seed) {
  Json j;
  j["format"] = "antoine-escape-volume";
  j["version"] = 1;
  j["dims"] = grid.dims;
  j["bbox"] = {{"min", to_json(grid.box.lo)}, {"max", to_json(grid.box.hi)}};
  j["budget"] = grid.budget;
  j["m"] = n.m;
  j["seed"] = seed;
  j["tolerance"] = kBoundaryTolerance;
  j["layout"] = "uint16 little-endian, x fastest, then y, then z; voxel centers";
  j["encoding"] = {{"survived_budget", kVoxelSurvived}, {"exterior", kVoxelExterior}, {"other", "escape depth"}};
  return j;
}

void export_volume(const Necklace& n, std::array<int, 3> dims, const Box3& box, int budget, std::uint64_t seed,
                   const std::filesystem::path& path) {
  const VolumeGrid grid = classify_grid(n, dims, box, budget);
  {
    std::ofstream out = open_output(path, true);
    write_volume(out, grid);
    finish(out, path);
  }
  write_text_file(path.string() + ".json", volume_sidecar(n, grid, seed).dump(2) + "\n");
}

void write_points(std::ostream& out, const std::vector<Vec3>& points, PointFormat format) {
  const char sep = format == PointFormat::Csv ? ',' : ' ';
  for (const Vec3& p : points)
    out << format_double(p.x1) << sep << format_double(p.x2) << sep << format_double(p.x3) << '\n';
}

void export_points(const std::vector<Vec3>& points, PointFormat format, const Json& params,
                   const std::filesystem::path& path) {
  {
    std::ofstream out = open_output(path, false);
    write_points(out, points, format);
    finish(out, path);
  }
  write_text_file(path.string() + ".json", params.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_output(path, false);
  out << text;
  finish(out, path);
}

}  // namespace antoine
