#pragma once

// File formats and exporters: JSON reports, stage meshes (OBJ / PLY),
// escape-depth volume grids (.vol + JSON sidecar) and point clouds.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "antoine/dynamics.hpp"
#include "antoine/linking.hpp"
#include "antoine/necklace.hpp"

namespace antoine {

using Json = nlohmann::ordered_json;

/// printf("%.17g"): enough digits to round-trip any double.
std::string format_double(double v);

Json to_json(const Vec3& v);
Json to_json(const Address& a);
Json to_json(const CheckRecord& c);
Json to_json(const ValidationReport& r);
Json to_json(const LinkMatrix& lm);
Json to_json(const EscapeOutcome& e);
Json to_json(const PeriodicPoint& p);
Json to_json(const OrbitRecord& o);
Json necklace_json(const Necklace& n);

// ---------------------------------------------------------------- meshes

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;  // 0-based
};

/// nu segments around the core, nv around the tube; outward-facing triangles.
TriangleMesh torus_mesh(const SolidTorus& t, int nu, int nv);

struct MeshStage {
  int k = 0;
  int nu = 0;
  int nv = 0;
  std::vector<Address> addresses;
  std::vector<TriangleMesh> meshes;
};

inline constexpr double kMaxExportTori = 1e6;

/// One mesh per stage-k torus. Throws TooManyTori past 10⁶ tori.
MeshStage mesh_stage(const Necklace& n, int k, int nu, int nv);

struct MeshCheck {
  bool watertight = false;             // every undirected edge in exactly 2 triangles
  bool consistently_oriented = false;  // every directed edge used once
  double signed_volume = 0.0;
  long euler_characteristic = 0;
};

MeshCheck check_mesh(const TriangleMesh& mesh);

enum class MeshFormat { Obj, Ply };

void write_obj(std::ostream& out, const Necklace& n, const MeshStage& stage);
void write_ply(std::ostream& out, const Necklace& n, const MeshStage& stage);
/// Objects of an OBJ file written by write_obj, indices rebased per object.
std::vector<TriangleMesh> read_obj(std::istream& in);

void export_mesh(const Necklace& n, int k, int nu, int nv, MeshFormat format, const std::filesystem::path& path);

// ---------------------------------------------------------------- volumes

inline constexpr std::uint16_t kVoxelSurvived = 0xFFFF;
inline constexpr std::uint16_t kVoxelExterior = 0xFFFE;
inline constexpr int kMaxGridDim = 1024;

struct Box3 {
  Vec3 lo{-1.6, -1.6, -1.6};
  Vec3 hi{1.6, 1.6, 1.6};
};

struct VolumeGrid {
  std::array<int, 3> dims{};
  Box3 box;
  int budget = kDefaultBudget;
  std::vector<std::uint16_t> values;  // x fastest, then y, then z

  Vec3 voxel_center(int i, int j, int k) const;
  std::uint16_t at(int i, int j, int k) const {
    return values[static_cast<std::size_t>((k * dims[1] + j) * dims[0] + i)];
  }
};

std::uint16_t encode_outcome(const EscapeOutcome& e);

VolumeGrid classify_grid(const Necklace& n, std::array<int, 3> dims, const Box3& box, int budget,
                         double tol = kBoundaryTolerance);

void write_volume(std::ostream& out, const VolumeGrid& grid);
Json volume_sidecar(const Necklace& n, const VolumeGrid& grid, std::uint64_t seed);
std::vector<std::uint16_t> read_volume(std::istream& in, std::size_t count);

/// Writes `path` and `path.json`.
void export_volume(const Necklace& n, std::array<int, 3> dims, const Box3& box, int budget, std::uint64_t seed,
                   const std::filesystem::path& path);

// ---------------------------------------------------------------- points

enum class PointFormat { Xyz, Csv };

void write_points(std::ostream& out, const std::vector<Vec3>& points, PointFormat format);

/// Writes `path` and `path.json` with the regeneration parameters.
void export_points(const std::vector<Vec3>& points, PointFormat format, const Json& params,
                   const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace antoine
