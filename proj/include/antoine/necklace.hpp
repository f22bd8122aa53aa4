#pragma once

// The geometrically self-similar necklace: the stage-0 solid torus around the
// unit circle, m linked child circles, and the similarities carrying the
// stage-0 core onto each child core.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "antoine/geom3.hpp"
#include "antoine/linking.hpp"
#include "antoine/rng.hpp"

namespace antoine {

/// Smallest even multiplicity for which every construction check passes.
inline constexpr int kMinimalMultiplicity = 38;

/// Finite word over {1..m}; digit i selects child i.
struct Address {
  std::vector<int> digits;

  std::size_t size() const { return digits.size(); }
  bool empty() const { return digits.empty(); }
  Address operator+(const Address& o) const {
    Address out = *this;
    out.digits.insert(out.digits.end(), o.digits.begin(), o.digits.end());
    return out;
  }
  bool operator==(const Address&) const = default;
};

struct Necklace {
  int m = 0;
  SolidTorus t0;                          // core τ0 = unit circle in x3 = 0, tube 8/m
  std::vector<Circle3> circles;           // τ1..τm, index j−1
  std::vector<Similarity3> sims;          // φ1..φm, scale 4/m
  std::vector<Similarity3> inverse_sims;  // φj⁻¹
  double child_tube = 0.0;                // 32/m²
  bool even_square = false;               // m = d² with d even

  double ratio() const { return 4.0 / m; }
  SolidTorus child(int j) const { return {circles[static_cast<std::size_t>(j - 1)], child_tube}; }
  const Similarity3& sim(int j) const { return sims[static_cast<std::size_t>(j - 1)]; }
  const Similarity3& inverse_sim(int j) const { return inverse_sims[static_cast<std::size_t>(j - 1)]; }
};

/// Throws InvalidMultiplicity unless m is even and at least 10.
Necklace build_necklace(int m);

/// Angle of the j-th child center on the unit circle.
double child_angle(int m, int j);

/// ρ: rotation about the x3-axis by 4π/m.
Rotation3 necklace_rotation(int m);

struct CheckRecord {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  double tolerance = 0.0;
};

struct ValidationOptions {
  int grid_n = 256;
  int poly_n = kDefaultPolyN;
  int quad_n = kDefaultQuadN;
  std::uint64_t seed = kDefaultSeed;
  bool linking = true;
};

struct ValidationReport {
  int m = 0;
  std::vector<CheckRecord> checks;
  double tube = 0.0;
  double child_tube = 0.0;
  double min_pair_clearance = 0.0;     // min over pairs of certified core distance − 2·child_tube
  double containment_clearance = 0.0;  // min over children of 8/m − child_tube − max dist to τ0
  std::optional<LinkMatrix> links;

  bool pass() const;
  const CheckRecord* find(const std::string& name) const;
};

ValidationReport validate(const Necklace& n, const ValidationOptions& opts = {});

/// Smallest even m in [10, max_m] whose necklace validates, if any.
std::optional<int> minimal_valid_multiplicity(int max_m, const ValidationOptions& opts = {});

/// φ_{a1} ∘ … ∘ φ_{ak}; identity for the empty address.
Similarity3 compose_address(const Necklace& n, const Address& a);
SolidTorus torus_at(const Necklace& n, const Address& a);

/// Child j whose solid torus contains p (within tol), or none. Throws
/// MultipleChildren if more than one child claims p.
std::optional<int> locate_child(const Necklace& n, const Vec3& p, double tol = kBoundaryTolerance);

struct StageSummary {
  int k = 0;
  double count = 0.0;  // m^k
  double max_diameter = 0.0;
};

double stage_diameter(const Necklace& n, int k);
StageSummary stage_summary(const Necklace& n, int k);

void check_address(const Necklace& n, const Address& a);

}  // namespace antoine
