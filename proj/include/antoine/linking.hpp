#pragma once

// Linking numbers of disjoint closed curves, by the Gauss double integral and
// by signed crossings in a generic planar projection.

#include <cstdint>
#include <vector>

#include "antoine/geom3.hpp"
#include "antoine/rng.hpp"

namespace antoine {

struct Necklace;

/// Closed polygon; the last vertex connects back to the first.
struct PolyLoop {
  std::vector<Vec3> vertices;
};

/// Regular n-gon inscribed in the circle, vertices uniform in arc length.
PolyLoop polygonize(const Circle3& c, int n);

/// Trapezoidal Gauss integral on a quad_n × quad_n grid. Throws
/// MinSeparationTooSmall when two samples come closer than 1e-9.
double gauss_linking(const Circle3& a, const Circle3& b, int quad_n);

struct ProjectionResult {
  int linking = 0;
  int retries = 0;  // rejected projection directions before a generic one
  Vec3 direction;
};

/// Signed count of a-over-b crossings along a random generic direction.
/// Throws NoGenericProjection after 64 rejected directions.
ProjectionResult polygonal_linking_detailed(const PolyLoop& a, const PolyLoop& b, std::uint64_t seed);
int polygonal_linking(const PolyLoop& a, const PolyLoop& b, std::uint64_t seed = kDefaultSeed);

/// Pairwise linking numbers of the child core circles. Entries are 0-based in
/// storage; `at` takes 1-based circle indices.
struct LinkMatrix {
  int m = 0;
  std::vector<int> entries;  // row-major m×m
  double max_gauss_gap = 0.0;  // max |gauss − polygonal| over all pairs

  int at(int i, int j) const { return entries[static_cast<std::size_t>((i - 1) * m + (j - 1))]; }
};

inline constexpr int kDefaultPolyN = 512;
inline constexpr int kDefaultQuadN = 256;

LinkMatrix link_matrix(const Necklace& n, int poly_n = kDefaultPolyN, int quad_n = kDefaultQuadN,
                       std::uint64_t seed = kDefaultSeed);

}  // namespace antoine
