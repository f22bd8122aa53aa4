#pragma once

// Small helpers shared by the unit tests: seeded generators and brute-force
// oracles that deliberately avoid the library's own search routines.

#include <cmath>
#include <numbers>
#include <random>

#include "antoine/geom3.hpp"

namespace testing {

using antoine::Vec3;

inline constexpr double kPi = std::numbers::pi;

struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  Vec3 box(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
  Vec3 unit() {
    std::normal_distribution<double> g;
    Vec3 v{g(eng), g(eng), g(eng)};
    return v / antoine::norm(v);
  }
  antoine::Rotation3 rotation() { return antoine::Rotation3::about_axis(unit(), uniform(0.0, 2.0 * kPi)); }
  antoine::Similarity3 similarity(double lo = 0.2, double hi = 3.0) { return {uniform(lo, hi), rotation(), box(2.0)}; }
  antoine::Circle3 circle() { return {box(1.0), uniform(0.2, 2.0), unit()}; }
};

// Circle point from an explicit orthonormal frame built here, not via plane_basis.
inline Vec3 circle_point(const antoine::Circle3& c, double s) {
  const Vec3 helper = std::abs(c.normal.x1) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 u = antoine::normalized(antoine::cross(c.normal, helper));
  const Vec3 v = antoine::cross(c.normal, u);
  return c.center + c.radius * (std::cos(s) * u + std::sin(s) * v);
}

// Distance from p to circle c by dense sampling (an upper estimate of the true distance).
inline double sampled_point_circle(const antoine::Circle3& c, const Vec3& p, int n) {
  double best = INFINITY;
  for (int i = 0; i < n; ++i) best = std::min(best, antoine::distance(p, circle_point(c, 2.0 * kPi * i / n)));
  return best;
}

// Min circle-circle distance by sampling both circles on an n×n grid.
inline double sampled_circle_distance(const antoine::Circle3& a, const antoine::Circle3& b, int n) {
  double best = INFINITY;
  for (int i = 0; i < n; ++i) {
    const Vec3 p = circle_point(a, 2.0 * kPi * i / n);
    for (int j = 0; j < n; ++j) best = std::min(best, antoine::distance(p, circle_point(b, 2.0 * kPi * j / n)));
  }
  return best;
}

inline bool near(const Vec3& a, const Vec3& b, double tol) { return antoine::distance(a, b) <= tol; }

}  // namespace testing
