#pragma once

// Exact-value 3D primitives: vectors, proper rotations, conformal similarities,
// round circles and solid tori.

#include <array>
#include <cmath>

namespace antoine {

struct Vec3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double a, double b, double c) : x1(a), x2(b), x3(c) {}

  constexpr double operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
  constexpr Vec3 operator-() const { return {-x1, -x2, -x3}; }
  constexpr Vec3 operator*(double s) const { return {x1 * s, x2 * s, x3 * s}; }
  constexpr Vec3 operator/(double s) const { return {x1 / s, x2 / s, x3 / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  bool finite() const { return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, a.x1 * b.x2 - a.x2 * b.x1};
}
inline double norm(const Vec3& v) { return std::hypot(v.x1, v.x2, v.x3); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 mul(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
          m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
          m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3};
}
double determinant(const Mat3& m);

/// Proper rotation stored as a unit quaternion (w, x, y, z) with w >= 0.
/// Every constructor and composition renormalizes, so the matrix form stays
/// orthonormal to rounding after arbitrarily long composition chains.
class Rotation3 {
 public:
  Rotation3() = default;

  static Rotation3 identity() { return {}; }
  static Rotation3 from_quaternion(double w, double x, double y, double z);
  /// Right-handed rotation by `angle` about `axis` (need not be unit length).
  static Rotation3 about_axis(const Vec3& axis, double angle);
  /// Minimal rotation taking unit vector `from` onto unit vector `to`.
  static Rotation3 aligning(const Vec3& from, const Vec3& to);

  Vec3 apply(const Vec3& v) const;
  Rotation3 compose(const Rotation3& inner) const;  // this ∘ inner
  Rotation3 inverse() const { return from_quaternion(w_, -x_, -y_, -z_); }
  Mat3 matrix() const;

  std::array<double, 4> quaternion() const { return {w_, x_, y_, z_}; }

 private:
  double w_ = 1.0, x_ = 0.0, y_ = 0.0, z_ = 0.0;
};

/// Orientation-preserving similarity x ↦ scale·rot(x) + shift.
struct Similarity3 {
  double scale = 1.0;
  Rotation3 rot;
  Vec3 shift;

  static Similarity3 identity() { return {}; }
  static Similarity3 rotation(const Rotation3& r) { return {1.0, r, {}}; }
  static Similarity3 translation(const Vec3& t) { return {1.0, Rotation3::identity(), t}; }
};

Vec3 sim_apply(const Similarity3& s, const Vec3& p);
/// a ∘ b.
Similarity3 sim_compose(const Similarity3& a, const Similarity3& b);
Similarity3 sim_invert(const Similarity3& s);
/// Unique fixed point; throws NoUniqueFixedPoint when scale == 1.
Vec3 sim_fixed_point(const Similarity3& s);

struct Circle3 {
  Vec3 center;
  double radius = 1.0;
  Vec3 normal{0.0, 0.0, 1.0};

  /// Orthonormal in-plane basis (u, v) with u × v = normal.
  std::array<Vec3, 2> plane_basis() const;
  /// Point at parameter s in [0, 2π), counterclockwise about the normal.
  Vec3 point(double s) const;
  /// Unit tangent at parameter s.
  Vec3 tangent(double s) const;
};

struct SolidTorus {
  Circle3 core;
  double tube = 0.5;
};

Circle3 sim_apply(const Similarity3& s, const Circle3& c);
SolidTorus sim_apply(const Similarity3& s, const SolidTorus& t);

double point_circle_distance(const Circle3& c, const Vec3& p);

enum class Membership { Inside, Boundary, Outside };

inline constexpr double kBoundaryTolerance = 1e-12;

Membership torus_contains(const SolidTorus& t, const Vec3& p, double tol = kBoundaryTolerance);

/// Certified two-sided bounds on an extremum of a Lipschitz function on a
/// circle parameter. `lower` <= true value <= `upper` for a minimum, and the
/// reverse bracket for a maximum.
struct ExtremumBounds {
  double lower = 0.0;
  double upper = 0.0;
  double argument = 0.0;  // parameter of the best sample
};

/// Bounds on min over s of dist(a(s), b). Refines a grid_n-sample grid by
/// branch and bound; f(s) = dist(a(s), b) is radius(a)-Lipschitz in s.
ExtremumBounds circle_circle_distance_bounds(const Circle3& a, const Circle3& b, int grid_n);

/// Certified lower bound on the minimum distance between two circles.
double circle_circle_distance(const Circle3& a, const Circle3& b, int grid_n);

/// Bounds on max over s of dist(a(s), b).
ExtremumBounds circle_max_distance_bounds(const Circle3& a, const Circle3& b, int grid_n);

// Coordinate maps used by the construction.

/// Rotation about the x3-axis by `angle`.
Rotation3 rotation_about_x3(double angle);
/// Rotation by π about the x1-axis: (x1, x2, x3) ↦ (x1, −x2, −x3).
Rotation3 half_turn_about_x1();

struct Cylindrical {
  double r = 0.0;
  double theta = 0.0;
  double x3 = 0.0;
};
Cylindrical to_cylindrical(const Vec3& p);
Vec3 from_cylindrical(const Cylindrical& c);

}  // namespace antoine
