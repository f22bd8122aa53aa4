#include "antoine/geom3.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "antoine/error.hpp"

namespace antoine {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Interval {
  double center;
  double half_width;
  double value;
  double lower;
};

struct LowerFirst {
  bool operator()(const Interval& a, const Interval& b) const { return a.lower > b.lower; }
};

// Branch and bound for min over [0, 2π) of a periodic function. `bound(c, h, f(c))`
// must return a valid lower bound for f on [c − h, c + h]; the search stops
// when the smallest outstanding bound is within `gap` of the best value seen.
template <class F, class B>
ExtremumBounds minimize_periodic(F&& f, B&& bound, int grid_n, double gap, int max_evals) {
  const double step = kTwoPi / grid_n;
  std::priority_queue<Interval, std::vector<Interval>, LowerFirst> queue;
  ExtremumBounds out;
  out.upper = std::numeric_limits<double>::infinity();
  int evals = 0;

  auto push = [&](double center, double half, double value) {
    queue.push({center, half, value, bound(center, half, value)});
    if (value < out.upper) {
      out.upper = value;
      out.argument = center;
    }
  };

  for (int i = 0; i < grid_n; ++i) {
    const double s = (i + 0.5) * step;
    push(s, 0.5 * step, f(s));
    ++evals;
  }

  // Golden-section polish around the best sample tightens the upper value,
  // which lets the bound loop discard more intervals.
  {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = out.argument - step;
    double b = out.argument + step;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 80; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = f(d);
      }
    }
    evals += 82;
    const double s = 0.5 * (a + b);
    const double v = f(s);
    if (v < out.upper) {
      out.upper = v;
      out.argument = s;
    }
  }

  out.lower = queue.top().lower;
  while (!queue.empty()) {
    Interval top = queue.top();
    out.lower = top.lower;
    if (top.lower >= out.upper - gap || evals >= max_evals) break;
    queue.pop();
    const double third = top.half_width / 3.0;
    const double left = top.center - 2.0 * third;
    const double right = top.center + 2.0 * third;
    push(top.center, third, top.value);
    push(left, third, f(left));
    push(right, third, f(right));
    evals += 2;
  }
  out.lower = std::min(out.lower, out.upper);
  return out;
}

constexpr int kMaxEvals = 400000;

double refinement_gap(const Circle3& a, const Circle3& b) {
  return 1e-13 + 1e-10 * std::max(a.radius, b.radius);
}

// Distance from γ(s) = a.center + a.radius·(cos s·u + sin s·v) to circle b.
// Besides the Lipschitz bound (constant a.radius) it offers a second-order
// bound through G = f² = |q|² − 2Rρ + R², where q = γ − b.center and ρ is the
// length of q's projection onto b's plane; this converges quadratically at
// smooth minima instead of stalling on the Lipschitz slope.
class DistanceProfile {
 public:
  DistanceProfile(const Circle3& a, const Circle3& b) : b_(b), r_(a.radius) {
    const auto [u, v] = a.plane_basis();
    d0_ = a.center - b.center;
    U_ = a.radius * u;
    V_ = a.radius * v;
    w_ = norm(project(U_)) + norm(project(V_));
  }

  double operator()(double s) const { return point_circle_distance(b_, b_.center + d0_ + std::cos(s) * U_ + std::sin(s) * V_); }

  double lower(double c, double h, double fc) const {
    double lo = fc - r_ * h;
    if (const auto t = taylor(c, h, fc)) lo = std::max(lo, std::sqrt(std::max(0.0, t->first - t->second)));
    return lo;
  }

  double upper(double c, double h, double fc) const {
    double hi = fc + r_ * h;
    if (const auto t = taylor(c, h, fc)) hi = std::min(hi, std::sqrt(t->first + t->second));
    return hi;
  }

 private:
  Vec3 project(const Vec3& x) const { return x - dot(x, b_.normal) * b_.normal; }

  // {G(c), bound on |G(s) − G(c)| over the interval}, or nothing when the
  // interval may touch b's axis, where ρ is not smooth.
  std::optional<std::pair<double, double>> taylor(double c, double h, double fc) const {
    const double cs = std::cos(c), sn = std::sin(c);
    const Vec3 q = d0_ + cs * U_ + sn * V_;
    const Vec3 dq = cs * V_ - sn * U_;
    const Vec3 e = project(q);
    const Vec3 de = project(dq);
    const double rho = norm(e);
    const double rho_min = rho - w_ * h;
    if (!(rho_min > 0.0)) return std::nullopt;
    const double R = b_.radius;
    const double slope = std::abs(2.0 * dot(q, dq) - 2.0 * R * dot(e, de) / rho);
    const double q_max = norm(q) + r_ * h;
    const double curvature = 2.0 * (r_ * r_ + q_max * r_) + 2.0 * R * (2.0 * w_ * w_ / rho_min + w_);
    return std::pair{fc * fc, slope * h + 0.5 * curvature * h * h};
  }

  Circle3 b_;
  double r_;
  Vec3 d0_, U_, V_;
  double w_ = 0.0;
};

}  // namespace

double determinant(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Rotation3 Rotation3::from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::InvalidArgument, "degenerate quaternion");
  Rotation3 r;
  const double sign = w < 0.0 ? -1.0 : 1.0;
  r.w_ = sign * w / n;
  r.x_ = sign * x / n;
  r.y_ = sign * y / n;
  r.z_ = sign * z / n;
  return r;
}

Rotation3 Rotation3::about_axis(const Vec3& axis, double angle) {
  const Vec3 u = normalized(axis);
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return from_quaternion(std::cos(h), s * u.x1, s * u.x2, s * u.x3);
}

Rotation3 Rotation3::aligning(const Vec3& from, const Vec3& to) {
  const Vec3 a = normalized(from);
  const Vec3 b = normalized(to);
  const double c = dot(a, b);
  if (c < -1.0 + 1e-14) {
    // Antiparallel: any axis orthogonal to a works; take the most stable one.
    Vec3 helper = std::abs(a.x1) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    return about_axis(cross(a, helper), std::numbers::pi);
  }
  const Vec3 v = cross(a, b);
  return from_quaternion(1.0 + c, v.x1, v.x2, v.x3);
}

Vec3 Rotation3::apply(const Vec3& v) const {
  const Vec3 q{x_, y_, z_};
  const Vec3 t = 2.0 * cross(q, v);
  return v + w_ * t + cross(q, t);
}

Rotation3 Rotation3::compose(const Rotation3& o) const {
  return from_quaternion(w_ * o.w_ - x_ * o.x_ - y_ * o.y_ - z_ * o.z_,
                         w_ * o.x_ + x_ * o.w_ + y_ * o.z_ - z_ * o.y_,
                         w_ * o.y_ - x_ * o.z_ + y_ * o.w_ + z_ * o.x_,
                         w_ * o.z_ + x_ * o.y_ - y_ * o.x_ + z_ * o.w_);
}

Mat3 Rotation3::matrix() const {
  const double w = w_, x = x_, y = y_, z = z_;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

Vec3 sim_apply(const Similarity3& s, const Vec3& p) { return s.scale * s.rot.apply(p) + s.shift; }

Similarity3 sim_compose(const Similarity3& a, const Similarity3& b) {
  return {a.scale * b.scale, a.rot.compose(b.rot), sim_apply(a, b.shift)};
}

Similarity3 sim_invert(const Similarity3& s) {
  const Rotation3 inv = s.rot.inverse();
  const double k = 1.0 / s.scale;
  return {k, inv, -(k * inv.apply(s.shift))};
}

Vec3 sim_fixed_point(const Similarity3& s) {
  if (s.scale == 1.0) throw Error(ErrorKind::NoUniqueFixedPoint, "similarity with scale 1 has no unique fixed point");
  const Mat3 r = s.rot.matrix();
  // Solve (I − scale·R) x = shift by Gaussian elimination with partial pivoting.
  double a[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = (i == j ? 1.0 : 0.0) - s.scale * r[i][j];
    a[i][3] = s.shift[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int i = col + 1; i < 3; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (a[piv][col] == 0.0) throw Error(ErrorKind::NoUniqueFixedPoint, "singular fixed-point system");
    if (piv != col)
      for (int j = 0; j < 4; ++j) std::swap(a[piv][j], a[col][j]);
    for (int i = col + 1; i < 3; ++i) {
      const double f = a[i][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[i][j] -= f * a[col][j];
    }
  }
  double x[3];
  for (int i = 2; i >= 0; --i) {
    double acc = a[i][3];
    for (int j = i + 1; j < 3; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return {x[0], x[1], x[2]};
}

std::array<Vec3, 2> Circle3::plane_basis() const {
  const Vec3 n = normalized(normal);
  const Vec3 helper = std::abs(n.x3) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 u = normalized(cross(helper, n));
  return {u, cross(n, u)};
}

Vec3 Circle3::point(double s) const {
  const auto [u, v] = plane_basis();
  return center + radius * (std::cos(s) * u + std::sin(s) * v);
}

Vec3 Circle3::tangent(double s) const {
  const auto [u, v] = plane_basis();
  return -std::sin(s) * u + std::cos(s) * v;
}

Circle3 sim_apply(const Similarity3& s, const Circle3& c) {
  return {sim_apply(s, c.center), s.scale * c.radius, s.rot.apply(c.normal)};
}

SolidTorus sim_apply(const Similarity3& s, const SolidTorus& t) {
  return {sim_apply(s, t.core), s.scale * t.tube};
}

double point_circle_distance(const Circle3& c, const Vec3& p) {
  const Vec3 d = p - c.center;
  const double h = dot(d, c.normal);
  const double rho = norm(d - h * c.normal);
  // rho == 0 is the axis case and gives sqrt(radius² + h²) directly.
  return std::hypot(rho - c.radius, h);
}

Membership torus_contains(const SolidTorus& t, const Vec3& p, double tol) {
  const double excess = point_circle_distance(t.core, p) - t.tube;
  if (std::abs(excess) <= tol) return Membership::Boundary;
  return excess < 0.0 ? Membership::Inside : Membership::Outside;
}

ExtremumBounds circle_circle_distance_bounds(const Circle3& a, const Circle3& b, int grid_n) {
  if (grid_n < 8) throw Error(ErrorKind::InvalidArgument, "grid_n must be at least 8");
  // Sample the smaller circle: its radius is the Lipschitz constant.
  const Circle3& sampled = a.radius <= b.radius ? a : b;
  const Circle3& other = a.radius <= b.radius ? b : a;
  const DistanceProfile f(sampled, other);
  auto bound = [&](double c, double h, double fc) { return f.lower(c, h, fc); };
  return minimize_periodic(f, bound, grid_n, refinement_gap(a, b), kMaxEvals);
}

double circle_circle_distance(const Circle3& a, const Circle3& b, int grid_n) {
  return std::max(0.0, circle_circle_distance_bounds(a, b, grid_n).lower);
}

ExtremumBounds circle_max_distance_bounds(const Circle3& a, const Circle3& b, int grid_n) {
  if (grid_n < 8) throw Error(ErrorKind::InvalidArgument, "grid_n must be at least 8");
  const DistanceProfile d(a, b);
  auto f = [&](double s) { return -d(s); };
  auto bound = [&](double c, double h, double fc) { return -d.upper(c, h, -fc); };
  const ExtremumBounds m = minimize_periodic(f, bound, grid_n, refinement_gap(a, b), kMaxEvals);
  // For a maximum: lower is the best value seen, upper the certified bound.
  return {-m.upper, -m.lower, m.argument};
}

Rotation3 rotation_about_x3(double angle) { return Rotation3::about_axis({0, 0, 1}, angle); }

Rotation3 half_turn_about_x1() { return Rotation3::from_quaternion(0.0, 1.0, 0.0, 0.0); }

Cylindrical to_cylindrical(const Vec3& p) { return {std::hypot(p.x1, p.x2), std::atan2(p.x2, p.x1), p.x3}; }

Vec3 from_cylindrical(const Cylindrical& c) { return {c.r * std::cos(c.theta), c.r * std::sin(c.theta), c.x3}; }

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidMultiplicity: return "InvalidMultiplicity";
    case ErrorKind::NoUniqueFixedPoint: return "NoUniqueFixedPoint";
    case ErrorKind::MultipleChildren: return "MultipleChildren";
    case ErrorKind::MinSeparationTooSmall: return "MinSeparationTooSmall";
    case ErrorKind::NoGenericProjection: return "NoGenericProjection";
    case ErrorKind::UndefinedAtOrigin: return "UndefinedAtOrigin";
    case ErrorKind::NonInvertibleJacobian: return "NonInvertibleJacobian";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::TooManyTori: return "TooManyTori";
    case ErrorKind::SearchLimit: return "SearchLimit";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace antoine
