#include "antoine/linking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>
#include <string>

#include "antoine/error.hpp"
#include "antoine/necklace.hpp"
#include "antoine/parallel.hpp"

namespace antoine {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxProjectionRetries = 64;

struct Point2 {
  double u, v;
};

double cross2(const Point2& a, const Point2& b) { return a.u * b.v - a.v * b.u; }

struct Projected {
  std::vector<Point2> xy;
  std::vector<double> height;
  double lo_u, hi_u, lo_v, hi_v;
};

Projected project(const PolyLoop& loop, const Vec3& e1, const Vec3& e2, const Vec3& d) {
  Projected p;
  p.lo_u = p.lo_v = std::numeric_limits<double>::infinity();
  p.hi_u = p.hi_v = -std::numeric_limits<double>::infinity();
  for (const Vec3& x : loop.vertices) {
    const Point2 q{dot(x, e1), dot(x, e2)};
    p.xy.push_back(q);
    p.height.push_back(dot(x, d));
    p.lo_u = std::min(p.lo_u, q.u);
    p.hi_u = std::max(p.hi_u, q.u);
    p.lo_v = std::min(p.lo_v, q.v);
    p.hi_v = std::max(p.hi_v, q.v);
  }
  return p;
}

Vec3 random_direction(Rng& rng) {
  // Marsaglia: uniform on the sphere from two uniforms.
  for (;;) {
    const double a = 2.0 * uniform01(rng) - 1.0;
    const double b = 2.0 * uniform01(rng) - 1.0;
    const double s = a * a + b * b;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = 2.0 * std::sqrt(1.0 - s);
    return {a * f, b * f, 1.0 - 2.0 * s};
  }
}

// Signed a-over-b crossing count, or nullopt if the projection is not generic.
std::optional<int> count_crossings(const PolyLoop& a, const PolyLoop& b, const Vec3& d) {
  const Vec3 helper = std::abs(d.x1) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalized(cross(helper, d));
  const Vec3 e2 = cross(d, e1);
  const Projected pa = project(a, e1, e2, d);
  const Projected pb = project(b, e1, e2, d);
  if (pa.hi_u < pb.lo_u || pb.hi_u < pa.lo_u || pa.hi_v < pb.lo_v || pb.hi_v < pa.lo_v) return 0;

  const std::size_t na = pa.xy.size();
  const std::size_t nb = pb.xy.size();
  constexpr double kEdgeEps = 1e-9;

  // Reject directions nearly parallel to any segment.
  for (const PolyLoop* loop : {&a, &b}) {
    const auto& vs = loop->vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec3 seg = vs[(i + 1) % vs.size()] - vs[i];
      const double len = norm(seg);
      if (norm(seg - dot(seg, d) * d) < 1e-6 * len) return std::nullopt;
    }
  }

  int total = 0;
  for (std::size_t i = 0; i < na; ++i) {
    const Point2 a0 = pa.xy[i];
    const Point2 a1 = pa.xy[(i + 1) % na];
    const Point2 da{a1.u - a0.u, a1.v - a0.v};
    const double alo_u = std::min(a0.u, a1.u), ahi_u = std::max(a0.u, a1.u);
    const double alo_v = std::min(a0.v, a1.v), ahi_v = std::max(a0.v, a1.v);
    if (ahi_u < pb.lo_u || alo_u > pb.hi_u || ahi_v < pb.lo_v || alo_v > pb.hi_v) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      const Point2 b0 = pb.xy[j];
      const Point2 b1 = pb.xy[(j + 1) % nb];
      if (std::max(b0.u, b1.u) < alo_u || std::min(b0.u, b1.u) > ahi_u || std::max(b0.v, b1.v) < alo_v ||
          std::min(b0.v, b1.v) > ahi_v)
        continue;
      const Point2 db{b1.u - b0.u, b1.v - b0.v};
      const Point2 w{b0.u - a0.u, b0.v - a0.v};
      const double denom = cross2(da, db);
      const double scale = std::hypot(da.u, da.v) * std::hypot(db.u, db.v);
      if (std::abs(denom) <= 1e-12 * scale) {
        // Parallel in projection: degenerate only if the segments are collinear.
        if (std::abs(cross2(w, da)) <= 1e-12 * scale) return std::nullopt;
        continue;
      }
      const double t = cross2(w, db) / denom;
      const double s = cross2(w, da) / denom;
      if (t < -kEdgeEps || t > 1.0 + kEdgeEps || s < -kEdgeEps || s > 1.0 + kEdgeEps) continue;
      if (t < kEdgeEps || t > 1.0 - kEdgeEps || s < kEdgeEps || s > 1.0 - kEdgeEps) return std::nullopt;
      const double ha = pa.height[i] + t * (pa.height[(i + 1) % na] - pa.height[i]);
      const double hb = pb.height[j] + s * (pb.height[(j + 1) % nb] - pb.height[j]);
      if (std::abs(ha - hb) < 1e-12) return std::nullopt;
      if (ha > hb) total += denom > 0.0 ? 1 : -1;
    }
  }
  return total;
}

}  // namespace

PolyLoop polygonize(const Circle3& c, int n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  PolyLoop loop;
  loop.vertices.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) loop.vertices.push_back(c.point(kTwoPi * i / n));
  return loop;
}

double gauss_linking(const Circle3& a, const Circle3& b, int quad_n) {
  if (quad_n < 16) throw Error(ErrorKind::InvalidArgument, "quad_n must be at least 16");
  const std::size_t n = static_cast<std::size_t>(quad_n);
  std::vector<Vec3> pa(n), ta(n), pb(n), tb(n);
  const double h = kTwoPi / quad_n;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = h * static_cast<double>(i);
    pa[i] = a.point(s);
    ta[i] = a.radius * a.tangent(s);
    pb[i] = b.point(s);
    tb[i] = b.radius * b.tangent(s);
  }
  double sum = 0.0;
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 r = pa[i] - pb[j];
      const double dist = norm(r);
      closest = std::min(closest, dist);
      row += dot(r, cross(ta[i], tb[j])) / (dist * dist * dist);
    }
    sum += row;
  }
  if (closest < 1e-9) throw Error(ErrorKind::MinSeparationTooSmall, "curves nearly touch; Gauss integral ill-conditioned");
  return sum * h * h / (4.0 * std::numbers::pi);
}

ProjectionResult polygonal_linking_detailed(const PolyLoop& a, const PolyLoop& b, std::uint64_t seed) {
  if (a.vertices.size() < 3 || b.vertices.size() < 3)
    throw Error(ErrorKind::InvalidArgument, "loops need at least 3 vertices");
  Rng rng(split_seed(seed, 0));
  for (int attempt = 0; attempt < kMaxProjectionRetries; ++attempt) {
    const Vec3 d = random_direction(rng);
    if (auto lk = count_crossings(a, b, d)) return {*lk, attempt, d};
  }
  throw Error(ErrorKind::NoGenericProjection, "no generic projection direction after 64 attempts");
}

int polygonal_linking(const PolyLoop& a, const PolyLoop& b, std::uint64_t seed) {
  return polygonal_linking_detailed(a, b, seed).linking;
}

LinkMatrix link_matrix(const Necklace& n, int poly_n, int quad_n, std::uint64_t seed) {
  if (poly_n < 64) throw Error(ErrorKind::InvalidArgument, "poly_n must be at least 64");
  const int m = n.m;
  std::vector<PolyLoop> loops;
  for (const auto& c : n.circles) loops.push_back(polygonize(c, poly_n));

  struct Pair {
    int i, j;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.push_back({i, j});

  std::vector<int> values(pairs.size());
  std::vector<double> gaps(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    try {
      values[k] = polygonal_linking(loops[static_cast<std::size_t>(i)], loops[static_cast<std::size_t>(j)],
                                    split_seed(seed, k));
      gaps[k] = std::abs(gauss_linking(n.circles[static_cast<std::size_t>(i)],
                                       n.circles[static_cast<std::size_t>(j)], quad_n) -
                         values[k]);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (circles " + std::to_string(i + 1) + ", " +
                                std::to_string(j + 1) + ")");
    }
  });

  LinkMatrix lm;
  lm.m = m;
  lm.entries.assign(static_cast<std::size_t>(m) * m, 0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    lm.entries[static_cast<std::size_t>(i * m + j)] = values[k];
    lm.entries[static_cast<std::size_t>(j * m + i)] = values[k];
    lm.max_gauss_gap = std::max(lm.max_gauss_gap, gaps[k]);
  }
  return lm;
}

}  // namespace antoine
