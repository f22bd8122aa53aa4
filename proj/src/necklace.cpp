#include "antoine/necklace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "antoine/error.hpp"

namespace antoine {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSymmetryTolerance = 1e-10;

Vec3 radial(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

// Odd children tilt their plane normal up out of the x3 = 0 plane, even
// children tilt it down; both planes contain the tangent of τ0 at the center.
Vec3 child_normal(int j, double theta) {
  const double s = 1.0 / std::numbers::sqrt2;
  const Vec3 r = radial(theta);
  return j % 2 == 1 ? Vec3{s * r.x1, s * r.x2, s} : Vec3{s * r.x1, s * r.x2, -s};
}

Similarity3 conjugate(const Rotation3& r, const Similarity3& s) {
  return sim_compose(sim_compose(Similarity3::rotation(r), s), Similarity3::rotation(r.inverse()));
}

double circle_deviation(const Circle3& a, const Circle3& b) {
  return std::max({distance(a.center, b.center), std::abs(a.radius - b.radius), distance(a.normal, b.normal)});
}

bool is_even_square(int m) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  return d * d == m && d % 2 == 0;
}

}  // namespace

double child_angle(int m, int j) { return (2.0 * j - 1.0) * kPi / m; }

Rotation3 necklace_rotation(int m) { return rotation_about_x3(4.0 * kPi / m); }

Necklace build_necklace(int m) {
  if (m < 10 || m % 2 != 0)
    throw Error(ErrorKind::InvalidMultiplicity, "multiplicity must be an even integer >= 10, got " + std::to_string(m));
  Necklace n;
  n.m = m;
  n.t0 = {{{0, 0, 0}, 1.0, {0, 0, 1}}, 8.0 / m};
  n.child_tube = 32.0 / (static_cast<double>(m) * m);
  n.even_square = is_even_square(m);

  const double ratio = 4.0 / m;
  for (int j = 1; j <= m; ++j) {
    const double theta = child_angle(m, j);
    n.circles.push_back({radial(theta), ratio, child_normal(j, theta)});
  }

  // φ1 and φ2 use the minimal rotation taking e3 to their plane normal; the
  // rest are ρ-conjugates so that φ_{j+2} = ρ ∘ φj ∘ ρ⁻¹ holds exactly.
  const Vec3 e3{0, 0, 1};
  const Similarity3 base[2] = {
      {ratio, Rotation3::aligning(e3, n.circles[0].normal), n.circles[0].center},
      {ratio, Rotation3::aligning(e3, n.circles[1].normal), n.circles[1].center},
  };
  for (int j = 1; j <= m; ++j) {
    const int parity = (j - 1) % 2;
    const int turns = (j - 1) / 2;
    const Similarity3 s =
        turns == 0 ? base[parity] : conjugate(rotation_about_x3(4.0 * kPi * turns / m), base[parity]);
    n.sims.push_back(s);
    n.inverse_sims.push_back(sim_invert(s));
  }
  return n;
}

bool ValidationReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate(const Necklace& n, const ValidationOptions& opts) {
  ValidationReport report;
  report.m = n.m;
  report.tube = n.t0.tube;
  report.child_tube = n.child_tube;
  const int m = n.m;

  // φj(τ0) = τj, sampled.
  {
    double worst = 0.0;
    for (int j = 1; j <= m; ++j) {
      const Circle3& tau = n.circles[static_cast<std::size_t>(j - 1)];
      for (int i = 0; i < 64; ++i) {
        const Vec3 q = sim_apply(n.sim(j), n.t0.core.point(2.0 * kPi * i / 64));
        worst = std::max(worst, point_circle_distance(tau, q));
      }
      worst = std::max(worst, std::abs(sim_apply(n.sim(j), n.t0.core).radius - tau.radius));
    }
    report.checks.push_back({"similarities_map_core", worst < kSymmetryTolerance, kSymmetryTolerance - worst,
                             kSymmetryTolerance});
  }

  // Pairwise disjointness: certified core distance beats the two tubes.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double lb = circle_circle_distance(n.circles[i], n.circles[j], opts.grid_n);
        worst = std::min(worst, lb - 2.0 * n.child_tube);
      }
    report.min_pair_clearance = worst;
    report.checks.push_back({"pairwise_disjoint", worst > 0.0, worst, 0.0});
  }

  // Containment in the interior of T0: every point of a child is within
  // child_tube of its core, whose distance to τ0 is certified from above.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& c : n.circles) {
      const double far = circle_max_distance_bounds(c, n.t0.core, opts.grid_n).upper;
      worst = std::min(worst, n.t0.tube - far - n.child_tube);
    }
    report.containment_clearance = worst;
    report.checks.push_back({"contained_in_interior", worst > 0.0, worst, 0.0});
  }

  // ρ(τj) = τ_{j+2}, wrapping τ_{m−1} → τ1 and τm → τ2.
  {
    const Rotation3 rho = necklace_rotation(m);
    double worst = 0.0;
    for (int j = 1; j <= m; ++j) {
      const int target = (j + 1) % m + 1;
      const Circle3 image = sim_apply(Similarity3::rotation(rho), n.circles[static_cast<std::size_t>(j - 1)]);
      worst = std::max(worst, circle_deviation(image, n.circles[static_cast<std::size_t>(target - 1)]));
    }
    report.checks.push_back({"rotation_equivariance", worst < kSymmetryTolerance, kSymmetryTolerance - worst,
                             kSymmetryTolerance});
  }

  // ι swaps τ1 and τm.
  {
    const Similarity3 iota = Similarity3::rotation(half_turn_about_x1());
    const Circle3& first = n.circles.front();
    const Circle3& last = n.circles.back();
    const double worst =
        std::max(circle_deviation(sim_apply(iota, first), last), circle_deviation(sim_apply(iota, last), first));
    report.checks.push_back({"involution_symmetry", worst < kSymmetryTolerance, kSymmetryTolerance - worst,
                             kSymmetryTolerance});
  }

  if (opts.linking) {
    constexpr double kGaussTolerance = 0.1;
    try {
      LinkMatrix lm = link_matrix(n, opts.poly_n, opts.quad_n, opts.seed);
      int mismatches = 0;
      for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
          if (i == j) continue;
          const int gap = std::abs(i - j);
          const bool adjacent = gap == 1 || gap == m - 1;
          if (std::abs(lm.at(i, j)) != (adjacent ? 1 : 0)) ++mismatches;
        }
      report.checks.push_back({"linking_pattern", mismatches == 0, -static_cast<double>(mismatches), 0.0});
      report.checks.push_back({"gauss_agreement", lm.max_gauss_gap < kGaussTolerance,
                               kGaussTolerance - lm.max_gauss_gap, kGaussTolerance});
      report.links = std::move(lm);
    } catch (const Error&) {
      // Touching or intersecting cores: the linking number is undefined.
      report.checks.push_back({"linking_pattern", false, -1.0, 0.0});
      report.checks.push_back({"gauss_agreement", false, -1.0, kGaussTolerance});
    }
  }
  return report;
}

std::optional<int> minimal_valid_multiplicity(int max_m, const ValidationOptions& opts) {
  ValidationOptions geometric = opts;
  geometric.linking = false;
  for (int m = 10; m <= max_m; m += 2) {
    const Necklace n = build_necklace(m);
    if (!validate(n, geometric).pass()) continue;
    if (!opts.linking || validate(n, opts).pass()) return m;
  }
  return std::nullopt;
}

void check_address(const Necklace& n, const Address& a) {
  for (int d : a.digits)
    if (d < 1 || d > n.m)
      throw Error(ErrorKind::InvalidArgument, "address digit " + std::to_string(d) + " outside 1.." + std::to_string(n.m));
}

Similarity3 compose_address(const Necklace& n, const Address& a) {
  check_address(n, a);
  Similarity3 s = Similarity3::identity();
  for (int d : a.digits) s = sim_compose(s, n.sim(d));
  return s;
}

SolidTorus torus_at(const Necklace& n, const Address& a) { return sim_apply(compose_address(n, a), n.t0); }

std::optional<int> locate_child(const Necklace& n, const Vec3& p, double tol) {
  std::optional<int> found;
  for (int j = 1; j <= n.m; ++j) {
    if (torus_contains(n.child(j), p, tol) == Membership::Outside) continue;
    if (found)
      throw Error(ErrorKind::MultipleChildren,
                  "children " + std::to_string(*found) + " and " + std::to_string(j) + " both contain the point");
    found = j;
  }
  return found;
}

double stage_diameter(const Necklace& n, int k) { return std::pow(n.ratio(), k) * (2.0 + 16.0 / n.m); }

StageSummary stage_summary(const Necklace& n, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "stage index must be non-negative");
  return {k, std::pow(static_cast<double>(n.m), k), stage_diameter(n, k)};
}

}  // namespace antoine
