#include "antoine/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "antoine/error.hpp"
#include "antoine/parallel.hpp"

namespace antoine {

namespace {

constexpr long kSearchNodeCap = 1L << 20;

struct Candidate {
  double excess;
  int digit;
};

// Children whose solid torus contains q within tol, nearest core first.
std::vector<Candidate> candidates(const Necklace& n, const Vec3& q, double tol) {
  std::vector<Candidate> out;
  for (int j = 1; j <= n.m; ++j) {
    const double excess = point_circle_distance(n.circles[static_cast<std::size_t>(j - 1)], q) - n.child_tube;
    if (excess <= tol) out.push_back({excess, j});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.excess != b.excess ? a.excess < b.excess : a.digit < b.digit;
  });
  return out;
}

// T0 ⊂ B(0, 1 + 8/m), so once |q| + 1 + 8/m ≤ tol every point of every
// stage lies within tol of q.
bool saturated(const Necklace& n, const Vec3& q, double tol) { return norm(q) + n.t0.core.radius + n.t0.tube <= tol; }

class DepthSearch {
 public:
  DepthSearch(const Necklace& n, int budget) : n_(n), budget_(budget), growth_(n.m / 4.0) {}

  void visit(const Vec3& q, int k, double tol) {
    if (++nodes_ > kSearchNodeCap)
      throw Error(ErrorKind::SearchLimit, "escape-depth search exceeded node cap; point sits on a tolerance boundary");
    if (k > best_depth_) {
      best_depth_ = k;
      best_path_ = path_;
    }
    if (k == budget_) {
      survive(false);
      return;
    }
    if (saturated(n_, q, tol)) {
      survive(true);
      return;
    }
    for (const Candidate& c : candidates(n_, q, tol)) {
      path_.push_back(c.digit);
      visit(sim_apply(n_.inverse_sim(c.digit), q), k + 1, tol * growth_);
      path_.pop_back();
      if (survived_) return;
    }
  }

  EscapeOutcome outcome() const {
    EscapeOutcome out;
    if (survived_) {
      out.kind = EscapeKind::SurvivedBudget;
      out.depth = budget_;
      out.saturated = saturated_;
      out.itinerary.digits = survivor_path_;
    } else {
      out.kind = EscapeKind::EscapedAtDepth;
      out.depth = best_depth_;
      out.itinerary.digits = best_path_;
    }
    return out;
  }

 private:
  void survive(bool saturated) {
    survived_ = true;
    saturated_ = saturated;
    survivor_path_ = path_;
  }

  const Necklace& n_;
  int budget_;
  double growth_;
  long nodes_ = 0;
  int best_depth_ = -1;
  std::vector<int> path_, best_path_, survivor_path_;
  bool survived_ = false;
  bool saturated_ = false;
};

Address rotate_left(const Address& w, std::size_t by) {
  Address out;
  const std::size_t p = w.size();
  for (std::size_t i = 0; i < p; ++i) out.digits.push_back(w.digits[(i + by) % p]);
  return out;
}

}  // namespace

StepResult inner_step(const Necklace& n, const Vec3& p, double tol) {
  if (torus_contains(n.t0, p, tol) == Membership::Outside) return {StepKind::NotInT0, p, 0};
  const auto j = locate_child(n, p, tol);
  if (!j) return {StepKind::ExitsNow, p, 0};
  return {StepKind::MappedTo, sim_apply(n.inverse_sim(*j), p), *j};
}

EscapeOutcome escape_depth(const Necklace& n, const Vec3& p, int budget, double tol) {
  if (budget < 1) throw Error(ErrorKind::InvalidArgument, "escape budget must be at least 1");
  if (torus_contains(n.t0, p, tol) == Membership::Outside) return {};
  DepthSearch search(n, budget);
  search.visit(p, 0, tol);
  return search.outcome();
}

Vec3 coding_point(const Necklace& n, const Address& prefix, const Address& tail) {
  if (tail.empty()) throw Error(ErrorKind::InvalidArgument, "coding tail must be nonempty");
  return sim_apply(compose_address(n, prefix), sim_fixed_point(compose_address(n, tail)));
}

PeriodicPoint periodic_point(const Necklace& n, const Address& word) {
  if (word.empty()) throw Error(ErrorKind::InvalidArgument, "periodic word must be nonempty");
  const int p = static_cast<int>(word.size());
  return {word, sim_fixed_point(compose_address(n, word)), p, std::pow(n.m / 4.0, p)};
}

Address least_rotation(const Address& w) {
  Address best = w;
  for (std::size_t r = 1; r < w.size(); ++r) {
    Address cand = rotate_left(w, r);
    if (cand.digits < best.digits) best = std::move(cand);
  }
  return best;
}

Address primitive_root(const Address& w) {
  const std::size_t p = w.size();
  for (std::size_t len = 1; len < p; ++len) {
    if (p % len != 0) continue;
    bool repeats = true;
    for (std::size_t i = len; i < p && repeats; ++i) repeats = w.digits[i] == w.digits[i - len];
    if (repeats) return Address{{w.digits.begin(), w.digits.begin() + static_cast<std::ptrdiff_t>(len)}};
  }
  return w;
}

std::vector<PeriodicPoint> enumerate_periodic(const Necklace& n, int p_max, std::size_t cap, std::uint64_t seed) {
  if (p_max < 1) throw Error(ErrorKind::InvalidArgument, "p_max must be at least 1");
  const int m = n.m;
  std::set<std::pair<std::size_t, std::vector<int>>> words;  // (length, digits) orders by period first

  const double full = std::pow(static_cast<double>(m), p_max);
  if (full <= static_cast<double>(cap)) {
    for (int len = 1; len <= p_max; ++len) {
      std::vector<int> digits(static_cast<std::size_t>(len), 1);
      for (;;) {
        const Address w{digits};
        if (primitive_root(w).size() == w.size() && least_rotation(w) == w) words.insert({w.size(), digits});
        int pos = len - 1;
        while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == m) digits[static_cast<std::size_t>(pos--)] = 1;
        if (pos < 0) break;
        ++digits[static_cast<std::size_t>(pos)];
      }
    }
  } else {
    // Lengths weighted by m^L make every word of length ≤ p_max equally likely.
    std::vector<double> weights;
    double total = 0.0;
    for (int len = 1; len <= p_max; ++len) total += std::pow(static_cast<double>(m), len);
    for (std::size_t i = 0; i < cap; ++i) {
      Rng rng = make_rng(seed, i);
      double u = uniform01(rng) * total;
      int len = 1;
      while (len < p_max && u >= std::pow(static_cast<double>(m), len)) {
        u -= std::pow(static_cast<double>(m), len);
        ++len;
      }
      Address w;
      for (int k = 0; k < len; ++k) w.digits.push_back(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(m))) + 1);
      const Address canon = least_rotation(primitive_root(w));
      words.insert({canon.size(), canon.digits});
    }
  }

  std::vector<PeriodicPoint> out;
  out.reserve(words.size());
  for (const auto& entry : words) out.push_back(periodic_point(n, Address{entry.second}));
  return out;
}

std::vector<Vec3> orbit_points(const Necklace& n, const PeriodicPoint& pp) {
  std::vector<Vec3> pts;
  for (std::size_t r = 0; r < pp.word.size(); ++r)
    pts.push_back(r == 0 ? pp.point : sim_fixed_point(compose_address(n, rotate_left(pp.word, r))));
  return pts;
}

double one_sided_hausdorff(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  if (to.empty()) throw Error(ErrorKind::InvalidArgument, "target point set is empty");
  std::vector<double> nearest(from.size());
  parallel_for(from.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& b : to) {
      const Vec3 d = from[i] - b;
      best = std::min(best, dot(d, d));
    }
    nearest[i] = std::sqrt(best);
  });
  double worst = 0.0;
  for (double d : nearest) worst = std::max(worst, d);
  return worst;
}

double density_report(const Necklace& n, int p_max, int sample_k, std::size_t reference_count, std::uint64_t seed) {
  if (p_max < 1 || sample_k < p_max) throw Error(ErrorKind::InvalidArgument, "need 1 <= p_max <= sample_k");
  std::vector<Vec3> reference;
  reference.reserve(reference_count);
  for (std::size_t i = 0; i < reference_count; ++i) {
    Rng rng = make_rng(seed, i);
    Address a;
    for (int k = 0; k < sample_k; ++k)
      a.digits.push_back(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n.m))) + 1);
    reference.push_back(torus_at(n, a).core.center);
  }
  std::vector<Vec3> periodic;
  for (const auto& pp : enumerate_periodic(n, p_max, std::numeric_limits<std::size_t>::max(), seed)) {
    const auto pts = orbit_points(n, pp);
    periodic.insert(periodic.end(), pts.begin(), pts.end());
  }
  return one_sided_hausdorff(reference, periodic);
}

Vec3 winding_map(const Vec3& p, int m) {
  Cylindrical c = to_cylindrical(p);
  if (c.r == 0.0) return p;
  c.theta *= 0.5 * m;
  return from_cylindrical(c);
}

Vec3 involution(const Vec3& p) { return {p.x1, -p.x2, -p.x3}; }

double ExteriorModel::outer_radius() const { return std::pow(2.0, d); }

Vec3 exterior_model_map(const Vec3& p, const ExteriorModel& model) {
  const double r = norm(p);
  if (r == 0.0) throw Error(ErrorKind::UndefinedAtOrigin, "exterior model is undefined at the origin");
  return std::pow(r, model.d - 1) * p;
}

OrbitRecord orbit(const Necklace& n, const ExteriorModel& model, const Vec3& p, int max_iter, double tol) {
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  if (model.d < 2) throw Error(ErrorKind::InvalidArgument, "exterior model degree must be at least 2");
  OrbitRecord rec;
  Vec3 q = p;
  int iter = 0;

  if (torus_contains(n.t0, p, tol) == Membership::Outside) {
    rec.exit = ExitEvent::StartedOutside;
  } else {
    double scaled = tol;
    while (iter < max_iter) {
      if (saturated(n, q, scaled)) {
        rec.resolution_exhausted = true;
        return rec;
      }
      const auto cands = candidates(n, q, scaled);
      if (cands.empty()) {
        rec.exit = ExitEvent::LeftT0;
        break;
      }
      const int j = cands.front().digit;
      q = sim_apply(n.inverse_sim(j), q);
      scaled *= n.m / 4.0;
      rec.itinerary.digits.push_back(j);
      ++iter;
    }
    if (rec.exit == ExitEvent::None) return rec;
  }

  // Hand-off: f carries B0 \ int X0 into the shell outside B0, so a point
  // still inside radius 2 is placed radially on the sphere of radius 2.
  rec.exit_step = iter;
  const double r0 = norm(q);
  if (rec.exit == ExitEvent::LeftT0 || r0 < model.inner_radius()) {
    rec.clamped = r0 < model.inner_radius();
    if (rec.clamped) q = r0 > 0.0 ? q * (model.inner_radius() / r0) : Vec3{model.inner_radius(), 0, 0};
    ++iter;
  }
  rec.exterior_norms.push_back(norm(q));
  while (iter < max_iter) {
    q = exterior_model_map(q, model);
    const double r = norm(q);
    if (!std::isfinite(r)) break;
    rec.exterior_norms.push_back(r);
    ++iter;
  }
  for (double r : rec.exterior_norms)
    if (r >= model.outer_radius()) rec.certified_escape = true;
  return rec;
}

std::array<double, 3> singular_values(const Mat3& a) {
  // One-sided Jacobi: orthogonalize the columns; their norms are the
  // singular values.
  double col[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) col[j][i] = a[i][j];
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (int k = 0; k < 3; ++k) {
          alpha += col[p][k] * col[p][k];
          beta += col[q][k] * col[q][k];
          gamma += col[p][k] * col[q][k];
        }
        if (gamma == 0.0) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < 3; ++k) {
          const double x = col[p][k];
          const double y = col[q][k];
          col[p][k] = c * x - s * y;
          col[q][k] = s * x + c * y;
        }
      }
    if (off < 1e-15) break;
  }
  std::array<double, 3> sv{};
  for (int j = 0; j < 3; ++j) sv[static_cast<std::size_t>(j)] = std::hypot(col[j][0], col[j][1], col[j][2]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

Dilatation dilatation_of(const Mat3& jac) {
  const auto sv = singular_values(jac);
  if (sv[2] < 1e-12 * sv[0]) throw Error(ErrorKind::NonInvertibleJacobian, "Jacobian is numerically singular");
  Dilatation d;
  d.singular_values = sv;
  d.jacobian = determinant(jac);
  d.k_outer = sv[0] * sv[0] / (sv[1] * sv[2]);
  d.k_inner = sv[0] * sv[1] / (sv[2] * sv[2]);
  return d;
}

Mat3 numerical_jacobian(const Map3& f, const Vec3& p, double h) {
  Mat3 jac{};
  for (int j = 0; j < 3; ++j) {
    Vec3 e{};
    if (j == 0) e.x1 = h;
    if (j == 1) e.x2 = h;
    if (j == 2) e.x3 = h;
    const Vec3 diff = (f(p + e) - f(p - e)) / (2.0 * h);
    for (int i = 0; i < 3; ++i) jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = diff[i];
  }
  return jac;
}

Dilatation dilatation_estimate(const Map3& f, const Vec3& p, std::optional<double> h) {
  if (h && (*h < 1e-7 || *h > 1e-3)) throw Error(ErrorKind::InvalidArgument, "difference step must lie in [1e-7, 1e-3]");
  const double step = h ? *h : 1e-5 * (1.0 + norm(p));
  return dilatation_of(numerical_jacobian(f, p, step));
}

Map3 inner_steps_map(const Necklace& n, int steps) {
  return [&n, steps](const Vec3& p) {
    Vec3 q = p;
    for (int i = 0; i < steps; ++i) {
      const StepResult r = inner_step(n, q);
      if (r.kind != StepKind::MappedTo)
        throw Error(ErrorKind::InvalidArgument, "point left the child chain after " + std::to_string(i) + " steps");
      q = r.point;
    }
    return q;
  };
}

double similarity_dimension(int m) {
  if (m <= 4) throw Error(ErrorKind::InvalidArgument, "similarity dimension needs m > 4");
  return std::log(static_cast<double>(m)) / std::log(m / 4.0);
}

double box_dimension_estimate(const std::vector<Vec3>& points, const std::vector<double>& scales) {
  if (scales.size() < 2) throw Error(ErrorKind::InvalidArgument, "box counting needs at least 2 scales");
  if (points.size() < 1000) throw Error(ErrorKind::InvalidArgument, "box counting needs at least 1000 points");
  Vec3 lo = points.front();
  for (const Vec3& p : points) lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2), std::min(lo.x3, p.x3)};

  std::vector<double> xs, ys;
  std::vector<std::array<std::int64_t, 3>> keys(points.size());
  for (double eps : scales) {
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "box scales must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vec3 d = (points[i] - lo) / eps;
      keys[i] = {static_cast<std::int64_t>(std::floor(d.x1)), static_cast<std::int64_t>(std::floor(d.x2)),
                 static_cast<std::int64_t>(std::floor(d.x3))};
    }
    std::sort(keys.begin(), keys.end());
    const auto count = std::unique(keys.begin(), keys.end()) - keys.begin();
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); }))
    throw Error(ErrorKind::DegenerateFit, "box counts identical at every scale");

  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorKind::DegenerateFit, "box scales are all equal");
  return (k * sxy - sx * sy) / denom;
}

std::vector<double> default_box_scales(const Necklace& n) {
  constexpr int kScales = 17;
  const double hi = stage_diameter(n, 1);
  const double lo = stage_diameter(n, 3);
  std::vector<double> scales;
  for (int i = 0; i < kScales; ++i) scales.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (kScales - 1)));
  return scales;
}

Vec3 chaos_basepoint(const Necklace& n) { return sim_fixed_point(n.sim(1)); }

std::vector<Vec3> chaos_game_sample(const Necklace& n, std::size_t count, int depth, std::uint64_t seed) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "chaos-game depth must be at least 1");
  const Vec3 base = chaos_basepoint(n);
  std::vector<Vec3> out(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    std::vector<int> digits(static_cast<std::size_t>(depth));
    for (auto& d : digits) d = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n.m))) + 1;
    Vec3 x = base;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = sim_apply(n.sim(*it), x);
    out[i] = x;
  });
  return out;
}

}  // namespace antoine
