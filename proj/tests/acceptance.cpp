// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "antoine/dynamics.hpp"
#include "antoine/linking.hpp"
#include "antoine/necklace.hpp"
#include "antoine/report_io.hpp"

using namespace antoine;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int g_failures = 0;

void run(int id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  if (!v.pass) ++g_failures;
  std::printf("[%s] %d. %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t s) : eng(s) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  int digit(int m) { return std::uniform_int_distribution<int>(1, m)(eng); }
  Vec3 unit() {
    std::normal_distribution<double> g;
    const Vec3 v{g(eng), g(eng), g(eng)};
    return v / norm(v);
  }
  Address word(int m, int len) {
    Address a;
    for (int i = 0; i < len; ++i) a.digits.push_back(digit(m));
    return a;
  }
};

bool contains(const SolidTorus& t, const Vec3& p) { return point_circle_distance(t.core, p) <= t.tube + kBoundaryTolerance; }

// Forward descent through nested tori, independent of the inverse steps:
// at each level scan every child of the current torus.
Address direct_descent(const Necklace& n, const Vec3& p, int max_depth) {
  Address a;
  for (int k = 0; k < max_depth; ++k) {
    int found = 0;
    for (int j = 1; j <= n.m && !found; ++j)
      if (contains(torus_at(n, a + Address{{j}}), p)) found = j;
    if (!found) break;
    a.digits.push_back(found);
  }
  return a;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const int m_star = kMinimalMultiplicity;
  const Necklace n = build_necklace(m_star);
  const double c0 = stage_diameter(n, 0);

  run(1, "construction validity", [&] {
    Verdict v;
    ValidationOptions geometric;
    geometric.linking = false;
    const auto scanned = minimal_valid_multiplicity(1000, geometric);
    v.require(scanned.has_value() && *scanned == m_star, "scan over even m <= 1000 returns m*");
    const auto t0 = Clock::now();
    const ValidationReport r = validate(n);
    const double elapsed = seconds_since(t0);
    v.require(r.pass(), "every validate check passes");
    v.require(r.min_pair_clearance > 0.0, "disjointness margin > 0");
    v.require(r.containment_clearance > 0.0, "containment margin > 0");
    for (const char* name : {"rotation_equivariance", "involution_symmetry"}) {
      const CheckRecord* c = r.find(name);
      v.require(c && c->pass && c->tolerance - c->margin < 1e-10, std::string(name) + " deviation < 1e-10");
    }
    v.require(elapsed < 60.0, "validate under 60 s");
    v.note("m* = " + std::to_string(m_star) + ", disjointness margin " + fmt("%.3e", r.min_pair_clearance) +
           ", containment margin " + fmt("%.3e", r.containment_clearance) + ", validate " + fmt("%.2f s", elapsed));
    return v;
  });

  run(2, "linking pattern", [&] {
    Verdict v;
    const auto t0 = Clock::now();
    const LinkMatrix lm = link_matrix(n, 512, 256);
    int wrong = 0;
    double gap = 0.0;
    for (int i = 1; i <= m_star; ++i)
      for (int j = i + 1; j <= m_star; ++j) {
        const bool adjacent = j - i == 1 || j - i == m_star - 1;
        if (std::abs(lm.at(i, j)) != (adjacent ? 1 : 0)) ++wrong;
        gap = std::max(gap, std::abs(gauss_linking(n.circles[i - 1], n.circles[j - 1], 256) - lm.at(i, j)));
      }
    const double elapsed = seconds_since(t0);
    v.require(wrong == 0, "|lk| = 1 exactly on adjacent pairs and 0 elsewhere");
    v.require(gap < 0.05, "Gauss within 0.05");
    v.require(elapsed < 120.0, "full matrix under 120 s");
    v.note(std::to_string(wrong) + " wrong entries, max Gauss gap " + fmt("%.2e", gap) + ", " + fmt("%.2f s", elapsed));
    return v;
  });

  run(3, "Julia set equals the attractor", [&] {
    Verdict v;
    const auto samples = chaos_game_sample(n, 10000, 20, 301);
    int not_survived = 0;
    for (const Vec3& p : samples) {
      const EscapeOutcome e = escape_depth(n, p, 40);
      if (!(e.kind == EscapeKind::SurvivedBudget && e.depth == 40)) ++not_survived;
    }
    v.require(not_survived == 0, "all chaos samples survive budget 40");

    Gen g(302);
    const Box3 box;
    int survived = 0, mismatches = 0, exterior = 0, finite = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec3 p{g.uniform(box.lo.x1, box.hi.x1), g.uniform(box.lo.x2, box.hi.x2), g.uniform(box.lo.x3, box.hi.x3)};
      const EscapeOutcome e = escape_depth(n, p, 40);
      if (e.kind == EscapeKind::SurvivedBudget) ++survived;
      if (e.kind == EscapeKind::Exterior) {
        ++exterior;
        if (contains(n.t0, p)) ++mismatches;
        continue;
      }
      ++finite;
      const Address direct = direct_descent(n, p, 12);
      const std::size_t k = std::min<std::size_t>(12, e.itinerary.size());
      const Address head{std::vector<int>(e.itinerary.digits.begin(), e.itinerary.digits.begin() + k)};
      if (!(head == direct)) ++mismatches;
    }
    v.require(survived == 0, "random points are exterior or escape");
    v.require(mismatches == 0, "itineraries match direct containment to depth 12");
    v.note(std::to_string(not_survived) + "/10000 samples escaped; random: " + std::to_string(exterior) + " exterior, " +
           std::to_string(finite) + " finite, " + std::to_string(survived) + " survived, " +
           std::to_string(mismatches) + " mismatches");
    return v;
  });

  run(4, "repelling periodic points", [&] {
    Verdict v;
    Gen g(401);
    double worst_residual = 0.0, worst_expansion = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Address w = g.word(m_star, 1 + i % 3);
      const PeriodicPoint pp = periodic_point(n, w);
      const int p = static_cast<int>(w.size());
      worst_residual = std::max(worst_residual, distance(inner_steps_map(n, p)(pp.point), pp.point));
      const Vec3 y = pp.point + 1e-6 * g.unit();
      const StepResult a = inner_step(n, pp.point), b = inner_step(n, y);
      v.require(a.kind == StepKind::MappedTo && b.kind == StepKind::MappedTo && a.digit == b.digit, "step stays in one child");
      const double rate = distance(a.point, b.point) / distance(pp.point, y);
      worst_expansion = std::max(worst_expansion, std::abs(rate / (m_star / 4.0) - 1.0));
    }
    v.require(worst_residual <= 1e-9 * c0, "|f^p(x) - x| <= 1e-9 c0");
    v.require(worst_expansion <= 1e-6, "per-step expansion m/4 within 1e-6");

    std::vector<double> d;
    for (int p = 1; p <= 3; ++p) d.push_back(density_report(n, p, 12, 2000, 402));
    const double bound = stage_diameter(n, 3) + stage_diameter(n, 12);
    v.require(d[0] >= d[1] && d[1] >= d[2], "density non-increasing in p_max");
    v.require(d[2] <= bound, "density at p_max 3 <= c3 + c12");
    v.note("max residual " + fmt("%.2e", worst_residual) + ", max expansion error " + fmt("%.2e", worst_expansion) +
           ", density " + fmt("%.4g", d[0]) + " >= " + fmt("%.4g", d[1]) + " >= " + fmt("%.4g", d[2]) + " (bound " +
           fmt("%.4g", bound) + ")");
    return v;
  });

  run(5, "boundary of the escaping set", [&] {
    Verdict v;
    Gen g(501);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 x = coding_point(n, g.word(m_star, i % 4), g.word(m_star, 1 + i % 3));
      const bool survives = escape_depth(n, x, 40).kind == EscapeKind::SurvivedBudget;
      bool neighbour_escapes = false;
      for (int t = 0; t < 64 && !neighbour_escapes; ++t)
        neighbour_escapes = escape_depth(n, x + 1e-3 * g.unit(), 40).kind != EscapeKind::SurvivedBudget;
      ok += survives && neighbour_escapes;
    }
    v.require(ok == 100, "100/100 coding points");
    v.note(std::to_string(ok) + "/100 coding points survive with an escaping 1e-3 neighbour");
    return v;
  });

  run(6, "dilatation", [&] {
    Verdict v;
    Gen g(601);
    double worst = 0.0, least = INFINITY;
    auto record = [&](const Dilatation& d) {
      worst = std::max({worst, d.k_outer, d.k_inner});
      least = std::min({least, d.k_outer, d.k_inner});
    };
    for (int j = 1; j <= m_star; ++j)
      for (int i = 0; i < 10; ++i) {
        const Similarity3& s = n.sim(j);
        const Vec3 p{g.uniform(-1.5, 1.5), g.uniform(-1.5, 1.5), g.uniform(-1.5, 1.5)};
        record(dilatation_estimate([&s](const Vec3& x) { return sim_apply(s, x); }, p));
      }
    const auto orbit_points = chaos_game_sample(n, 300, 12, 602);
    for (std::size_t i = 0; i < orbit_points.size(); ++i)
      record(dilatation_estimate(inner_steps_map(n, 1 + static_cast<int>(i % 3)), orbit_points[i]));
    v.require(least >= 1.0 && worst <= 1.0 + 1e-6, "K_O, K_I in [1, 1 + 1e-6]");

    double ko = 0.0, ki = 0.0, worst_ko = 0.0, worst_ki = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double r = g.uniform(0.3, 1.5), th = g.uniform(0, 2 * M_PI);
      const Vec3 p{r * std::cos(th), r * std::sin(th), g.uniform(-0.5, 0.5)};
      const Dilatation d = dilatation_estimate([](const Vec3& x) { return winding_map(x, 16); }, p);
      ko = d.k_outer;
      ki = d.k_inner;
      worst_ko = std::max(worst_ko, std::abs(ko / 64.0 - 1.0));
      worst_ki = std::max(worst_ki, std::abs(ki / 8.0 - 1.0));
    }
    v.require(worst_ko <= 0.01 && worst_ki <= 0.01, "winding map K_O = 64, K_I = 8 within 1%");

    double worst_norm = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const ExteriorModel model{2 + i % 4};
      const Vec3 x = std::pow(10.0, g.uniform(-1, 1)) * g.unit();
      const double expect = std::pow(norm(x), model.d);
      worst_norm = std::max(worst_norm, std::abs(norm(exterior_model_map(x, model)) / expect - 1.0));
    }
    v.require(worst_norm <= 1e-12, "exterior model norm law to 1e-12");
    v.note("conformal K range [" + fmt("%.12f", least) + ", " + fmt("%.12f", worst) + "], winding errors " +
           fmt("%.1e", worst_ko) + "/" + fmt("%.1e", worst_ki) + ", norm law error " + fmt("%.1e", worst_norm));
    return v;
  });

  run(7, "dimension consistency", [&] {
    Verdict v;
    const auto pts = chaos_game_sample(n, 100000, 6, 701);
    const double est = box_dimension_estimate(pts, default_box_scales(n));
    const double target = similarity_dimension(m_star);
    v.require(std::abs(est - target) <= 0.15 * target, "necklace estimate within 15%");

    Gen g(702);
    std::vector<Vec3> segment, square;
    for (int i = 0; i < 10000; ++i) {
      segment.push_back({g.uniform(0, 1), 0.25, 0.25});
      square.push_back({g.uniform(0, 1), g.uniform(0, 1), 0.25});
    }
    const std::vector<double> scales{0.1, 0.05, 0.025, 0.0125};
    const double seg = box_dimension_estimate(segment, scales), sq = box_dimension_estimate(square, scales);
    v.require(std::abs(seg - 1.0) <= 0.1, "segment 1 +- 0.1");
    v.require(std::abs(sq - 2.0) <= 0.15, "square 2 +- 0.15");
    v.note("box " + fmt("%.4f", est) + " vs similarity " + fmt("%.4f", target) + ", segment " + fmt("%.3f", seg) +
           ", square " + fmt("%.3f", sq));
    return v;
  });

  run(8, "determinism and formats", [&] {
    Verdict v;
    const fs::path dir = fs::temp_directory_path() / "antoine_acceptance";
    fs::create_directories(dir);
    const Box3 box;
    export_volume(n, {64, 64, 64}, box, 40, 801, dir / "a.vol");
    export_volume(n, {64, 64, 64}, box, 40, 801, dir / "b.vol");
    v.require(slurp(dir / "a.vol") == slurp(dir / "b.vol"), "volume reruns byte-identical");
    v.require(slurp(dir / "a.vol.json") == slurp(dir / "b.vol.json"), "volume sidecars identical");
    export_points(chaos_game_sample(n, 5000, 20, 802), PointFormat::Xyz, Json{{"seed", 802}}, dir / "a.xyz");
    export_points(chaos_game_sample(n, 5000, 20, 802), PointFormat::Xyz, Json{{"seed", 802}}, dir / "b.xyz");
    v.require(slurp(dir / "a.xyz") == slurp(dir / "b.xyz"), "point reruns byte-identical");
    export_mesh(n, 1, 32, 16, MeshFormat::Obj, dir / "a.obj");
    export_mesh(n, 1, 32, 16, MeshFormat::Obj, dir / "b.obj");
    export_mesh(n, 1, 32, 16, MeshFormat::Ply, dir / "a.ply");
    export_mesh(n, 1, 32, 16, MeshFormat::Ply, dir / "b.ply");
    v.require(slurp(dir / "a.obj") == slurp(dir / "b.obj"), "OBJ reruns byte-identical");
    v.require(slurp(dir / "a.ply") == slurp(dir / "b.ply"), "PLY reruns byte-identical");

    // Parse the OBJ text directly: per object, every edge in two faces and V − E + F = 0.
    std::ifstream in(dir / "a.obj");
    std::string line;
    int objects = 0, bad = 0;
    long vertices = 0, base = 0, object_vertices = 0;
    std::map<std::pair<long, long>, int> edges;
    long faces = 0;
    auto close_object = [&] {
      if (objects == 0) return;
      bool twice = true;
      for (const auto& [e, c] : edges) twice = twice && c == 2;
      const long chi = object_vertices - static_cast<long>(edges.size()) + faces;
      if (!twice || chi != 0) ++bad;
      edges.clear();
      faces = 0;
      base = vertices;
      object_vertices = 0;
    };
    while (std::getline(in, line)) {
      std::istringstream s(line);
      std::string tag;
      s >> tag;
      if (tag == "o") {
        close_object();
        ++objects;
      } else if (tag == "v") {
        ++vertices;
        ++object_vertices;
      } else if (tag == "f") {
        long a, b, c;
        s >> a >> b >> c;
        a -= base;
        b -= base;
        c -= base;
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) ++edges[{std::min(x, y), std::max(x, y)}];
        ++faces;
      }
    }
    close_object();
    v.require(objects == m_star, "stage-1 OBJ has m objects");
    v.require(bad == 0, "every torus watertight with Euler characteristic 0");
    v.note(std::to_string(objects) + " tori, " + std::to_string(bad) + " defective; reruns identical");
    return v;
  });

  std::printf("%s: %d of 8 criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
