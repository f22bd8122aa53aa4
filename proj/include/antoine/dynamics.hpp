#pragma once

// Computable dynamics of the necklace map f: inverse-similarity steps on the
// children, escape-depth classification, periodic points, the winding map and
// involution, the radial exterior model, and distortion / dimension estimates.
//
// Tolerances are always measured in the coordinates of the input point. After
// k inverse-similarity steps the same tolerance reads tol·(m/4)^k, so
// "escape depth ≥ k" is exactly "some stage-k torus contains p within tol".

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "antoine/geom3.hpp"
#include "antoine/necklace.hpp"
#include "antoine/rng.hpp"

namespace antoine {

inline constexpr int kDefaultBudget = 40;

enum class StepKind { MappedTo, ExitsNow, NotInT0 };

struct StepResult {
  StepKind kind = StepKind::NotInT0;
  Vec3 point;     // φj⁻¹(p) when kind == MappedTo
  int digit = 0;  // j when kind == MappedTo
};

/// One application of f on T0: φj⁻¹ on child j, an exit flag on T0 \ X1.
StepResult inner_step(const Necklace& n, const Vec3& p, double tol = kBoundaryTolerance);

enum class EscapeKind { Exterior, EscapedAtDepth, SurvivedBudget };

struct EscapeOutcome {
  EscapeKind kind = EscapeKind::Exterior;
  int depth = 0;       // k for EscapedAtDepth, K for SurvivedBudget
  Address itinerary;   // child digits along the deepest branch found
  bool saturated = false;  // survived because the scaled tolerance covers T0

  bool operator==(const EscapeOutcome&) const = default;
};

/// Deepest stage k ≤ budget such that p lies within tol of X_k.
EscapeOutcome escape_depth(const Necklace& n, const Vec3& p, int budget = kDefaultBudget,
                           double tol = kBoundaryTolerance);

/// φ_prefix(fixed point of φ_tail): the point of X with eventually periodic
/// address prefix·tail·tail·…
Vec3 coding_point(const Necklace& n, const Address& prefix, const Address& tail);

struct PeriodicPoint {
  Address word;
  Vec3 point;
  int period = 0;
  double multiplier = 0.0;  // (m/4)^period
};

PeriodicPoint periodic_point(const Necklace& n, const Address& word);

/// Lexicographically least cyclic rotation.
Address least_rotation(const Address& w);
/// Shortest word whose power is w.
Address primitive_root(const Address& w);

/// One representative word per periodic orbit of period ≤ p_max. Full
/// enumeration when m^p_max ≤ cap, otherwise a seeded sample of cap words.
std::vector<PeriodicPoint> enumerate_periodic(const Necklace& n, int p_max, std::size_t cap = 100000,
                                              std::uint64_t seed = kDefaultSeed);

/// All points on the periodic orbit of pp, one per cyclic rotation.
std::vector<Vec3> orbit_points(const Necklace& n, const PeriodicPoint& pp);

/// max over a in from of min over b in to of |a − b|.
double one_sided_hausdorff(const std::vector<Vec3>& from, const std::vector<Vec3>& to);

/// One-sided Hausdorff distance from the centers of reference_count sampled
/// stage-sample_k tori to the periodic points of period ≤ p_max.
double density_report(const Necklace& n, int p_max, int sample_k, std::size_t reference_count = 2000,
                      std::uint64_t seed = kDefaultSeed);

/// (r, θ, x3) ↦ (r, θ·m/2, x3).
Vec3 winding_map(const Vec3& p, int m);
/// (x1, x2, x3) ↦ (x1, −x2, −x3).
Vec3 involution(const Vec3& p);

struct ExteriorModel {
  int d = 2;

  double inner_radius() const { return 2.0; }
  double outer_radius() const;  // 2^d
};

/// p ↦ |p|^(d−1)·p. Throws UndefinedAtOrigin for p = 0.
Vec3 exterior_model_map(const Vec3& p, const ExteriorModel& model);

enum class ExitEvent {
  None,           // stayed in the similarity regime for max_iter steps
  StartedOutside,  // p not in T0
  LeftT0,         // p in T0 \ X1 at some step
};

struct OrbitRecord {
  Address itinerary;
  ExitEvent exit = ExitEvent::None;
  int exit_step = 0;  // iteration at which the hand-off happened
  bool clamped = false;  // hand-off pushed the point out to radius 2
  bool resolution_exhausted = false;  // scaled tolerance covers T0; further digits are not resolvable
  bool certified_escape = false;  // some exterior norm reached 2^d
  std::vector<double> exterior_norms;  // modeled; not pointwise values of f
};

/// Similarity steps while the point stays in the child chain, then the radial
/// exterior model. Exterior positions are a model of f, not f itself.
OrbitRecord orbit(const Necklace& n, const ExteriorModel& model, const Vec3& p, int max_iter,
                  double tol = kBoundaryTolerance);

struct Dilatation {
  double k_outer = 0.0;  // |Df|³ / J
  double k_inner = 0.0;  // J / ℓ(Df)³
  double jacobian = 0.0;
  std::array<double, 3> singular_values{};  // descending
};

using Map3 = std::function<Vec3(const Vec3&)>;

std::array<double, 3> singular_values(const Mat3& a);
Dilatation dilatation_of(const Mat3& jacobian);
Mat3 numerical_jacobian(const Map3& f, const Vec3& p, double h);

/// Central-difference dilatation. h defaults to 1e-5·(1 + |p|); an explicit
/// h must lie in [1e-7, 1e-3].
Dilatation dilatation_estimate(const Map3& f, const Vec3& p, std::optional<double> h = std::nullopt);

/// f^steps on the child chain, by literal inner steps. Throws InvalidArgument
/// if the point leaves the chain.
Map3 inner_steps_map(const Necklace& n, int steps);

double similarity_dimension(int m);

/// Least-squares slope of log N(ε) against log(1/ε) over the given scales.
double box_dimension_estimate(const std::vector<Vec3>& points, const std::vector<double>& scales);

/// 17 log-spaced scales from the stage-1 to the stage-3 torus diameter: two
/// whole self-similarity periods, so the log-periodic ripple of N(ε) cancels.
std::vector<double> default_box_scales(const Necklace& n);

/// Fixed point of φ1; every sample is an image of it, so samples lie on X.
Vec3 chaos_basepoint(const Necklace& n);

/// count points φ_a(basepoint) for seeded uniform addresses a of length depth.
std::vector<Vec3> chaos_game_sample(const Necklace& n, std::size_t count, int depth, std::uint64_t seed);

}  // namespace antoine
