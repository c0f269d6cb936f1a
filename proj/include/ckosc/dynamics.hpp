#pragma once

// Dynamics of the contracted oscillator actions.
//
// The potential is gamma*q^2, so the Euler-Lagrange equation of
// (m/2) qdot^2 - gamma q^2 is m qddot = -2 gamma q and the angular
// frequency is omega = sqrt(2 gamma / m). Fiber coordinates move freely on
// their own clocks (t_tilde, t_hat); no conversion between clocks exists.

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ckosc::dynamics {

enum class Clock { t, t_tilde, t_hat };

std::string_view to_string(Clock c);
Clock clock_from_string(std::string_view text);

enum class MotionKind { base_1d, base_2d, fiber_free, minkowski_plane };

std::string_view to_string(MotionKind k);
MotionKind kind_from_string(std::string_view text);
/// Number of coordinates in the state of this kind.
std::size_t state_dim(MotionKind k);

/// Positions and velocities; index 0, 1, 2 is x, y, z.
struct PhaseState {
  std::vector<double> q;
  std::vector<double> v;

  bool operator==(const PhaseState&) const = default;
};

struct OscillatorRun {
  double m = 1.0;
  double gamma = 0.5;
  Clock clock = Clock::t;
  PhaseState ic;
  double h = 1e-3;
  long n = 1000;

  double omega() const;
  /// Throws InvalidInitialCondition / InvalidStep on bad parameters; the
  /// stability bound itself is checked by integrate().
  void validate() const;
};

/// Uniformly sampled states, stored row-major (sample, coordinate).
struct Trajectory {
  /// One clock per coordinate.
  std::vector<Clock> clocks;
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;

  std::size_t dim() const { return clocks.size(); }
  std::size_t size() const { return times.size(); }

  double q(std::size_t sample, std::size_t coord) const { return positions[sample * dim() + coord]; }
  double v(std::size_t sample, std::size_t coord) const { return velocities[sample * dim() + coord]; }
  PhaseState state(std::size_t sample) const;

  /// "t", or the distinct clocks joined with '/' (e.g. "t/t_tilde").
  std::string clock_label() const;
};

/// Closed form x0 cos(wt) + (v0/w) sin(wt) and its derivative.
std::array<double, 2> oscillator_exact(double omega, double q0, double v0, double t);

/// Exact (x, vx) of the base oscillator started from run.ic.
std::array<double, 2> base_exact(const OscillatorRun& run, double t);

/// Velocity Verlet with n steps of size h. Free coordinates (the fiber in
/// fiber_free) are written in closed form q0 + v0 t, which is what Verlet
/// produces for zero force. fiber_free holds x at the fiber position x0 and
/// requires vx = 0. Oscillating kinds throw InvalidStep if h*omega >= 2.
Trajectory integrate(const OscillatorRun& run, MotionKind kind);

/// First integral: sum (m/2) v^2 + gamma q^2 over oscillating coordinates,
/// kinetic energy of the fiber only for fiber_free, weight -1 on y for the
/// Minkowski plane.
double energy(const OscillatorRun& run, const PhaseState& s, MotionKind kind);

/// m (x vy - y vx) for planar states.
double angular_momentum(const OscillatorRun& run, const PhaseState& s);

/// Appends a continuation b, started from the final state of a, to a. The
/// first sample of b duplicates the last of a and is dropped; times of b
/// are shifted to follow a. Throws ClockMismatch if the clocks differ.
Trajectory concatenate(const Trajectory& a, const Trajectory& b);

// ---------------------------------------------------------------------------
// Families of trajectories

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  std::vector<double> values() const;
  double spacing() const { return count > 1 ? (hi - lo) / (count - 1) : 0.0; }
};

struct FamilySpec {
  double amplitude = 1.0;
  double phase = 0.0;
  double horizon = 6.283185307179586;
  Grid u0{-1.0, 1.0, 3};
  Grid y0{-2.0, 2.0, 3};
  Grid w0{-1.0, 1.0, 2};
  Grid z0{0.0, 0.0, 1};
  /// region3 only: z0 = z0_ratio * y0, leaving three independent knobs.
  double z0_ratio = 1.0;

  void validate() const;
};

struct FamilyMember {
  std::vector<int> index;
  std::map<std::string, double> constants;
  Trajectory trajectory;

  /// member_<i>_<j>[_<k>].csv
  std::string file_name() const;
};

/// Base x with amplitude A on clock t, fiber y = u0 t_tilde + y0 for the
/// (u0, y0) grid.
std::vector<FamilyMember> family_band(const FamilySpec& spec, const OscillatorRun& run);

/// 2D base oscillator from run.ic on clock t, fiber z = w0 t_tilde + z0 for
/// the (w0, z0) grid.
std::vector<FamilyMember> family_cylinder(const FamilySpec& spec, const OscillatorRun& run);

/// Base x on t, y = u0 t_tilde + y0, z = w0 t_hat + z0 with z0 slaved to
/// y0; grid (u0, y0, w0).
std::vector<FamilyMember> family_region3(const FamilySpec& spec, const OscillatorRun& run);

/// Verlet initial state whose discrete orbit x_n = A cos(theta n + phase)
/// has amplitude exactly A.
PhaseState amplitude_state(double amplitude, double phase, double omega, double h);

// ---------------------------------------------------------------------------
// Action split at the contraction

/// x(t) = sum x[k] t^k, y(t) = sum y[k] t^k on [t1, t2].
struct PolynomialPath {
  std::array<double, 4> x{};
  std::array<double, 4> y{};
  double t1 = 0.0;
  double t2 = 1.0;
};

struct ActionSplitReport {
  double s_base = 0.0;   // coefficient of 1
  double s_fiber = 0.0;  // coefficient of j^2
  double s_eps = 0.0;    // action at j = eps
  double defect = 0.0;   // |s_eps - s_base - eps^2 s_fiber|
};

/// Evaluates the planar action with y* = j y at j = eps and splits it into
/// the parts of order 1 and j^2 of the same integrand, all by 5-point
/// Gauss-Legendre quadrature.
ActionSplitReport contraction_action_check(const PolynomialPath& path, double eps, double m = 1.0,
                                           double gamma = 0.5);

// ---------------------------------------------------------------------------
// Serialization

/// clock,step,time,x,vx[,y,vy][,z,vz]
void write_csv(std::ostream& os, const Trajectory& traj);

nlohmann::json member_manifest_entry(const FamilyMember& member);

}  // namespace ckosc::dynamics
