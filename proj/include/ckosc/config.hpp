#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ckosc/algebra.hpp"
#include "ckosc/dynamics.hpp"
#include "json.hpp"

namespace ckosc {

/// Everything a CLI run needs. Loaded from one JSON document:
///
///   {"signature": {"sigma2", "sigma3"}, "oscillator": {"m", "gamma"},
///    "integration": {"h", "n"}, "clock", "initial": {"q", "v"},
///    "family": {"amplitude", "phase", "horizon", "z0_ratio",
///               "u0"|"y0"|"w0"|"z0": {"lo", "hi", "count"}},
///    "output", "seed"}
///
/// Every key is optional; unknown keys are rejected.
struct RunConfig {
  Signature signature{1, 1};
  double m = 1.0;
  double gamma = 0.5;
  double h = 1e-3;
  long n = 10000;
  dynamics::Clock clock = dynamics::Clock::t;
  std::optional<dynamics::PhaseState> initial;
  dynamics::FamilySpec family;
  std::string output = "out";
  std::uint64_t seed = 42;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;

  /// Throws ConfigError for anything the operations would reject other
  /// than the integrator stability bound.
  void validate() const;
  /// Same, plus the shape of the initial state for `kind`.
  void validate_for(dynamics::MotionKind kind) const;

  /// Run with `initial`, or the kind's default state when unset.
  dynamics::OscillatorRun oscillator_run(dynamics::MotionKind kind) const;
};

/// x = 1 at rest for base_1d; the unit circle for base_2d; a fiber line
/// through the origin with u0 = 1 for fiber_free; a point off the null
/// lines for minkowski_plane.
dynamics::PhaseState default_initial_state(dynamics::MotionKind kind);

/// "lo:hi:count"
dynamics::Grid parse_grid(const std::string& text);

}  // namespace ckosc
