#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ckosc/dynamics.hpp"
#include "ckosc/errors.hpp"

using namespace ckosc;
using namespace ckosc::dynamics;

namespace {

// Classical RK4 on x'' = -(2 gamma / m) x with a fine step; an oracle that
// shares no code with either the closed form or Verlet.
std::array<double, 2> rk4(double m, double gamma, double x, double v, double t) {
  const double k = 2.0 * gamma / m;
  const int steps = 20000;
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1x = v, k1v = -k * x;
    const double k2x = v + 0.5 * h * k1v, k2v = -k * (x + 0.5 * h * k1x);
    const double k3x = v + 0.5 * h * k2v, k3v = -k * (x + 0.5 * h * k2x);
    const double k4x = v + h * k3v, k4v = -k * (x + h * k3x);
    x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {x, v};
}

// Exact integral of a polynomial given by coefficients.
double integrate_poly(const std::vector<double>& c, double a, double b) {
  double s = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    s += c[k] * (std::pow(b, static_cast<double>(k + 1)) - std::pow(a, static_cast<double>(k + 1))) / (k + 1);
  }
  return s;
}

std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> deriv(const std::array<double, 4>& c) { return {c[1], 2 * c[2], 3 * c[3]}; }

OscillatorRun unit_run() {
  OscillatorRun run;
  run.ic = {{1.0}, {0.0}};
  return run;
}

double max_abs_x(const std::vector<FamilyMember>& members) {
  double worst = 0;
  for (const auto& m : members)
    for (std::size_t i = 0; i < m.trajectory.size(); ++i) worst = std::max(worst, std::fabs(m.trajectory.q(i, 0)));
  return worst;
}

}  // namespace

TEST_CASE("closed form") {
  OscillatorRun run = unit_run();
  auto s = base_exact(run, std::numbers::pi / 2);
  CHECK(s[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(-1.0));
  CHECK(base_exact(run, 0.0) == std::array<double, 2>{1.0, 0.0});

  run.m = 2;
  run.gamma = 1;
  run.ic = {{0.0}, {1.0}};
  s = base_exact(run, std::numbers::pi);
  CHECK(s[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(-1.0));
}

TEST_CASE("closed form agrees with RK4") {
  for (double t : {0.3, 2.0, 7.5}) {
    OscillatorRun run;
    run.m = 1.3;
    run.gamma = 0.8;
    run.ic = {{0.4}, {-1.1}};
    const auto exact = base_exact(run, t);
    const auto oracle = rk4(run.m, run.gamma, 0.4, -1.1, t);
    CHECK(exact[0] == doctest::Approx(oracle[0]).epsilon(1e-12));
    CHECK(exact[1] == doctest::Approx(oracle[1]).epsilon(1e-12));
  }
}

TEST_CASE("Verlet against closed form") {
  OscillatorRun run = unit_run();
  run.h = 1e-3;
  run.n = 10000;
  const Trajectory traj = integrate(run, MotionKind::base_1d);
  REQUIRE(traj.size() == 10001);
  CHECK(traj.times.back() == 10.0);
  CHECK(std::fabs(traj.q(10000, 0) - std::cos(10.0)) <= 1e-4);
  CHECK(std::fabs(traj.q(10000, 0) - rk4(1, 0.5, 1, 0, 10.0)[0]) <= 1e-4);
}

TEST_CASE("stability guard") {
  OscillatorRun run = unit_run();
  run.h = 2.0;
  CHECK_THROWS_AS(integrate(run, MotionKind::base_1d), InvalidStep);
  run.h = 1.99;
  run.n = 10;
  CHECK_NOTHROW(integrate(run, MotionKind::base_1d));
  run.h = -1;
  CHECK_THROWS_AS(integrate(run, MotionKind::base_1d), InvalidStep);
  run.h = 1e-3;
  run.ic = {{1.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(integrate(run, MotionKind::base_1d), InvalidInitialCondition);
}

TEST_CASE("free fiber motion") {
  OscillatorRun run;
  run.clock = Clock::t_tilde;
  run.ic = {{0.5, -2.0}, {0.0, 1.5}};
  run.h = 2.0;  // no force, no stability bound
  run.n = 50;
  const Trajectory traj = integrate(run, MotionKind::fiber_free);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(traj.q(i, 1) == -2.0 + 1.5 * traj.times[i]);
    CHECK(traj.q(i, 0) == 0.5);
  }
  CHECK(traj.clock_label() == "t_tilde");
  run.ic.v[0] = 0.1;
  CHECK_THROWS_AS(integrate(run, MotionKind::fiber_free), InvalidInitialCondition);
}

TEST_CASE("circle in the 2D base") {
  OscillatorRun run;
  run.ic = {{1.0, 0.0}, {0.0, 1.0}};
  run.n = std::lround(2 * std::numbers::pi / run.h);
  const Trajectory traj = integrate(run, MotionKind::base_2d);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r2 = traj.q(i, 0) * traj.q(i, 0) + traj.q(i, 1) * traj.q(i, 1);
    REQUIRE(std::fabs(r2 - 1.0) <= 1e-6);
    REQUIRE(std::fabs(energy(run, traj.state(i), MotionKind::base_2d) - 1.0) <= 1e-6);
  }
}

TEST_CASE("energy") {
  OscillatorRun run;
  CHECK(energy(run, {{1.0}, {0.0}}, MotionKind::base_1d) == 0.5);
  run.m = 2;
  CHECK(energy(run, {{5.0, 0.0}, {0.0, 3.0}}, MotionKind::fiber_free) == 9.0);
  run.m = 1;
  CHECK(energy(run, {{1.0, 1.0}, {1.0, 1.0}}, MotionKind::minkowski_plane) == 0.0);
  CHECK(angular_momentum(run, {{1.0, 0.0}, {0.0, 2.0}}) == 2.0);
}

TEST_CASE("Minkowski plane conserves its indefinite energy") {
  OscillatorRun run;
  run.ic = {{1.0, 0.0}, {0.0, 0.5}};
  run.n = 5000;
  const Trajectory traj = integrate(run, MotionKind::minkowski_plane);
  const double e0 = energy(run, traj.state(0), MotionKind::minkowski_plane);
  for (std::size_t i = 0; i < traj.size(); i += 100) {
    CHECK(energy(run, traj.state(i), MotionKind::minkowski_plane) == doctest::Approx(e0).epsilon(1e-6));
  }
}

TEST_CASE("clocks do not mix") {
  OscillatorRun run = unit_run();
  run.n = 10;
  const Trajectory a = integrate(run, MotionKind::base_1d);
  OscillatorRun other = run;
  other.ic = a.state(a.size() - 1);
  const Trajectory joined = concatenate(a, integrate(other, MotionKind::base_1d));
  CHECK(joined.size() == 21);
  CHECK(joined.times.back() == doctest::Approx(0.02));
  other.clock = Clock::t_hat;
  CHECK_THROWS_AS(concatenate(a, integrate(other, MotionKind::base_1d)), ClockMismatch);
}

TEST_CASE("band family") {
  OscillatorRun run;
  FamilySpec spec;
  spec.u0 = {-1, 1, 3};
  spec.y0 = {-2, 2, 3};
  const auto band = family_band(spec, run);
  REQUIRE(band.size() == 9);
  CHECK(max_abs_x(band) <= 1.0 * (1 + 1e-9));
  CHECK(band[4].constants.at("u0") == 0.0);
  CHECK(band[5].file_name() == "member_1_2.csv");
  for (const auto& m : band) CHECK(m.trajectory.clock_label() == "t/t_tilde");

  spec.u0 = {0.5, 0.5, 1};
  spec.y0 = {1, 1, 1};
  CHECK(family_band(spec, run).size() == 1);
  spec.u0.count = 0;
  CHECK_THROWS_AS(family_band(spec, run), ConfigError);
}

TEST_CASE("band amplitude holds for any phase") {
  OscillatorRun run;
  run.h = 0.05;
  FamilySpec spec;
  spec.amplitude = 2.5;
  spec.horizon = 40;
  spec.u0 = {0, 0, 1};
  spec.y0 = {0, 0, 1};
  for (double phase : {0.0, 0.3, 1.0, 2.2}) {
    spec.phase = phase;
    CHECK(max_abs_x(family_band(spec, run)) <= spec.amplitude * (1 + 1e-9));
  }
}

TEST_CASE("band covers its strip") {
  // Brute-force nearest sample to (0.5, 7.3) across a dense family.
  OscillatorRun run;
  run.h = 1e-2;
  FamilySpec spec;
  spec.u0 = {-1, 1, 11};
  spec.y0 = {-10, 10, 41};
  const auto band = family_band(spec, run);
  double best = 1e9;
  for (const auto& m : band)
    for (std::size_t i = 0; i < m.trajectory.size(); ++i)
      best = std::min(best, std::hypot(m.trajectory.q(i, 0) - 0.5, m.trajectory.q(i, 1) - 7.3));
  CHECK(best <= spec.y0.spacing());
}

TEST_CASE("cylinder family") {
  OscillatorRun run;
  run.ic = {{1.0, 0.0}, {0.0, 1.0}};
  FamilySpec spec;
  spec.w0 = {-1, 1, 2};
  spec.z0 = {0, 0, 1};
  const auto members = family_cylinder(spec, run);
  REQUIRE(members.size() == 2);
  for (const auto& m : members) {
    for (std::size_t i = 0; i < m.trajectory.size(); ++i) {
      const double r2 = m.trajectory.q(i, 0) * m.trajectory.q(i, 0) + m.trajectory.q(i, 1) * m.trajectory.q(i, 1);
      REQUIRE(std::fabs(r2 - 1) <= 1e-6);
    }
  }
  spec.w0 = {0, 0, 1};
  spec.z0 = {3, 3, 1};
  const auto flat = family_cylinder(spec, run);
  for (std::size_t i = 0; i < flat[0].trajectory.size(); ++i) REQUIRE(flat[0].trajectory.q(i, 2) == 3.0);
}

TEST_CASE("region3 family") {
  OscillatorRun run;
  FamilySpec spec;
  spec.u0 = {0, 0, 1};
  spec.y0 = {0, 0, 1};
  spec.w0 = {0, 0, 1};
  const auto still = family_region3(spec, run);
  REQUIRE(still.size() == 1);
  for (std::size_t i = 0; i < still[0].trajectory.size(); ++i) {
    REQUIRE(std::fabs(still[0].trajectory.q(i, 0)) <= 1.0);
    REQUIRE(still[0].trajectory.q(i, 1) == 0.0);
    REQUIRE(still[0].trajectory.q(i, 2) == 0.0);
  }

  spec.u0 = {1, 1, 1};
  spec.w0 = {2, 2, 1};
  const auto line = family_region3(spec, run);
  for (std::size_t i = 0; i < line[0].trajectory.size(); ++i) {
    REQUIRE(line[0].trajectory.q(i, 2) == doctest::Approx(2 * line[0].trajectory.q(i, 1)));
  }
}

TEST_CASE("region3 covers its box") {
  // Coarse time grid keeps the brute-force search small.
  OscillatorRun run;
  run.h = 0.05;
  FamilySpec spec;
  spec.horizon = 2 * std::numbers::pi;
  spec.u0 = {-1, 1, 5};
  spec.y0 = {-5, 5, 11};
  spec.w0 = {-1, 1, 5};
  spec.z0_ratio = 1.0;
  const auto region = family_region3(spec, run);
  CHECK(region.size() == 275);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(-1, 1), uyz(-5, 5);
  // Half a grid cell in each fiber direction at the latest time, plus one step in x.
  const double half = 0.5 * spec.y0.spacing() + 0.5 * spec.horizon * spec.u0.spacing();
  const double resolution = std::hypot(half, half) + run.h;
  for (int t = 0; t < 20; ++t) {
    const double px = ux(rng), py = uyz(rng), pz = uyz(rng);
    double best = 1e9;
    for (const auto& m : region)
      for (std::size_t i = 0; i < m.trajectory.size(); ++i)
        best = std::min(best, std::hypot(m.trajectory.q(i, 0) - px,
                                         std::hypot(m.trajectory.q(i, 1) - py, m.trajectory.q(i, 2) - pz)));
    CHECK(best <= resolution);
  }
}

TEST_CASE("action split against exact polynomial integrals") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const double m = 1.0, gamma = 0.5;
  for (int k = 0; k < 20; ++k) {
    PolynomialPath p;
    for (auto& c : p.x) c = u(rng);
    for (auto& c : p.y) c = u(rng);
    p.t1 = u(rng);
    p.t2 = p.t1 + 1.5;
    const std::vector<double> x(p.x.begin(), p.x.end()), y(p.y.begin(), p.y.end());
    const auto dx = deriv(p.x), dy = deriv(p.y);
    const double sb = 0.5 * m * integrate_poly(mul(dx, dx), p.t1, p.t2) - gamma * integrate_poly(mul(x, x), p.t1, p.t2);
    const double sy = 0.5 * m * integrate_poly(mul(dy, dy), p.t1, p.t2) - gamma * integrate_poly(mul(y, y), p.t1, p.t2);
    const auto r = contraction_action_check(p, 1e-3, m, gamma);
    CHECK(r.s_base == doctest::Approx(sb).epsilon(1e-12));
    CHECK(r.s_fiber == doctest::Approx(sy).epsilon(1e-12));
    CHECK(r.defect <= 1e-12 * (1 + std::fabs(r.s_base)));
  }
  PolynomialPath flat;
  flat.x = {1, 2, 0, -1};
  CHECK(contraction_action_check(flat, 0.3).s_eps == doctest::Approx(contraction_action_check(flat, 0.3).s_base));
  CHECK(contraction_action_check(flat, 0.0).s_eps == contraction_action_check(flat, 0.0).s_base);
}

TEST_CASE("csv layout") {
  OscillatorRun run = unit_run();
  run.n = 2;
  std::ostringstream os;
  write_csv(os, integrate(run, MotionKind::base_1d));
  CHECK(os.str().rfind("clock,step,time,x,vx\nt,0,0,1,0\nt,1,0.001,", 0) == 0);
}
