// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "ckosc/algebra.hpp"
#include "ckosc/cli.hpp"
#include "ckosc/dynamics.hpp"
#include "ckosc/errors.hpp"
#include "ckosc/geometry.hpp"
#include "ckosc/symbolic.hpp"

using namespace ckosc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

constexpr std::array<int, 3> kSigmas = {1, 0, -1};

Outcome symbolic_reproduction() {
  using namespace symbolic;
  std::vector<std::string> misses;
  auto expect = [&](const char* label, const Expr& got, const char* want) {
    if (!expr_equal(got, parse_expr(want), 1e-12)) misses.push_back(std::string(label) + " gave " + render(got));
  };
  const Expr euclid2 = harmonic_action(2), euclid3 = harmonic_action(3);

  const Expr embedded = substitute(euclid2, cayley_klein_embedding(2));
  expect("planar embedding", embedded, "(1/2)*m*(vx^2 + j2^2*vy^2) - gamma*(x^2 + j2^2*y^2)");
  expect("base action", reduce(embedded, Signature{0, 1}), "(1/2)*m*vx^2 - gamma*x^2");

  Substitution tilde = cayley_klein_embedding(2);
  tilde.time = parse_param_power("j2");
  tilde.scale = parse_param_power("1/j2");
  const Expr clocked = substitute(euclid2, tilde);
  expect("fiber clock", clocked, "(1/2)*m*(j2^-2*vx^2 + vy^2) - gamma*(x^2 + j2^2*y^2)");
  expect("fiber action", restrict_fiber(clocked, {Symbol::x}, Signature{0, 1}), "(1/2)*m*vy^2 - gamma*x0^2");

  const Expr embedded3 = substitute(euclid3, cayley_klein_embedding(3));
  expect("3D embedding", embedded3,
         "(1/2)*m*(vx^2 + j2^2*vy^2 + j2^2*j3^2*vz^2) - gamma*(x^2 + j2^2*y^2 + j2^2*j3^2*z^2)");
  expect("3D base", reduce(embedded3, Signature{1, 0}), "(1/2)*m*(vx^2 + vy^2) - gamma*(x^2 + y^2)");

  Substitution fiber3;
  fiber3.set(Symbol::z, "j3*z");
  fiber3.time = parse_param_power("j3");
  fiber3.scale = parse_param_power("1/j3");
  const Expr clocked3 = substitute(euclid3, fiber3);
  expect("3D fiber clock", clocked3, "(1/2)*m*(j3^-2*(vx^2 + vy^2) + vz^2) - gamma*(x^2 + y^2 + j3^2*z^2)");
  expect("3D fiber action", restrict_fiber(clocked3, {Symbol::x, Symbol::y}, Signature{1, 0}),
         "(1/2)*m*vz^2 - gamma*(x0^2 + y0^2)");

  // -gamma(x0^2 + y0^2) survives when only j3 is nilpotent; with both
  // nilpotent the y0 term is annihilated, leaving -gamma x0^2. Both are
  // asserted.
  Substitution hat = cayley_klein_embedding(3);
  hat.time = parse_param_power("j2*j3");
  hat.scale = parse_param_power("1/(j2*j3)");
  expect("second fiber at (1, iota3)", contract_action(euclid3, hat, Signature{1, 0}, {Symbol::x, Symbol::y}),
         "(1/2)*m*vz^2 - gamma*(x0^2 + y0^2)");
  expect("second fiber at (iota2, iota3)", contract_action(euclid3, hat, Signature{0, 0}, {Symbol::x, Symbol::y}),
         "(1/2)*m*vz^2 - gamma*x0^2");

  if (!misses.empty()) return {false, misses.front()};
  return {true, "10 derivations match to 1e-12"};
}

Outcome mass_renormalization() {
  using namespace symbolic;
  Substitution renorm;
  renorm.set(Symbol::y, "j2*y");
  renorm.set(Symbol::m, "j2^-2*m");
  const Expr clocked = parse_expr("(1/2)*m*(j2^-2*vx^2 + vy^2) - gamma*(x^2 + j2^2*y^2)");
  const Expr got = substitute(harmonic_action(2), renorm);
  const bool ok = expr_equal(got, clocked, 0.0);
  return {ok, ok ? "exact match with the clock-rescaled action" : "got " + render(got)};
}

Outcome algebra_laws() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  auto diff = [](const CKScalar& a, const CKScalar& b) {
    const CKScalar d = a - b;
    return std::max({std::fabs(d.real()), std::fabs(d.j2()), std::fabs(d.j3()), std::fabs(d.j23())});
  };
  for (int s2 : kSigmas) {
    for (int s3 : kSigmas) {
      const Signature sig{s2, s3};
      auto r = [&] { return CKScalar(u(rng), u(rng), u(rng), u(rng), sig); };
      for (int i = 0; i < 1000; ++i) {
        const CKScalar x = r(), y = r(), z = r();
        worst = std::max({worst, diff(x * y, y * x), diff((x * y) * z, x * (y * z)), diff(x * (y + z), x * y + x * z)});
      }
    }
  }
  const Signature dual{0, 0};
  const bool unit_ok = div_unit(CKScalar::unit(Unit::j2, dual), Unit::j2) == CKScalar(1.0, dual) &&
                       div_unit(CKScalar::unit(Unit::j3, dual), Unit::j3) == CKScalar(1.0, dual);
  bool raised = false;
  try {
    div_unit(CKScalar(1.0, dual), Unit::j2);
  } catch (const NonDivisible&) {
    raised = true;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max law residual %.3e over 9x1000 triples; iota/iota = 1: %s; 1/iota2 raises: %s",
                worst, unit_ok ? "yes" : "no", raised ? "yes" : "no");
  return {worst <= 1e-12 && unit_ok && raised, buf};
}

Outcome classification() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3, 3);
  const int expected[] = {0, 1, 2};
  bool ok = true;
  double worst = 0;
  std::string counts;
  for (std::size_t k = 0; k < 3; ++k) {
    const int sigma = kSigmas[k];
    const auto lines = geometry::classify_line_bundle(sigma);
    ok = ok && lines.count == expected[k];
    counts += (counts.empty() ? "" : ", ") + std::to_string(sigma) + " -> " + std::to_string(lines.count);
    for (const auto& d : lines.directions) {
      for (int i = 0; i < 100; ++i) {
        const auto r = geometry::generalized_rotation(sigma, u(rng), d);
        worst = std::max(worst, std::fabs(d.x * r.y - d.y * r.x) / std::hypot(r.x, r.y));
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s; invariance residual %.3e", counts.c_str(), worst);
  return {ok && worst <= 1e-12, buf};
}

Outcome action_split() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    dynamics::PolynomialPath p;
    for (auto& c : p.x) c = u(rng);
    for (auto& c : p.y) c = u(rng);
    p.t1 = u(rng);
    p.t2 = p.t1 + 1.0 + std::fabs(u(rng));
    for (double eps : {1e-2, 1e-3}) {
      const auto r = dynamics::contraction_action_check(p, eps);
      worst = std::max(worst, std::fabs(r.s_eps - r.s_base - eps * eps * r.s_fiber) / (1 + std::fabs(r.s_base)));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |S(eps) - S_b - eps^2 S_y| / (1+|S_b|) = %.3e", worst);
  return {worst <= 1e-10, buf};
}

Outcome integrator_quality() {
  using namespace dynamics;
  OscillatorRun run;
  run.ic = {{1.0}, {0.0}};
  run.h = 1e-3;
  run.n = 10000;
  const Trajectory traj = integrate(run, MotionKind::base_1d);
  const double e0 = energy(run, traj.state(0), MotionKind::base_1d);
  double drift = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    drift = std::max(drift, std::fabs(energy(run, traj.state(i), MotionKind::base_1d) - e0) / e0);
  }

  auto err = [](double h) {
    OscillatorRun r;
    r.ic = {{1.0}, {0.0}};
    r.h = h;
    r.n = std::lround(10.0 / h);
    const Trajectory t = integrate(r, MotionKind::base_1d);
    double e = 0;
    for (std::size_t i = 0; i < t.size(); ++i) e = std::max(e, std::fabs(t.q(i, 0) - std::cos(t.times[i])));
    return e;
  };
  const double ratio = err(2e-3) / err(1e-3);

  OscillatorRun free_run;
  free_run.clock = Clock::t_tilde;
  free_run.ic = {{0.0, -1.25}, {0.0, 0.75}};
  free_run.n = 10000;
  const Trajectory f = integrate(free_run, MotionKind::fiber_free);
  double resid = 0;
  for (std::size_t i = 0; i < f.size(); ++i) resid = std::max(resid, std::fabs(f.q(i, 1) - (-1.25 + 0.75 * f.times[i])));

  char buf[160];
  std::snprintf(buf, sizeof buf, "energy drift %.3e; Richardson ratio %.4f; fiber linear residual %.3e", drift, ratio,
                resid);
  return {drift <= 1e-6 && ratio >= 3.5 && ratio <= 4.5 && resid <= 1e-12, buf};
}

Outcome family_geometry() {
  using namespace dynamics;
  OscillatorRun run;
  FamilySpec spec;
  spec.amplitude = 1.5;
  spec.phase = 0.4;
  spec.u0 = {-1, 1, 3};
  spec.y0 = {-2, 2, 3};
  double band = 0;
  for (const auto& m : family_band(spec, run))
    for (std::size_t i = 0; i < m.trajectory.size(); ++i) band = std::max(band, std::fabs(m.trajectory.q(i, 0)));

  OscillatorRun circ;
  circ.ic = {{1.0, 0.0}, {0.0, 1.0}};
  FamilySpec cyl;
  cyl.horizon = 20 * std::numbers::pi;
  double de = 0, dl = 0;
  for (const auto& m : family_cylinder(cyl, circ)) {
    const auto& t = m.trajectory;
    auto base = [&](std::size_t i) { return PhaseState{{t.q(i, 0), t.q(i, 1)}, {t.v(i, 0), t.v(i, 1)}}; };
    const double e0 = energy(circ, base(0), MotionKind::base_2d), l0 = angular_momentum(circ, base(0));
    for (std::size_t i = 0; i < t.size(); ++i) {
      de = std::max(de, std::fabs(energy(circ, base(i), MotionKind::base_2d) - e0) / e0);
      dl = std::max(dl, std::fabs(angular_momentum(circ, base(i)) - l0) / std::fabs(l0));
    }
  }

  FamilySpec r3 = spec;
  r3.y0 = {-50, 50, 3};
  r3.w0 = {-20, 20, 3};
  double region = 0, spread = 0;
  for (const auto& m : family_region3(r3, run)) {
    for (std::size_t i = 0; i < m.trajectory.size(); ++i) {
      region = std::max(region, std::fabs(m.trajectory.q(i, 0)));
      spread = std::max({spread, std::fabs(m.trajectory.q(i, 1)), std::fabs(m.trajectory.q(i, 2))});
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "band max|x|/A %.12f; cylinder drifts E %.3e, L %.3e; region3 max|x|/A %.12f with |y|,|z| up to %.1f",
                band / spec.amplitude, de, dl, region / r3.amplitude, spread);
  return {band <= spec.amplitude * (1 + 1e-9) && de <= 1e-6 && dl <= 1e-6 && region <= r3.amplitude * (1 + 1e-9) &&
              spread > 10 * r3.amplitude,
          buf};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  std::ostringstream v1, v2, sink;
  const int c1 = cli::run({"verify", "--seed", "42"}, v1, sink);
  const int c2 = cli::run({"verify", "--seed", "42"}, v2, sink);
  bool same = c1 == 0 && c2 == 0 && v1.str() == v2.str();

  const fs::path root = fs::temp_directory_path() / "ckosc_acceptance";
  fs::remove_all(root);
  std::size_t compared = 0;
  for (const char* which : {"band", "cylinder", "region3"}) {
    for (const char* run : {"a", "b"}) {
      std::ostringstream out;
      // a relative output path keeps the manifests identical
      const fs::path dir = root / run;
      fs::create_directories(dir);
      const fs::path previous = fs::current_path();
      fs::current_path(dir);
      cli::run({"family", "--which", which, "--seed", "42", "--out", which}, out, sink);
      fs::current_path(previous);
    }
    for (const auto& e : fs::directory_iterator(root / "a" / which)) {
      same = same && slurp(e.path()) == slurp(root / "b" / which / e.path().filename());
      ++compared;
    }
  }
  fs::remove_all(root);
  return {same && compared > 0, "verify report and " + std::to_string(compared) + " family files byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"symbolic reproduction of the derivation catalogue", symbolic_reproduction},
      {"mass renormalization equivalence", mass_renormalization},
      {"algebra laws, unit division and non-divisibility", algebra_laws},
      {"isolated-line classification and invariance", classification},
      {"action split at the contraction", action_split},
      {"integrator quality", integrator_quality},
      {"family geometry", family_geometry},
      {"determinism of verify and family outputs", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << "criterion " << i + 1 << ": " << (o.passed ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
              << o.detail << ")\n";
    failed += o.passed ? 0 : 1;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
