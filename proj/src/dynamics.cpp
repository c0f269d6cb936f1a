#include "ckosc/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "ckosc/errors.hpp"
#include "ckosc/symbolic.hpp"
#include "numfmt.hpp"

namespace ckosc::dynamics {

std::string_view to_string(Clock c) {
  switch (c) {
    case Clock::t:
      return "t";
    case Clock::t_tilde:
      return "t_tilde";
    case Clock::t_hat:
      return "t_hat";
  }
  return "?";
}

Clock clock_from_string(std::string_view text) {
  if (text == "t") return Clock::t;
  if (text == "t_tilde") return Clock::t_tilde;
  if (text == "t_hat") return Clock::t_hat;
  throw ConfigError("unknown clock '" + std::string(text) + "' (expected t, t_tilde or t_hat)");
}

std::string_view to_string(MotionKind k) {
  switch (k) {
    case MotionKind::base_1d:
      return "base_1d";
    case MotionKind::base_2d:
      return "base_2d";
    case MotionKind::fiber_free:
      return "fiber_free";
    case MotionKind::minkowski_plane:
      return "minkowski_plane";
  }
  return "?";
}

MotionKind kind_from_string(std::string_view text) {
  for (auto k : {MotionKind::base_1d, MotionKind::base_2d, MotionKind::fiber_free,
                 MotionKind::minkowski_plane}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown motion kind '" + std::string(text) + "'");
}

std::size_t state_dim(MotionKind k) { return k == MotionKind::base_1d ? 1 : 2; }

double OscillatorRun::omega() const { return std::sqrt(2.0 * gamma / m); }

void OscillatorRun::validate() const {
  if (!(m > 0) || !std::isfinite(m)) throw InvalidInitialCondition("mass must be positive");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InvalidInitialCondition("gamma must be positive");
  if (!(h > 0) || !std::isfinite(h)) throw InvalidStep("step size must be positive");
  if (n < 1) throw InvalidStep("step count must be at least 1");
  if (ic.q.size() != ic.v.size()) {
    throw InvalidInitialCondition("initial positions and velocities differ in length");
  }
  for (double x : ic.q) {
    if (!std::isfinite(x)) throw InvalidInitialCondition("initial positions must be finite");
  }
  for (double x : ic.v) {
    if (!std::isfinite(x)) throw InvalidInitialCondition("initial velocities must be finite");
  }
}

PhaseState Trajectory::state(std::size_t sample) const {
  const auto first = static_cast<std::ptrdiff_t>(sample * dim());
  const auto last = first + static_cast<std::ptrdiff_t>(dim());
  return {{positions.begin() + first, positions.begin() + last},
          {velocities.begin() + first, velocities.begin() + last}};
}

std::string Trajectory::clock_label() const {
  std::vector<Clock> distinct;
  for (Clock c : clocks) {
    if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(c);
  }
  std::string out;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (i) out += '/';
    out += to_string(distinct[i]);
  }
  return out;
}

std::array<double, 2> oscillator_exact(double omega, double q0, double v0, double t) {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {q0 * c + (v0 / omega) * s, -q0 * omega * s + v0 * c};
}

std::array<double, 2> base_exact(const OscillatorRun& run, double t) {
  if (run.ic.q.empty() || run.ic.v.empty()) throw InvalidInitialCondition("base_exact needs x and vx");
  return oscillator_exact(run.omega(), run.ic.q[0], run.ic.v[0], t);
}

Trajectory integrate(const OscillatorRun& run, MotionKind kind) {
  run.validate();
  const std::size_t dim = state_dim(kind);
  if (run.ic.q.size() != dim) {
    throw InvalidInitialCondition(std::string(to_string(kind)) + " needs " + std::to_string(dim) +
                                  " coordinates, got " + std::to_string(run.ic.q.size()));
  }
  const double w = run.omega();
  if (kind == MotionKind::fiber_free) {
    if (run.ic.v[0] != 0.0) throw InvalidInitialCondition("fiber_free holds x fixed; vx must be 0");
  } else if (run.h * w >= 2.0) {
    throw InvalidStep("unstable step: h*omega = " + detail::shortest(run.h * w) + " >= 2");
  }

  Trajectory traj;
  traj.clocks.assign(dim, run.clock);
  traj.h = run.h;
  const auto samples = static_cast<std::size_t>(run.n) + 1;
  traj.times.reserve(samples);
  traj.positions.reserve(samples * dim);
  traj.velocities.reserve(samples * dim);

  std::vector<double> q = run.ic.q;
  std::vector<double> v = run.ic.v;
  std::vector<double> a(dim, 0.0);
  const double w2 = w * w;
  auto accel = [&] {
    for (std::size_t k = 0; k < dim; ++k) a[k] = kind == MotionKind::fiber_free ? 0.0 : -w2 * q[k];
  };
  accel();

  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) * run.h;
    if (i > 0) {
      for (std::size_t k = 0; k < dim; ++k) {
        v[k] += 0.5 * run.h * a[k];
        q[k] += run.h * v[k];
      }
      accel();
      for (std::size_t k = 0; k < dim; ++k) v[k] += 0.5 * run.h * a[k];
    }
    traj.times.push_back(t);
    for (std::size_t k = 0; k < dim; ++k) {
      if (kind == MotionKind::fiber_free) {
        // x sits at the fiber position; y moves freely
        traj.positions.push_back(k == 0 ? run.ic.q[0] : run.ic.q[1] + run.ic.v[1] * t);
        traj.velocities.push_back(k == 0 ? 0.0 : run.ic.v[1]);
      } else {
        traj.positions.push_back(q[k]);
        traj.velocities.push_back(v[k]);
      }
    }
  }
  return traj;
}

double energy(const OscillatorRun& run, const PhaseState& s, MotionKind kind) {
  const double half_m = 0.5 * run.m;
  switch (kind) {
    case MotionKind::base_1d:
      return half_m * s.v[0] * s.v[0] + run.gamma * s.q[0] * s.q[0];
    case MotionKind::base_2d:
      return half_m * (s.v[0] * s.v[0] + s.v[1] * s.v[1]) +
             run.gamma * (s.q[0] * s.q[0] + s.q[1] * s.q[1]);
    case MotionKind::fiber_free:
      return half_m * s.v[1] * s.v[1];
    case MotionKind::minkowski_plane:
      return half_m * (s.v[0] * s.v[0] - s.v[1] * s.v[1]) +
             run.gamma * (s.q[0] * s.q[0] - s.q[1] * s.q[1]);
  }
  return 0.0;
}

double angular_momentum(const OscillatorRun& run, const PhaseState& s) {
  if (s.q.size() < 2) throw InvalidInitialCondition("angular momentum needs a planar state");
  return run.m * (s.q[0] * s.v[1] - s.q[1] * s.v[0]);
}

Trajectory concatenate(const Trajectory& a, const Trajectory& b) {
  if (a.clocks != b.clocks) {
    throw ClockMismatch("cannot join trajectories on clocks " + a.clock_label() + " and " +
                        b.clock_label());
  }
  if (a.h != b.h) throw Error("cannot join trajectories with different step sizes");
  if (a.size() == 0) return b;
  Trajectory out = a;
  const double offset = a.times.back() - (b.size() ? b.times.front() : 0.0);
  const std::size_t d = b.dim();
  for (std::size_t i = 1; i < b.size(); ++i) {
    out.times.push_back(b.times[i] + offset);
    out.positions.insert(out.positions.end(), b.positions.begin() + static_cast<std::ptrdiff_t>(i * d),
                         b.positions.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    out.velocities.insert(out.velocities.end(), b.velocities.begin() + static_cast<std::ptrdiff_t>(i * d),
                          b.velocities.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Families

std::vector<double> Grid::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  }
  return out;
}

void FamilySpec::validate() const {
  if (!(amplitude > 0) || !std::isfinite(amplitude)) throw ConfigError("amplitude must be positive");
  if (!std::isfinite(phase)) throw ConfigError("phase must be finite");
  if (!(horizon > 0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
  if (!std::isfinite(z0_ratio)) throw ConfigError("z0_ratio must be finite");
  for (const auto* g : {&u0, &y0, &w0, &z0}) {
    if (g->count < 1) throw ConfigError("grid counts must be at least 1");
    if (!std::isfinite(g->lo) || !std::isfinite(g->hi) || g->lo > g->hi) {
      throw ConfigError("grid bounds must be finite with lo <= hi");
    }
  }
}

std::string FamilyMember::file_name() const {
  std::string out = "member";
  for (int i : index) out += "_" + std::to_string(i);
  return out + ".csv";
}

PhaseState amplitude_state(double amplitude, double phase, double omega, double h) {
  if (h * omega >= 2.0) throw InvalidStep("unstable step: h*omega = " + detail::shortest(h * omega) + " >= 2");
  const double discrete = std::sqrt(1.0 - 0.25 * h * h * omega * omega);
  return {{amplitude * std::cos(phase)}, {-amplitude * omega * discrete * std::sin(phase)}};
}

namespace {

long family_steps(const FamilySpec& spec, const OscillatorRun& run) {
  return std::max(1L, std::lround(spec.horizon / run.h));
}

Trajectory amplitude_base(const FamilySpec& spec, const OscillatorRun& run) {
  OscillatorRun base = run;
  base.clock = Clock::t;
  base.n = family_steps(spec, run);
  base.ic = amplitude_state(spec.amplitude, spec.phase, run.omega(), run.h);
  return integrate(base, MotionKind::base_1d);
}

// Base coordinates followed by free fiber coordinates q = c + u * tau.
Trajectory with_fibers(const Trajectory& base, const std::vector<Clock>& fiber_clocks,
                       const std::vector<double>& start, const std::vector<double>& rate) {
  Trajectory out;
  out.clocks = base.clocks;
  out.clocks.insert(out.clocks.end(), fiber_clocks.begin(), fiber_clocks.end());
  out.h = base.h;
  out.times = base.times;
  const std::size_t d = out.dim();
  out.positions.reserve(base.size() * d);
  out.velocities.reserve(base.size() * d);
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t k = 0; k < base.dim(); ++k) {
      out.positions.push_back(base.q(i, k));
      out.velocities.push_back(base.v(i, k));
    }
    for (std::size_t f = 0; f < start.size(); ++f) {
      out.positions.push_back(start[f] + rate[f] * base.times[i]);
      out.velocities.push_back(rate[f]);
    }
  }
  return out;
}

}  // namespace

std::vector<FamilyMember> family_band(const FamilySpec& spec, const OscillatorRun& run) {
  spec.validate();
  const Trajectory base = amplitude_base(spec, run);
  std::vector<FamilyMember> out;
  const auto us = spec.u0.values();
  const auto ys = spec.y0.values();
  for (std::size_t i = 0; i < us.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      FamilyMember m;
      m.index = {static_cast<int>(i), static_cast<int>(j)};
      m.constants = {{"u0", us[i]}, {"y0", ys[j]}};
      m.trajectory = with_fibers(base, {Clock::t_tilde}, {ys[j]}, {us[i]});
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<FamilyMember> family_cylinder(const FamilySpec& spec, const OscillatorRun& run) {
  spec.validate();
  OscillatorRun base_run = run;
  base_run.clock = Clock::t;
  base_run.n = family_steps(spec, run);
  const Trajectory base = integrate(base_run, MotionKind::base_2d);
  std::vector<FamilyMember> out;
  const auto ws = spec.w0.values();
  const auto zs = spec.z0.values();
  for (std::size_t i = 0; i < ws.size(); ++i) {
    for (std::size_t j = 0; j < zs.size(); ++j) {
      FamilyMember m;
      m.index = {static_cast<int>(i), static_cast<int>(j)};
      m.constants = {{"w0", ws[i]}, {"z0", zs[j]}};
      m.trajectory = with_fibers(base, {Clock::t_tilde}, {zs[j]}, {ws[i]});
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<FamilyMember> family_region3(const FamilySpec& spec, const OscillatorRun& run) {
  spec.validate();
  const Trajectory base = amplitude_base(spec, run);
  std::vector<FamilyMember> out;
  const auto us = spec.u0.values();
  const auto ys = spec.y0.values();
  const auto ws = spec.w0.values();
  for (std::size_t i = 0; i < us.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      for (std::size_t k = 0; k < ws.size(); ++k) {
        const double z0 = spec.z0_ratio * ys[j];
        FamilyMember m;
        m.index = {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)};
        m.constants = {{"u0", us[i]}, {"y0", ys[j]}, {"w0", ws[k]}, {"z0", z0}};
        m.trajectory = with_fibers(base, {Clock::t_tilde, Clock::t_hat}, {ys[j], z0}, {us[i], ws[k]});
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Action split

namespace {

struct SplitIntegrands {
  symbolic::NormalForm full;
  symbolic::NormalForm base;
  symbolic::NormalForm fiber;
};

const SplitIntegrands& split_integrands() {
  static const SplitIntegrands parts = [] {
    using namespace symbolic;
    const Expr planar = substitute(harmonic_action(2), cayley_klein_embedding(2));
    return SplitIntegrands{planar.normal_form(), reduce(planar, Signature{0, 1}).normal_form(),
                           parameter_coefficient(planar, {2, 0}).normal_form()};
  }();
  return parts;
}

double poly(const std::array<double, 4>& c, double t) { return ((c[3] * t + c[2]) * t + c[1]) * t + c[0]; }

double dpoly(const std::array<double, 4>& c, double t) { return (3.0 * c[3] * t + 2.0 * c[2]) * t + c[1]; }

}  // namespace

ActionSplitReport contraction_action_check(const PolynomialPath& path, double eps, double m, double gamma) {
  // 5-point Gauss-Legendre on [-1, 1]; exact to degree 9
  static constexpr std::array<double, 5> nodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665,
                                                    0.4786286704993665, 0.2369268850561891,
                                                    0.2369268850561891};
  const auto& parts = split_integrands();
  const double half = 0.5 * (path.t2 - path.t1);
  const double mid = 0.5 * (path.t2 + path.t1);

  ActionSplitReport r;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double t = mid + half * nodes[k];
    symbolic::Valuation val;
    val[symbolic::Symbol::m] = m;
    val[symbolic::Symbol::gamma] = gamma;
    val[symbolic::Symbol::x] = poly(path.x, t);
    val[symbolic::Symbol::y] = poly(path.y, t);
    val[symbolic::Symbol::vx] = dpoly(path.x, t);
    val[symbolic::Symbol::vy] = dpoly(path.y, t);
    const double w = weights[k] * half;
    r.s_base += w * symbolic::evaluate(parts.base, val);
    r.s_fiber += w * symbolic::evaluate(parts.fiber, val);
    val.j2 = eps;
    r.s_eps += w * symbolic::evaluate(parts.full, val);
  }
  r.defect = std::fabs(r.s_eps - r.s_base - eps * eps * r.s_fiber);
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

void write_csv(std::ostream& os, const Trajectory& traj) {
  static constexpr const char* names[] = {"x", "y", "z"};
  os << "clock,step,time";
  for (std::size_t k = 0; k < traj.dim(); ++k) os << ',' << names[k] << ",v" << names[k];
  os << '\n';
  const std::string label = traj.clock_label();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << label << ',' << i << ',' << detail::shortest(traj.times[i]);
    for (std::size_t k = 0; k < traj.dim(); ++k) {
      os << ',' << detail::shortest(traj.q(i, k)) << ',' << detail::shortest(traj.v(i, k));
    }
    os << '\n';
  }
}

nlohmann::json member_manifest_entry(const FamilyMember& member) {
  nlohmann::json constants = nlohmann::json::object();
  for (const auto& [k, v] : member.constants) constants[k] = v;
  return {{"file", member.file_name()}, {"index", member.index}, {"constants", constants},
          {"clock", member.trajectory.clock_label()}};
}

}  // namespace ckosc::dynamics
