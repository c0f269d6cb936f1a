#include "ckosc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ckosc/errors.hpp"

namespace ckosc {

namespace {

using nlohmann::json;

void allow_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

dynamics::Grid read_grid(const json& j, const char* name) {
  allow_keys(j, name, {"lo", "hi", "count"});
  dynamics::Grid g;
  read(j, "lo", g.lo);
  read(j, "hi", g.hi);
  read(j, "count", g.count);
  return g;
}

json grid_json(const dynamics::Grid& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}}; }

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    allow_keys(j, "config", {"signature", "oscillator", "integration", "clock", "initial", "family",
                             "output", "seed"});
    if (j.contains("signature")) {
      const auto& s = j.at("signature");
      allow_keys(s, "signature", {"sigma2", "sigma3"});
      int s2 = c.signature.sigma2, s3 = c.signature.sigma3;
      read(s, "sigma2", s2);
      read(s, "sigma3", s3);
      c.signature = Signature{s2, s3};
    }
    if (j.contains("oscillator")) {
      const auto& o = j.at("oscillator");
      allow_keys(o, "oscillator", {"m", "gamma"});
      read(o, "m", c.m);
      read(o, "gamma", c.gamma);
    }
    if (j.contains("integration")) {
      const auto& i = j.at("integration");
      allow_keys(i, "integration", {"h", "n"});
      read(i, "h", c.h);
      read(i, "n", c.n);
    }
    if (j.contains("clock")) c.clock = dynamics::clock_from_string(j.at("clock").get<std::string>());
    if (j.contains("initial")) {
      const auto& s = j.at("initial");
      allow_keys(s, "initial", {"q", "v"});
      c.initial = dynamics::PhaseState{s.at("q").get<std::vector<double>>(),
                                       s.at("v").get<std::vector<double>>()};
    }
    if (j.contains("family")) {
      const auto& f = j.at("family");
      allow_keys(f, "family", {"amplitude", "phase", "horizon", "z0_ratio", "u0", "y0", "w0", "z0"});
      read(f, "amplitude", c.family.amplitude);
      read(f, "phase", c.family.phase);
      read(f, "horizon", c.family.horizon);
      read(f, "z0_ratio", c.family.z0_ratio);
      if (f.contains("u0")) c.family.u0 = read_grid(f.at("u0"), "u0");
      if (f.contains("y0")) c.family.y0 = read_grid(f.at("y0"), "y0");
      if (f.contains("w0")) c.family.w0 = read_grid(f.at("w0"), "w0");
      if (f.contains("z0")) c.family.z0 = read_grid(f.at("z0"), "z0");
    }
    read(j, "output", c.output);
    read(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const InvalidSignature& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j = {{"signature", {{"sigma2", signature.sigma2}, {"sigma3", signature.sigma3}}},
            {"oscillator", {{"m", m}, {"gamma", gamma}}},
            {"integration", {{"h", h}, {"n", n}}},
            {"clock", std::string(dynamics::to_string(clock))},
            {"family",
             {{"amplitude", family.amplitude},
              {"phase", family.phase},
              {"horizon", family.horizon},
              {"z0_ratio", family.z0_ratio},
              {"u0", grid_json(family.u0)},
              {"y0", grid_json(family.y0)},
              {"w0", grid_json(family.w0)},
              {"z0", grid_json(family.z0)}}},
            {"output", output},
            {"seed", seed}};
  if (initial) j["initial"] = {{"q", initial->q}, {"v", initial->v}};
  return j;
}

void RunConfig::validate() const {
  if (!Signature::valid(signature.sigma2) || !Signature::valid(signature.sigma3)) {
    throw ConfigError("signature entries must be +1, 0 or -1");
  }
  if (!(m > 0) || !std::isfinite(m)) throw ConfigError("oscillator.m must be positive");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw ConfigError("oscillator.gamma must be positive");
  if (!(h > 0) || !std::isfinite(h)) throw ConfigError("integration.h must be positive");
  if (n < 1 || n > 100'000'000) throw ConfigError("integration.n must be in [1, 1e8]");
  if (initial) {
    if (initial->q.size() != initial->v.size() || initial->q.empty() || initial->q.size() > 3) {
      throw ConfigError("initial.q and initial.v must have the same length (1 to 3)");
    }
    for (double x : initial->q) {
      if (!std::isfinite(x)) throw ConfigError("initial.q must be finite");
    }
    for (double x : initial->v) {
      if (!std::isfinite(x)) throw ConfigError("initial.v must be finite");
    }
  }
  family.validate();
  if (output.empty()) throw ConfigError("output directory must not be empty");
}

void RunConfig::validate_for(dynamics::MotionKind kind) const {
  validate();
  if (initial && initial->q.size() != dynamics::state_dim(kind)) {
    throw ConfigError(std::string(dynamics::to_string(kind)) + " needs an initial state with " +
                      std::to_string(dynamics::state_dim(kind)) + " coordinates");
  }
  if (initial && kind == dynamics::MotionKind::fiber_free && initial->v[0] != 0.0) {
    throw ConfigError("fiber_free holds x fixed; initial vx must be 0");
  }
}

dynamics::OscillatorRun RunConfig::oscillator_run(dynamics::MotionKind kind) const {
  dynamics::OscillatorRun run;
  run.m = m;
  run.gamma = gamma;
  run.h = h;
  run.n = n;
  run.clock = clock;
  run.ic = initial ? *initial : default_initial_state(kind);
  return run;
}

dynamics::PhaseState default_initial_state(dynamics::MotionKind kind) {
  switch (kind) {
    case dynamics::MotionKind::base_1d:
      return {{1.0}, {0.0}};
    case dynamics::MotionKind::base_2d:
      return {{1.0, 0.0}, {0.0, 1.0}};
    case dynamics::MotionKind::fiber_free:
      return {{0.0, 0.0}, {0.0, 1.0}};
    case dynamics::MotionKind::minkowski_plane:
      return {{1.0, 0.0}, {0.0, 0.5}};
  }
  return {};
}

dynamics::Grid parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string lo, hi, count;
  if (!std::getline(in, lo, ':') || !std::getline(in, hi, ':') || !std::getline(in, count) ||
      in.peek() != std::char_traits<char>::eof()) {
    throw ConfigError("grid '" + text + "' must look like lo:hi:count");
  }
  try {
    std::size_t used = 0;
    dynamics::Grid g;
    g.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    g.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    g.count = std::stoi(count, &used);
    if (used != count.size()) throw std::invalid_argument(count);
    return g;
  } catch (const std::logic_error&) {
    throw ConfigError("grid '" + text + "' must look like lo:hi:count");
  }
}

}  // namespace ckosc
