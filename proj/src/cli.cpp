#include "ckosc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ckosc/config.hpp"
#include "ckosc/errors.hpp"
#include "ckosc/geometry.hpp"
#include "ckosc/symbolic.hpp"
#include "ckosc/verify.hpp"
#include "json.hpp"
#include "numfmt.hpp"

namespace ckosc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::sci;
using detail::shortest;

std::vector<std::string> split_list(const std::vector<std::string>& items, char sep) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::string piece;
    std::istringstream in(item);
    while (std::getline(in, piece, sep)) {
      piece.erase(0, piece.find_first_not_of(" \t"));
      piece.erase(piece.find_last_not_of(" \t") + 1);
      if (!piece.empty()) out.push_back(piece);
    }
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& piece : split_list({text}, ',')) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(piece, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != piece.size() || used == 0) throw ConfigError(std::string(what) + ": '" + piece + "' is not a number");
    out.push_back(value);
  }
  return out;
}

symbolic::Symbol symbol_or_throw(std::string_view text) {
  auto s = symbolic::symbol_from_name(text);
  if (!s) throw ConfigError("unknown symbol '" + std::string(text) + "'");
  return *s;
}

// "y*=j2*y": the starred name is the original variable.
void add_substitution(symbolic::Substitution& sub, const std::string& rule) {
  const auto eq = rule.find('=');
  if (eq == std::string::npos) throw ConfigError("substitution '" + rule + "' must look like name*=expr");
  std::string lhs = rule.substr(0, eq);
  lhs.erase(std::remove(lhs.begin(), lhs.end(), ' '), lhs.end());
  if (!lhs.empty() && lhs.back() == '*') lhs.pop_back();
  sub.set(symbol_or_throw(lhs), symbolic::parse_expr(std::string_view(rule).substr(eq + 1)));
}

Signature signature_or_throw(int s2, int s3) {
  if (!Signature::valid(s2) || !Signature::valid(s3)) throw ConfigError("sigma values must be +1, 0 or -1");
  return Signature{s2, s3};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

// ---------------------------------------------------------------------------

struct ContractArgs {
  std::string base;
  std::string expr;
  std::vector<std::string> subs;
  std::string time = "1";
  std::string scale = "1";
  int sigma2 = 1;
  int sigma3 = 1;
  std::vector<std::string> freeze;
  std::string out;
  bool json_stdout = false;
};

int cmd_contract(const ContractArgs& a, std::ostream& out) {
  if (a.base.empty() == a.expr.empty()) throw ConfigError("give exactly one of --base and --expr");
  symbolic::Expr base;
  if (a.base == "eq5") {
    base = symbolic::harmonic_action(2);
  } else if (a.base == "eq11") {
    base = symbolic::harmonic_action(3);
  } else if (!a.base.empty()) {
    throw ConfigError("unknown base action '" + a.base + "' (expected eq5 or eq11)");
  } else {
    base = symbolic::parse_expr(a.expr);
  }
  const Signature sig = signature_or_throw(a.sigma2, a.sigma3);

  symbolic::Substitution sub;
  for (const auto& rule : split_list(a.subs, ',')) add_substitution(sub, rule);
  sub.time = symbolic::parse_param_power(a.time);
  sub.scale = symbolic::parse_param_power(a.scale);
  std::set<symbolic::Symbol> frozen;
  for (const auto& name : split_list(a.freeze, ',')) {
    const auto s = symbol_or_throw(name);
    if (!symbolic::is_coordinate(s)) throw ConfigError("--freeze takes coordinates, got '" + name + "'");
    frozen.insert(s);
  }

  const symbolic::Expr result = symbolic::contract_action(base, sub, sig, frozen);
  const json doc = symbolic::to_json(result);
  out << symbolic::render(result) << '\n';
  if (a.json_stdout) out << doc.dump() << '\n';
  if (!a.out.empty()) write_text(prepare_dir(a.out) / "contract.json", doc.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------

// Flags that override the config file; unset ones leave it alone.
struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> m, gamma, h;
  std::optional<long> n;
  std::optional<std::string> clock;
  std::optional<std::string> q, v;
  std::optional<int> sigma2, sigma3;
  std::optional<double> amplitude, phase, horizon, z0_ratio;
  std::optional<std::string> u0, y0, w0, z0;
};

struct LoadedConfig {
  RunConfig cfg;
  bool clock_given = false;
};

LoadedConfig load_config(const Overrides& o) {
  json doc = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("cannot open config file " + o.config);
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw ConfigError("config file " + o.config + " is not valid JSON: " + e.what());
    }
  }
  LoadedConfig lc;
  lc.cfg = RunConfig::from_json(doc);
  lc.clock_given = doc.is_object() && doc.contains("clock");
  RunConfig& c = lc.cfg;
  if (o.out) c.output = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.m) c.m = *o.m;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.h) c.h = *o.h;
  if (o.n) c.n = *o.n;
  if (o.clock) {
    c.clock = dynamics::clock_from_string(*o.clock);
    lc.clock_given = true;
  }
  if (o.sigma2 || o.sigma3) {
    c.signature = signature_or_throw(o.sigma2.value_or(c.signature.sigma2), o.sigma3.value_or(c.signature.sigma3));
  }
  if (o.q || o.v) {
    if (!o.q || !o.v) throw ConfigError("--q and --v must be given together");
    c.initial = dynamics::PhaseState{parse_numbers(*o.q, "--q"), parse_numbers(*o.v, "--v")};
  }
  if (o.amplitude) c.family.amplitude = *o.amplitude;
  if (o.phase) c.family.phase = *o.phase;
  if (o.horizon) c.family.horizon = *o.horizon;
  if (o.z0_ratio) c.family.z0_ratio = *o.z0_ratio;
  if (o.u0) c.family.u0 = parse_grid(*o.u0);
  if (o.y0) c.family.y0 = parse_grid(*o.y0);
  if (o.w0) c.family.w0 = parse_grid(*o.w0);
  if (o.z0) c.family.z0 = parse_grid(*o.z0);
  c.validate();
  return lc;
}

int cmd_simulate(const Overrides& o, const std::string& kind_name, std::ostream& out) {
  const auto kind = dynamics::kind_from_string(kind_name);
  LoadedConfig lc = load_config(o);
  lc.cfg.validate_for(kind);
  dynamics::OscillatorRun run = lc.cfg.oscillator_run(kind);
  if (kind == dynamics::MotionKind::fiber_free && !lc.clock_given) run.clock = dynamics::Clock::t_tilde;

  const dynamics::Trajectory traj = dynamics::integrate(run, kind);
  const fs::path dir = prepare_dir(lc.cfg.output);
  std::ostringstream csv;
  dynamics::write_csv(csv, traj);
  write_text(dir / "trajectory.csv", csv.str());

  json manifest = {{"command", "simulate"},
                   {"kind", std::string(dynamics::to_string(kind))},
                   {"config", lc.cfg.to_json()},
                   {"initial", {{"q", run.ic.q}, {"v", run.ic.v}}},
                   {"clock", traj.clock_label()},
                   {"omega", run.omega()},
                   {"samples", traj.size()},
                   {"file", "trajectory.csv"}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  const std::size_t last = traj.size() - 1;
  out << "simulate " << dynamics::to_string(kind) << ": " << traj.size() << " samples on clock "
      << traj.clock_label() << ", omega = " << shortest(run.omega());
  if (kind == dynamics::MotionKind::base_1d) {
    const double exact = dynamics::base_exact(run, traj.times[last])[0];
    out << ", final x = " << shortest(traj.q(last, 0)) << " (closed form " << shortest(exact) << ")";
  }
  out << "\n";
  return kOk;
}

int cmd_family(const Overrides& o, const std::string& which, std::ostream& out) {
  LoadedConfig lc = load_config(o);
  const RunConfig& c = lc.cfg;
  dynamics::OscillatorRun run = c.oscillator_run(dynamics::MotionKind::base_2d);
  if (which == "cylinder") {
    lc.cfg.validate_for(dynamics::MotionKind::base_2d);
  } else if (which != "band" && which != "region3") {
    throw ConfigError("unknown family '" + which + "' (expected band, cylinder or region3)");
  }

  std::vector<dynamics::FamilyMember> members;
  if (which == "band") members = dynamics::family_band(c.family, run);
  if (which == "cylinder") members = dynamics::family_cylinder(c.family, run);
  if (which == "region3") members = dynamics::family_region3(c.family, run);

  const fs::path dir = prepare_dir(c.output);
  json entries = json::array();
  for (const auto& m : members) {
    std::ostringstream csv;
    dynamics::write_csv(csv, m.trajectory);
    write_text(dir / m.file_name(), csv.str());
    entries.push_back(dynamics::member_manifest_entry(m));
  }

  bool ok = true;
  std::string check;
  json summary;
  if (which == "cylinder") {
    double de = 0, dl = 0;
    for (const auto& m : members) {
      const auto& tr = m.trajectory;
      auto base = [&](std::size_t i) {
        return dynamics::PhaseState{{tr.q(i, 0), tr.q(i, 1)}, {tr.v(i, 0), tr.v(i, 1)}};
      };
      const double e0 = dynamics::energy(run, base(0), dynamics::MotionKind::base_2d);
      const double l0 = dynamics::angular_momentum(run, base(0));
      for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto s = base(i);
        de = std::max(de, std::fabs(dynamics::energy(run, s, dynamics::MotionKind::base_2d) - e0) / std::fabs(e0));
        if (l0 != 0.0) dl = std::max(dl, std::fabs(dynamics::angular_momentum(run, s) - l0) / std::fabs(l0));
      }
    }
    ok = de <= 1e-6 && dl <= 1e-6;
    check = "base energy drift " + sci(de) + ", angular momentum drift " + sci(dl) + " (bound 1e-6)";
    summary = {{"energy_drift", de}, {"angular_momentum_drift", dl}, {"passed", ok}};
  } else {
    const double a = c.family.amplitude;
    double worst = 0;
    for (const auto& m : members) {
      for (std::size_t i = 0; i < m.trajectory.size(); ++i) worst = std::max(worst, std::fabs(m.trajectory.q(i, 0)));
    }
    ok = worst <= a * (1.0 + 1e-9);
    check = "max|x| = " + shortest(worst) + ", |x| <= A(1+1e-9) with A = " + shortest(a);
    summary = {{"max_abs_x", worst}, {"amplitude", a}, {"passed", ok}};
  }

  json manifest = {{"command", "family"},
                   {"which", which},
                   {"config", c.to_json()},
                   {"omega", run.omega()},
                   {"members", entries},
                   {"check", summary}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "family " << which << ": " << members.size() << " members; " << check << ": " << (ok ? "PASS" : "FAIL")
      << "\n";
  return ok ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

geometry::FiberedSpace load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open space file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("space file " + path + " is not valid JSON: " + e.what());
  }
  return geometry::FiberedSpace::from_json(j);
}

void print_space(const geometry::FiberedSpace& sp, std::ostream& out) {
  out << "space: dim " << sp.dim() << ", signature " << to_string(sp.signature()) << "\n";
  for (const auto& c : sp.coords()) out << "  " << c.name << " [" << c.tag << "]\n";
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return "{" + s + "}";
  };
  for (std::size_t i = 0; i < sp.levels().size(); ++i) {
    out << "  level " << i + 1 << ": base " << join(sp.levels()[i].base) << " | fiber "
        << join(sp.levels()[i].fiber) << "\n";
  }
}

int cmd_classify(std::optional<int> sigma, const std::string& space, std::ostream& out) {
  if (sigma.has_value() == !space.empty()) throw ConfigError("give exactly one of --sigma and --space");
  int s = 0;
  if (!space.empty()) {
    const auto sp = load_space(space);
    print_space(sp, out);
    if (sp.dim() != 2) throw ConfigError("line-bundle classification needs a plane (dim 2)");
    s = sp.signature().sigma2;
  } else {
    s = *sigma;
    if (!Signature::valid(s)) throw ConfigError("--sigma must be +1, 0 or -1");
  }
  const auto lines = geometry::classify_line_bundle(s);
  out << "sigma = " << s << ": " << lines.count << " isolated line" << (lines.count == 1 ? "" : "s");
  for (const auto& d : lines.directions) out << " (" << shortest(d.x) << ", " << shortest(d.y) << ")";
  out << "\n";
  return kOk;
}

int cmd_metric(const std::string& space, int sigma2, int sigma3, int dim, const std::string& d,
               std::optional<int> level, std::ostream& out) {
  const geometry::FiberedSpace sp =
      space.empty() ? geometry::FiberedSpace(dim, signature_or_throw(sigma2, sigma3)) : load_space(space);
  const auto comps = parse_numbers(d, "--d");
  if (static_cast<int>(comps.size()) != sp.dim()) {
    throw DimensionMismatch("--d has " + std::to_string(comps.size()) + " components for a space of dim " +
                            std::to_string(sp.dim()));
  }
  geometry::Displacement disp{comps[0], comps[1], {}};
  if (comps.size() == 3) disp.dz = comps[2];
  const CKScalar ds2 = geometry::metric_interval(sp, disp);
  const bool real = ds2.j2() == 0 && ds2.j3() == 0 && ds2.j23() == 0;
  out << "ds^2 = " << (real ? shortest(ds2.real()) : to_string(ds2)) << "\n";
  if (level) out << "level " << *level << " metric = " << shortest(geometry::level_metric(sp, *level, disp)) << "\n";
  return kOk;
}

int cmd_verify(std::uint64_t seed, const std::string& only, const std::string& fault, std::ostream& out) {
  verify::Options opts;
  opts.seed = seed;
  opts.only = only;
  opts.expect_fail = fault;
  const auto results = verify::run(opts);
  verify::print_report(out, results);
  return verify::all_passed(results) ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contractions of Cayley-Klein oscillator actions", "ckosc"};
  app.require_subcommand(1);

  ContractArgs contract;
  auto* c = app.add_subcommand("contract", "Substitute, freeze and reduce an oscillator action");
  c->add_option("--base", contract.base, "Built-in action: eq5 (planar) or eq11 (3D)");
  c->add_option("--expr", contract.expr, "Inline integrand");
  c->add_option("--sub", contract.subs, "Substitution such as \"y*=j2*y\"; repeatable or comma-separated");
  c->add_option("--time", contract.time, "Clock rescale t* = J t', e.g. j2");
  c->add_option("--scale", contract.scale, "Action prefactor, e.g. 1/j2");
  c->add_option("--sigma2", contract.sigma2, "j2^2");
  c->add_option("--sigma3", contract.sigma3, "j3^2");
  c->add_option("--freeze", contract.freeze, "Coordinates held fixed on the fiber");
  c->add_option("--out", contract.out, "Directory for contract.json");
  c->add_flag("--json", contract.json_stdout, "Also print the JSON normal form");

  Overrides sim;
  std::string kind = "base_1d";
  auto add_run_flags = [](CLI::App* cmd, Overrides& o) {
    cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for the step size
    cmd->add_option("--config", o.config, "JSON run configuration");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--seed", o.seed, "Seed");
    cmd->add_option("--m", o.m, "Mass");
    cmd->add_option("--gamma", o.gamma, "Coupling in gamma*q^2");
    cmd->add_option("--h", o.h, "Step size");
    cmd->add_option("--sigma2", o.sigma2, "j2^2");
    cmd->add_option("--sigma3", o.sigma3, "j3^2");
    cmd->add_option("--q", o.q, "Initial positions, comma-separated");
    cmd->add_option("--v", o.v, "Initial velocities, comma-separated");
  };
  auto* s = app.add_subcommand("simulate", "Integrate one trajectory");
  add_run_flags(s, sim);
  s->add_option("--kind", kind, "base_1d, base_2d, fiber_free or minkowski_plane");
  s->add_option("--n", sim.n, "Number of steps");
  s->add_option("--clock", sim.clock, "t, t_tilde or t_hat");

  Overrides fam;
  std::string which = "band";
  auto* f = app.add_subcommand("family", "Generate a family of base/fiber trajectories");
  add_run_flags(f, fam);
  f->add_option("--which", which, "band, cylinder or region3");
  f->add_option("--amplitude", fam.amplitude, "Base amplitude A");
  f->add_option("--phase", fam.phase, "Base phase");
  f->add_option("--horizon", fam.horizon, "Time span");
  f->add_option("--z0-ratio", fam.z0_ratio, "region3: z0 = ratio * y0");
  f->add_option("--u0", fam.u0, "Grid lo:hi:count");
  f->add_option("--y0", fam.y0, "Grid lo:hi:count");
  f->add_option("--w0", fam.w0, "Grid lo:hi:count");
  f->add_option("--z0", fam.z0, "Grid lo:hi:count");

  std::optional<int> sigma;
  std::string classify_space;
  auto* k = app.add_subcommand("classify", "Isolated lines of a Cayley-Klein plane");
  k->add_option("--sigma", sigma, "+1, 0 or -1");
  k->add_option("--space", classify_space, "FiberedSpace JSON file");

  std::string metric_space, disp;
  int m_sigma2 = 1, m_sigma3 = 1, m_dim = 2;
  std::optional<int> level;
  auto* mt = app.add_subcommand("metric", "Interval and fiber metrics of a displacement");
  mt->add_option("--space", metric_space, "FiberedSpace JSON file");
  mt->add_option("--sigma2", m_sigma2, "j2^2");
  mt->add_option("--sigma3", m_sigma3, "j3^2");
  mt->add_option("--dim", m_dim, "2 or 3");
  mt->add_option("--d", disp, "Displacement, e.g. 3,4")->required();
  mt->add_option("--level", level, "Fibration level 0, 1 or 2");

  std::uint64_t seed = 42;
  std::string only, fault;
  auto* v = app.add_subcommand("verify", "Run the self-check suite");
  v->add_option("--seed", seed, "Seed for randomized checks");
  v->add_option("--only", only, "One group: algebra, symbolic, classification, geometry, dynamics, families");
  v->add_option("--expect-fail", fault, "Fault injection: mul-table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*c) return cmd_contract(contract, out);
    if (*s) return cmd_simulate(sim, kind, out);
    if (*f) return cmd_family(fam, which, out);
    if (*k) return cmd_classify(sigma, classify_space, out);
    if (*mt) return cmd_metric(metric_space, m_sigma2, m_sigma3, m_dim, disp, level, out);
    if (*v) return cmd_verify(seed, only, fault, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kParseError;
  } catch (const IndefiniteExpression& e) {
    err << e.what() << "\n";
    for (const auto& m : e.monomials()) err << "  " << m << "\n";
    return kIndefinite;
  } catch (const InvalidStep& e) {
    err << "integration error: " << e.what() << "\n";
    return kIntegrationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace ckosc::cli
