#include "ckosc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "ckosc/algebra.hpp"
#include "ckosc/dynamics.hpp"
#include "ckosc/geometry.hpp"
#include "ckosc/symbolic.hpp"
#include "numfmt.hpp"

namespace ckosc::verify {

namespace {

using detail::sci;
using Rng = std::mt19937_64;

class Suite {
 public:
  Suite(std::string group, std::vector<CheckResult>& out) : group_(std::move(group)), out_(out) {}

  void check(std::string name, bool passed, std::string detail) {
    out_.push_back({group_, std::move(name), passed, std::move(detail)});
  }

 private:
  std::string group_;
  std::vector<CheckResult>& out_;
};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

constexpr std::array<int, 3> kSigmas = {1, 0, -1};

// ---------------------------------------------------------------------------
// algebra

using MulFn = std::function<CKScalar(const CKScalar&, const CKScalar&)>;

// j2*j3 and j3*j2 disagree in sign: a broken multiplication table.
CKScalar faulty_mul(const CKScalar& x, const CKScalar& y) {
  const CKScalar good = x * y;
  const double flipped = good.j23() - 2.0 * x.j3() * y.j2();
  return {good.real(), good.j2(), good.j3(), flipped, good.signature()};
}

double norm_inf(const CKScalar& x) {
  return std::max({std::fabs(x.real()), std::fabs(x.j2()), std::fabs(x.j3()), std::fabs(x.j23())});
}

double norm_1(const CKScalar& x) {
  return std::fabs(x.real()) + std::fabs(x.j2()) + std::fabs(x.j3()) + std::fabs(x.j23());
}

CKScalar random_scalar(Rng& rng, Signature sig) {
  return {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), sig};
}

void algebra_checks(Suite& s, Rng& rng, const MulFn& mul) {
  double comm = 0, assoc = 0, dist = 0;
  for (int s2 : kSigmas) {
    for (int s3 : kSigmas) {
      const Signature sig{s2, s3};
      for (int i = 0; i < 1000; ++i) {
        const CKScalar x = random_scalar(rng, sig), y = random_scalar(rng, sig), z = random_scalar(rng, sig);
        auto rel = [](const CKScalar& a, const CKScalar& b) {
          return norm_inf(a - b) / (1.0 + std::max(norm_inf(a), norm_inf(b)));
        };
        comm = std::max(comm, rel(mul(x, y), mul(y, x)));
        assoc = std::max(assoc, rel(mul(mul(x, y), z), mul(x, mul(y, z))));
        dist = std::max(dist, rel(mul(x, y + z), mul(x, y) + mul(x, z)));
      }
    }
  }
  s.check("commutativity", comm <= 1e-12, "max rel residual " + sci(comm) + " over 9x1000 triples");
  s.check("associativity", assoc <= 1e-12, "max rel residual " + sci(assoc) + " over 9x1000 triples");
  s.check("distributivity", dist <= 1e-12, "max rel residual " + sci(dist) + " over 9x1000 triples");

  bool nil_ok = true, cross_ok = true;
  for (int other : kSigmas) {
    const Signature a{0, other}, b{other, 0};
    const double c = uniform(rng, -3, 3);
    nil_ok = nil_ok && mul(c * CKScalar::unit(Unit::j2, a), c * CKScalar::unit(Unit::j2, a)).is_zero();
    nil_ok = nil_ok && mul(c * CKScalar::unit(Unit::j3, b), c * CKScalar::unit(Unit::j3, b)).is_zero();
  }
  const Signature dual{0, 0};
  const CKScalar cross = mul(CKScalar::unit(Unit::j2, dual), CKScalar::unit(Unit::j3, dual));
  cross_ok = cross == CKScalar::unit(Unit::j23, dual);
  s.check("nilpotency", nil_ok, "(b*iota)^2 == 0 for every nilpotent generator");
  s.check("iota2*iota3 != 0", cross_ok, "iota2*iota3 = " + to_string(cross));

  bool div_ok = div_unit(CKScalar::unit(Unit::j2, dual), Unit::j2) == CKScalar(1.0, dual) &&
                div_unit(CKScalar::unit(Unit::j3, dual), Unit::j3) == CKScalar(1.0, dual) &&
                div_unit(CKScalar::unit(Unit::j23, dual), Unit::j23) == CKScalar(1.0, dual);
  int round_trips = 0;
  for (int s2 : kSigmas) {
    for (int s3 : kSigmas) {
      const Signature sig{s2, s3};
      for (Unit u : {Unit::j2, Unit::j3, Unit::j23}) {
        for (int i = 0; i < 50; ++i) {
          CKScalar x = random_scalar(rng, sig);
          // project into the ideal of a nilpotent divisor
          if (sig.nilpotent2() && u != Unit::j3) x = x * CKScalar::unit(Unit::j2, sig);
          if (sig.nilpotent3() && u != Unit::j2) x = x * CKScalar::unit(Unit::j3, sig);
          try {
            const CKScalar q = div_unit(x, u);
            div_ok = div_ok && q * CKScalar::unit(u, sig) == x;
            ++round_trips;
          } catch (const NonDivisible&) {
            // only j23 over a mixed signature can land here; skip
          }
        }
      }
    }
  }
  bool threw = false;
  try {
    div_unit(CKScalar(1.0, dual), Unit::j2);
  } catch (const NonDivisible&) {
    threw = true;
  }
  s.check("division round-trip", div_ok && round_trips > 0,
          "iota/iota = 1, q*unit == x exactly for " + std::to_string(round_trips) + " quotients");
  s.check("1/iota2 rejected", threw, threw ? "NonDivisible raised" : "no error raised");

  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const CKScalar x = random_scalar(rng, dual), y = random_scalar(rng, dual);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double defect = std::fabs(eval(mul(x, y), eps, eps) - eval(x, eps, eps) * eval(y, eps, eps));
      worst = std::max(worst, defect / (norm_1(x) * norm_1(y) * eps * eps));
    }
  }
  s.check("truncated homomorphism", worst <= 1.0, "max defect / (|x||y| eps^2) = " + sci(worst));

  bool text_ok = true;
  for (int i = 0; i < 200; ++i) {
    const Signature sig{kSigmas[i % 3], kSigmas[(i / 3) % 3]};
    const CKScalar x{uniform(rng, -1e6, 1e6), uniform(rng, -1, 1) * 1e-9, uniform(rng, -1, 1),
                     static_cast<double>(i) - 100.0, sig};
    text_ok = text_ok && parse_scalar(to_string(x), sig) == x;
  }
  s.check("scalar text round-trip", text_ok, "200 scalars bit-exact");
}

// ---------------------------------------------------------------------------
// symbolic

using namespace symbolic;

bool matches(const Expr& got, std::string_view expected, std::string& detail) {
  const bool ok = expr_equal(got, parse_expr(expected));
  if (!ok) detail = "got " + render(got);
  return ok;
}

void catalogue_checks(Suite& s) {
  const Expr euclid2 = harmonic_action(2);
  const Expr euclid3 = harmonic_action(3);

  auto run = [&](std::string name, const std::function<Expr()>& derive, std::string_view expected) {
    std::string detail = render(parse_expr(expected));
    bool ok = false;
    try {
      ok = matches(derive(), expected, detail);
    } catch (const Error& e) {
      detail = e.what();
    }
    s.check(std::move(name), ok, detail);
  };

  Substitution plane = cayley_klein_embedding(2);
  Substitution fiber_clock = plane;
  fiber_clock.time = {1, 0};
  fiber_clock.scale = {-1, 0};
  const Expr embedded = substitute(euclid2, plane);
  const Expr clocked = substitute(euclid2, fiber_clock);

  run("planar embedding y* = j y", [&] { return embedded; }, "(1/2)*m*(vx^2 + j2^2*vy^2) - gamma*(x^2 + j2^2*y^2)");
  run("base action at sigma2 = 0", [&] { return reduce(embedded, Signature{0, 1}); }, "(1/2)*m*vx^2 - gamma*x^2");
  run("fiber clock t* = j t~", [&] { return clocked; },
      "(1/2)*m*(j2^-2*vx^2 + vy^2) - gamma*(x^2 + j2^2*y^2)");
  run("fiber action, x frozen", [&] { return restrict_fiber(clocked, {Symbol::x}, Signature{0, 1}); },
      "(1/2)*m*vy^2 - gamma*x0^2");

  const Substitution space = cayley_klein_embedding(3);
  const Expr embedded3 = substitute(euclid3, space);
  run("3D embedding", [&] { return embedded3; },
      "(1/2)*m*(vx^2 + j2^2*vy^2 + j2^2*j3^2*vz^2) - gamma*(x^2 + j2^2*y^2 + j2^2*j3^2*z^2)");
  run("3D base at (1, iota3)", [&] { return reduce(embedded3, Signature{1, 0}); },
      "(1/2)*m*(vx^2 + vy^2) - gamma*(x^2 + y^2)");

  Substitution fiber3;
  fiber3.set(Symbol::z, "j3*z");
  fiber3.time = {0, 1};
  fiber3.scale = {0, -1};
  const Expr clocked3 = substitute(euclid3, fiber3);
  run("3D fiber clock t* = j3 t~", [&] { return clocked3; },
      "(1/2)*m*(j3^-2*(vx^2 + vy^2) + vz^2) - gamma*(x^2 + y^2 + j3^2*z^2)");
  run("3D fiber action, x and y frozen",
      [&] { return restrict_fiber(clocked3, {Symbol::x, Symbol::y}, Signature{1, 0}); },
      "(1/2)*m*vz^2 - gamma*(x0^2 + y0^2)");

  Substitution hat = space;
  hat.time = {1, 1};
  hat.scale = {-1, -1};
  run("second fiber at (iota2, iota3)",
      [&] { return contract_action(euclid3, hat, Signature{0, 0}, {Symbol::x, Symbol::y}); },
      "(1/2)*m*vz^2 - gamma*x0^2");
  run("second-fiber clock at (1, iota3)",
      [&] { return contract_action(euclid3, hat, Signature{1, 0}, {Symbol::x, Symbol::y}); },
      "(1/2)*m*vz^2 - gamma*(x0^2 + y0^2)");

  Substitution renorm = plane;
  renorm.set(Symbol::m, "j2^-2*m");
  {
    const bool ok = expr_equal(substitute(euclid2, renorm), clocked);
    s.check("mass renormalization m = j^2 m*", ok, ok ? "matches the fiber-clock action" : render(substitute(euclid2, renorm)));
  }
  {
    bool threw = false;
    try {
      restrict_fiber(clocked, {}, Signature{0, 1});
    } catch (const IndefiniteExpression&) {
      threw = true;
    }
    s.check("fiber clock without freeze is indefinite", threw, threw ? "IndefiniteExpression" : "accepted");
  }
}

// Random trees over a restricted alphabet.
struct TreeGen {
  Rng& rng;
  bool dynamical = true;
  bool negative_params = false;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Expr leaf() {
    const int k = pick(dynamical ? 4 : 3);
    if (k == 0) {
      const int num = pick(9) - 4;
      const int den = 1 << pick(3);
      return Expr::constant(static_cast<double>(num) / den);
    }
    if (k == 1) return Expr::parameter(2);
    if (k == 2) return Expr::parameter(3);
    static constexpr std::array<Symbol, 6> syms = {Symbol::x, Symbol::vy, Symbol::m,
                                                   Symbol::gamma, Symbol::z, Symbol::x0};
    return Expr::symbol(syms[static_cast<std::size_t>(pick(6))]);
  }

  Expr tree(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(3)) {
      case 0: {
        std::vector<Expr> terms;
        for (int i = 0, n = 2 + pick(2); i < n; ++i) terms.push_back(tree(depth - 1));
        return Expr::sum(std::move(terms));
      }
      case 1: {
        std::vector<Expr> factors;
        for (int i = 0, n = 2 + pick(2); i < n; ++i) factors.push_back(tree(depth - 1));
        return Expr::product(std::move(factors));
      }
      default:
        if (negative_params && pick(3) == 0) return Expr::power(Expr::parameter(2 + pick(2)), -1 - pick(2));
        return Expr::power(tree(depth - 1), pick(4));
    }
  }
};

CKScalar interpret(const Expr& e, Signature sig) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      return CKScalar(e.value(), sig);
    case Expr::Kind::parameter:
      return CKScalar::unit(e.parameter_index() == 2 ? Unit::j2 : Unit::j3, sig);
    case Expr::Kind::sum: {
      CKScalar acc(0.0, sig);
      for (const auto& a : e.operands()) acc = acc + interpret(a, sig);
      return acc;
    }
    case Expr::Kind::product: {
      CKScalar acc(1.0, sig);
      for (const auto& a : e.operands()) acc = acc * interpret(a, sig);
      return acc;
    }
    case Expr::Kind::power: {
      const CKScalar base = interpret(e.operands().front(), sig);
      CKScalar acc(1.0, sig);
      for (int i = 0; i < e.exponent(); ++i) acc = acc * base;
      return acc;
    }
    case Expr::Kind::symbol:
      break;
  }
  throw Error("interpret: dynamical symbol in a parameter-only expression");
}

Valuation random_valuation(Rng& rng) {
  Valuation v;
  for (auto& x : v.symbols) x = uniform(rng, -2, 2);
  return v;
}

void symbolic_property_checks(Suite& s, Rng& rng) {
  {
    TreeGen gen{rng, true, true};
    int ok = 0;
    for (int i = 0; i < 200; ++i) {
      const Expr e = gen.tree(4);
      ok += expr_equal(parse_expr(render(e)), e) ? 1 : 0;
    }
    s.check("parser round-trip", ok == 200, std::to_string(ok) + "/200 generated expressions");
  }
  {
    TreeGen gen{rng, true, false};
    int ok = 0;
    for (int i = 0; i < 50; ++i) {
      Substitution inner;
      inner.set(Symbol::x, Expr::product({Expr::parameter(2 + gen.pick(2)), Expr::symbol(Symbol::x)}));
      inner.set(Symbol::m, Expr::power(Expr::parameter(2), -gen.pick(3)));
      inner.time = {gen.pick(3) - 1, 0};
      inner.scale = inner.time.inverse();
      Substitution outer;
      outer.set(Symbol::z, Expr::sum({Expr::symbol(Symbol::z), Expr::product({Expr::parameter(3), Expr::symbol(Symbol::x)})}));
      outer.set(Symbol::x, Expr::product({Expr::parameter(3), Expr::symbol(Symbol::x)}));
      const Expr e = Expr::sum({gen.tree(3), parse_expr("m*vx^2 + vz*vx + gamma*x*z")});
      ok += expr_equal(substitute(substitute(e, inner), outer), substitute(e, compose(outer, inner))) ? 1 : 0;
    }
    s.check("substitution composition", ok == 50, std::to_string(ok) + "/50 random pairs");
  }
  {
    TreeGen gen{rng, true, true};
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
      const Signature sig{kSigmas[static_cast<std::size_t>(gen.pick(3))], kSigmas[static_cast<std::size_t>(gen.pick(3))]};
      const Expr once = reduce(gen.tree(4), sig);
      ok += expr_equal(reduce(once, sig), once) ? 1 : 0;
    }
    s.check("reduce idempotent", ok == 100, std::to_string(ok) + "/100 random expressions");
  }
  {
    TreeGen gen{rng, false, false};
    int ok = 0;
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
      const Signature sig{kSigmas[static_cast<std::size_t>(gen.pick(3))], kSigmas[static_cast<std::size_t>(gen.pick(3))]};
      const Expr e = gen.tree(4);
      const CKScalar oracle = interpret(e, sig);
      const NormalForm nf = reduce(e, sig).normal_form();
      auto coeff = [&](ParamPower p) {
        Monomial mono;
        mono.params = p;
        auto it = nf.terms().find(mono);
        return it == nf.terms().end() ? 0.0 : it->second;
      };
      const CKScalar got{coeff({0, 0}), coeff({1, 0}), coeff({0, 1}), coeff({1, 1}), sig};
      const double err = norm_inf(got - oracle) / (1.0 + norm_inf(oracle));
      worst = std::max(worst, err);
      ok += err <= 1e-12 && nf.terms().size() <= 4 ? 1 : 0;
    }
    s.check("normal form agrees with CKScalar", ok == 500,
            std::to_string(ok) + "/500 parameter-only expressions, max rel err " + sci(worst));
  }
  {
    TreeGen gen{rng, true, false};
    int ok = 0, tried = 0;
    double lo = 1e9, hi = 0;
    while (tried < 50) {
      const Expr e = Expr::sum({gen.tree(3), Expr::product({Expr::power(Expr::parameter(2), 2), gen.tree(2)})});
      const Expr reduced = reduce(e, Signature{0, 1});
      Valuation v = random_valuation(rng);
      v.j3 = 1.0;
      auto gap = [&](double eps) {
        v.j2 = eps;
        return std::fabs(evaluate(reduced, v) - evaluate(e, v));
      };
      // Leading-order content of the gap: the ratio tests the eps^2 term, so
      // points where it vanishes against eps^3 and higher are skipped.
      std::map<int, double> order;
      {
        Valuation at = v;
        at.j2 = 1.0;
        const NormalForm nf = e.normal_form();
        for (const auto& [mono, c] : nf.terms()) {
          if (mono.params.p2 < 2) continue;
          Monomial stripped = mono;
          stripped.params.p2 = 0;
          order[mono.params.p2] += evaluate(NormalForm::term(stripped, c), at);
        }
      }
      double higher = 0;
      for (const auto& [p, c] : order) higher = p > 2 ? std::max(higher, std::fabs(c)) : higher;
      const double c2 = std::fabs(order[2]);
      if (c2 < 1e-6 || c2 < 1e-2 * higher) continue;
      const double g3 = gap(1e-3), g4 = gap(1e-4);
      ++tried;
      const double ratio = g3 / g4;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ok += ratio >= 80.0 && ratio <= 120.0 ? 1 : 0;
    }
    s.check("sigma2 = 0 is the eps -> 0 limit", ok == tried,
            std::to_string(ok) + "/" + std::to_string(tried) + " Richardson ratios in [80, 120], range [" +
                sci(lo) + ", " + sci(hi) + "]");
  }
  {
    const Expr embedded = substitute(harmonic_action(2), cayley_klein_embedding(2));
    // y equation: d/dt(dL/dvy) = dL/dy  ->  (m eps^2) yddot = -2 gamma eps^2 y
    const NormalForm dl_dy = embedded.normal_form().derivative(Symbol::y);
    const NormalForm dl_dvy = embedded.normal_form().derivative(Symbol::vy);
    Valuation v;
    v[Symbol::m] = 1.7;
    v[Symbol::gamma] = 0.6;
    v[Symbol::y] = 1.0;
    v[Symbol::vy] = 1.0;
    double spread = 0;
    const double expected = -2.0 * 0.6 / 1.7;
    for (double eps : {1.0, 0.3, 1e-2, 1e-4}) {
      v.j2 = eps;
      const double accel = evaluate(dl_dy, v) / evaluate(dl_dvy, v);  // yddot / y with y = vy = 1
      spread = std::max(spread, std::fabs(accel - expected));
    }
    bool y_free = true;
    const NormalForm reduced = reduce(embedded, Signature{0, 1}).normal_form();
    for (const auto& [mono, c] : reduced.terms()) {
      y_free = y_free && mono.exponent_of(Symbol::y) == 0 && mono.exponent_of(Symbol::vy) == 0;
    }
    s.check("fiber EOM independent of eps", spread <= 1e-12, "max deviation " + sci(spread));
    s.check("y absent from reduced (6)", y_free, render(reduce(embedded, Signature{0, 1})));
  }
}

// ---------------------------------------------------------------------------
// geometry and classification

double line_residual(geometry::Point2 d, geometry::Point2 r) {
  const double cross = d.x * r.y - d.y * r.x;
  return std::fabs(cross) / std::hypot(r.x, r.y);
}

void classification_checks(Suite& s, Rng& rng) {
  for (int sigma : kSigmas) {
    const auto lines = geometry::classify_line_bundle(sigma);
    const int expected = sigma == 1 ? 0 : sigma == 0 ? 1 : 2;
    double worst = 0;
    for (const auto& d : lines.directions) {
      for (int i = 0; i < 100; ++i) {
        const double phi = uniform(rng, -3, 3);
        worst = std::max(worst, line_residual(d, geometry::generalized_rotation(sigma, phi, d)));
      }
    }
    s.check("sigma = " + std::to_string(sigma) + " isolated lines",
            lines.count == expected && static_cast<int>(lines.directions.size()) == expected && worst <= 1e-12,
            std::to_string(lines.count) + " lines, invariance residual " + sci(worst));
  }
  int moved = 0;
  for (int i = 0; i < 100; ++i) {
    double phi = uniform(rng, 0.01, std::numbers::pi - 0.01);
    if (i % 2) phi += std::numbers::pi;
    const geometry::Point2 d{1.0, 0.0};
    moved += line_residual(d, geometry::generalized_rotation(1, phi, d)) > 1e-6 ? 1 : 0;
  }
  s.check("Euclid plane has no isolated line", moved == 100, std::to_string(moved) + "/100 rotations move (1,0)");
}

void geometry_checks(Suite& s, Rng& rng) {
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const int sigma = kSigmas[static_cast<std::size_t>(i % 3)];
    const auto sp = geometry::FiberedSpace::plane(sigma);
    const double phi = uniform(rng, -2, 2);
    const geometry::Point2 p1{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const geometry::Point2 p2{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const auto r1 = geometry::generalized_rotation(sigma, phi, p1);
    const auto r2 = geometry::generalized_rotation(sigma, phi, p2);
    const CKScalar before = geometry::metric_interval(sp, {p2.x - p1.x, p2.y - p1.y, {}});
    const CKScalar after = geometry::metric_interval(sp, {r2.x - r1.x, r2.y - r1.y, {}});
    worst = std::max(worst, norm_inf(after - before) / (1.0 + norm_inf(before)));
  }
  s.check("metric invariance", worst <= 1e-12, "max rel change " + sci(worst) + " over 1000 rotations");

  double transit = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = uniform(rng, 0.1, 2) * (i % 2 ? 1 : -1);
    const double slope = uniform(rng, -5, 5), target = uniform(rng, -5, 5);
    const auto r = geometry::generalized_rotation(0, target - slope, {x, slope * x});
    transit = std::max(transit, std::fabs(r.y / r.x - target));
  }
  s.check("Galilei boosts act transitively", transit <= 1e-12, "max slope residual " + sci(transit));

  bool guard = false;
  const auto galilei = geometry::FiberedSpace::plane(0);
  try {
    (void)(galilei.quantity("x", 1.0) + galilei.quantity("y", 1.0));
  } catch (const DimensionTagMismatch&) {
    guard = true;
  }
  const auto euclid = geometry::FiberedSpace::plane(1);
  const double sum = (euclid.quantity("x", 1.0) + euclid.quantity("y", 2.0)).value;
  const geometry::FiberedSpace doubly(3, Signature{0, 0});
  const bool distinct = doubly.tag_of("x") != doubly.tag_of("y") && doubly.tag_of("y") != doubly.tag_of("z") &&
                        doubly.tag_of("x") != doubly.tag_of("z");
  s.check("dimension tags", guard && sum == 3.0 && distinct, "[x] != [y] in G2, [x] = [y] in E2, [z] != [y] != [x]");

  bool levels_ok = geometry::level_metric(galilei, 0, {3, 4, {}}) == 9.0 &&
                   geometry::level_metric(galilei, 1, {0, 4, {}}) == 16.0 &&
                   geometry::level_metric(doubly, 1, {0, 4, 5}) == 16.0 &&
                   geometry::level_metric(doubly, 2, {0, 0, 5}) == 25.0;
  try {
    geometry::level_metric(galilei, 1, {1, 4, {}});
    levels_ok = false;
  } catch (const FiberConstraintViolated&) {
  }
  s.check("fiber metrics", levels_ok, "ds_b^2 = dx^2, ds_1^2 = dy^2, ds_2^2 = dz^2");
}

// ---------------------------------------------------------------------------
// dynamics and families

double max_error(double h, double horizon) {
  dynamics::OscillatorRun run;
  run.ic = {{1.0}, {0.0}};
  run.h = h;
  run.n = std::lround(horizon / h);
  const auto traj = dynamics::integrate(run, dynamics::MotionKind::base_1d);
  double worst = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    worst = std::max(worst, std::fabs(traj.q(i, 0) - dynamics::base_exact(run, traj.times[i])[0]));
  }
  return worst;
}

void dynamics_checks(Suite& s, Rng& rng) {
  using dynamics::MotionKind;
  const double ratio = max_error(1e-2, 10.0) / max_error(5e-3, 10.0);
  s.check("Verlet second order", ratio >= 3.5 && ratio <= 4.5, "error ratio under h-halving " + sci(ratio));

  for (auto kind : {MotionKind::base_1d, MotionKind::base_2d}) {
    dynamics::OscillatorRun run;
    run.ic = kind == MotionKind::base_1d ? dynamics::PhaseState{{1.0}, {0.0}}
                                         : dynamics::PhaseState{{1.0, 0.3}, {-0.2, 0.8}};
    run.h = 1e-3;
    run.n = 10000;
    const auto traj = dynamics::integrate(run, kind);
    const double e0 = dynamics::energy(run, traj.state(0), kind);
    double drift = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      drift = std::max(drift, std::fabs(dynamics::energy(run, traj.state(i), kind) - e0) / e0);
    }
    s.check(std::string("energy drift ") + std::string(dynamics::to_string(kind)), drift <= 1e-6,
            "max relative drift " + sci(drift));
  }

  {
    dynamics::OscillatorRun run;
    run.clock = dynamics::Clock::t_tilde;
    run.ic = {{0.4, uniform(rng, -3, 3)}, {0.0, uniform(rng, -3, 3)}};
    run.h = 1e-3;
    run.n = 10000;
    const auto traj = dynamics::integrate(run, MotionKind::fiber_free);
    // least-squares line through (t, y)
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double t = traj.times[i], y = traj.q(i, 1);
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double icpt = (sy - slope * st) / n;
    double resid = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      resid = std::max(resid, std::fabs(traj.q(i, 1) - (icpt + slope * traj.times[i])));
    }
    s.check("fiber motion linear", resid <= 1e-12, "max linear-fit residual " + sci(resid));
  }

  {
    dynamics::OscillatorRun run;
    run.ic = {{1.0, -0.4}, {0.25, 0.9}};
    run.h = 1e-3;
    run.n = std::lround(20.0 * std::numbers::pi / run.h);
    const auto traj = dynamics::integrate(run, MotionKind::base_2d);
    const double e0 = dynamics::energy(run, traj.state(0), MotionKind::base_2d);
    const double l0 = dynamics::angular_momentum(run, traj.state(0));
    double de = 0, dl = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto st = traj.state(i);
      de = std::max(de, std::fabs(dynamics::energy(run, st, MotionKind::base_2d) - e0) / std::fabs(e0));
      dl = std::max(dl, std::fabs(dynamics::angular_momentum(run, st) - l0) / std::fabs(l0));
    }
    s.check("first integrals of the 2D base", de <= 1e-6 && dl <= 1e-6,
            "energy drift " + sci(de) + ", angular momentum drift " + sci(dl) + " over 10 periods");
  }

  {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      dynamics::PolynomialPath path;
      for (auto& c : path.x) c = uniform(rng, -1, 1);
      for (auto& c : path.y) c = uniform(rng, -1, 1);
      path.t1 = uniform(rng, -1, 0);
      path.t2 = path.t1 + uniform(rng, 0.5, 2);
      for (double eps : {1e-2, 1e-3}) {
        const auto r = dynamics::contraction_action_check(path, eps);
        worst = std::max(worst, r.defect / (1.0 + std::fabs(r.s_base)));
      }
    }
    s.check("action split S(eps) = S_b + eps^2 S_y", worst <= 1e-10, "max scaled defect " + sci(worst));
  }
}

double max_abs_x(const std::vector<dynamics::FamilyMember>& members) {
  double worst = 0;
  for (const auto& m : members) {
    for (std::size_t i = 0; i < m.trajectory.size(); ++i) worst = std::max(worst, std::fabs(m.trajectory.q(i, 0)));
  }
  return worst;
}

void family_checks(Suite& s) {
  dynamics::OscillatorRun run;
  run.h = 1e-3;
  dynamics::FamilySpec spec;
  spec.amplitude = 1.5;
  spec.phase = 0.7;
  spec.u0 = {-1, 1, 3};
  spec.y0 = {-2, 2, 3};
  const auto band = dynamics::family_band(spec, run);
  const double bx = max_abs_x(band);
  s.check("band 2A x R", band.size() == 9 && bx <= spec.amplitude * (1 + 1e-9),
          std::to_string(band.size()) + " members, max|x|/A = " + sci(bx / spec.amplitude, 12));

  dynamics::OscillatorRun circ = run;
  circ.ic = {{1.0, 0.0}, {0.0, 1.0}};
  dynamics::FamilySpec cyl = spec;
  cyl.horizon = 20.0 * std::numbers::pi;
  cyl.w0 = {-1, 1, 2};
  cyl.z0 = {0, 0, 1};
  const auto members = dynamics::family_cylinder(cyl, circ);
  double de = 0, dl = 0, dr = 0;
  for (const auto& m : members) {
    const auto& tr = m.trajectory;
    const auto base0 = tr.state(0);
    const dynamics::PhaseState b0{{base0.q[0], base0.q[1]}, {base0.v[0], base0.v[1]}};
    const double e0 = dynamics::energy(circ, b0, dynamics::MotionKind::base_2d);
    const double l0 = dynamics::angular_momentum(circ, b0);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const dynamics::PhaseState b{{tr.q(i, 0), tr.q(i, 1)}, {tr.v(i, 0), tr.v(i, 1)}};
      de = std::max(de, std::fabs(dynamics::energy(circ, b, dynamics::MotionKind::base_2d) - e0) / e0);
      dl = std::max(dl, std::fabs(dynamics::angular_momentum(circ, b) - l0) / std::fabs(l0));
      dr = std::max(dr, std::fabs(tr.q(i, 0) * tr.q(i, 0) + tr.q(i, 1) * tr.q(i, 1) - 1.0));
    }
  }
  s.check("elliptic cylinder", members.size() == 2 && de <= 1e-6 && dl <= 1e-6 && dr <= 1e-6,
          "energy drift " + sci(de) + ", angular momentum drift " + sci(dl) + ", |r^2-1| " + sci(dr));

  dynamics::FamilySpec r3 = spec;
  r3.phase = 0.0;
  r3.w0 = {-2, 2, 3};
  const auto region = dynamics::family_region3(r3, run);
  const double rx = max_abs_x(region);
  s.check("region 2A x R x R", region.size() == 27 && rx <= r3.amplitude * (1 + 1e-9),
          std::to_string(region.size()) + " members, max|x|/A = " + sci(rx / r3.amplitude, 12));
}

std::uint64_t group_seed(std::uint64_t seed, std::string_view group) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (char c : group) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return h;
}

}  // namespace

const std::vector<std::string>& groups() {
  static const std::vector<std::string> names = {"algebra", "symbolic", "classification",
                                                 "geometry", "dynamics", "families"};
  return names;
}

std::vector<CheckResult> run(const Options& opts) {
  if (!opts.only.empty() && std::find(groups().begin(), groups().end(), opts.only) == groups().end()) {
    throw ConfigError("unknown verification group '" + opts.only + "'");
  }
  if (!opts.expect_fail.empty() && opts.expect_fail != "mul-table") {
    throw ConfigError("unknown fault mode '" + opts.expect_fail + "'");
  }
  std::vector<CheckResult> out;
  auto wanted = [&](std::string_view g) { return opts.only.empty() || opts.only == g; };

  if (wanted("algebra")) {
    Suite s("algebra", out);
    Rng rng(group_seed(opts.seed, "algebra"));
    const MulFn mul = opts.expect_fail == "mul-table" ? MulFn(faulty_mul)
                                                      : MulFn([](const CKScalar& a, const CKScalar& b) { return a * b; });
    algebra_checks(s, rng, mul);
  }
  if (wanted("symbolic")) {
    Suite s("symbolic", out);
    Rng rng(group_seed(opts.seed, "symbolic"));
    catalogue_checks(s);
    symbolic_property_checks(s, rng);
  }
  if (wanted("classification")) {
    Suite s("classification", out);
    Rng rng(group_seed(opts.seed, "classification"));
    classification_checks(s, rng);
  }
  if (wanted("geometry")) {
    Suite s("geometry", out);
    Rng rng(group_seed(opts.seed, "geometry"));
    geometry_checks(s, rng);
  }
  if (wanted("dynamics")) {
    Suite s("dynamics", out);
    Rng rng(group_seed(opts.seed, "dynamics"));
    dynamics_checks(s, rng);
  }
  if (wanted("families")) {
    Suite s("families", out);
    family_checks(s);
  }
  return out;
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.group.size() + r.name.size() + 3);
  int failed = 0;
  for (const auto& r : results) {
    const std::string label = r.group + " / " + r.name;
    os << (r.passed ? "PASS  " : "FAIL  ") << label << std::string(width - label.size() + 2, ' ') << r.detail
       << '\n';
    failed += r.passed ? 0 : 1;
  }
  os << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " checks passed\n";
  for (const auto& r : results) {
    if (!r.passed) os << "violated: " << r.group << " / " << r.name << '\n';
  }
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace ckosc::verify
