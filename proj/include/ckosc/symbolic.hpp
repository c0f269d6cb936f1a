#pragma once

// Symbolic actions over the Cayley-Klein parameters.
//
// An Expr is an immutable tree built from real constants, dynamical symbols
// (coordinates, velocities, mass, coupling, fiber constants) and the two
// parameters j2, j3. Its normal form is a fully expanded sum of monomials
// coeff * j2^p2 * j3^p3 * prod(symbol^e): parameter exponents are Laurent
// (negative powers are legal and are how singular terms of a contracted
// action are represented), symbol exponents are nonnegative.
//
// Contraction of an action is substitute -> restrict_fiber -> reduce:
//   * substitute rewrites the starred (original) variables, including the
//     chain rule for velocities under a clock rescale t* = J t';
//   * restrict_fiber freezes base coordinates (dx = 0) and rejects any
//     negative power of a nilpotent parameter left behind;
//   * reduce applies j^2 = sigma to nonnegative powers.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ckosc/algebra.hpp"
#include "json.hpp"

namespace ckosc::symbolic {

/// Dynamical symbols. Enumerator order is the canonical symbol order used
/// by the normal form and the renderer.
enum class Symbol : std::uint8_t { m, vx, vy, vz, gamma, x, y, z, x0, y0, z0 };

inline constexpr std::size_t kSymbolCount = 11;

std::string_view name(Symbol s);
std::optional<Symbol> symbol_from_name(std::string_view text);

bool is_coordinate(Symbol s);
bool is_velocity(Symbol s);
/// x -> vx etc. Only defined for coordinates.
Symbol velocity_of(Symbol coordinate);
/// x -> x0 etc. Only defined for coordinates.
Symbol frozen_constant_of(Symbol coordinate);

/// Pure parameter monomial j2^p2 * j3^p3.
struct ParamPower {
  int p2 = 0;
  int p3 = 0;

  constexpr ParamPower operator*(ParamPower o) const { return {p2 + o.p2, p3 + o.p3}; }
  constexpr ParamPower inverse() const { return {-p2, -p3}; }
  constexpr bool is_one() const { return p2 == 0 && p3 == 0; }
  constexpr auto operator<=>(const ParamPower&) const = default;
};

struct Monomial {
  ParamPower params;
  /// Sorted by symbol, exponents strictly positive.
  std::vector<std::pair<Symbol, int>> powers;

  int exponent_of(Symbol s) const;
  bool has_symbols() const { return !powers.empty(); }
  auto operator<=>(const Monomial&) const = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

/// Expanded sum of monomials with nonzero coefficients, ordered by Monomial.
class NormalForm {
 public:
  using Terms = std::map<Monomial, double>;

  NormalForm() = default;
  static NormalForm constant(double c);
  static NormalForm symbol(Symbol s);
  static NormalForm parameter(ParamPower p, double coeff = 1.0);
  static NormalForm term(Monomial mono, double coeff);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Monomial& mono, double coeff);

  NormalForm operator+(const NormalForm& o) const;
  NormalForm operator-(const NormalForm& o) const;
  NormalForm operator*(const NormalForm& o) const;
  NormalForm scaled(double s) const;
  NormalForm times(ParamPower p) const;
  NormalForm pow(int n) const;

  /// Partial derivative with respect to a dynamical symbol.
  NormalForm derivative(Symbol s) const;

 private:
  Terms terms_;
};

class Expr {
 public:
  enum class Kind { constant, symbol, parameter, sum, product, power };

  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr symbol(Symbol s);
  /// index 2 for j2, 3 for j3
  static Expr parameter(int index);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, int exponent);
  static Expr from_normal_form(const NormalForm& nf);

  Kind kind() const;
  double value() const;
  Symbol symbol_id() const;
  int parameter_index() const;
  const std::vector<Expr>& operands() const;
  int exponent() const;

  NormalForm normal_form() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// expr   := ['+'|'-'] term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := atom ('^' ['-'] integer)?
/// atom   := number ['/' integer] | symbol | '(' expr ')'
/// `j` is accepted as an alias of j2 for plane problems. Negative exponents
/// are only allowed on parameter monomials.
Expr parse_expr(std::string_view text);

/// Parses a pure parameter monomial such as "j2", "j2*j3", "1/j2",
/// "1/(j2*j3)" or "j2^-1".
ParamPower parse_param_power(std::string_view text);

std::string render(const NormalForm& nf);
/// Renders the normal form in the parse_expr grammar.
std::string render(const Expr& e);
std::string render(const Monomial& mono, double coeff);

/// {"monomials": [{"coeff", "p2", "p3", "symbols": {name: exp}}]}
nlohmann::json to_json(const Expr& e);
NormalForm normal_form_from_json(const nlohmann::json& j);

/// Ordered symbol map plus the clock rescale t* = time * t' and the global
/// action prefactor.
struct Substitution {
  std::map<Symbol, Expr> map;
  ParamPower time;
  ParamPower scale;

  Substitution& set(Symbol s, Expr image);
  Substitution& set(Symbol s, std::string_view image);
};

/// Simultaneous replacement. Velocities without an explicit image follow
/// the chain rule: v_c -> (1/time) * sum_d d(image of c)/dd * v_d. The
/// integrand picks up time * scale from dt* and the prefactor.
Expr substitute(const Expr& e, const Substitution& s);

/// outer o inner: substitute(substitute(e, inner), outer) ==
/// substitute(e, compose(outer, inner)) when velocities are chain-rule
/// derived in `outer`.
Substitution compose(const Substitution& outer, const Substitution& inner);

/// j^p -> sigma^floor(p/2) j^(p mod 2) for p >= 0. For a nilpotent
/// parameter negative powers stay formal; for sigma = +-1 they are reduced
/// the same way since j is then invertible.
Expr reduce(const Expr& e, Signature sig);

/// Freezes each coordinate c: v_c -> 0, c -> c0. Throws
/// IndefiniteExpression if a negative power of a parameter that is
/// nilpotent in `sig` survives; otherwise returns the reduced result.
Expr restrict_fiber(const Expr& e, const std::set<Symbol>& frozen, Signature sig = Signature{0, 0});

Expr contract_action(const Expr& base, const Substitution& s, Signature sig,
                     const std::set<Symbol>& frozen);

/// Term-by-term comparison of normal forms. Coefficients match when
/// |a - b| <= tol * max(|a|, |b|), with a floor of tol times the largest
/// coefficient of either side so cancellation residue does not count as a
/// distinct term.
bool expr_equal(const Expr& a, const Expr& b, double rel_tol = 1e-12);

/// Terms with exactly the given parameter powers, with the parameters
/// stripped.
Expr parameter_coefficient(const Expr& e, ParamPower p);

struct Valuation {
  std::array<double, kSymbolCount> symbols{};
  double j2 = 0.0;
  double j3 = 0.0;

  double& operator[](Symbol s) { return symbols[static_cast<std::size_t>(s)]; }
  double operator[](Symbol s) const { return symbols[static_cast<std::size_t>(s)]; }
};

double evaluate(const NormalForm& nf, const Valuation& v);
double evaluate(const Expr& e, const Valuation& v);

/// Euclidean harmonic oscillator integrand (m/2)|v|^2 - gamma |q|^2 in 2 or
/// 3 dimensions.
Expr harmonic_action(int dim);

/// y* = j2 y (and z* = j2 j3 z in 3D).
Substitution cayley_klein_embedding(int dim);

}  // namespace ckosc::symbolic
