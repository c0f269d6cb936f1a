#include "ckosc/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "numfmt.hpp"

namespace ckosc::symbolic {

namespace {

constexpr std::array<std::string_view, kSymbolCount> kNames = {
    "m", "vx", "vy", "vz", "gamma", "x", "y", "z", "x0", "y0", "z0"};

constexpr std::array<Symbol, 3> kCoordinates = {Symbol::x, Symbol::y, Symbol::z};

}  // namespace

std::string_view name(Symbol s) { return kNames[static_cast<std::size_t>(s)]; }

std::optional<Symbol> symbol_from_name(std::string_view text) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

bool is_coordinate(Symbol s) { return s == Symbol::x || s == Symbol::y || s == Symbol::z; }

bool is_velocity(Symbol s) { return s == Symbol::vx || s == Symbol::vy || s == Symbol::vz; }

Symbol velocity_of(Symbol c) {
  switch (c) {
    case Symbol::x:
      return Symbol::vx;
    case Symbol::y:
      return Symbol::vy;
    case Symbol::z:
      return Symbol::vz;
    default:
      throw Error("velocity_of: " + std::string(name(c)) + " is not a coordinate");
  }
}

Symbol frozen_constant_of(Symbol c) {
  switch (c) {
    case Symbol::x:
      return Symbol::x0;
    case Symbol::y:
      return Symbol::y0;
    case Symbol::z:
      return Symbol::z0;
    default:
      throw Error("frozen_constant_of: " + std::string(name(c)) + " is not a coordinate");
  }
}

// ---------------------------------------------------------------------------
// Monomials and normal forms

int Monomial::exponent_of(Symbol s) const {
  for (const auto& [sym, e] : powers) {
    if (sym == s) return e;
  }
  return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.params = a.params * b.params;
  auto ia = a.powers.begin();
  auto ib = b.powers.begin();
  while (ia != a.powers.end() || ib != b.powers.end()) {
    if (ib == b.powers.end() || (ia != a.powers.end() && ia->first < ib->first)) {
      out.powers.push_back(*ia++);
    } else if (ia == a.powers.end() || ib->first < ia->first) {
      out.powers.push_back(*ib++);
    } else {
      out.powers.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return out;
}

NormalForm NormalForm::constant(double c) {
  NormalForm nf;
  nf.add(Monomial{}, c);
  return nf;
}

NormalForm NormalForm::symbol(Symbol s) {
  Monomial mono;
  mono.powers.emplace_back(s, 1);
  return term(std::move(mono), 1.0);
}

NormalForm NormalForm::parameter(ParamPower p, double coeff) {
  Monomial mono;
  mono.params = p;
  return term(std::move(mono), coeff);
}

NormalForm NormalForm::term(Monomial mono, double coeff) {
  NormalForm nf;
  nf.add(mono, coeff);
  return nf;
}

void NormalForm::add(const Monomial& mono, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

NormalForm NormalForm::operator+(const NormalForm& o) const {
  NormalForm out = *this;
  for (const auto& [mono, c] : o.terms_) out.add(mono, c);
  return out;
}

NormalForm NormalForm::operator-(const NormalForm& o) const { return *this + o.scaled(-1.0); }

NormalForm NormalForm::operator*(const NormalForm& o) const {
  NormalForm out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) out.add(ma * mb, ca * cb);
  }
  return out;
}

NormalForm NormalForm::scaled(double s) const {
  NormalForm out;
  for (const auto& [mono, c] : terms_) out.add(mono, s * c);
  return out;
}

NormalForm NormalForm::times(ParamPower p) const {
  NormalForm out;
  for (const auto& [mono, c] : terms_) {
    Monomial shifted = mono;
    shifted.params = shifted.params * p;
    out.add(shifted, c);
  }
  return out;
}

NormalForm NormalForm::pow(int n) const {
  if (n < 0) {
    if (terms_.size() != 1 || terms_.begin()->first.has_symbols()) {
      throw Error("negative power of a non-parameter expression");
    }
    const auto& [mono, c] = *terms_.begin();
    return parameter({mono.params.p2 * n, mono.params.p3 * n}, std::pow(c, n));
  }
  NormalForm out = constant(1.0);
  for (int i = 0; i < n; ++i) out = out * *this;
  return out;
}

NormalForm NormalForm::derivative(Symbol s) const {
  NormalForm out;
  for (const auto& [mono, c] : terms_) {
    const int e = mono.exponent_of(s);
    if (e == 0) continue;
    Monomial d = mono;
    for (auto it = d.powers.begin(); it != d.powers.end(); ++it) {
      if (it->first != s) continue;
      if (--it->second == 0) d.powers.erase(it);
      break;
    }
    out.add(d, c * e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expression trees

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  Symbol symbol = Symbol::m;
  int index = 0;     // parameter index or power exponent
  std::vector<Expr> args;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::symbol(Symbol s) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::symbol;
  n->symbol = s;
  return Expr(std::move(n));
}

Expr Expr::parameter(int index) {
  if (index != 2 && index != 3) throw Error("parameter index must be 2 or 3");
  auto n = std::make_shared<Node>();
  n->kind = Kind::parameter;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.size() == 1) return terms.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->args = std::move(terms);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->args = std::move(factors);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::power;
  n->index = exponent;
  n->args.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::from_normal_form(const NormalForm& nf) {
  std::vector<Expr> terms;
  for (const auto& [mono, c] : nf.terms()) {
    std::vector<Expr> factors;
    factors.push_back(constant(c));
    if (mono.params.p2 != 0) factors.push_back(power(parameter(2), mono.params.p2));
    if (mono.params.p3 != 0) factors.push_back(power(parameter(3), mono.params.p3));
    for (const auto& [sym, e] : mono.powers) factors.push_back(power(symbol(sym), e));
    terms.push_back(product(std::move(factors)));
  }
  if (terms.empty()) return constant(0.0);
  return sum(std::move(terms));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
Symbol Expr::symbol_id() const { return node_->symbol; }
int Expr::parameter_index() const { return node_->index; }
const std::vector<Expr>& Expr::operands() const { return node_->args; }
int Expr::exponent() const { return node_->index; }

NormalForm Expr::normal_form() const {
  switch (node_->kind) {
    case Kind::constant:
      return NormalForm::constant(node_->value);
    case Kind::symbol:
      return NormalForm::symbol(node_->symbol);
    case Kind::parameter:
      return NormalForm::parameter(node_->index == 2 ? ParamPower{1, 0} : ParamPower{0, 1});
    case Kind::sum: {
      NormalForm out;
      for (const auto& a : node_->args) out = out + a.normal_form();
      return out;
    }
    case Kind::product: {
      NormalForm out = NormalForm::constant(1.0);
      for (const auto& a : node_->args) out = out * a.normal_form();
      return out;
    }
    case Kind::power:
      return node_->args.front().normal_form().pow(node_->index);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != text_.size()) fail({"'+'", "'-'", "'*'", "'^'", "end of input"});
    return e;
  }

 private:
  Expr expr() {
    skip();
    std::vector<Expr> terms;
    bool negate = false;
    if (peek() == '+' || peek() == '-') negate = take() == '-';
    for (;;) {
      Expr t = term();
      terms.push_back(negate ? Expr::product({Expr::constant(-1.0), t}) : t);
      skip();
      if (peek() != '+' && peek() != '-') break;
      negate = take() == '-';
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{factor()};
    skip();
    while (peek() == '*') {
      ++pos_;
      factors.push_back(factor());
      skip();
    }
    return Expr::product(std::move(factors));
  }

  Expr factor() {
    Expr base = atom();
    skip();
    if (peek() != '^') return base;
    const std::size_t caret = pos_++;
    skip();
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
      skip();
    }
    const long n = integer();
    const int exponent = static_cast<int>(negative ? -n : n);
    if (exponent < 0) {
      const NormalForm nf = base.normal_form();
      if (nf.terms().size() != 1 || nf.terms().begin()->first.has_symbols()) {
        pos_ = caret;
        fail({"nonnegative exponent (negative powers only on j2, j3)"});
      }
    }
    return Expr::power(std::move(base), exponent);
  }

  Expr atom() {
    skip();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      skip();
      if (peek() != ')') fail({"')'"});
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail({"number", "symbol", "'('"});
  }

  Expr number() {
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    auto res = std::from_chars(begin, text_.data() + text_.size(), v);
    if (res.ec != std::errc{} || !std::isfinite(v)) fail({"number"});
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (peek() == '/' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      const long den = integer();
      if (den == 0) fail({"nonzero denominator"});
      v /= static_cast<double>(den);
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "j2" || id == "j") return Expr::parameter(2);
    if (id == "j3") return Expr::parameter(3);
    if (auto s = symbol_from_name(id)) return Expr::symbol(*s);
    pos_ = start;
    fail({"symbol"});
  }

  long integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail({"integer"});
    long v = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc{} || v > 1'000'000) fail({"integer"});
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "parse error at offset " + std::to_string(pos_) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(pos_, std::move(expected), msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

ParamPower parse_param_power(std::string_view text) {
  std::string_view body = trim(text);
  bool invert = false;
  if (body.size() > 1 && body.front() == '1') {
    std::string_view rest = trim(body.substr(1));
    if (!rest.empty() && rest.front() == '/') {
      invert = true;
      body = trim(rest.substr(1));
    }
  }
  const NormalForm nf = parse_expr(body).normal_form();
  if (nf.terms().size() != 1 || nf.terms().begin()->first.has_symbols() ||
      nf.terms().begin()->second != 1.0) {
    throw ParseError(0, {"parameter monomial"},
                     "'" + std::string(text) + "' is not a monomial in j2, j3");
  }
  const ParamPower p = nf.terms().begin()->first.params;
  return invert ? p.inverse() : p;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string coefficient_text(double c) {
  if (c == std::floor(c) && c < 1e15) return detail::shortest(c);
  for (long q = 2; q <= 64; ++q) {
    const double p = std::round(c * static_cast<double>(q));
    if (p <= 0 || p >= 1e15) continue;
    if (p / static_cast<double>(q) == c && std::gcd(static_cast<long>(p), q) == 1) {
      return "(" + detail::shortest(p) + "/" + std::to_string(q) + ")";
    }
  }
  return detail::shortest(c);
}

std::string power_text(std::string_view base, int e) {
  std::string out(base);
  if (e != 1) out += "^" + std::to_string(e);
  return out;
}

// Body of a monomial for a positive coefficient magnitude.
std::string monomial_body(const Monomial& mono, double magnitude) {
  std::vector<std::string> factors;
  if (mono.params.p2 != 0) factors.push_back(power_text("j2", mono.params.p2));
  if (mono.params.p3 != 0) factors.push_back(power_text("j3", mono.params.p3));
  for (const auto& [sym, e] : mono.powers) factors.push_back(power_text(name(sym), e));
  if (magnitude != 1.0 || factors.empty()) factors.insert(factors.begin(), coefficient_text(magnitude));
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += '*';
    out += factors[i];
  }
  return out;
}

}  // namespace

std::string render(const Monomial& mono, double coeff) {
  return (coeff < 0 ? "-" : "") + monomial_body(mono, std::fabs(coeff));
}

std::string render(const NormalForm& nf) {
  if (nf.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : nf.terms()) {
    if (first) {
      out += render(mono, c);
      first = false;
    } else {
      out += c < 0 ? " - " : " + ";
      out += monomial_body(mono, std::fabs(c));
    }
  }
  return out;
}

std::string render(const Expr& e) { return render(e.normal_form()); }

nlohmann::json to_json(const Expr& e) {
  nlohmann::json monomials = nlohmann::json::array();
  const NormalForm nf = e.normal_form();
  for (const auto& [mono, c] : nf.terms()) {
    nlohmann::json symbols = nlohmann::json::object();
    for (const auto& [sym, exp] : mono.powers) symbols[std::string(name(sym))] = exp;
    monomials.push_back(
        {{"coeff", c}, {"p2", mono.params.p2}, {"p3", mono.params.p3}, {"symbols", symbols}});
  }
  return {{"monomials", monomials}};
}

NormalForm normal_form_from_json(const nlohmann::json& j) {
  NormalForm nf;
  for (const auto& m : j.at("monomials")) {
    Monomial mono;
    mono.params = {m.at("p2").get<int>(), m.at("p3").get<int>()};
    for (const auto& [key, exp] : m.at("symbols").items()) {
      const auto sym = symbol_from_name(key);
      if (!sym) throw Error("unknown symbol in JSON: " + key);
      const int e = exp.get<int>();
      if (e <= 0) throw Error("symbol exponents must be positive");
      mono.powers.emplace_back(*sym, e);
    }
    std::sort(mono.powers.begin(), mono.powers.end());
    nf.add(mono, m.at("coeff").get<double>());
  }
  return nf;
}

// ---------------------------------------------------------------------------
// Substitution, reduction, fiber restriction

Substitution& Substitution::set(Symbol s, Expr image) {
  map.insert_or_assign(s, std::move(image));
  return *this;
}

Substitution& Substitution::set(Symbol s, std::string_view image) { return set(s, parse_expr(image)); }

namespace {

using Images = std::array<NormalForm, kSymbolCount>;

NormalForm apply_images(const NormalForm& nf, const Images& images) {
  NormalForm out;
  for (const auto& [mono, c] : nf.terms()) {
    NormalForm t = NormalForm::parameter(mono.params, c);
    for (const auto& [sym, e] : mono.powers) t = t * images[static_cast<std::size_t>(sym)].pow(e);
    out = out + t;
  }
  return out;
}

bool has_velocity(const NormalForm& nf) {
  for (const auto& [mono, c] : nf.terms()) {
    for (const auto& [sym, e] : mono.powers) {
      if (is_velocity(sym)) return true;
    }
  }
  return false;
}

Images images_of(const Substitution& s) {
  Images img;
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    const auto sym = static_cast<Symbol>(i);
    auto it = s.map.find(sym);
    img[i] = it != s.map.end() ? it->second.normal_form() : NormalForm::symbol(sym);
  }
  // chain rule: v_c* = d(c*)/dt* = (1/J) d(c*)/dt'
  for (Symbol c : kCoordinates) {
    const Symbol v = velocity_of(c);
    if (s.map.contains(v)) continue;
    const NormalForm& cimg = img[static_cast<std::size_t>(c)];
    if (has_velocity(cimg)) {
      throw Error("image of " + std::string(name(c)) + " contains velocities; give " +
                  std::string(name(v)) + " explicitly");
    }
    NormalForm dv;
    for (Symbol d : kCoordinates) dv = dv + cimg.derivative(d) * NormalForm::symbol(velocity_of(d));
    img[static_cast<std::size_t>(v)] = dv.times(s.time.inverse());
  }
  return img;
}

NormalForm reduce_nf(const NormalForm& nf, Signature sig) {
  NormalForm out;
  for (const auto& [mono, c] : nf.terms()) {
    Monomial r = mono;
    double coeff = c;
    bool annihilated = false;
    auto fold = [&](int& p, int sigma) {
      if (sigma == 0) {
        if (p >= 2) annihilated = true;
        return;
      }
      const int k = p >= 0 ? p / 2 : -((-p + 1) / 2);  // floor(p / 2)
      p -= 2 * k;
      if (sigma < 0 && k % 2 != 0) coeff = -coeff;
    };
    fold(r.params.p2, sig.sigma2);
    fold(r.params.p3, sig.sigma3);
    if (!annihilated) out.add(r, coeff);
  }
  return out;
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& s) {
  const Images img = images_of(s);
  return Expr::from_normal_form(apply_images(e.normal_form(), img).times(s.time * s.scale));
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution out;
  out.time = inner.time * outer.time;
  out.scale = inner.scale * outer.scale;
  const Images outer_img = images_of(outer);
  for (const auto& [sym, image] : inner.map) {
    out.map.emplace(sym, Expr::from_normal_form(apply_images(image.normal_form(), outer_img)));
  }
  for (const auto& [sym, image] : outer.map) out.map.emplace(sym, image);
  return out;
}

Expr reduce(const Expr& e, Signature sig) { return Expr::from_normal_form(reduce_nf(e.normal_form(), sig)); }

Expr restrict_fiber(const Expr& e, const std::set<Symbol>& frozen, Signature sig) {
  Images img;
  for (std::size_t i = 0; i < kSymbolCount; ++i) img[i] = NormalForm::symbol(static_cast<Symbol>(i));
  for (Symbol c : frozen) {
    if (!is_coordinate(c)) throw Error("cannot freeze non-coordinate " + std::string(name(c)));
    img[static_cast<std::size_t>(velocity_of(c))] = NormalForm{};
    img[static_cast<std::size_t>(c)] = NormalForm::symbol(frozen_constant_of(c));
  }
  const NormalForm restricted = apply_images(e.normal_form(), img);

  std::vector<std::string> offending;
  for (const auto& [mono, c] : restricted.terms()) {
    if ((sig.nilpotent2() && mono.params.p2 < 0) || (sig.nilpotent3() && mono.params.p3 < 0)) {
      offending.push_back(render(mono, c));
    }
  }
  if (!offending.empty()) {
    std::string msg = "indefinite expression: negative powers of nilpotent parameters survive in";
    for (const auto& m : offending) msg += " " + m + ";";
    msg.pop_back();
    throw IndefiniteExpression(std::move(offending), msg);
  }
  return Expr::from_normal_form(reduce_nf(restricted, sig));
}

Expr contract_action(const Expr& base, const Substitution& s, Signature sig,
                     const std::set<Symbol>& frozen) {
  return reduce(restrict_fiber(substitute(base, s), frozen, sig), sig);
}

bool expr_equal(const Expr& a, const Expr& b, double rel_tol) {
  const NormalForm na = a.normal_form();
  const NormalForm nb = b.normal_form();
  double scale = 0.0;
  for (const auto& [m, c] : na.terms()) scale = std::max(scale, std::fabs(c));
  for (const auto& [m, c] : nb.terms()) scale = std::max(scale, std::fabs(c));
  auto close = [&](double x, double y) {
    return std::fabs(x - y) <= rel_tol * std::max({std::fabs(x), std::fabs(y), scale});
  };
  for (const auto& [m, c] : na.terms()) {
    auto it = nb.terms().find(m);
    if (!close(c, it == nb.terms().end() ? 0.0 : it->second)) return false;
  }
  for (const auto& [m, c] : nb.terms()) {
    if (!na.terms().contains(m) && !close(0.0, c)) return false;
  }
  return true;
}

Expr parameter_coefficient(const Expr& e, ParamPower p) {
  NormalForm out;
  const NormalForm nf = e.normal_form();
  for (const auto& [mono, c] : nf.terms()) {
    if (mono.params != p) continue;
    Monomial stripped = mono;
    stripped.params = {};
    out.add(stripped, c);
  }
  return Expr::from_normal_form(out);
}

double evaluate(const NormalForm& nf, const Valuation& v) {
  double total = 0.0;
  for (const auto& [mono, c] : nf.terms()) {
    double t = c;
    if (mono.params.p2 != 0) t *= std::pow(v.j2, mono.params.p2);
    if (mono.params.p3 != 0) t *= std::pow(v.j3, mono.params.p3);
    for (const auto& [sym, e] : mono.powers) t *= std::pow(v[sym], e);
    total += t;
  }
  return total;
}

double evaluate(const Expr& e, const Valuation& v) { return evaluate(e.normal_form(), v); }

// ---------------------------------------------------------------------------
// Catalogue

Expr harmonic_action(int dim) {
  if (dim == 2) return parse_expr("(1/2)*m*(vx^2 + vy^2) - gamma*(x^2 + y^2)");
  if (dim == 3) return parse_expr("(1/2)*m*(vx^2 + vy^2 + vz^2) - gamma*(x^2 + y^2 + z^2)");
  throw DimensionMismatch("harmonic_action: dimension must be 2 or 3");
}

Substitution cayley_klein_embedding(int dim) {
  if (dim != 2 && dim != 3) throw DimensionMismatch("cayley_klein_embedding: dimension must be 2 or 3");
  Substitution s;
  s.set(Symbol::y, "j2*y");
  if (dim == 3) s.set(Symbol::z, "j2*j3*z");
  return s;
}

}  // namespace ckosc::symbolic
