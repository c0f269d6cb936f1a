#include "ckosc/algebra.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "numfmt.hpp"

namespace ckosc {

std::string to_string(Signature sig) {
  return "(" + std::to_string(sig.sigma2) + "," + std::to_string(sig.sigma3) + ")";
}

namespace {

void require_same(const CKScalar& x, const CKScalar& y) {
  if (x.signature() != y.signature()) {
    throw SignatureMismatch("operands have signatures " + to_string(x.signature()) + " and " +
                            to_string(y.signature()));
  }
}

}  // namespace

CKScalar CKScalar::unit(Unit u, Signature sig) {
  switch (u) {
    case Unit::j2:
      return {0, 1, 0, 0, sig};
    case Unit::j3:
      return {0, 0, 1, 0, sig};
    case Unit::j23:
      return {0, 0, 0, 1, sig};
  }
  return {};
}

CKScalar operator+(const CKScalar& x, const CKScalar& y) {
  require_same(x, y);
  return {x.real() + y.real(), x.j2() + y.j2(), x.j3() + y.j3(), x.j23() + y.j23(), x.signature()};
}

CKScalar operator-(const CKScalar& x, const CKScalar& y) { return x + (-y); }

// Table: j2^2 = s2, j3^2 = s3, j2*j3 = j23, j2*j23 = s2*j3, j3*j23 = s3*j2,
// j23^2 = s2*s3.
CKScalar operator*(const CKScalar& x, const CKScalar& y) {
  require_same(x, y);
  const double s2 = x.signature().sigma2;
  const double s3 = x.signature().sigma3;
  const double a0 = x.real(), a2 = x.j2(), a3 = x.j3(), a23 = x.j23();
  const double b0 = y.real(), b2 = y.j2(), b3 = y.j3(), b23 = y.j23();
  return {a0 * b0 + s2 * a2 * b2 + s3 * a3 * b3 + s2 * s3 * a23 * b23,
          a0 * b2 + a2 * b0 + s3 * (a3 * b23 + a23 * b3),
          a0 * b3 + a3 * b0 + s2 * (a2 * b23 + a23 * b2),
          a0 * b23 + a23 * b0 + a2 * b3 + a3 * b2,
          x.signature()};
}

CKScalar operator*(double s, const CKScalar& x) {
  return {s * x.real(), s * x.j2(), s * x.j3(), s * x.j23(), x.signature()};
}

CKScalar div_unit(const CKScalar& x, Unit u) {
  const Signature sig = x.signature();
  switch (u) {
    case Unit::j2:
      if (!sig.nilpotent2()) {
        // j2^-1 = j2 / sigma2
        return (1.0 / sig.sigma2) * (x * CKScalar::unit(Unit::j2, sig));
      }
      // q * iota2 only reaches span{j2, j23}
      if (x.real() != 0 || x.j3() != 0) {
        throw NonDivisible(to_string(x) + " is not divisible by iota2");
      }
      return {x.j2(), 0, x.j23(), 0, sig};
    case Unit::j3:
      if (!sig.nilpotent3()) {
        return (1.0 / sig.sigma3) * (x * CKScalar::unit(Unit::j3, sig));
      }
      if (x.real() != 0 || x.j2() != 0) {
        throw NonDivisible(to_string(x) + " is not divisible by iota3");
      }
      return {x.j3(), x.j23(), 0, 0, sig};
    case Unit::j23:
      return div_unit(div_unit(x, Unit::j2), Unit::j3);
  }
  return x;
}

double eval(const CKScalar& x, double eps2, double eps3) {
  return x.real() + x.j2() * eps2 + x.j3() * eps3 + x.j23() * eps2 * eps3;
}

std::string to_string(const CKScalar& x) {
  using detail::shortest;
  return shortest(x.real()) + " + " + shortest(x.j2()) + "*j2 + " + shortest(x.j3()) + "*j3 + " +
         shortest(x.j23()) + "*j2*j3";
}

namespace {

class ScalarReader {
 public:
  explicit ScalarReader(std::string_view text) : text_(text) {}

  CKScalar read(Signature sig) {
    double c[4] = {0, 0, 0, 0};
    skip();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = take() == '-' ? -1.0 : 1.0;
    }
    for (;;) {
      skip();
      double coeff = 1.0;
      bool have_number = false;
      if (starts_number()) {
        coeff = number();
        have_number = true;
        skip();
      }
      int slot = 0;
      if (!have_number || peek() == '*') {
        if (have_number) {
          ++pos_;
          skip();
        }
        slot = unit_slot();
      }
      c[slot] += sign * coeff;
      skip();
      if (pos_ == text_.size()) break;
      const char op = take();
      if (op != '+' && op != '-') fail("'+' or '-'");
      sign = op == '-' ? -1.0 : 1.0;
    }
    return {c[0], c[1], c[2], c[3], sig};
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool starts_number() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-';
  }

  double number() {
    double v = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc{} || !std::isfinite(v)) fail("finite number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  int generator() {
    if (text_.substr(pos_, 2) == "j2") {
      pos_ += 2;
      return 2;
    }
    if (text_.substr(pos_, 2) == "j3") {
      pos_ += 2;
      return 3;
    }
    fail("j2 or j3");
  }

  int unit_slot() {
    const int g = generator();
    skip();
    if (peek() == '*') {
      const std::size_t save = pos_;
      ++pos_;
      skip();
      if (text_.substr(pos_, 1) == "j") {
        const int h = generator();
        if (h == g) fail("distinct generators");
        return 3;
      }
      pos_ = save;
    }
    return g == 2 ? 1 : 2;
  }

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(pos_, {expected},
                     "scalar parse error at offset " + std::to_string(pos_) + ": expected " + expected);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CKScalar parse_scalar(std::string_view text, Signature sig) { return ScalarReader(text).read(sig); }

}  // namespace ckosc
