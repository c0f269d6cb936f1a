#pragma once

// Commutative algebra R[j2, j3] / (j2^2 - sigma2, j3^2 - sigma3).
//
// Each contraction parameter j_k takes one of three values: 1 (sigma = +1),
// the nilpotent Pimenov unit iota (sigma = 0) or the imaginary unit i
// (sigma = -1). The two generators commute and their product j2*j3 is a
// basis element of its own, so iota2 * iota3 is never zero even though
// iota2^2 = iota3^2 = 0.

#include <string>
#include <string_view>

#include "ckosc/errors.hpp"

namespace ckosc {

struct Signature {
  int sigma2 = 1;
  int sigma3 = 1;

  constexpr Signature() = default;
  constexpr Signature(int s2, int s3) : sigma2(s2), sigma3(s3) {
    if (!valid(s2) || !valid(s3)) {
      throw InvalidSignature("signature entries must be +1, 0 or -1");
    }
  }

  static constexpr bool valid(int s) { return s == 1 || s == 0 || s == -1; }

  constexpr bool nilpotent2() const { return sigma2 == 0; }
  constexpr bool nilpotent3() const { return sigma3 == 0; }

  constexpr bool operator==(const Signature&) const = default;
};

std::string to_string(Signature sig);

/// Basis elements that can act as divisors.
enum class Unit { j2, j3, j23 };

class CKScalar {
 public:
  constexpr CKScalar() = default;
  constexpr CKScalar(double a0, double a2, double a3, double a23, Signature sig)
      : a0_(a0), a2_(a2), a3_(a3), a23_(a23), sig_(sig) {}
  constexpr CKScalar(double real, Signature sig) : a0_(real), sig_(sig) {}

  static CKScalar unit(Unit u, Signature sig);

  constexpr double real() const { return a0_; }
  constexpr double j2() const { return a2_; }
  constexpr double j3() const { return a3_; }
  constexpr double j23() const { return a23_; }
  constexpr Signature signature() const { return sig_; }

  bool is_zero() const { return a0_ == 0 && a2_ == 0 && a3_ == 0 && a23_ == 0; }

  /// Exact componentwise equality, including the signature.
  bool operator==(const CKScalar&) const = default;

  CKScalar operator-() const { return {-a0_, -a2_, -a3_, -a23_, sig_}; }

 private:
  double a0_ = 0.0;
  double a2_ = 0.0;
  double a3_ = 0.0;
  double a23_ = 0.0;
  Signature sig_{};
};

CKScalar operator+(const CKScalar& x, const CKScalar& y);
CKScalar operator-(const CKScalar& x, const CKScalar& y);
CKScalar operator*(const CKScalar& x, const CKScalar& y);
CKScalar operator*(double s, const CKScalar& x);

/// Quotient q with q * unit == x. For a nilpotent unit the formal rule
/// iota / iota = 1 applies and x must lie in the ideal generated by the
/// unit; otherwise NonDivisible is thrown. Division by j2*j3 divides by j2
/// and then by j3.
CKScalar div_unit(const CKScalar& x, Unit u);

/// Substitutes numbers for the generators: a0 + a2*e2 + a3*e3 + a23*e2*e3.
double eval(const CKScalar& x, double eps2, double eps3);

/// Renders "a0 + a2*j2 + a3*j3 + a23*j2*j3" with shortest round-trip
/// decimals, so parse_scalar(to_string(x), sig) == x bit for bit.
std::string to_string(const CKScalar& x);

/// Accepts any sum of signed terms of the form `c`, `c*u` or `u` with
/// u in {j2, j3, j2*j3, j3*j2}; repeated units accumulate.
CKScalar parse_scalar(std::string_view text, Signature sig);

}  // namespace ckosc
