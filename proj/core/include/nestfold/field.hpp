#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nestfold {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Q(zeta_k) with zeta_k = exp(2 pi i / k). Elements are stored over the power
// basis 1, zeta, ..., zeta^(phi(k)-1), reduced modulo the k-th cyclotomic
// polynomial. Fields are interned: one instance per k, alive for the process.
class CyclotomicField {
 public:
  static const CyclotomicField& get(int k);

  int order() const { return k_; }
  int degree() const { return phi_; }

  // Canonical coefficients of zeta^j (j taken mod k).
  const std::vector<Rational>& power(int j) const;
  // exp(2 pi i j / k).
  std::complex<double> zeta_shadow(int j) const;
  // Coefficients of the monic cyclotomic polynomial, low degree first.
  const std::vector<Rational>& modulus() const { return modulus_; }

  // Reduces a polynomial in zeta of any length into canonical coefficients.
  std::vector<Rational> reduce(std::span<const Rational> poly) const;

  CyclotomicField(const CyclotomicField&) = delete;
  CyclotomicField& operator=(const CyclotomicField&) = delete;

 private:
  explicit CyclotomicField(int k);

  int k_;
  int phi_;
  std::vector<Rational> modulus_;
  // powers_[j] = canonical form of zeta^j for 0 <= j < 2k.
  std::vector<std::vector<Rational>> powers_;
};

class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(const CyclotomicField& field);
  FieldElement(const CyclotomicField& field, const Rational& value);

  // Accepts any number of coefficients over 1, zeta, zeta^2, ... and reduces.
  static FieldElement from_coefficients(const CyclotomicField& field,
                                        std::span<const Rational> coeffs);
  static FieldElement zeta_power(const CyclotomicField& field, int j);
  // "[c0,c1,...]" with rationals written p/q. Whitespace is ignored.
  static FieldElement parse(const CyclotomicField& field, std::string_view text);

  bool valid() const { return field_ != nullptr; }
  const CyclotomicField& field() const { return *field_; }
  int order() const { return field_->order(); }

  // Canonical coefficients, length phi(k).
  std::span<const Rational> coefficients() const { return coeffs_; }
  // Canonical coefficients padded with zeros to length k.
  std::vector<Rational> expanded() const;

  bool is_zero() const;
  bool is_rational() const;

  FieldElement conj() const;
  FieldElement inverse() const;
  // |x|^2 as a field element (it is real, and rational only for some k).
  FieldElement norm2() const { return *this * conj(); }
  // zeta^j * x.
  FieldElement rotated(int j) const;

  std::complex<double> to_complex() const;
  double abs() const { return std::abs(to_complex()); }

  std::string to_string() const;
  std::size_t hash() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator*=(const Rational& q);
  FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator*(FieldElement a, const Rational& q) { return a *= q; }
  friend FieldElement operator*(const Rational& q, FieldElement a) { return a *= q; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  // Lexicographic order on canonical coefficients. Has no geometric meaning.
  friend std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b);

 private:
  void check_same_field(const FieldElement& o) const;

  const CyclotomicField* field_ = nullptr;
  std::vector<Rational> coeffs_;
};

struct FieldElementHash {
  std::size_t operator()(const FieldElement& x) const { return x.hash(); }
};

// Integer power of a rational, negative exponents allowed.
Rational rational_pow(const Rational& base, int exponent);

}  // namespace nestfold
