#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>

#include "nestfold/error.hpp"
#include "nestfold/field.hpp"

using namespace nestfold;

namespace {

FieldElement random_element(const CyclotomicField& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
  std::vector<Rational> c(f.order());
  for (auto& x : c) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
  }
  return FieldElement::from_coefficients(f, c);
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

}  // namespace

TEST(Field, CyclotomicPolynomials) {
  auto coeffs = [](int k) {
    std::vector<long> out;
    for (const auto& q : CyclotomicField::get(k).modulus()) out.push_back(q.get_num().get_si());
    return out;
  };
  EXPECT_EQ(coeffs(3), (std::vector<long>{1, 1, 1}));
  EXPECT_EQ(coeffs(4), (std::vector<long>{1, 0, 1}));
  EXPECT_EQ(coeffs(6), (std::vector<long>{1, -1, 1}));
  EXPECT_EQ(coeffs(8), (std::vector<long>{1, 0, 0, 0, 1}));
  EXPECT_EQ(CyclotomicField::get(9).degree(), 6);
}

TEST(Field, ZetaPowerCycle) {
  for (int k : {3, 4, 5, 6, 8, 9}) {
    const auto& f = CyclotomicField::get(k);
    const auto z = FieldElement::zeta_power(f, 1);
    FieldElement p(f, 1);
    for (int j = 0; j < k; ++j) {
      EXPECT_TRUE(close(p.to_complex(), std::polar(1.0, 2 * std::numbers::pi * j / k)));
      p *= z;
    }
    EXPECT_EQ(p, FieldElement(f, 1));
  }
}

TEST(Field, SumOfRootsVanishes) {
  for (int k : {3, 4, 6}) {
    const auto& f = CyclotomicField::get(k);
    FieldElement s(f);
    for (int j = 0; j < k; ++j) s += FieldElement::zeta_power(f, j);
    EXPECT_TRUE(s.is_zero());
  }
}

TEST(Field, RingAxiomsAgreeWithComplexShadows) {
  std::mt19937_64 rng(11);
  for (int k : {3, 4, 6}) {
    const auto& f = CyclotomicField::get(k);
    for (int i = 0; i < 200; ++i) {
      const auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a - a, FieldElement(f));
      EXPECT_TRUE(close((a * b).to_complex(), a.to_complex() * b.to_complex()));
      EXPECT_TRUE(close(a.conj().to_complex(), std::conj(a.to_complex())));
      EXPECT_EQ(a.conj().conj(), a);
      if (!a.is_zero()) {
        EXPECT_EQ(a * a.inverse(), FieldElement(f, 1));
        EXPECT_TRUE(close(a.inverse().to_complex(), 1.0 / a.to_complex()));
      }
    }
  }
}

TEST(Field, RotationMatchesMultiplication) {
  std::mt19937_64 rng(5);
  const auto& f = CyclotomicField::get(6);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_element(f, rng);
    for (int j = -7; j < 13; ++j) EXPECT_EQ(a.rotated(j), a * FieldElement::zeta_power(f, j));
  }
}

TEST(Field, InverseOfZeroThrows) {
  const auto& f = CyclotomicField::get(4);
  EXPECT_THROW(FieldElement(f).inverse(), DomainError);
}

TEST(Field, TextRoundTripAndHash) {
  std::mt19937_64 rng(3);
  for (int k : {3, 4, 6}) {
    const auto& f = CyclotomicField::get(k);
    for (int i = 0; i < 100; ++i) {
      const auto a = random_element(f, rng);
      const auto b = FieldElement::parse(f, a.to_string());
      EXPECT_EQ(a, b);
      EXPECT_EQ(a.hash(), b.hash());
    }
  }
  const auto& f = CyclotomicField::get(3);
  EXPECT_EQ(FieldElement::parse(f, "[ 1/2 , 0, 0 ]"), FieldElement(f, Rational(1, 2)));
}

TEST(Field, NormIsRealForSquareRootThree) {
  // |1 + zeta_6|^2 = 3.
  const auto& f = CyclotomicField::get(6);
  const auto x = FieldElement(f, 1) + FieldElement::zeta_power(f, 1);
  EXPECT_EQ(x.norm2(), FieldElement(f, 3));
  EXPECT_TRUE(x.norm2().is_rational());
}

TEST(Field, RationalHelpers) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(rational_pow(Rational(3), -2), Rational(1, 9));
  EXPECT_EQ(rational_pow(Rational(2, 3), 3), Rational(8, 27));
}
