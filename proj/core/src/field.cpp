#include "nestfold/field.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "nestfold/error.hpp"

namespace nestfold {

namespace {

using Poly = std::vector<Rational>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of a by monic b; the remainder must vanish.
Poly divide_exact(Poly a, const Poly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw IntegrityError("cyclotomic division underflow");
  Poly q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    const Rational c = a[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t t = 0; t <= db; ++t) a[i - db + t] -= c * b[t];
  }
  trim(a);
  if (!a.empty()) throw IntegrityError("cyclotomic division left a remainder");
  return q;
}

Poly cyclotomic_poly(int k) {
  Poly p(static_cast<std::size_t>(k) + 1, 0);
  p[0] = -1;
  p[k] = 1;
  for (int d = 1; d < k; ++d) {
    if (k % d == 0) p = divide_exact(p, cyclotomic_poly(d));
  }
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') s.push_back(c);
  }
  if (s.empty()) throw ValidationError("empty rational");
  std::size_t slash = s.find('/');
  auto digits_ok = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  std::string_view sv = s;
  std::string_view num = sv.substr(0, slash);
  std::string_view den = slash == std::string::npos ? std::string_view("1") : sv.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) {
    throw ValidationError("malformed rational '" + s + "'");
  }
  std::string num_s(num.front() == '+' ? num.substr(1) : num);
  mpz_class n(num_s, 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str(10);
}

Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero to a negative power");
    Rational inv = 1 / base;
    return rational_pow(inv, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------

const CyclotomicField& CyclotomicField::get(int k) {
  if (k < 1 || k > 200) throw DomainError("cyclotomic order out of range: " + std::to_string(k));
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CyclotomicField>> registry;
  std::lock_guard lock(mu);
  auto it = registry.find(k);
  if (it == registry.end()) {
    it = registry.emplace(k, std::unique_ptr<CyclotomicField>(new CyclotomicField(k))).first;
  }
  return *it->second;
}

CyclotomicField::CyclotomicField(int k) : k_(k) {
  modulus_ = cyclotomic_poly(k);
  phi_ = static_cast<int>(modulus_.size()) - 1;
  powers_.reserve(2 * static_cast<std::size_t>(k));
  for (int j = 0; j < 2 * k; ++j) {
    Poly mono(static_cast<std::size_t>(j) + 1, 0);
    mono[j] = 1;
    powers_.push_back(reduce(mono));
  }
}

const std::vector<Rational>& CyclotomicField::power(int j) const {
  int r = j % k_;
  if (r < 0) r += k_;
  return powers_[r];
}

std::complex<double> CyclotomicField::zeta_shadow(int j) const {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k_);
  return {std::cos(t), std::sin(t)};
}

std::vector<Rational> CyclotomicField::reduce(std::span<const Rational> poly) const {
  Poly p(poly.begin(), poly.end());
  if (p.size() < static_cast<std::size_t>(phi_)) p.resize(phi_, 0);
  for (std::size_t i = p.size(); i-- > static_cast<std::size_t>(phi_);) {
    if (p[i] == 0) continue;
    const Rational c = p[i];
    p[i] = 0;
    for (int t = 0; t < phi_; ++t) {
      if (modulus_[t] != 0) p[i - phi_ + t] -= c * modulus_[t];
    }
  }
  p.resize(phi_);
  return p;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(const CyclotomicField& field)
    : field_(&field), coeffs_(field.degree(), 0) {}

FieldElement::FieldElement(const CyclotomicField& field, const Rational& value)
    : FieldElement(field) {
  coeffs_[0] = value;
}

FieldElement FieldElement::from_coefficients(const CyclotomicField& field,
                                             std::span<const Rational> coeffs) {
  FieldElement x(field);
  x.coeffs_ = field.reduce(coeffs);
  return x;
}

FieldElement FieldElement::zeta_power(const CyclotomicField& field, int j) {
  FieldElement x(field);
  x.coeffs_ = field.power(j);
  return x;
}

FieldElement FieldElement::parse(const CyclotomicField& field, std::string_view text) {
  std::string_view t = text;
  auto strip = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  t = strip(t);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw ValidationError("field element must be written [c0,c1,...]: '" + std::string(text) + "'");
  }
  t = strip(t.substr(1, t.size() - 2));
  std::vector<Rational> coeffs;
  while (!t.empty()) {
    std::size_t comma = t.find(',');
    coeffs.push_back(parse_rational(t.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    t = t.substr(comma + 1);
  }
  if (coeffs.empty()) throw ValidationError("field element without coefficients");
  return from_coefficients(field, coeffs);
}

std::vector<Rational> FieldElement::expanded() const {
  std::vector<Rational> out(coeffs_);
  out.resize(field_->order(), 0);
  return out;
}

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool FieldElement::is_rational() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

void FieldElement::check_same_field(const FieldElement& o) const {
  if (field_ != o.field_) throw DomainError("mixing elements of different cyclotomic fields");
}

FieldElement FieldElement::conj() const {
  FieldElement out(*field_);
  const int k = field_->order();
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    const auto& p = field_->power(k - static_cast<int>(j));
    for (std::size_t t = 0; t < p.size(); ++t) {
      if (p[t] != 0) out.coeffs_[t] += coeffs_[j] * p[t];
    }
  }
  return out;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DomainError("division by zero field element");
  const int n = field_->degree();
  // Column i of the matrix is the canonical form of x * zeta^i.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, 0));
  for (int i = 0; i < n; ++i) {
    FieldElement col = rotated(i);
    for (int r = 0; r < n; ++r) a[r][i] = col.coeffs_[r];
  }
  a[0][n] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw IntegrityError("singular multiplication matrix");
    std::swap(a[c], a[piv]);
    const Rational inv = 1 / a[c][c];
    for (int j = c; j <= n; ++j) a[c][j] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  FieldElement out(*field_);
  for (int i = 0; i < n; ++i) out.coeffs_[i] = a[i][n];
  return out;
}

FieldElement FieldElement::rotated(int j) const {
  return *this * zeta_power(*field_, j);
}

std::complex<double> FieldElement::to_complex() const {
  std::complex<double> z = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] != 0) z += coeffs_[j].get_d() * field_->zeta_shadow(static_cast<int>(j));
  }
  return z;
}

std::string FieldElement::to_string() const {
  std::string s = "[";
  const auto ex = expanded();
  for (std::size_t j = 0; j < ex.size(); ++j) {
    if (j) s += ',';
    s += nestfold::to_string(ex[j]);
  }
  s += ']';
  return s;
}

std::size_t FieldElement::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (const Rational& c : coeffs_) {
    for (const mpz_srcptr z : {c.get_num_mpz_t(), c.get_den_mpz_t()}) {
      const int size = z->_mp_size;
      mix(static_cast<std::size_t>(size));
      const int n = size < 0 ? -size : size;
      for (int i = 0; i < n; ++i) mix(static_cast<std::size_t>(z->_mp_d[i]));
    }
  }
  return h;
}

FieldElement FieldElement::operator-() const {
  FieldElement out(*this);
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same_field(o);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same_field(o);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same_field(o);
  const std::size_t n = coeffs_.size();
  std::vector<Rational> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (o.coeffs_[j] != 0) prod[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  std::vector<Rational> out(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t d = n; d < prod.size(); ++d) {
    if (prod[d] == 0) continue;
    const auto& p = field_->power(static_cast<int>(d));
    for (std::size_t t = 0; t < n; ++t) {
      if (p[t] != 0) out[t] += prod[d] * p[t];
    }
  }
  coeffs_ = std::move(out);
  return *this;
}

FieldElement& FieldElement::operator*=(const Rational& q) {
  for (auto& c : coeffs_) c *= q;
  return *this;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
}

std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b) {
  if (a.field_ != b.field_) {
    if (!a.field_ || !b.field_) return (a.field_ != nullptr) <=> (b.field_ != nullptr);
    return a.order() <=> b.order();
  }
  for (std::size_t j = 0; j < a.coeffs_.size(); ++j) {
    const int c = cmp(a.coeffs_[j], b.coeffs_[j]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

const Budget& Budget::current() {
  static const Budget budget = [] {
    Budget b{2'000'000, 40};
    if (const char* s = std::getenv("NESTFOLD_MAX_COMPLEXES")) b.max_complexes = std::atoll(s);
    if (const char* s = std::getenv("NESTFOLD_MAX_DEPTH")) b.max_depth = std::atoi(s);
    if (b.max_complexes <= 0) b.max_complexes = 2'000'000;
    if (b.max_depth <= 0) b.max_depth = 40;
    return b;
  }();
  return budget;
}

}  // namespace nestfold
