#pragma once

// Coefficient fields. Every algorithm in the library is a template over a
// field descriptor F exposing `Element`, `zero()`, `one()`, `from_int()`,
// `from_rational()`, `parse()`, `format()` and `name()`. Elements support the
// usual arithmetic operators.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qshape {

struct ArithmeticError : std::domain_error {
  using std::domain_error::domain_error;
};

inline mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (sgn(q.get_den()) == 0) throw ArithmeticError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

/// The field of rational numbers, backed by GMP.
class Rationals {
 public:
  using Element = mpq_class;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element from_int(long long v) const { return Element(static_cast<long>(v)); }
  Element from_rational(const mpq_class& q) const { return q; }
  Element parse(std::string_view text) const { return parse_rational(text); }
  std::string format(const Element& e) const { return e.get_str(); }
  std::string name() const { return "Q"; }
  Element inverse(const Element& e) const {
    if (is_zero(e)) throw ArithmeticError("division by zero");
    return 1 / e;
  }
  template <class Rng>
  Element random(Rng& rng) const {
    std::uniform_int_distribution<int> d(-3, 3);
    return from_int(d(rng));
  }

  friend bool operator==(const Rationals&, const Rationals&) { return true; }
};

/// Residue class modulo a prime. Carries its modulus so that arithmetic
/// needs no external context.
class Residue {
 public:
  Residue() = default;
  Residue(std::uint64_t value, std::uint32_t modulus) : v_(value % modulus), p_(modulus) {}

  std::uint64_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }

  friend Residue operator+(Residue a, const Residue& b) {
    a += b;
    return a;
  }
  friend Residue operator-(Residue a, const Residue& b) {
    a -= b;
    return a;
  }
  friend Residue operator*(Residue a, const Residue& b) {
    a *= b;
    return a;
  }
  friend Residue operator/(Residue a, const Residue& b) {
    a /= b;
    return a;
  }
  Residue operator-() const { return Residue(v_ == 0 ? 0 : p_ - v_, p_); }

  Residue& operator+=(const Residue& b) {
    adopt(b);
    v_ += b.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  Residue& operator-=(const Residue& b) {
    adopt(b);
    v_ = v_ >= b.v_ ? v_ - b.v_ : v_ + p_ - b.v_;
    return *this;
  }
  Residue& operator*=(const Residue& b) {
    adopt(b);
    v_ = (v_ * b.v_) % p_;
    return *this;
  }
  Residue& operator/=(const Residue& b) {
    adopt(b);
    return *this *= b.inverse();
  }

  Residue inverse() const {
    if (v_ == 0) throw ArithmeticError("division by zero");
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = v_, e = p_ - 2;
    while (e > 0) {
      if (e & 1U) result = (result * base) % p_;
      base = (base * base) % p_;
      e >>= 1U;
    }
    return Residue(result, p_);
  }

  friend bool operator==(const Residue& a, const Residue& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Residue& a, const Residue& b) { return a.v_ != b.v_; }

 private:
  void adopt(const Residue& b) {
    if (p_ == 0) p_ = b.p_;
  }

  std::uint64_t v_ = 0;
  std::uint32_t p_ = 0;
};

inline bool is_zero(const Residue& x) { return x.value() == 0; }

/// The prime field F_p.
class PrimeField {
 public:
  using Element = Residue;

  PrimeField() = default;
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("Fp modulus " + std::to_string(p) + " is not a prime");
    if (p >= (1U << 31)) throw std::invalid_argument("Fp modulus must be below 2^31");
  }

  std::uint32_t characteristic() const { return p_; }

  Element zero() const { return Element(0, p_); }
  Element one() const { return Element(1, p_); }
  Element from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return Element(static_cast<std::uint64_t>(r), p_);
  }
  Element from_rational(const mpq_class& q) const {
    mpz_class num = q.get_num() % p_;
    mpz_class den = q.get_den() % p_;
    if (num < 0) num += p_;
    if (den == 0) throw ArithmeticError("denominator of " + q.get_str() + " vanishes mod " + std::to_string(p_));
    return Element(num.get_ui(), p_) / Element(den.get_ui(), p_);
  }
  Element parse(std::string_view text) const { return from_rational(parse_rational(text)); }
  std::string format(const Element& e) const { return std::to_string(e.value()); }
  std::string name() const { return "Fp:" + std::to_string(p_); }
  Element inverse(const Element& e) const { return e.inverse(); }
  template <class Rng>
  Element random(Rng& rng) const {
    std::uniform_int_distribution<std::uint32_t> d(0, p_ - 1);
    return Element(d(rng), p_);
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  std::uint32_t p_ = 2;
};

template <class F>
using Elem = typename F::Element;

}  // namespace qshape
