#pragma once

#include <vector>

namespace ale {

// Exact fraction, reduced, positive denominator. Enough arithmetic for
// comparing ages against 1 without floating-point ties.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  double as_double() const { return static_cast<double>(num) / den; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  bool equals_integer(long long v) const { return den == 1 && num == v; }
};

// Finite cyclic subgroup of U(m) acting on C^m: the generator multiplies
// coordinate z_j by exp(2 pi i a_j / k). Stored in reduced form, i.e. k is
// the true order of the generated group.
class CyclicQuotient {
 public:
  CyclicQuotient(int m, int k, std::vector<int> exponents);

  int complex_dimension() const { return m_; }
  int order() const { return k_; }
  const std::vector<int>& exponents() const { return exponents_; }

 private:
  int m_;
  int k_;
  std::vector<int> exponents_;
};

// The action is free on C^m minus the origin iff no nontrivial power fixes
// a coordinate axis: gcd(a_j, k) = 1 for every j.
bool acts_freely(const CyclicQuotient& q);

// Generator determinant is 1: sum of exponents divisible by k.
bool in_special_unitary(const CyclicQuotient& q);

// age(gamma^l) = sum_j frac(l a_j / k), exact. Requires a free action and
// 1 <= l mod k != 0.
Rational age(const CyclicQuotient& q, long long power);

// Reid's criterion for free special-unitary actions: terminal iff every
// nontrivial power has age > 1.
bool is_terminal(const CyclicQuotient& q);

// The exponents split into pairs summing to 0 mod k (a complex symplectic
// form is preserved). m must be even.
bool satisfies_symplectic_pairing(const CyclicQuotient& q);

}  // namespace ale
