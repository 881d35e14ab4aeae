#include "ale/quotient_group.hpp"

#include <numeric>
#include <stdexcept>

namespace ale {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

CyclicQuotient::CyclicQuotient(int m, int k, std::vector<int> exponents)
    : m_(m), k_(k), exponents_(std::move(exponents)) {
  if (m_ < 2) throw std::invalid_argument("CyclicQuotient: m >= 2");
  if (k_ < 1) throw std::invalid_argument("CyclicQuotient: k >= 1");
  if (static_cast<int>(exponents_.size()) != m_)
    throw std::invalid_argument("CyclicQuotient: need m exponents");
  for (int& a : exponents_) {
    a %= k_;
    if (a < 0) a += k_;
  }
  // reduce so k is the order of the generated group
  int g = k_;
  for (int a : exponents_) g = std::gcd(g, a);
  if (g > 1) {
    k_ /= g;
    for (int& a : exponents_) a /= g;
  }
}

bool acts_freely(const CyclicQuotient& q) {
  for (int a : q.exponents())
    if (std::gcd(a, q.order()) != 1) return false;
  return true;
}

bool in_special_unitary(const CyclicQuotient& q) {
  long long s = 0;
  for (int a : q.exponents()) s += a;
  return s % q.order() == 0;
}

Rational age(const CyclicQuotient& q, long long power) {
  const long long k = q.order();
  long long l = power % k;
  if (l < 0) l += k;
  if (l == 0)
    throw std::invalid_argument("age: identity element has no age in this test");
  if (!acts_freely(q))
    throw std::invalid_argument("age: requires a free action");
  long long s = 0;
  for (int a : q.exponents()) s += (l * a) % k;
  return Rational(s, k);
}

bool is_terminal(const CyclicQuotient& q) {
  if (!acts_freely(q) || !in_special_unitary(q))
    throw std::invalid_argument(
        "is_terminal: criterion applies to free SU actions");
  for (long long l = 1; l < q.order(); ++l)
    if (!(age(q, l) > Rational(1, 1))) return false;
  return true;  // vacuously for the trivial group
}

namespace {

bool match_pairs(const std::vector<int>& a, int k, unsigned used) {
  const int m = static_cast<int>(a.size());
  int i = 0;
  while (i < m && (used & (1u << i))) ++i;
  if (i == m) return true;
  for (int j = i + 1; j < m; ++j) {
    if (used & (1u << j)) continue;
    if ((a[i] + a[j]) % k == 0 &&
        match_pairs(a, k, used | (1u << i) | (1u << j)))
      return true;
  }
  return false;
}

}  // namespace

bool satisfies_symplectic_pairing(const CyclicQuotient& q) {
  if (q.complex_dimension() % 2 != 0)
    throw std::invalid_argument("satisfies_symplectic_pairing: m must be even");
  return match_pairs(q.exponents(), q.order(), 0u);
}

}  // namespace ale
