#include <doctest.h>

#include <complex>
#include <stdexcept>
#include <numeric>
#include <random>

#include "ale/quotient_group.hpp"

using namespace ale;

namespace {

// independent oracle: enumerate the eigenvalues of every nontrivial power
bool free_by_enumeration(const CyclicQuotient& q) {
  for (int l = 1; l < q.order(); ++l)
    for (int a : q.exponents()) {
      const double ang = 2.0 * M_PI * l * a / q.order();
      if (std::abs(std::polar(1.0, ang) - std::complex<double>(1.0, 0.0)) <
          1e-9)
        return false;
    }
  return true;
}

}  // namespace

TEST_CASE("acts_freely on the diagonal actions") {
  CHECK(acts_freely(CyclicQuotient(2, 2, {1, 1})));
  CHECK(acts_freely(CyclicQuotient(2, 1, {0, 0})));
  CHECK_FALSE(acts_freely(CyclicQuotient(2, 4, {1, 2})));
}

TEST_CASE("special unitary membership") {
  CHECK(in_special_unitary(CyclicQuotient(2, 2, {1, 1})));
  CHECK(in_special_unitary(CyclicQuotient(3, 3, {1, 1, 1})));
  CHECK_FALSE(in_special_unitary(CyclicQuotient(2, 3, {1, 1})));
}

TEST_CASE("ages are exact rationals") {
  CHECK(age(CyclicQuotient(2, 2, {1, 1}), 1) == Rational(1, 1));
  CHECK(age(CyclicQuotient(4, 2, {1, 1, 1, 1}), 1) == Rational(2, 1));
  CHECK(age(CyclicQuotient(3, 3, {1, 1, 1}), 2) == Rational(2, 1));
  CHECK_THROWS_AS(age(CyclicQuotient(2, 2, {1, 1}), 2),
                  std::invalid_argument);
}

TEST_CASE("terminality via the age criterion") {
  CHECK(is_terminal(CyclicQuotient(4, 2, {1, 1, 1, 1})));
  CHECK_FALSE(is_terminal(CyclicQuotient(2, 2, {1, 1})));
  CHECK_FALSE(is_terminal(CyclicQuotient(3, 3, {1, 1, 1})));
  CHECK_THROWS_AS(is_terminal(CyclicQuotient(2, 4, {1, 2})),
                  std::invalid_argument);
}

TEST_CASE("symplectic pairing search") {
  CHECK(satisfies_symplectic_pairing(CyclicQuotient(4, 2, {1, 1, 1, 1})));
  CHECK(satisfies_symplectic_pairing(CyclicQuotient(2, 5, {1, 4})));
  CHECK_FALSE(satisfies_symplectic_pairing(CyclicQuotient(4, 3, {1, 1, 1, 1})));
  CHECK_THROWS_AS(satisfies_symplectic_pairing(CyclicQuotient(3, 3, {1, 1, 1})),
                  std::invalid_argument);
}

TEST_CASE("construction normalizes to the reduced representation") {
  const CyclicQuotient q(2, 4, {2, 2});
  CHECK(q.order() == 2);
  CHECK(q.exponents() == std::vector<int>{1, 1});
}

TEST_CASE("acts_freely invariant under permutation and conjugation") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 24);
    std::vector<int> a(m);
    for (int& v : a) v = static_cast<int>(rng() % k);
    const CyclicQuotient q(m, k, a);

    std::vector<int> perm = a;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> conj(m);
    for (int i = 0; i < m; ++i) conj[i] = (k - a[i]) % k;

    CHECK(acts_freely(q) == acts_freely(CyclicQuotient(m, k, perm)));
    CHECK(acts_freely(q) == acts_freely(CyclicQuotient(m, k, conj)));
  }
}

TEST_CASE("age reflection: age(l) + age(k-l) = m for free actions") {
  std::mt19937 rng(12);
  int found = 0;
  while (found < 100) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const int k = 2 + static_cast<int>(rng() % 30);
    std::vector<int> a(m);
    for (int& v : a) v = static_cast<int>(rng() % k);
    const CyclicQuotient q(m, k, a);
    if (!acts_freely(q) || q.order() < 2) continue;
    ++found;
    for (int l = 1; l < q.order(); ++l) {
      const Rational sum = age(q, l) + age(q, q.order() - l);
      CHECK(sum.equals_integer(m));
    }
  }
}

TEST_CASE("pairing with m > 2 forces terminality") {
  for (int k = 1; k <= 14; ++k) {
    std::vector<int> units;
    for (int a = 0; a < k; ++a)
      if (std::gcd(a, k) == 1) units.push_back(a);
    // exhaustive over nondecreasing 4-tuples of units
    for (std::size_t i = 0; i < units.size(); ++i)
      for (std::size_t j = i; j < units.size(); ++j)
        for (std::size_t l = j; l < units.size(); ++l)
          for (std::size_t h = l; h < units.size(); ++h) {
            const CyclicQuotient q(4, k,
                                   {units[i], units[j], units[l], units[h]});
            if (!acts_freely(q) || !in_special_unitary(q)) continue;
            if (!satisfies_symplectic_pairing(q)) continue;
            CHECK(is_terminal(q));
          }
  }
}

TEST_CASE("brute-force equivalence of the freeness test") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % 50);
    std::vector<int> a(m);
    for (int& v : a) v = static_cast<int>(rng() % k);
    const CyclicQuotient q(m, k, a);
    CHECK(acts_freely(q) == free_by_enumeration(q));
  }
}
