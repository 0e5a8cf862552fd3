#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrstats/arith.hpp"

#include <random>

using namespace qrs;

TEST_CASE("primality and factorization") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(1000003));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(1000001));  // 101 * 9901
  CHECK(factorize(1).empty());
  CHECK(factorize(15015) == std::vector<std::uint64_t>{3, 5, 7, 11, 13});
  CHECK(factorize(12) == std::vector<std::uint64_t>{2, 2, 3});
}

TEST_CASE("modulus construction") {
  auto m = make_modulus(15);
  CHECK(m.omega() == 2);
  CHECK(m.n_residues == 6);
  CHECK(m.mean_spacing() == Rational(5, 2));
  CHECK(m.sigma_minus1() == Rational(8, 5));  // (1+1/3)(1+1/5)
  // s = 2^omega / sigma_{-1}(q)
  CHECK(m.mean_spacing() == Rational(4) / m.sigma_minus1());

  CHECK_THROWS_WITH_AS((void)make_modulus(12), doctest::Contains("2"), std::invalid_argument);
  CHECK_THROWS_AS((void)make_modulus(45), std::invalid_argument);

  auto even = make_modulus(30);
  CHECK(even.even());
  CHECK(even.n_residues == 12);  // 2 * N_15
}

TEST_CASE("squares mod 15") {
  auto rs = enumerate_squares(make_modulus(15));
  CHECK(rs.residues == std::vector<std::uint64_t>{0, 1, 4, 6, 9, 10});
  auto crt = enumerate_squares_crt(make_modulus(15));
  CHECK(crt.residues == rs.residues);
}

TEST_CASE("sieve agrees with CRT construction") {
  // all odd square-free q up to 2000 with omega >= 2, plus random larger ones
  for (std::uint64_t q = 15; q <= 2000; q += 2) {
    auto f = factorize(q);
    bool sf = true;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      if (f[i] == f[i + 1]) sf = false;
    }
    if (!sf || f.size() < 2) continue;
    auto m = make_modulus(q);
    CHECK(enumerate_squares(m).residues == enumerate_squares_crt(m).residues);
  }
  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 50) {
    std::uint64_t q = 2001 + 2 * (rng() % 50000);
    auto f = factorize(q);
    bool sf = f.size() >= 2;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      if (f[i] == f[i + 1]) sf = false;
    }
    if (!sf) continue;
    auto m = make_modulus(q);
    REQUIRE(enumerate_squares(m).residues == enumerate_squares_crt(m).residues);
    ++done;
  }
}

TEST_CASE("even reduction invariants") {
  for (std::uint64_t qodd : {15ull, 105ull, 1155ull}) {
    auto red = reduce_even(make_modulus(2 * qodd));
    CHECK(red.odd.q == qodd);
    CHECK(red.spacing_even == red.spacing_odd);
    CHECK(red.n_residues_even == 2 * red.odd.n_residues);
    // residues mod 2q' are residues mod q' shifted into two classes
    auto rs_even = enumerate_squares(make_modulus(2 * qodd));
    CHECK(Int(rs_even.residues.size()) == red.n_residues_even);
  }
  CHECK_THROWS_AS((void)reduce_even(make_modulus(15)), std::invalid_argument);
}

TEST_CASE("divisor helpers") {
  auto m = make_modulus(15);
  CHECK(divisors(m) == std::vector<std::uint64_t>{1, 3, 5, 15});
  // s = 5/2; divisors below s^1: only d = 1
  CHECK(count_small_divisors(m, Rational(1)) == 1);
  CHECK(count_small_divisors(m, Rational(2)) == 3);  // 1, 3, 5 < 25/4

  auto tail = divisor_tail_sum(m, Rational(1));
  CHECK(tail.exact);
  // d > 5/2: 3, 5, 15 -> 1/3 + 1/5 + 1/15 = 3/5
  CHECK(tail.exact_value == Rational(3, 5));
  CHECK(tail.value == doctest::Approx(0.6));
  CHECK(tail.ratio_to_s_pow == doctest::Approx(0.6 / 0.4));

  auto tail_half = divisor_tail_sum(m, Rational(1, 2));
  CHECK_FALSE(tail_half.exact);
  double expect = 1 / std::sqrt(3.0) + 1 / std::sqrt(5.0) + 1 / std::sqrt(15.0);
  CHECK(tail_half.value == doctest::Approx(expect));
}
