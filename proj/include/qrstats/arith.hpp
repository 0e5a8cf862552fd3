#ifndef QRSTATS_ARITH_HPP
#define QRSTATS_ARITH_HPP

#include "qrstats/rational.hpp"

#include <cstdint>
#include <vector>

namespace qrs {

bool is_prime(std::uint64_t n);

/// Prime factorization with multiplicity, sorted. factorize(1) == {}.
/// Trial division up to 1e6, then Pollard rho for the cofactor.
std::vector<std::uint64_t> factorize(std::uint64_t q);

/// A square-free modulus together with the derived quantities used
/// throughout: omega, sigma_{-1}, the number of squares, and the mean
/// spacing s = q / N_q (exact rational).
struct SquareFreeModulus {
  std::uint64_t q = 1;
  std::vector<std::uint64_t> primes;  // sorted, distinct
  Int n_residues = 1;

  int omega() const { return static_cast<int>(primes.size()); }
  bool even() const { return !primes.empty() && primes.front() == 2; }
  Rational sigma_minus1() const;
  Rational mean_spacing() const { return Rational(Int(q), n_residues); }
};

/// Throws std::invalid_argument (naming the repeated prime) when q is
/// not square-free.
SquareFreeModulus make_modulus(std::uint64_t q);

struct ResidueSet {
  SquareFreeModulus modulus;
  std::vector<std::uint64_t> residues;  // sorted squares mod q, 0 included
};

/// Bit-set sieve over x in [0, q/2]. Memory is q bits; refuses q above
/// sieve_limit. Deterministic regardless of thread count.
ResidueSet enumerate_squares(const SquareFreeModulus& m,
                             std::uint64_t sieve_limit = (1ull << 31));

/// Cross-check construction: per-prime square sets merged by CRT.
/// Only sensible for small q (the merge materializes all N_q residues).
ResidueSet enumerate_squares_crt(const SquareFreeModulus& m);

struct EvenReduction {
  SquareFreeModulus odd;        // q' = q/2
  Rational spacing_even;        // s_q
  Rational spacing_odd;         // s_{q'}; equals spacing_even
  Int n_residues_even;          // N_q = 2 N_{q'}
};
EvenReduction reduce_even(const SquareFreeModulus& m);

/// All 2^omega divisors of q, sorted ascending.
std::vector<std::uint64_t> divisors(const SquareFreeModulus& m);

/// #{ d | q : d < s^alpha }, decided exactly (d^alpha_den < s^alpha_num
/// as rationals).
std::uint64_t count_small_divisors(const SquareFreeModulus& m, const Rational& alpha);

struct DivisorTailSum {
  bool exact = false;      // true when alpha is an integer
  Rational exact_value;    // valid when exact
  double value = 0.0;      // always populated
  double ratio_to_s_pow = 0.0;  // value / s^{-alpha}
};

/// Sum of d^{-alpha} over divisors d | q with d > s.
DivisorTailSum divisor_tail_sum(const SquareFreeModulus& m, const Rational& alpha);

}  // namespace qrs

#endif
