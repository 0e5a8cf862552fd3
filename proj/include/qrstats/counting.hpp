#ifndef QRSTATS_COUNTING_HPP
#define QRSTATS_COUNTING_HPP

#include "qrstats/arith.hpp"
#include "qrstats/partitions.hpp"
#include "qrstats/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qrs {

/// Quadratic-residue tables for an odd prime p, cached per prime:
/// a membership bitmap and the sorted list of squares (0 included).
struct QrTable {
  std::uint64_t p = 0;
  std::vector<std::uint8_t> is_square;   // size p
  std::vector<std::uint32_t> squares;    // (p+1)/2 entries
};
const QrTable& qr_table(std::uint64_t p);

struct PrimeCountRecord {
  std::uint64_t p = 0;
  int r = 0;
  std::uint64_t n_solutions = 0;  // N_r(h,p)
  int r_eff = 0;
  long long a = 0;                // 2^{r_eff} N - p, exact by definition
};

/// N_r(h,p): solutions y_1..y_r in squares mod p of y_i - y_{i+1} = h_i,
/// counted by a direct scan of y_1 over the squares.
PrimeCountRecord count_prime(std::span<const long long> h, std::uint64_t p, int r);

/// N(h,q) = prod_{p|q} N(h,p). Rejects even q (reduce_even first).
Int count_composite(std::span<const long long> h, const SquareFreeModulus& m, int r);

/// a(h,c) = prod_{p|c} a(h,p) over the given primes of a square-free c.
Int a_composite(std::span<const long long> h, std::span<const std::uint64_t> c_primes, int r);

/// Delta(h,c) = prod_{p|c} 2^{r - r_eff(h mod p)}.
Int delta_composite(std::span<const long long> h, std::span<const std::uint64_t> c_primes, int r);

struct SumIdentityResult {
  Int direct;      // sum_h a(h,p) Delta(h,p)
  Rational closed; // (p+1)^r - p^r sum_G lambda(G) p^{-codim H_G}
  bool pass = false;
};

/// Exact check of the a*Delta summation identity for one (p, r).
SumIdentityResult verify_sum_identity(std::uint64_t p, int r);

}  // namespace qrs

#endif
