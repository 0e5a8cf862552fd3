#ifndef QRSTATS_LATTICES_HPP
#define QRSTATS_LATTICES_HPP

#include "qrstats/partitions.hpp"
#include "qrstats/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qrs {

/// Wall-avoiding convex region in R^{r-1}. Three shapes:
///   box      half-open [a_i, b_i) per coordinate
///   simplex  t * Delta^d = { y_i > 0, sum y_i < t }
///   product  t1 * Delta^i x t2 * Delta^j  (first i coords, last j coords)
/// All parameters exact rationals. CLI grammar:
///   box:a1,b1;a2,b2;...   simplex:t,d   prod:t1,i;t2,j
struct ConvexRegion {
  enum class Shape { Box, Simplex, Product };

  Shape shape = Shape::Box;
  int dim = 0;  // r - 1
  std::vector<std::pair<Rational, Rational>> bounds;  // box only
  Rational t1, t2;
  int i_count = 0, j_count = 0;  // product only; i_count + j_count == dim

  static ConvexRegion box(std::vector<std::pair<Rational, Rational>> b);
  static ConvexRegion simplex(Rational t, int d);
  static ConvexRegion product(Rational t1, int i, Rational t2, int j);
  static ConvexRegion parse(const std::string& spec);

  Rational volume() const;
  Rational diam1() const;  // sup of sum |x_k| over the region
  std::string to_string() const;

  /// Is the integer point h inside the dilate s*C? Exact.
  bool contains_dilated(std::span<const long long> h, const Rational& s) const;

  /// Inclusive integer candidate range for coordinate i of s*C.
  std::pair<Int, Int> coord_range(int i, const Rational& s) const;
};

struct WallCheckResult {
  bool pass = true;
  std::vector<std::pair<int, int>> violations;  // (i, j) with sigma_ij sign change
};

/// Checks that each sigma_ij has constant nonzero sign on the closure
/// of C (interval arithmetic for boxes; simplices pass by construction).
WallCheckResult wall_check(const ConvexRegion& c, int r);

/// One set partition per prime (trivial ones omitted). Defines the
/// congruence lattice
///   L(G) = { h : sigma_ij(h) = 0 mod p whenever i,j share a block of G^(p) }.
struct PartitionTuple {
  int r = 0;
  /// (prime, index into PartitionPoset::get(r)), sorted by prime,
  /// nontrivial partitions only.
  std::vector<std::pair<std::uint64_t, std::size_t>> assignments;

  Int supp() const;
  Int disc() const;
  Int lambda() const;
  std::string to_string() const;
};

bool lattice_contains(const PartitionTuple& g, std::span<const long long> h);

/// Integer points of sC intersected with L(G), lexicographic order.
/// Enumeration strides coordinate i by the product of primes forcing
/// h_i = 0, then filters full membership. Throws when the candidate
/// count exceeds the budget.
std::vector<std::vector<long long>> lattice_points(const ConvexRegion& c, const Rational& s,
                                                   const PartitionTuple& g,
                                                   std::uint64_t budget = 100000000ull);

struct LipschitzRow {
  Rational s;
  Int count;
  Rational expected;   // vol(sC) / disc
  double residual;     // |count - expected|
  double normalized;   // residual / s^{dim-1}
};

std::vector<LipschitzRow> lipschitz_check(const ConvexRegion& c, const std::vector<Rational>& s_values,
                                          const PartitionTuple& g,
                                          std::uint64_t budget = 100000000ull);

/// True when supp(G) > diam1(sC)^{r(r-1)/2}, in which case sC n L(G)
/// lies in the walls and contributes nothing for wall-avoiding C.
bool avoid_walls_prune(const PartitionTuple& g, const ConvexRegion& c, const Rational& s);

}  // namespace qrs

#endif
