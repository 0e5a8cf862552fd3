#ifndef QRSTATS_SPACINGS_HPP
#define QRSTATS_SPACINGS_HPP

#include "qrstats/arith.hpp"
#include "qrstats/rational.hpp"

#include <cstdint>
#include <vector>

namespace qrs {

/// Finite point set on the circle R/Z with a common denominator:
/// points are nums[i]/den, strictly sorted, all in [0,1). Exact
/// arithmetic for all combinatorial counts.
struct CirclePointSet {
  std::uint64_t den = 1;
  std::vector<std::uint64_t> nums;

  std::size_t size() const { return nums.size(); }
  static CirclePointSet from_residues(const ResidueSet& rs);
  /// Throws unless sorted, distinct, in range.
  void validate() const;
};

struct GapList {
  std::vector<std::uint64_t> raw;      // in units of 1/den, circular (N entries)
  std::vector<Rational> normalized;    // raw * N / den; mean exactly 1
};
GapList gaps(const CirclePointSet& s);

/// N_k(x) for k = 2..k_max: k-tuples of diameter strictly less than x.
/// Windowed scan; equals the definitional tuple count.
std::vector<Int> nk_counts(const CirclePointSet& s, const Rational& x, int k_max);

struct SandwichResult {
  Int exact;         // g(x): consecutive gaps < x, direct count
  Int alternating;   // sum_{k>=2} (-1)^k N_k(x)
  /// brackets[n-1] = (lower, upper) = (P(2n+1), P(2n)) partial sums
  std::vector<std::pair<Int, Int>> brackets;
  bool identity_holds = false;
  bool brackets_hold = false;
};
SandwichResult sandwich_g(const CirclePointSet& s, const Rational& x, int truncation);

/// N_{i,j}(x,y): (i,j)-tuples with first span at most x and second at
/// most y (weak inequalities, matching the joint sandwich identity).
Int nij_count(const CirclePointSet& s, const Rational& x, const Rational& y, int i, int j);

struct JointSandwichResult {
  Int exact;        // g(x,y): consecutive triples within (x,y)
  Int alternating;  // sum_{k>=3} (-1)^{k+1} A_k(x,y)
  std::vector<std::pair<Int, Int>> brackets;
  bool identity_holds = false;
  bool brackets_hold = false;
};
JointSandwichResult joint_sandwich_g(const CirclePointSet& s, const Rational& x, const Rational& y,
                                     int truncation);

struct SpacingReport {
  std::size_t n_points = 0;
  double mean_normalized_gap = 0;
  double ks_exponential = 0;  // sup |CDF_emp - (1 - e^-x)|
  double joint_ks = 0;        // sup over grid |CDF_emp(x,y) - (1-e^-x)(1-e^-y)|
  bool small_sample = false;  // fewer than 100 points
};

/// One-dimensional and joint (consecutive-pair) comparison of the
/// normalized gap distribution against the exponential law.
SpacingReport exponential_fit(const CirclePointSet& s);

struct DavenportRow {
  std::uint64_t gap = 0;
  std::uint64_t count = 0;
  double proportion = 0;
  double expected = 0;  // 2^-gap
  double abs_dev = 0;
};

/// Histogram of integer gaps between consecutive quadratic residues
/// mod an odd prime p, against Davenport's 2^-h limit.
std::vector<DavenportRow> davenport_histogram(std::uint64_t p,
                                              std::uint64_t sieve_limit = (1ull << 31));

}  // namespace qrs

#endif
