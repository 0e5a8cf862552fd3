#ifndef QRSTATS_CORRELATIONS_HPP
#define QRSTATS_CORRELATIONS_HPP

#include "qrstats/arith.hpp"
#include "qrstats/counting.hpp"
#include "qrstats/lattices.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qrs {

struct CorrelationResult {
  std::uint64_t q = 0;
  int r = 0;
  std::string region;
  std::string method;
  Rational value;
  Rational volume;
  Rational deviation;  // value - vol(C)
};

/// R_r(C,q) = (1/N_q) sum_{h in sC n Z^{r-1}} N(h,q). Requires odd q
/// and a wall-avoiding region.
CorrelationResult correlation_definition(const SquareFreeModulus& m, int r, const ConvexRegion& c,
                                         std::uint64_t budget = 100000000ull);

/// The divisor/lattice expansion
///   R_r = s/2^{r w} sum_{c|q} (1/c) sum_{supp(G)|q/c} lambda(G)
///         sum_{h in sC n L(G)} a(h,c) Delta(h,c),
/// evaluated with exact rationals. An exact identity with the
/// definition for every q, r, C.
CorrelationResult correlation_formula(const SquareFreeModulus& m, int r, const ConvexRegion& c,
                                      bool prune = true, std::uint64_t budget = 100000000ull);

/// Counts r-tuples of circle points whose signed-distance vector lies
/// in C/N (windowed scan over the sorted residue list). Works for any
/// residue set, including even q.
CorrelationResult correlation_circle(const ResidueSet& s, int r, const ConvexRegion& c);

/// The c,G-expansion main term, evaluated by the multiplicative
/// factorization; equals vol(C) exactly.
Rational main_term(const SquareFreeModulus& m, int r, const ConvexRegion& c);

struct SweepRow {
  std::uint64_t q = 0;
  int omega = 0;
  double s = 0;
  Rational r2;
  double deviation = 0;       // |R2 - |I||
  double dev_times_sqrt_s = 0;
  double dev_times_s = 0;
};

/// Pair-correlation convergence table over a list of square-free q.
std::vector<SweepRow> pair_correlation_sweep(const std::vector<std::uint64_t>& qs, const ConvexRegion& interval,
                                             std::uint64_t budget = 100000000ull);

}  // namespace qrs

#endif
