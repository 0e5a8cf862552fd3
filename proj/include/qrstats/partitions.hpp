#ifndef QRSTATS_PARTITIONS_HPP
#define QRSTATS_PARTITIONS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qrs {

/// A set partition of {1..r}, stored as a restricted-growth string:
/// rgs[i] is the block index of element i+1, blocks numbered by first
/// occurrence. Canonical and duplicate-free by construction.
struct SetPartition {
  int r = 0;
  std::vector<int> rgs;

  int num_blocks() const;
  int codim() const { return r - num_blocks(); }  // codim V_F = r - |F|
  bool trivial() const { return num_blocks() == r; }  // all singletons
  bool maximal() const { return num_blocks() == 1; }
  std::vector<std::vector<int>> blocks() const;  // 1-based elements
  std::string to_string() const;                 // e.g. "{1,2}{3}"

  bool operator==(const SetPartition&) const = default;
};

/// All Bell(r) partitions of {1..r} in lexicographic RGS order.
/// Requires 2 <= r <= 6.
std::vector<SetPartition> enumerate_partitions(int r);

/// F refines G: every block of F is contained in some block of G.
bool refines(const SetPartition& F, const SetPartition& G);

/// The refinement poset of partitions of {1..r}, with its Moebius
/// function (computed by the defining recursion, memoized) and the
/// lambda weights from the 2^{r - r_eff} decomposition.
class PartitionPoset {
 public:
  explicit PartitionPoset(int r);

  static const PartitionPoset& get(int r);  // cached, immutable

  int r() const { return r_; }
  const std::vector<SetPartition>& partitions() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  std::size_t index_of(const SetPartition& p) const;
  std::size_t minimal() const;  // all singletons
  std::size_t maximal() const;  // one block

  bool leq(std::size_t f, std::size_t g) const { return leq_[f][g]; }
  long long mobius(std::size_t f, std::size_t g) const { return mobius_[f][g]; }
  /// lambda(G) = sum_{F <= G} mu(F,G) 2^{r - |F|}
  long long lambda(std::size_t g) const { return lambda_[g]; }

 private:
  int r_;
  std::vector<SetPartition> parts_;
  std::vector<std::vector<char>> leq_;
  std::vector<std::vector<long long>> mobius_;
  std::vector<long long> lambda_;
};

/// Partial sums sigma_{1j}(h) for j = 1..r (sigma_{11} = 0).
std::vector<long long> sigma_prefix(std::span<const long long> h, int r);

/// Number of distinct values among the sigma_{1j}(h) mod p.
int r_eff(std::span<const long long> h, std::uint64_t p, int r);

/// 1 iff sigma_ij(h) == 0 mod p for every i<j in a common block of G.
bool delta_G(std::span<const long long> h, std::uint64_t p, const SetPartition& G);

/// 2^{r - r_eff(h)}.
long long Delta(std::span<const long long> h, std::uint64_t p, int r);

}  // namespace qrs

#endif
