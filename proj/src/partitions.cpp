#include "qrstats/partitions.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qrs {

int SetPartition::num_blocks() const {
  int mx = -1;
  for (int b : rgs) mx = std::max(mx, b);
  return mx + 1;
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(num_blocks());
  for (int i = 0; i < r; ++i) out[rgs[i]].push_back(i + 1);
  return out;
}

std::string SetPartition::to_string() const {
  std::string out;
  for (const auto& blk : blocks()) {
    out += '{';
    for (std::size_t i = 0; i < blk.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(blk[i]);
    }
    out += '}';
  }
  return out;
}

std::vector<SetPartition> enumerate_partitions(int r) {
  if (r < 2 || r > 6) throw std::invalid_argument("enumerate_partitions: need 2 <= r <= 6");
  std::vector<SetPartition> out;
  std::vector<int> rgs(r, 0);
  // Enumerate restricted-growth strings: rgs[0]=0, rgs[i] <= max(prefix)+1.
  auto rec = [&](auto&& self, int i, int mx) -> void {
    if (i == r) {
      out.push_back(SetPartition{r, rgs});
      return;
    }
    for (int b = 0; b <= mx + 1; ++b) {
      rgs[i] = b;
      self(self, i + 1, std::max(mx, b));
    }
  };
  rec(rec, 1, 0);
  return out;
}

bool refines(const SetPartition& F, const SetPartition& G) {
  if (F.r != G.r) throw std::invalid_argument("refines: mismatched r");
  for (int i = 0; i < F.r; ++i) {
    for (int j = i + 1; j < F.r; ++j) {
      if (F.rgs[i] == F.rgs[j] && G.rgs[i] != G.rgs[j]) return false;
    }
  }
  return true;
}

PartitionPoset::PartitionPoset(int r) : r_(r), parts_(enumerate_partitions(r)) {
  const std::size_t n = parts_.size();
  leq_.assign(n, std::vector<char>(n, 0));
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t g = 0; g < n; ++g) leq_[f][g] = refines(parts_[f], parts_[g]);
  }

  // mu(F,F) = 1; mu(F,G) = -sum_{F <= K < G} mu(F,K). Processing G in
  // increasing block-count order is not needed: the RGS enumeration is
  // not linear in refinement, so recurse with memoization instead.
  mobius_.assign(n, std::vector<long long>(n, 0));
  std::vector<std::vector<char>> done(n, std::vector<char>(n, 0));
  auto mu = [&](auto&& self, std::size_t f, std::size_t g) -> long long {
    if (!leq_[f][g]) return 0;
    if (done[f][g]) return mobius_[f][g];
    long long v;
    if (f == g) {
      v = 1;
    } else {
      v = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != g && leq_[f][k] && leq_[k][g]) v -= self(self, f, k);
      }
    }
    done[f][g] = 1;
    mobius_[f][g] = v;
    return v;
  };
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t g = 0; g < n; ++g) mu(mu, f, g);
  }

  lambda_.assign(n, 0);
  for (std::size_t g = 0; g < n; ++g) {
    long long acc = 0;
    for (std::size_t f = 0; f < n; ++f) {
      if (leq_[f][g]) acc += mobius_[f][g] * (1ll << parts_[f].codim());
    }
    lambda_[g] = acc;
  }
}

const PartitionPoset& PartitionPoset::get(int r) {
  static std::mutex mu;
  static std::map<int, PartitionPoset> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(r);
  if (it == cache.end()) it = cache.emplace(r, PartitionPoset(r)).first;
  return it->second;
}

std::size_t PartitionPoset::index_of(const SetPartition& p) const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] == p) return i;
  }
  throw std::invalid_argument("partition not in poset");
}

std::size_t PartitionPoset::minimal() const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].trivial()) return i;
  }
  throw std::logic_error("poset without minimal element");
}

std::size_t PartitionPoset::maximal() const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].maximal()) return i;
  }
  throw std::logic_error("poset without maximal element");
}

std::vector<long long> sigma_prefix(std::span<const long long> h, int r) {
  if (static_cast<int>(h.size()) != r - 1) throw std::invalid_argument("h must have length r-1");
  std::vector<long long> b(r, 0);
  for (int j = 1; j < r; ++j) b[j] = b[j - 1] + h[j - 1];
  return b;
}

namespace {
long long mod_ll(long long v, std::uint64_t p) {
  long long m = static_cast<long long>(p);
  long long out = v % m;
  return out < 0 ? out + m : out;
}
}  // namespace

int r_eff(std::span<const long long> h, std::uint64_t p, int r) {
  auto b = sigma_prefix(h, r);
  for (auto& v : b) v = mod_ll(v, p);
  std::sort(b.begin(), b.end());
  return static_cast<int>(std::unique(b.begin(), b.end()) - b.begin());
}

bool delta_G(std::span<const long long> h, std::uint64_t p, const SetPartition& G) {
  auto b = sigma_prefix(h, G.r);
  for (int i = 0; i < G.r; ++i) {
    for (int j = i + 1; j < G.r; ++j) {
      if (G.rgs[i] == G.rgs[j] && mod_ll(b[j] - b[i], p) != 0) return false;
    }
  }
  return true;
}

long long Delta(std::span<const long long> h, std::uint64_t p, int r) {
  return 1ll << (r - r_eff(h, p, r));
}

}  // namespace qrs
