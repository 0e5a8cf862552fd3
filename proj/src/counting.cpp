#include "qrstats/counting.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qrs {

namespace {

long long mod_ll(long long v, std::uint64_t p) {
  long long m = static_cast<long long>(p);
  long long out = v % m;
  return out < 0 ? out + m : out;
}

}  // namespace

const QrTable& qr_table(std::uint64_t p) {
  static std::mutex mu;
  static std::map<std::uint64_t, QrTable> cache;
  if ((p & 1) == 0 || !is_prime(p)) throw std::invalid_argument("qr_table: p must be an odd prime");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  QrTable t;
  t.p = p;
  t.is_square.assign(p, 0);
  for (std::uint64_t x = 0; x <= p / 2; ++x) {
    std::uint64_t sq = static_cast<std::uint64_t>((unsigned __int128)x * x % p);
    if (!t.is_square[sq]) {
      t.is_square[sq] = 1;
      t.squares.push_back(static_cast<std::uint32_t>(sq));
    }
  }
  std::sort(t.squares.begin(), t.squares.end());
  return cache.emplace(p, std::move(t)).first->second;
}

PrimeCountRecord count_prime(std::span<const long long> h, std::uint64_t p, int r) {
  if ((p & 1) == 0) throw std::invalid_argument("count_prime: p must be odd");
  const QrTable& t = qr_table(p);
  auto b = sigma_prefix(h, r);
  std::vector<std::uint64_t> bm(r);
  for (int j = 0; j < r; ++j) bm[j] = static_cast<std::uint64_t>(mod_ll(b[j], p));

  std::uint64_t n = 0;
  for (std::uint32_t y : t.squares) {
    bool ok = true;
    for (int j = 1; j < r; ++j) {
      // y_j = y_1 - sigma_{1j}(h) must be a square mod p.
      std::uint64_t yj = (y + p - bm[j] % p) % p;
      if (!t.is_square[yj]) {
        ok = false;
        break;
      }
    }
    if (ok) ++n;
  }

  PrimeCountRecord rec;
  rec.p = p;
  rec.r = r;
  rec.n_solutions = n;
  rec.r_eff = r_eff(h, p, r);
  rec.a = static_cast<long long>((1ull << rec.r_eff) * n) - static_cast<long long>(p);
  return rec;
}

Int count_composite(std::span<const long long> h, const SquareFreeModulus& m, int r) {
  if (m.even()) throw std::invalid_argument("count_composite: q is even; apply reduce_even first");
  Int out = 1;
  for (std::uint64_t p : m.primes) out *= count_prime(h, p, r).n_solutions;
  return out;
}

Int a_composite(std::span<const long long> h, std::span<const std::uint64_t> c_primes, int r) {
  Int out = 1;
  for (std::uint64_t p : c_primes) out *= count_prime(h, p, r).a;
  return out;
}

Int delta_composite(std::span<const long long> h, std::span<const std::uint64_t> c_primes, int r) {
  Int out = 1;
  for (std::uint64_t p : c_primes) out *= Delta(h, p, r);
  return out;
}

SumIdentityResult verify_sum_identity(std::uint64_t p, int r) {
  if (r < 2 || r > 4) throw std::invalid_argument("verify_sum_identity: need 2 <= r <= 4");
  SumIdentityResult res;
  res.direct = 0;

  std::vector<long long> h(r - 1, 0);
  // Odometer over (Z/pZ)^{r-1}.
  for (;;) {
    auto rec = count_prime(h, p, r);
    res.direct += Int(rec.a) * Delta(h, p, r);
    int i = 0;
    for (; i < r - 1; ++i) {
      if (++h[i] < static_cast<long long>(p)) break;
      h[i] = 0;
    }
    if (i == r - 1) break;
  }

  const auto& poset = PartitionPoset::get(r);
  Rational lam_sum = 0;
  for (std::size_t g = 0; g < poset.size(); ++g) {
    lam_sum += Rational(Int(poset.lambda(g)), int_pow(Int(p), poset.partitions()[g].codim()));
  }
  res.closed = Rational(int_pow(Int(p) + 1, r)) - Rational(int_pow(Int(p), r)) * lam_sum;
  res.pass = (Rational(res.direct) == res.closed);
  return res;
}

}  // namespace qrs
