#include "qrstats/arith.hpp"

#include "qrstats/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qrs {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 out = 1;
  a %= m;
  while (e) {
    if (e & 1) out = mulmod(out, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return out;
}

bool miller_rabin(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

u64 pollard_rho(u64 n) {
  if ((n & 1) == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin base set for 64-bit inputs.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

std::vector<u64> factorize(u64 q) {
  if (q == 0) throw std::invalid_argument("factorize: q must be positive");
  std::vector<u64> out;
  for (u64 p = 2; p <= 1000000 && p * p <= q; p += (p == 2 ? 1 : 2)) {
    while (q % p == 0) {
      out.push_back(p);
      q /= p;
    }
  }
  factor_rec(q, out);
  std::sort(out.begin(), out.end());
  return out;
}

Rational SquareFreeModulus::sigma_minus1() const {
  Rational out = 1;
  for (u64 p : primes) out *= Rational(Int(p) + 1, Int(p));
  return out;
}

SquareFreeModulus make_modulus(u64 q) {
  auto factors = factorize(q);
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    if (factors[i] == factors[i + 1]) {
      throw std::invalid_argument("q is not square-free (" + std::to_string(factors[i]) +
                                  "^2 | " + std::to_string(q) + ")");
    }
  }
  SquareFreeModulus m;
  m.q = q;
  m.primes = std::move(factors);
  Int n = 1;
  for (u64 p : m.primes) {
    if (p == 2) {
      n *= 2;
    } else {
      n *= Int(p + 1) / 2;
    }
  }
  m.n_residues = n;
  return m;
}

ResidueSet enumerate_squares(const SquareFreeModulus& m, u64 sieve_limit) {
  const u64 q = m.q;
  if (q > sieve_limit) {
    throw std::invalid_argument("q exceeds the sieve memory limit (" + std::to_string(sieve_limit) +
                                " bits); use a streaming/CRT mode");
  }
  const u64 words = (q + 63) / 64;
  std::vector<std::atomic<u64>> bits(words);
  for (auto& w : bits) w.store(0, std::memory_order_relaxed);

  // Marking bits is idempotent, so concurrent fetch_or gives the same
  // bitmap for any schedule.
  const u64 xmax = q / 2;  // x and q-x give the same square
  parallel_chunks(0, xmax + 1, 1 << 16, [&](std::size_t, u64 b, u64 e) {
    u64 sq = static_cast<u64>(u128(b) * b % q);
    for (u64 x = b; x < e; ++x) {
      bits[sq >> 6].fetch_or(1ull << (sq & 63), std::memory_order_relaxed);
      // (x+1)^2 = x^2 + 2x + 1
      u64 inc = 2 * x + 1;
      while (inc >= q) inc -= q;
      sq += inc;
      if (sq >= q) sq -= q;
    }
  });

  ResidueSet out;
  out.modulus = m;
  for (u64 w = 0; w < words; ++w) {
    u64 word = bits[w].load(std::memory_order_relaxed);
    while (word) {
      int b = std::countr_zero(word);
      out.residues.push_back(w * 64 + static_cast<u64>(b));
      word &= word - 1;
    }
  }
  if (Int(out.residues.size()) != m.n_residues) {
    throw std::logic_error("sieve produced wrong residue count");
  }
  return out;
}

ResidueSet enumerate_squares_crt(const SquareFreeModulus& m) {
  std::vector<u64> acc{0};
  u64 mod = 1;
  for (u64 p : m.primes) {
    std::vector<u64> sq;
    for (u64 x = 0; x <= p / 2; ++x) sq.push_back(static_cast<u64>(u128(x) * x % p));
    std::sort(sq.begin(), sq.end());
    sq.erase(std::unique(sq.begin(), sq.end()), sq.end());

    // CRT lift: r mod (mod*p) with r = a mod mod, r = b mod p.
    const u64 inv = powmod(mod % p, p - 2 >= 1 ? p - 2 : 0, p);  // mod coprime to p
    std::vector<u64> next;
    next.reserve(acc.size() * sq.size());
    for (u64 a : acc) {
      for (u64 b : sq) {
        u64 t = (b + p - a % p) % p;
        u64 r = a + mod * mulmod(t, p == 2 ? 1 : inv, p);
        next.push_back(r);
      }
    }
    acc = std::move(next);
    mod *= p;
  }
  std::sort(acc.begin(), acc.end());
  ResidueSet out;
  out.modulus = m;
  out.residues = std::move(acc);
  return out;
}

EvenReduction reduce_even(const SquareFreeModulus& m) {
  if (!m.even()) throw std::invalid_argument("reduce_even: q is odd");
  EvenReduction red;
  red.odd = make_modulus(m.q / 2);
  red.spacing_even = m.mean_spacing();
  red.spacing_odd = red.odd.mean_spacing();
  red.n_residues_even = m.n_residues;
  if (red.spacing_even != red.spacing_odd || red.n_residues_even != 2 * red.odd.n_residues) {
    throw std::logic_error("even-reduction certificate failed");
  }
  return red;
}

std::vector<u64> divisors(const SquareFreeModulus& m) {
  if (m.omega() > 40) throw std::invalid_argument("omega(q) > 40: divisor lattice too large");
  std::vector<u64> out{1};
  for (u64 p : m.primes) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_small_divisors(const SquareFreeModulus& m, const Rational& alpha) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  const Rational s = m.mean_spacing();
  const Int an = rat_num(alpha);
  const unsigned ad = static_cast<unsigned>(rat_den(alpha).convert_to<std::uint64_t>());
  const Rational rhs = rat_pow(s, static_cast<unsigned>(an.convert_to<std::uint64_t>()));
  std::uint64_t count = 0;
  for (u64 d : divisors(m)) {
    // d < s^(an/ad)  <=>  d^ad < s^an  (both sides positive)
    if (Rational(int_pow(Int(d), ad)) < rhs) ++count;
  }
  return count;
}

DivisorTailSum divisor_tail_sum(const SquareFreeModulus& m, const Rational& alpha) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  const Rational s = m.mean_spacing();
  DivisorTailSum out;
  out.exact = (rat_den(alpha) == 1);
  const double alpha_d = rat_double(alpha);
  const double s_d = rat_double(s);
  double acc = 0.0;
  Rational acc_exact = 0;
  for (u64 d : divisors(m)) {
    if (Rational(Int(d)) <= s) continue;
    acc += std::pow(static_cast<double>(d), -alpha_d);
    if (out.exact) {
      acc_exact += Rational(Int(1), int_pow(Int(d), static_cast<unsigned>(rat_num(alpha).convert_to<std::uint64_t>())));
    }
  }
  out.value = out.exact ? rat_double(acc_exact) : acc;
  out.exact_value = acc_exact;
  out.ratio_to_s_pow = out.value / std::pow(s_d, -alpha_d);
  return out;
}

}  // namespace qrs
