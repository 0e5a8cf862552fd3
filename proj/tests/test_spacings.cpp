#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrstats/spacings.hpp"

#include <cmath>
#include <random>

using namespace qrs;

namespace {

Rational circ_dist(const CirclePointSet& s, std::size_t from, std::size_t to) {
  long long d = static_cast<long long>(s.nums[to]) - static_cast<long long>(s.nums[from]);
  if (d < 0) d += static_cast<long long>(s.den);
  return Rational(Int(d), Int(s.den));
}

Int binom(std::uint64_t n, int k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
  Int out = 1;
  for (int i = 0; i < k; ++i) out = out * Int(n - i) / Int(i + 1);
  return out;
}

// Direct-scan oracle for N_k: for each anchor a, count points strictly
// inside (a, a + x), then choose k - 1 of them.
Int nk_oracle(const CirclePointSet& s, const Rational& x, int k) {
  Int total = 0;
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < n; ++a) {
    std::uint64_t m = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      Rational d = circ_dist(s, a, b);
      if (d > 0 && d < x) ++m;
    }
    total += binom(m, k - 1);
  }
  return total;
}

// Direct-scan oracle for N_{i,j}: junction point b, i - 1 points ahead
// within x (inclusive), j points behind within y (inclusive).
Int nij_oracle(const CirclePointSet& s, const Rational& x, const Rational& y, int i, int j) {
  Int total = 0;
  const std::size_t n = s.size();
  for (std::size_t b = 0; b < n; ++b) {
    std::uint64_t fwd = 0, bwd = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == b) continue;
      Rational df = circ_dist(s, b, c);
      if (df > 0 && df <= x) ++fwd;
      Rational db = circ_dist(s, c, b);
      if (db > 0 && db <= y) ++bwd;
    }
    total += binom(fwd, i - 1) * binom(bwd, j);
  }
  return total;
}

CirclePointSet random_set(std::mt19937_64& rng, std::size_t n, std::uint64_t den) {
  std::vector<std::uint64_t> nums;
  while (nums.size() < n) nums.push_back(rng() % den);
  std::sort(nums.begin(), nums.end());
  nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
  return CirclePointSet{den, nums};
}

}  // namespace

TEST_CASE("gap list of the squares mod 15") {
  auto s = CirclePointSet::from_residues(enumerate_squares(make_modulus(15)));
  CHECK(s.den == 15);
  CHECK(s.nums == std::vector<std::uint64_t>{0, 1, 4, 6, 9, 10});
  auto gl = gaps(s);
  CHECK(gl.raw == std::vector<std::uint64_t>{1, 3, 2, 3, 1, 5});
  CHECK(gl.normalized == std::vector<Rational>{Rational(2, 5), Rational(6, 5), Rational(4, 5),
                                               Rational(6, 5), Rational(2, 5), Rational(2)});
  Rational mean = 0;
  for (const auto& g : gl.normalized) mean += g;
  CHECK(mean == Rational(6));  // exact mean 1
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(CirclePointSet({10, {3, 1}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(CirclePointSet({10, {1, 1}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(CirclePointSet({10, {1, 10}}).validate(), std::invalid_argument);
}

TEST_CASE("tuple counts match the direct scan") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    auto s = random_set(rng, 8 + rng() % 20, 1024);
    if (s.size() < 5) continue;
    Rational x(Int(1 + rng() % 200), Int(1024));
    auto nk = nk_counts(s, x, 5);
    for (int k = 2; k <= 5; ++k) {
      REQUIRE(nk[k - 2] == nk_oracle(s, x, k));
    }
    Rational y(Int(1 + rng() % 200), Int(1024));
    if (x + y < Rational(1, 2)) {
      for (int i = 2; i <= 3; ++i) {
        for (int j = 1; j <= 2; ++j) {
          REQUIRE(nij_count(s, x, y, i, j) == nij_oracle(s, x, y, i, j));
        }
      }
    }
  }
}

TEST_CASE("sandwich identity for nearest-neighbor gaps") {
  auto s = CirclePointSet::from_residues(enumerate_squares(make_modulus(15)));
  // x = 1/5: raw gaps <= 2 are 1, 2, 1
  auto res = sandwich_g(s, Rational(1, 5), 2);
  CHECK(res.exact == 3);
  CHECK(res.identity_holds);
  CHECK(res.brackets_hold);
  for (const auto& [lo, hi] : res.brackets) {
    CHECK(lo <= res.exact);
    CHECK(res.exact <= hi);
  }

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto rs = random_set(rng, 20 + rng() % 180, 1ull << 32);
    Rational x(Int(1 + rng() % 4), Int(rs.size()));
    auto r = sandwich_g(rs, x, 3);
    REQUIRE(r.identity_holds);
    REQUIRE(r.brackets_hold);
  }
}

TEST_CASE("joint sandwich identity") {
  // 4 points, x = 0.15, y = 0.2: exactly one consecutive triple fits
  CirclePointSet s{100, {0, 10, 25, 60}};
  auto res = joint_sandwich_g(s, Rational(3, 20), Rational(1, 5), 2);
  CHECK(res.exact == 1);
  CHECK(res.alternating == 1);
  CHECK(res.identity_holds);
  CHECK(res.brackets_hold);

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    auto rs = random_set(rng, 20 + rng() % 180, 1ull << 32);
    if (rs.size() < 3) continue;
    Rational x(Int(1 + rng() % 3), Int(rs.size()));
    Rational y(Int(1 + rng() % 3), Int(rs.size()));
    if (x + y >= Rational(1, 2)) continue;
    auto r = joint_sandwich_g(rs, x, y, 3);
    REQUIRE(r.identity_holds);
    REQUIRE(r.brackets_hold);
  }
}

TEST_CASE("exponential fit diagnostics") {
  // equally spaced points: every normalized gap is 1, so the KS
  // statistic is the left-limit discrepancy 1 - e^{-1}
  CirclePointSet even{100, {0, 10, 20, 30, 40, 50, 60, 70, 80, 90}};
  auto rep = exponential_fit(even);
  CHECK(rep.n_points == 10);
  CHECK(rep.mean_normalized_gap == doctest::Approx(1.0));
  CHECK(rep.ks_exponential == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(rep.small_sample);
  CHECK(rep.joint_ks >= 0);
  CHECK(rep.joint_ks <= 1);

  // actual exponential-ish sample should beat the degenerate one
  std::mt19937_64 rng(41);
  auto rs = random_set(rng, 5000, 1ull << 40);
  auto rep2 = exponential_fit(rs);
  CHECK_FALSE(rep2.small_sample);
  CHECK(rep2.ks_exponential < 0.05);  // uniform points have exponential gaps
  CHECK(rep2.joint_ks < 0.05);
}

TEST_CASE("integer gap histogram for a prime") {
  auto rows = davenport_histogram(10007);
  REQUIRE(!rows.empty());
  CHECK(rows[0].gap == 1);
  std::uint64_t total = 0;
  double psum = 0;
  for (const auto& r : rows) {
    total += r.count;
    psum += r.proportion;
    CHECK(r.abs_dev == doctest::Approx(std::abs(r.proportion - r.expected)));
  }
  CHECK(total == 5004);  // N_p = (p+1)/2
  CHECK(psum == doctest::Approx(1.0));
  for (const auto& r : rows) {
    if (r.gap <= 3) CHECK(r.abs_dev < 0.05);
  }
}
