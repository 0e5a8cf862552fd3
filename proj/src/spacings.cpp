#include "qrstats/spacings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qrs {

namespace {

Int binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Int out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= (n - k + i);
    out /= i;
  }
  return out;
}

/// Largest integer distance d (in units of 1/den) with d/den < x
/// (strict) or d/den <= x (weak).
std::uint64_t distance_bound(const Rational& x, std::uint64_t den, bool strict) {
  Rational xd = x * den;
  Int b = strict ? rat_ceil(xd) - 1 : rat_floor(xd);
  if (b < 0) return 0;  // callers treat the bound as inclusive; 0 allows nothing (points distinct)
  return b.convert_to<std::uint64_t>();
}

/// fwd[t] = number of points strictly ahead of point t (cyclically)
/// within integer distance bound (inclusive). Bound must be < den/2.
std::vector<std::uint64_t> forward_counts(const CirclePointSet& s, std::uint64_t bound) {
  const std::size_t n = s.size();
  std::vector<std::uint64_t> pos(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = s.nums[i];
    pos[i + n] = s.nums[i] + s.den;
  }
  std::vector<std::uint64_t> fwd(n, 0);
  std::size_t e = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (e < t + 1) e = t + 1;
    while (e < t + n && pos[e] - pos[t] <= bound) ++e;
    fwd[t] = e - t - 1;
  }
  return fwd;
}

std::vector<std::uint64_t> backward_counts(const CirclePointSet& s, std::uint64_t bound) {
  const std::size_t n = s.size();
  std::vector<std::uint64_t> pos(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = s.nums[i];
    pos[i + n] = s.nums[i] + s.den;
  }
  std::vector<std::uint64_t> bwd(n, 0);
  std::size_t b = 1;
  for (std::size_t t = n; t < 2 * n; ++t) {
    if (b < t - n + 1) b = t - n + 1;  // at most n-1 points behind
    while (b < t && pos[t] - pos[b] > bound) ++b;
    bwd[t - n] = t - b;
  }
  return bwd;
}

void require_half(const Rational& x) {
  if (!(x < Rational(1, 2))) throw std::invalid_argument("threshold must be < 1/2");
}

}  // namespace

CirclePointSet CirclePointSet::from_residues(const ResidueSet& rs) {
  CirclePointSet out;
  out.den = rs.modulus.q;
  out.nums = rs.residues;
  out.validate();
  return out;
}

void CirclePointSet::validate() const {
  if (den == 0) throw std::invalid_argument("den must be positive");
  for (std::size_t i = 0; i < nums.size(); ++i) {
    if (nums[i] >= den) throw std::invalid_argument("point out of [0,1)");
    if (i && nums[i] <= nums[i - 1]) throw std::invalid_argument("points must be strictly sorted");
  }
}

GapList gaps(const CirclePointSet& s) {
  const std::size_t n = s.size();
  if (n < 2) throw std::invalid_argument("gaps: need at least 2 points");
  GapList out;
  out.raw.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) out.raw.push_back(s.nums[i + 1] - s.nums[i]);
  out.raw.push_back(s.den - s.nums.back() + s.nums.front());
  out.normalized.reserve(n);
  for (std::uint64_t g : out.raw) out.normalized.emplace_back(Int(g) * Int(n), Int(s.den));
  return out;
}

std::vector<Int> nk_counts(const CirclePointSet& s, const Rational& x, int k_max) {
  require_half(x);
  if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
  auto fwd = forward_counts(s, distance_bound(x, s.den, /*strict=*/true));
  std::vector<Int> out(k_max - 1, Int(0));
  for (std::uint64_t m : fwd) {
    for (int k = 2; k <= k_max; ++k) out[k - 2] += binom(m, k - 1);
  }
  return out;
}

SandwichResult sandwich_g(const CirclePointSet& s, const Rational& x, int truncation) {
  require_half(x);
  const std::uint64_t bound = distance_bound(x, s.den, /*strict=*/true);
  auto fwd = forward_counts(s, bound);
  const std::uint64_t m_max = fwd.empty() ? 0 : *std::max_element(fwd.begin(), fwd.end());

  SandwichResult res;
  res.exact = 0;
  for (std::uint64_t g : gaps(s).raw) {
    if (g <= bound) ++res.exact;
  }

  const int k_top = static_cast<int>(m_max) + 1;  // N_k = 0 beyond
  std::vector<Int> nk(std::max(k_top, 2 * truncation + 2) + 1, Int(0));
  for (std::uint64_t m : fwd) {
    for (int k = 2; k <= k_top; ++k) nk[k] += binom(m, k - 1);
  }

  auto partial = [&](int K) {
    Int acc = 0;
    for (int k = 2; k <= K && k < static_cast<int>(nk.size()); ++k) {
      acc += (k % 2 == 0) ? nk[k] : -nk[k];
    }
    return acc;
  };

  res.alternating = partial(k_top);
  res.identity_holds = (res.alternating == res.exact);
  res.brackets_hold = true;
  for (int n = 1; n <= truncation; ++n) {
    Int lower = partial(2 * n + 1), upper = partial(2 * n);
    res.brackets_hold = res.brackets_hold && lower <= res.exact && res.exact <= upper;
    res.brackets.emplace_back(std::move(lower), std::move(upper));
  }
  return res;
}

Int nij_count(const CirclePointSet& s, const Rational& x, const Rational& y, int i, int j) {
  if (i < 2 || j < 1) throw std::invalid_argument("nij_count: need i >= 2, j >= 1");
  if (!(x + y < Rational(1, 2))) throw std::invalid_argument("nij_count: need x + y < 1/2");
  auto fwd = forward_counts(s, distance_bound(x, s.den, /*strict=*/false));
  auto bwd = backward_counts(s, distance_bound(y, s.den, /*strict=*/false));
  Int out = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    out += binom(fwd[t], i - 1) * binom(bwd[t], j);
  }
  return out;
}

JointSandwichResult joint_sandwich_g(const CirclePointSet& s, const Rational& x, const Rational& y,
                                     int truncation) {
  if (!(x + y < Rational(1, 2))) throw std::invalid_argument("joint_sandwich_g: need x + y < 1/2");
  const std::size_t n = s.size();
  if (n < 3) throw std::invalid_argument("joint_sandwich_g: need at least 3 points");
  const std::uint64_t bx = distance_bound(x, s.den, /*strict=*/false);
  const std::uint64_t by = distance_bound(y, s.den, /*strict=*/false);
  auto fwd = forward_counts(s, bx);
  auto bwd = backward_counts(s, by);

  JointSandwichResult res;

  // Consecutive triple anchored at its middle point t: the later gap is
  // the x-span, the earlier gap the y-span.
  auto raw = gaps(s).raw;
  res.exact = 0;
  for (std::size_t t = 0; t < n; ++t) {
    std::uint64_t gap_before = raw[(t + n - 1) % n];
    std::uint64_t gap_after = raw[t];
    if (gap_after <= bx && gap_before <= by) ++res.exact;
  }

  std::uint64_t fmax = *std::max_element(fwd.begin(), fwd.end());
  std::uint64_t bmax = *std::max_element(bwd.begin(), bwd.end());
  const int k_top = static_cast<int>(fmax + bmax) + 3;

  std::vector<Int> ak(std::max<int>(k_top, 3 + 2 * truncation + 1) + 1, Int(0));
  for (int k = 3; k <= k_top; ++k) {
    for (int i = 2; i <= k - 1; ++i) {
      const int j = k - i;
      for (std::size_t t = 0; t < n; ++t) ak[k] += binom(fwd[t], i - 1) * binom(bwd[t], j);
    }
  }

  auto partial = [&](int K) {
    Int acc = 0;
    for (int k = 3; k <= K && k < static_cast<int>(ak.size()); ++k) {
      acc += (k % 2 == 1) ? ak[k] : -ak[k];
    }
    return acc;
  };

  res.alternating = partial(k_top);
  res.identity_holds = (res.alternating == res.exact);
  res.brackets_hold = true;
  for (int m = 1; m <= truncation; ++m) {
    Int lower = partial(3 + 2 * m - 1), upper = partial(3 + 2 * m - 2);
    res.brackets_hold = res.brackets_hold && lower <= res.exact && res.exact <= upper;
    res.brackets.emplace_back(std::move(lower), std::move(upper));
  }
  return res;
}

SpacingReport exponential_fit(const CirclePointSet& s) {
  SpacingReport rep;
  rep.n_points = s.size();
  rep.small_sample = s.size() < 100;

  auto gl = gaps(s);
  const std::size_t n = gl.raw.size();
  const double scale = static_cast<double>(n) / static_cast<double>(s.den);
  std::vector<double> norm(n);
  double mean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    norm[i] = static_cast<double>(gl.raw[i]) * scale;
    mean += norm[i];
  }
  rep.mean_normalized_gap = mean / static_cast<double>(n);

  // Exact sup for a step CDF against a continuous target: check both
  // sides of every jump.
  std::vector<double> sorted(norm);
  std::sort(sorted.begin(), sorted.end());
  double ks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 1.0 - std::exp(-sorted[i]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
  }
  rep.ks_exponential = ks;

  // Joint CDF of consecutive gap pairs (circular) on a 20x20 grid of
  // exponential quantiles.
  constexpr int kGrid = 20;
  std::vector<double> grid(kGrid);
  for (int a = 0; a < kGrid; ++a) grid[a] = -std::log(1.0 - (a + 1) / 21.0);

  std::vector<std::pair<double, double>> pairs(n);
  for (std::size_t i = 0; i < n; ++i) pairs[i] = {norm[i], norm[(i + 1) % n]};
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::uint64_t> cnt(kGrid, 0);  // cnt[b]: included pairs with second <= grid[b]
  std::size_t ptr = 0;
  double joint = 0;
  for (int a = 0; a < kGrid; ++a) {
    while (ptr < n && pairs[ptr].first <= grid[a]) {
      const double second = pairs[ptr].second;
      int b0 = static_cast<int>(std::lower_bound(grid.begin(), grid.end(), second) - grid.begin());
      for (int b = b0; b < kGrid; ++b) ++cnt[b];
      ++ptr;
    }
    const double fx = 1.0 - std::exp(-grid[a]);
    for (int b = 0; b < kGrid; ++b) {
      double emp = static_cast<double>(cnt[b]) / static_cast<double>(n);
      double target = fx * (1.0 - std::exp(-grid[b]));
      joint = std::max(joint, std::abs(emp - target));
    }
  }
  rep.joint_ks = joint;
  return rep;
}

std::vector<DavenportRow> davenport_histogram(std::uint64_t p, std::uint64_t sieve_limit) {
  if (p < 3 || (p & 1) == 0 || !is_prime(p)) {
    throw std::invalid_argument("davenport_histogram: p must be an odd prime");
  }
  auto rs = enumerate_squares(make_modulus(p), sieve_limit);
  auto gl = gaps(CirclePointSet::from_residues(rs));
  std::map<std::uint64_t, std::uint64_t> hist;
  for (std::uint64_t g : gl.raw) ++hist[g];
  const double total = static_cast<double>(gl.raw.size());
  std::vector<DavenportRow> out;
  for (auto [g, c] : hist) {
    DavenportRow row;
    row.gap = g;
    row.count = c;
    row.proportion = static_cast<double>(c) / total;
    row.expected = std::pow(2.0, -static_cast<double>(g));
    row.abs_dev = std::abs(row.proportion - row.expected);
    out.push_back(row);
  }
  return out;
}

}  // namespace qrs
