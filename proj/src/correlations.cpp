#include "qrstats/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrs {

namespace {

void require_walls(const ConvexRegion& c, int r) {
  auto wc = wall_check(c, r);
  if (!wc.pass) {
    std::string msg = "region intersects walls:";
    for (auto [i, j] : wc.violations) msg += " sigma_" + std::to_string(i) + std::to_string(j);
    throw std::invalid_argument(msg);
  }
}

CorrelationResult make_result(const SquareFreeModulus& m, int r, const ConvexRegion& c,
                              std::string method, Rational value) {
  CorrelationResult res;
  res.q = m.q;
  res.r = r;
  res.region = c.to_string();
  res.method = std::move(method);
  res.value = std::move(value);
  res.volume = c.volume();
  res.deviation = res.value - res.volume;
  return res;
}

}  // namespace

CorrelationResult correlation_definition(const SquareFreeModulus& m, int r, const ConvexRegion& c,
                                         std::uint64_t budget) {
  if (m.even()) throw std::invalid_argument("correlation_definition: q is even; apply reduce_even first");
  require_walls(c, r);
  const Rational s = m.mean_spacing();
  PartitionTuple trivial{r, {}};
  Int total = 0;
  for (const auto& h : lattice_points(c, s, trivial, budget)) {
    total += count_composite(h, m, r);
  }
  return make_result(m, r, c, "definition", Rational(total, m.n_residues));
}

CorrelationResult correlation_formula(const SquareFreeModulus& m, int r, const ConvexRegion& c,
                                      bool prune, std::uint64_t budget) {
  if (m.even()) throw std::invalid_argument("correlation_formula: q is even; apply reduce_even first");
  if (m.omega() > 12) throw std::invalid_argument("correlation_formula: omega(q) > 12 is infeasible");
  require_walls(c, r);
  const Rational s = m.mean_spacing();
  const auto& poset = PartitionPoset::get(r);
  const std::size_t n_parts = poset.size();
  const std::size_t trivial_idx = poset.minimal();
  const int w = m.omega();

  Rational acc = 0;
  // Outer: c runs over divisors as subsets of the prime list.
  for (std::uint32_t mask = 0; mask < (1u << w); ++mask) {
    std::vector<std::uint64_t> c_primes, rest;
    Int c_val = 1;
    for (int i = 0; i < w; ++i) {
      if (mask & (1u << i)) {
        c_primes.push_back(m.primes[i]);
        c_val *= m.primes[i];
      } else {
        rest.push_back(m.primes[i]);
      }
    }

    // Inner: one set partition per prime of q/c (trivial allowed; the
    // nontrivial ones form supp(G)).
    Rational c_sum = 0;
    std::vector<std::size_t> choice(rest.size(), 0);
    for (;;) {
      PartitionTuple g{r, {}};
      for (std::size_t k = 0; k < rest.size(); ++k) {
        if (choice[k] != trivial_idx) g.assignments.emplace_back(rest[k], choice[k]);
      }
      bool skipped = prune && avoid_walls_prune(g, c, s);
      if (!skipped) {
        Int h_sum = 0;
        for (const auto& h : lattice_points(c, s, g, budget)) {
          h_sum += a_composite(h, c_primes, r) * delta_composite(h, c_primes, r);
        }
        c_sum += Rational(g.lambda() * h_sum);
      }

      std::size_t k = 0;
      for (; k < rest.size(); ++k) {
        if (++choice[k] < n_parts) break;
        choice[k] = 0;
      }
      if (k == rest.size()) break;  // rest empty: single pass with the empty tuple
    }
    acc += c_sum / Rational(c_val);
  }

  Rational value = s / Rational(int_pow(Int(2), static_cast<unsigned>(r * w))) * acc;
  return make_result(m, r, c, "formula", std::move(value));
}

CorrelationResult correlation_circle(const ResidueSet& set, int r, const ConvexRegion& c) {
  const std::uint64_t q = set.modulus.q;
  const auto& pts = set.residues;
  const long long n = static_cast<long long>(pts.size());
  if (n == 0) throw std::invalid_argument("empty residue set");
  const Rational s = Rational(Int(q), Int(n));  // q / N

  // Signed distances live in [-(q-1)/2, q/2]; demand the dilated region
  // fits strictly inside so the semicircle convention is unambiguous.
  const long long half = static_cast<long long>((q - 1) / 2);
  std::vector<std::pair<long long, long long>> range(c.dim);
  for (int i = 0; i < c.dim; ++i) {
    auto [lo, hi] = c.coord_range(i, s);
    if (hi >= lo && (lo < -half || hi > half)) {
      throw std::invalid_argument("region too large for the semicircle convention at q=" + std::to_string(q));
    }
    range[i] = {lo.convert_to<long long>(), hi.convert_to<long long>()};
  }

  // For each tuple prefix ending at value x, the next point y must have
  // x - y = h (mod q) for some h in [lo_i, hi_i]; that is a circular
  // interval of residues, located by binary search.
  std::uint64_t count = 0;
  std::vector<long long> h(c.dim);

  auto scan_interval = [&](long long a, long long b, auto&& fn) {
    // visit set points with value in [a, b] mod q
    if (b - a + 1 >= static_cast<long long>(q)) {
      for (long long t = 0; t < n; ++t) fn(t);
      return;
    }
    auto visit_plain = [&](std::uint64_t u, std::uint64_t v) {  // [u, v] within [0,q)
      auto it0 = std::lower_bound(pts.begin(), pts.end(), u);
      auto it1 = std::upper_bound(pts.begin(), pts.end(), v);
      for (auto it = it0; it != it1; ++it) fn(it - pts.begin());
    };
    long long qa = ((a % (long long)q) + (long long)q) % (long long)q;
    long long qb = ((b % (long long)q) + (long long)q) % (long long)q;
    if (qa <= qb) {
      visit_plain(qa, qb);
    } else {
      visit_plain(qa, q - 1);
      visit_plain(0, qb);
    }
  };

  auto rec = [&](auto&& self, int depth, long long x_cur) -> void {
    if (depth == c.dim) {
      if (c.contains_dilated(h, s)) ++count;
      return;
    }
    auto [lo, hi] = range[depth];
    if (hi < lo) return;
    // y in [x - hi, x - lo] mod q
    scan_interval(x_cur - hi, x_cur - lo, [&](long long idx) {
      long long y = static_cast<long long>(pts[idx]);
      long long d = ((x_cur - y) % (long long)q + (long long)q) % (long long)q;
      if (d > half) d -= static_cast<long long>(q);
      h[depth] = d;
      self(self, depth + 1, y);
    });
  };
  for (long long i = 0; i < n; ++i) rec(rec, 0, static_cast<long long>(pts[i]));

  return make_result(set.modulus, r, c, "circle", Rational(Int(count), Int(n)));
}

Rational main_term(const SquareFreeModulus& m, int r, const ConvexRegion& c) {
  if (m.even()) throw std::invalid_argument("main_term: q is even; apply reduce_even first");
  if (m.omega() > 12 || r > 4) throw std::invalid_argument("main_term: need omega <= 12 and r <= 4");
  const auto& poset = PartitionPoset::get(r);
  const int w = m.omega();

  // A(p) = sum_G lambda(G) / disc(G);  T(p) = (p+1)^r - p^r A(p).
  std::vector<Rational> A(w), T(w);
  for (int i = 0; i < w; ++i) {
    const Int p(m.primes[i]);
    Rational a = 0;
    for (std::size_t g = 0; g < poset.size(); ++g) {
      a += Rational(Int(poset.lambda(g)), int_pow(p, poset.partitions()[g].codim()));
    }
    A[i] = a;
    T[i] = Rational(int_pow(p + 1, static_cast<unsigned>(r))) -
           Rational(int_pow(p, static_cast<unsigned>(r))) * a;
  }

  Rational conv = 0;
  for (std::uint32_t mask = 0; mask < (1u << w); ++mask) {
    Rational term = 1;
    Int c_val = 1;
    for (int i = 0; i < w; ++i) {
      if (mask & (1u << i)) {
        term *= T[i];
        c_val *= m.primes[i];
      } else {
        term *= A[i];
      }
    }
    conv += term / Rational(int_pow(c_val, static_cast<unsigned>(r)));
  }

  const Rational s = m.mean_spacing();
  return c.volume() * rat_pow(s, static_cast<unsigned>(r)) /
         Rational(int_pow(Int(2), static_cast<unsigned>(r * w))) * conv;
}

std::vector<SweepRow> pair_correlation_sweep(const std::vector<std::uint64_t>& qs,
                                             const ConvexRegion& interval, std::uint64_t budget) {
  if (interval.dim != 1) throw std::invalid_argument("sweep: interval must be one-dimensional");
  std::vector<SweepRow> out;
  for (std::uint64_t q : qs) {
    SquareFreeModulus m = make_modulus(q);
    SquareFreeModulus odd = m.even() ? reduce_even(m).odd : m;
    auto res = correlation_definition(odd, 2, interval, budget);
    SweepRow row;
    row.q = q;
    row.omega = m.omega();
    row.s = rat_double(m.mean_spacing());
    row.r2 = res.value;
    row.deviation = std::abs(rat_double(res.deviation));
    row.dev_times_sqrt_s = row.deviation * std::sqrt(row.s);
    row.dev_times_s = row.deviation * row.s;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qrs
