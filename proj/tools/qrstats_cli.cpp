// Command-line surface for the quadratic-residue spacing toolkit.
// Subcommands: residues, correlate, spacings, davenport, verify, sweep,
// divisors. Exit codes: 0 success, 1 verification failure, 2 usage or
// validation error.

#include "qrstats/arith.hpp"
#include "qrstats/correlations.hpp"
#include "qrstats/counting.hpp"
#include "qrstats/lattices.hpp"
#include "qrstats/parallel.hpp"
#include "qrstats/partitions.hpp"
#include "qrstats/spacings.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace qrs;

namespace {

struct OutputOptions {
  std::string format = "json";  // csv | json | gnuplot
  std::string path;             // empty = stdout
};

void add_output_opts(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "gnuplot"}));
  cmd->add_option("--output,-o", out.path, "Output file (default stdout)");
}

void write_out(const OutputOptions& out, const std::string& text, const std::string& gp_script = "") {
  if (out.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out.path);
    if (!f) throw std::runtime_error("cannot open output file " + out.path);
    f << text;
    if (out.format == "gnuplot" && !gp_script.empty()) {
      std::ofstream gp(out.path + ".gp");
      gp << gp_script;
    }
  }
}

std::uint64_t odd_primorial(int k) {
  std::uint64_t q = 1, p = 3;
  for (int i = 0; i < k; ++i) {
    q *= p;
    do { p += 2; } while (!is_prime(p));
  }
  return q;
}

/// "105" | "primorial-odd:3" -> single modulus.
std::uint64_t parse_modulus_spec(const std::string& spec) {
  if (spec.rfind("primorial-odd:", 0) == 0) {
    return odd_primorial(std::stoi(spec.substr(14)));
  }
  return std::stoull(spec);
}

/// "primorial-odd:5..8" | "15,105,1155" -> modulus list.
std::vector<std::uint64_t> parse_moduli_list(const std::string& spec) {
  std::vector<std::uint64_t> out;
  if (spec.rfind("primorial-odd:", 0) == 0) {
    std::string rng = spec.substr(14);
    auto dots = rng.find("..");
    if (dots == std::string::npos) return {odd_primorial(std::stoi(rng))};
    int a = std::stoi(rng.substr(0, dots)), b = std::stoi(rng.substr(dots + 2));
    for (int k = a; k <= b; ++k) out.push_back(odd_primorial(k));
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::string csv_escape_none(const std::string& s) { return s; }

json correlation_json(const CorrelationResult& r, bool wall_ok, long long runtime_ms) {
  json j;
  j["schema"] = 1;
  j["q"] = r.q;
  j["r"] = r.r;
  j["region"] = r.region;
  j["method"] = r.method;
  j["value"] = rat_string(r.value);
  j["value_num"] = rat_num(r.value).str();
  j["value_den"] = rat_den(r.value).str();
  j["vol_num"] = rat_num(r.volume).str();
  j["vol_den"] = rat_den(r.volume).str();
  j["value_float"] = rat_double(r.value);
  j["deviation_float"] = rat_double(r.deviation);
  j["wall_check"] = wall_ok;
  j["runtime_ms"] = runtime_ms;
  return j;
}

int cmd_residues(const std::string& modspec, std::uint64_t budget, const OutputOptions& out) {
  auto m = make_modulus(parse_modulus_spec(modspec));
  auto rs = enumerate_squares(m, budget);
  if (out.format == "json") {
    json j;
    j["schema"] = 1;
    j["q"] = m.q;
    j["n"] = rs.residues.size();
    j["residues"] = rs.residues;
    write_out(out, j.dump() + "\n");
  } else {
    std::ostringstream os;
    os << "residue\n";
    for (auto v : rs.residues) os << v << "\n";
    write_out(out, os.str(), "set datafile separator ','\nplot '" + out.path + "' using 1 with points\n");
  }
  return 0;
}

int cmd_correlate(const std::string& modspec, int r, const std::string& region_spec,
                  const std::string& method, std::uint64_t budget, const OutputOptions& out) {
  auto m0 = make_modulus(parse_modulus_spec(modspec));
  auto region = ConvexRegion::parse(region_spec);
  auto wc = wall_check(region, r);
  if (!wc.pass) {
    std::string msg = "region touches a wall:";
    for (auto [i, j] : wc.violations) msg += " sigma_" + std::to_string(i) + std::to_string(j);
    throw std::invalid_argument(msg);
  }
  SquareFreeModulus m = m0.even() ? reduce_even(m0).odd : m0;

  std::vector<std::pair<CorrelationResult, long long>> results;
  auto timed = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto res = fn();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    results.emplace_back(std::move(res), ms);
  };
  if (method == "def" || method == "all") timed([&] { return correlation_definition(m, r, region, budget); });
  if (method == "formula" || method == "all") timed([&] { return correlation_formula(m, r, region, true, budget); });
  if (method == "circle" || method == "all") {
    timed([&] { return correlation_circle(enumerate_squares(m, budget), r, region); });
  }

  if (out.format == "json") {
    json arr = json::array();
    for (auto& [res, ms] : results) arr.push_back(correlation_json(res, true, ms));
    write_out(out, (results.size() == 1 ? arr[0].dump() : arr.dump()) + "\n");
  } else {
    std::ostringstream os;
    os << "q,r,region,method,value,value_float,vol,deviation_float,runtime_ms\n";
    for (auto& [res, ms] : results) {
      os << res.q << ',' << res.r << ',' << csv_escape_none(res.region) << ',' << res.method << ','
         << rat_string(res.value) << ',' << rat_double(res.value) << ',' << rat_string(res.volume)
         << ',' << rat_double(res.deviation) << ',' << ms << "\n";
    }
    write_out(out, os.str());
  }
  return 0;
}

int cmd_spacings(const std::string& modspec, std::uint64_t budget, std::size_t max_rows,
                 const OutputOptions& out) {
  auto m = make_modulus(parse_modulus_spec(modspec));
  auto rs = enumerate_squares(m, budget);
  auto set = CirclePointSet::from_residues(rs);
  auto rep = exponential_fit(set);

  if (out.format == "json") {
    json j;
    j["schema"] = 1;
    j["q"] = m.q;
    j["n"] = rep.n_points;
    j["mean_normalized_gap"] = rep.mean_normalized_gap;
    j["ks_exponential"] = rep.ks_exponential;
    j["joint_ks"] = rep.joint_ks;
    j["small_sample"] = rep.small_sample;
    write_out(out, j.dump() + "\n");
    return 0;
  }

  // CDF table (x, empirical, theoretical, diff) at subsampled jump points.
  auto gl = gaps(set);
  std::vector<double> norm;
  norm.reserve(gl.raw.size());
  const double scale = static_cast<double>(gl.raw.size()) / static_cast<double>(set.den);
  for (auto g : gl.raw) norm.push_back(static_cast<double>(g) * scale);
  std::sort(norm.begin(), norm.end());
  std::ostringstream os;
  os << "x,empirical,theoretical,diff\n";
  const std::size_t n = norm.size();
  const std::size_t step = std::max<std::size_t>(1, n / std::max<std::size_t>(1, max_rows));
  for (std::size_t i = 0; i < n; i += step) {
    double emp = static_cast<double>(i + 1) / static_cast<double>(n);
    double th = 1.0 - std::exp(-norm[i]);
    os << norm[i] << ',' << emp << ',' << th << ',' << emp - th << "\n";
  }
  write_out(out, os.str(),
            "set datafile separator ','\nplot '" + out.path + "' using 1:2 with steps title 'empirical', \\\n"
            "     '" + out.path + "' using 1:3 with lines title '1-exp(-x)'\n");
  return 0;
}

int cmd_davenport(std::uint64_t p, std::uint64_t budget, const OutputOptions& out) {
  auto rows = davenport_histogram(p, budget);
  if (out.format == "json") {
    json j;
    j["schema"] = 1;
    j["p"] = p;
    json arr = json::array();
    for (auto& r : rows) {
      arr.push_back({{"gap", r.gap}, {"count", r.count}, {"observed", r.proportion},
                     {"expected", r.expected}, {"abs_dev", r.abs_dev}});
    }
    j["histogram"] = arr;
    write_out(out, j.dump() + "\n");
  } else {
    std::ostringstream os;
    os << "gap,count,observed,expected,abs_dev\n";
    for (auto& r : rows) {
      os << r.gap << ',' << r.count << ',' << r.proportion << ',' << r.expected << ',' << r.abs_dev << "\n";
    }
    write_out(out, os.str(),
              "set datafile separator ','\nset logscale y\nplot '" + out.path +
                  "' using 1:3 with boxes title 'observed', '" + out.path +
                  "' using 1:4 with lines title '2^-h'\n");
  }
  return 0;
}

int cmd_divisors(const std::string& modspec, const std::string& alpha_str, const OutputOptions& out) {
  auto m = make_modulus(parse_modulus_spec(modspec));
  Rational alpha = parse_rational(alpha_str);
  auto small = count_small_divisors(m, alpha);
  auto tail = divisor_tail_sum(m, alpha);
  json j;
  j["schema"] = 1;
  j["q"] = m.q;
  j["alpha"] = rat_string(alpha);
  j["mean_spacing"] = rat_string(m.mean_spacing());
  j["small_divisors"] = small;
  j["tail_sum"] = tail.value;
  if (tail.exact) j["tail_sum_exact"] = rat_string(tail.exact_value);
  j["tail_ratio_to_s_pow"] = tail.ratio_to_s_pow;
  if (out.format == "json") {
    write_out(out, j.dump() + "\n");
  } else {
    std::ostringstream os;
    os << "q,alpha,mean_spacing,small_divisors,tail_sum,tail_ratio\n"
       << m.q << ',' << rat_string(alpha) << ',' << rat_string(m.mean_spacing()) << ',' << small
       << ',' << tail.value << ',' << tail.ratio_to_s_pow << "\n";
    write_out(out, os.str());
  }
  return 0;
}

int cmd_sweep(const std::string& moduli_spec, const std::string& region_spec, std::uint64_t budget,
              const OutputOptions& out) {
  auto qs = parse_moduli_list(moduli_spec);
  auto region = ConvexRegion::parse(region_spec);
  auto rows = pair_correlation_sweep(qs, region, budget);

  std::ostringstream os;
  os << "q,omega,s,R2,deviation,dev_sqrt_s,dev_s,ks_exponential,joint_ks\n";
  json arr = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    SquareFreeModulus m = make_modulus(row.q);
    SquareFreeModulus odd = m.even() ? reduce_even(m).odd : m;
    auto rep = exponential_fit(CirclePointSet::from_residues(enumerate_squares(odd, budget)));
    os << row.q << ',' << row.omega << ',' << row.s << ',' << rat_string(row.r2) << ','
       << row.deviation << ',' << row.dev_times_sqrt_s << ',' << row.dev_times_s << ','
       << rep.ks_exponential << ',' << rep.joint_ks << "\n";
    arr.push_back({{"q", row.q}, {"omega", row.omega}, {"s", row.s}, {"R2", rat_string(row.r2)},
                   {"deviation", row.deviation}, {"dev_sqrt_s", row.dev_times_sqrt_s},
                   {"dev_s", row.dev_times_s}, {"ks_exponential", rep.ks_exponential},
                   {"joint_ks", rep.joint_ks}});
  }
  if (out.format == "json") {
    json j;
    j["schema"] = 1;
    j["region"] = region.to_string();
    j["rows"] = arr;
    write_out(out, j.dump() + "\n");
  } else {
    write_out(out, os.str(),
              "set datafile separator ','\nset logscale xy\nplot '" + out.path +
                  "' using 3:5 with linespoints title '|R2-vol|'\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify: the exact-identity suite.

struct VerifyReport {
  bool all_pass = true;
  std::ostringstream table;
  void row(const std::string& name, bool pass, const std::string& detail = "") {
    table << (pass ? "PASS  " : "FAIL  ") << name;
    if (!detail.empty()) table << "  [" << detail << "]";
    table << "\n";
    all_pass = all_pass && pass;
  }
};

int cmd_verify(std::uint64_t max_prime, int max_r, std::uint64_t seed, std::uint64_t budget,
               const OutputOptions& out) {
  VerifyReport rep;
  std::mt19937_64 rng(seed);

  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 3; p <= max_prime; p += 2) {
    if (is_prime(p)) primes.push_back(p);
  }

  // Delta decomposition + a*Delta summation identity + tuple totals, all h.
  for (int r = 2; r <= max_r; ++r) {
    const auto& poset = PartitionPoset::get(r);
    for (auto p : primes) {
      bool delta_ok = true;
      Int total = 0;
      std::vector<long long> h(r - 1, 0);
      for (;;) {
        long long lhs = 0;
        for (std::size_t g = 0; g < poset.size(); ++g) {
          if (delta_G(h, p, poset.partitions()[g])) lhs += poset.lambda(g);
        }
        if (lhs != Delta(h, p, r)) delta_ok = false;
        total += count_prime(h, p, r).n_solutions;
        int i = 0;
        for (; i < r - 1; ++i) {
          if (++h[i] < static_cast<long long>(p)) break;
          h[i] = 0;
        }
        if (i == r - 1) break;
      }
      rep.row("delta-decomposition p=" + std::to_string(p) + " r=" + std::to_string(r), delta_ok);
      auto sums = verify_sum_identity(p, r);
      rep.row("sum-identity p=" + std::to_string(p) + " r=" + std::to_string(r), sums.pass,
              sums.direct.str() + " vs " + rat_string(sums.closed));
      Int expect = int_pow(Int((p + 1) / 2), static_cast<unsigned>(r));
      rep.row("tuple-total p=" + std::to_string(p) + " r=" + std::to_string(r), total == expect,
              total.str() + " vs " + expect.str());
    }
  }

  // CRT multiplicativity vs brute force.
  for (std::uint64_t q : {15ull, 21ull, 33ull, 105ull}) {
    auto m = make_modulus(q);
    auto rs = enumerate_squares(m);
    std::vector<std::uint8_t> member(q, 0);
    for (auto v : rs.residues) member[v] = 1;
    bool ok = true;
    for (int r = 2; r <= std::min(max_r, 3); ++r) {
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<long long> h(r - 1);
        for (auto& v : h) v = static_cast<long long>(rng() % q);
        Int brute = 0;
        for (std::uint64_t y = 0; y < q; ++y) {
          if (!member[y]) continue;
          bool good = true;
          long long acc = 0;
          for (int j = 1; j < r; ++j) {
            acc += h[j - 1];
            long long yj = (static_cast<long long>(y) - acc) % static_cast<long long>(q);
            if (yj < 0) yj += q;
            if (!member[yj]) { good = false; break; }
          }
          if (good) ++brute;
        }
        if (count_composite(h, m, r) != brute) ok = false;
      }
    }
    rep.row("crt-vs-bruteforce q=" + std::to_string(q), ok);
  }

  // Prop 5.1 three-way agreement on a small grid + main term + even reduction.
  auto box1 = ConvexRegion::parse("box:1,2");
  auto box2 = ConvexRegion::parse("box:1,2;1,2");
  for (std::uint64_t q : {15ull, 105ull}) {
    auto m = make_modulus(q);
    for (int r = 2; r <= std::min(max_r, 3); ++r) {
      const ConvexRegion& c = (r == 2) ? box1 : box2;
      auto d = correlation_definition(m, r, c, budget);
      auto f = correlation_formula(m, r, c, true, budget);
      auto ci = correlation_circle(enumerate_squares(m), r, c);
      rep.row("threeway q=" + std::to_string(q) + " r=" + std::to_string(r),
              d.value == f.value && d.value == ci.value, rat_string(d.value));
      rep.row("main-term q=" + std::to_string(q) + " r=" + std::to_string(r),
              main_term(m, r, c) == c.volume());
      auto even = make_modulus(2 * q);
      auto ce = correlation_circle(enumerate_squares(even), r, c);
      rep.row("even-reduction q=" + std::to_string(2 * q) + " r=" + std::to_string(r),
              ce.value == d.value);
    }
  }

  // Sandwich identities on random point sets.
  bool sw_ok = true, joint_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 10 + rng() % 190;
    std::vector<std::uint64_t> nums;
    std::uint64_t den = 1ull << 32;
    while (nums.size() < n) nums.push_back(rng() % den);
    std::sort(nums.begin(), nums.end());
    nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
    CirclePointSet s{den, nums};
    const Int sden(std::max<std::size_t>(nums.size(), 12));  // keep thresholds < 1/2
    Rational x(Int(2 + rng() % 3), sden);
    Rational y(Int(1 + rng() % 2), sden);
    auto sres = sandwich_g(s, x, 3);
    if (!sres.identity_holds || !sres.brackets_hold) sw_ok = false;
    if (x + y < Rational(1, 2) && nums.size() >= 3) {
      auto jres = joint_sandwich_g(s, x, y, 3);
      if (!jres.identity_holds || !jres.brackets_hold) joint_ok = false;
    }
  }
  rep.row("sandwich-random", sw_ok);
  rep.row("joint-sandwich-random", joint_ok);

  write_out(out, rep.table.str() + (rep.all_pass ? "ALL PASS\n" : "FAILURES PRESENT\n"));
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spacing statistics and correlation functions of quadratic residues"};
  app.set_config("--config", "", "Optional key=value config file");
  app.require_subcommand(1);
  app.fallthrough();  // global flags (--threads, --budget) accepted after the subcommand

  unsigned threads = 0;
  std::uint64_t budget = 100000000ull;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->envname("QRSTATS_THREADS");
  app.add_option("--budget", budget, "Enumeration budget / sieve bit limit")->envname("QRSTATS_BUDGET");

  std::string modspec, region_spec = "box:1,2", method = "all", alpha_str = "1", moduli_spec;
  int r = 2;
  std::uint64_t p_prime = 1000003;
  std::uint64_t seed = 20240815;
  std::uint64_t max_prime = 13;
  int max_r = 4;
  std::size_t max_rows = 1000;
  OutputOptions out;

  auto* c_res = app.add_subcommand("residues", "List squares mod q");
  c_res->add_option("--q,--modulus", modspec, "Modulus (integer or primorial-odd:k)")->required();
  add_output_opts(c_res, out);

  auto* c_corr = app.add_subcommand("correlate", "r-level correlation of a region");
  c_corr->add_option("--q,--modulus", modspec)->required();
  c_corr->add_option("--r", r, "Correlation level")->check(CLI::Range(2, 6));
  c_corr->add_option("--region", region_spec, "Region spec (box:...|simplex:...|prod:...)");
  c_corr->add_option("--method", method)->check(CLI::IsMember({"def", "formula", "circle", "all"}));
  add_output_opts(c_corr, out);

  auto* c_spac = app.add_subcommand("spacings", "Gap statistics vs the exponential law");
  c_spac->add_option("--q,--modulus", modspec)->required();
  c_spac->add_option("--max-rows", max_rows, "CDF table row cap");
  add_output_opts(c_spac, out);

  auto* c_dav = app.add_subcommand("davenport", "Integer gap histogram for prime modulus");
  c_dav->add_option("--p", p_prime, "Odd prime")->required();
  add_output_opts(c_dav, out);

  auto* c_div = app.add_subcommand("divisors", "Small-divisor count and tail sums");
  c_div->add_option("--q,--modulus", modspec)->required();
  c_div->add_option("--alpha", alpha_str, "Exponent (rational)");
  add_output_opts(c_div, out);

  auto* c_ver = app.add_subcommand("verify", "Exact-identity verification suite");
  c_ver->add_option("--max-prime", max_prime);
  c_ver->add_option("--max-r", max_r)->check(CLI::Range(2, 4));
  c_ver->add_option("--seed", seed);
  add_output_opts(c_ver, out);

  auto* c_sweep = app.add_subcommand("sweep", "Pair-correlation / KS convergence table");
  c_sweep->add_option("--moduli", moduli_spec, "q list or primorial-odd:a..b")->required();
  c_sweep->add_option("--region", region_spec);
  add_output_opts(c_sweep, out);

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);

  try {
    if (*c_res) return cmd_residues(modspec, budget, out);
    if (*c_corr) return cmd_correlate(modspec, r, region_spec, method, budget, out);
    if (*c_spac) return cmd_spacings(modspec, budget, max_rows, out);
    if (*c_dav) return cmd_davenport(p_prime, budget, out);
    if (*c_div) return cmd_divisors(modspec, alpha_str, out);
    if (*c_ver) return cmd_verify(max_prime, max_r, seed, budget, out);
    if (*c_sweep) return cmd_sweep(moduli_spec, region_spec, budget, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
