#include "qrstats/lattices.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qrs {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Int factorial(int n) {
  Int out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

ConvexRegion ConvexRegion::box(std::vector<std::pair<Rational, Rational>> b) {
  if (b.empty()) throw std::invalid_argument("box: need at least one coordinate");
  for (const auto& [lo, hi] : b) {
    if (hi < lo) throw std::invalid_argument("box: bounds out of order");
  }
  ConvexRegion c;
  c.shape = Shape::Box;
  c.dim = static_cast<int>(b.size());
  c.bounds = std::move(b);
  return c;
}

ConvexRegion ConvexRegion::simplex(Rational t, int d) {
  if (d < 1 || t <= 0) throw std::invalid_argument("simplex: need d >= 1 and t > 0");
  ConvexRegion c;
  c.shape = Shape::Simplex;
  c.dim = d;
  c.t1 = std::move(t);
  return c;
}

ConvexRegion ConvexRegion::product(Rational t1, int i, Rational t2, int j) {
  if (i < 1 || j < 1 || t1 <= 0 || t2 <= 0) throw std::invalid_argument("prod: need i,j >= 1 and t1,t2 > 0");
  ConvexRegion c;
  c.shape = Shape::Product;
  c.dim = i + j;
  c.t1 = std::move(t1);
  c.t2 = std::move(t2);
  c.i_count = i;
  c.j_count = j;
  return c;
}

ConvexRegion ConvexRegion::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("region spec needs 'shape:params': " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string params = spec.substr(colon + 1);
  if (kind == "box") {
    std::vector<std::pair<Rational, Rational>> b;
    for (const auto& part : split(params, ';')) {
      auto ab = split(part, ',');
      if (ab.size() != 2) throw std::invalid_argument("box coordinate needs 'a,b': " + part);
      b.emplace_back(parse_rational(ab[0]), parse_rational(ab[1]));
    }
    return box(std::move(b));
  }
  if (kind == "simplex") {
    auto td = split(params, ',');
    if (td.size() != 2) throw std::invalid_argument("simplex needs 't,d': " + params);
    return simplex(parse_rational(td[0]), std::stoi(td[1]));
  }
  if (kind == "prod") {
    auto halves = split(params, ';');
    if (halves.size() != 2) throw std::invalid_argument("prod needs 't1,i;t2,j': " + params);
    auto a = split(halves[0], ',');
    auto b = split(halves[1], ',');
    if (a.size() != 2 || b.size() != 2) throw std::invalid_argument("prod needs 't1,i;t2,j': " + params);
    return product(parse_rational(a[0]), std::stoi(a[1]), parse_rational(b[0]), std::stoi(b[1]));
  }
  throw std::invalid_argument("unknown region shape: " + kind);
}

Rational ConvexRegion::volume() const {
  switch (shape) {
    case Shape::Box: {
      Rational v = 1;
      for (const auto& [a, b] : bounds) {
        if (b <= a) return 0;
        v *= (b - a);
      }
      return v;
    }
    case Shape::Simplex:
      return rat_pow(t1, static_cast<unsigned>(dim)) / Rational(factorial(dim));
    case Shape::Product:
      return rat_pow(t1, static_cast<unsigned>(i_count)) * rat_pow(t2, static_cast<unsigned>(j_count)) /
             Rational(factorial(i_count) * factorial(j_count));
  }
  return 0;
}

Rational ConvexRegion::diam1() const {
  switch (shape) {
    case Shape::Box: {
      Rational d = 0;
      for (const auto& [a, b] : bounds) {
        Rational m = abs(a) > abs(b) ? abs(a) : abs(b);
        d += m;
      }
      return d;
    }
    case Shape::Simplex:
      return t1;
    case Shape::Product:
      return t1 + t2;
  }
  return 0;
}

std::string ConvexRegion::to_string() const {
  std::ostringstream os;
  switch (shape) {
    case Shape::Box: {
      os << "box:";
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (i) os << ';';
        os << rat_string(bounds[i].first) << ',' << rat_string(bounds[i].second);
      }
      break;
    }
    case Shape::Simplex:
      os << "simplex:" << rat_string(t1) << ',' << dim;
      break;
    case Shape::Product:
      os << "prod:" << rat_string(t1) << ',' << i_count << ';' << rat_string(t2) << ',' << j_count;
      break;
  }
  return os.str();
}

bool ConvexRegion::contains_dilated(std::span<const long long> h, const Rational& s) const {
  if (static_cast<int>(h.size()) != dim) throw std::invalid_argument("point dimension mismatch");
  switch (shape) {
    case Shape::Box: {
      for (int i = 0; i < dim; ++i) {
        Rational hv(h[i]);
        if (hv < s * bounds[i].first || hv >= s * bounds[i].second) return false;
      }
      return true;
    }
    case Shape::Simplex: {
      Int sum = 0;
      for (long long v : h) {
        if (v <= 0) return false;
        sum += v;
      }
      return Rational(sum) < s * t1;
    }
    case Shape::Product: {
      Int s1 = 0, s2 = 0;
      for (int i = 0; i < dim; ++i) {
        if (h[i] <= 0) return false;
        (i < i_count ? s1 : s2) += h[i];
      }
      return Rational(s1) < s * t1 && Rational(s2) < s * t2;
    }
  }
  return false;
}

std::pair<Int, Int> ConvexRegion::coord_range(int i, const Rational& s) const {
  switch (shape) {
    case Shape::Box:
      return {rat_ceil(s * bounds[i].first), rat_ceil(s * bounds[i].second) - 1};
    case Shape::Simplex:
      return {Int(1), rat_ceil(s * t1) - 1};
    case Shape::Product:
      return {Int(1), rat_ceil(s * (i < i_count ? t1 : t2)) - 1};
  }
  return {Int(0), Int(-1)};
}

WallCheckResult wall_check(const ConvexRegion& c, int r) {
  if (c.dim != r - 1) throw std::invalid_argument("region dimension must be r-1");
  WallCheckResult res;
  if (c.shape != ConvexRegion::Shape::Box) return res;  // all sigma_ij > 0 on simplices
  for (int i = 1; i <= r; ++i) {
    for (int j = i + 1; j <= r; ++j) {
      Rational lo = 0, hi = 0;
      for (int k = i; k < j; ++k) {  // sigma_ij = h_i + ... + h_{j-1}
        lo += c.bounds[k - 1].first;
        hi += c.bounds[k - 1].second;
      }
      if (!(lo > 0 || hi < 0)) {
        res.pass = false;
        res.violations.emplace_back(i, j);
      }
    }
  }
  return res;
}

Int PartitionTuple::supp() const {
  Int out = 1;
  for (const auto& [p, _] : assignments) out *= p;
  return out;
}

Int PartitionTuple::disc() const {
  const auto& poset = PartitionPoset::get(r);
  Int out = 1;
  for (const auto& [p, gi] : assignments) out *= int_pow(Int(p), poset.partitions()[gi].codim());
  return out;
}

Int PartitionTuple::lambda() const {
  const auto& poset = PartitionPoset::get(r);
  Int out = 1;
  for (const auto& [_, gi] : assignments) out *= poset.lambda(gi);
  return out;
}

std::string PartitionTuple::to_string() const {
  const auto& poset = PartitionPoset::get(r);
  std::string out = "{";
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    if (k) out += ", ";
    out += std::to_string(assignments[k].first) + ":" + poset.partitions()[assignments[k].second].to_string();
  }
  return out + "}";
}

bool lattice_contains(const PartitionTuple& g, std::span<const long long> h) {
  const auto& poset = PartitionPoset::get(g.r);
  for (const auto& [p, gi] : g.assignments) {
    if (!delta_G(h, p, poset.partitions()[gi])) return false;
  }
  return true;
}

std::vector<std::vector<long long>> lattice_points(const ConvexRegion& c, const Rational& s,
                                                   const PartitionTuple& g, std::uint64_t budget) {
  if (c.dim != g.r - 1) throw std::invalid_argument("lattice_points: dimension mismatch");
  const auto& poset = PartitionPoset::get(g.r);

  // Stride for coordinate i: primes whose partition puts i and i+1 in
  // one block force h_i = 0 mod p.
  std::vector<Int> stride(c.dim, 1);
  for (const auto& [p, gi] : g.assignments) {
    const auto& part = poset.partitions()[gi];
    for (int i = 0; i < c.dim; ++i) {
      if (part.rgs[i] == part.rgs[i + 1]) stride[i] *= p;
    }
  }

  std::vector<Int> lo(c.dim), hi(c.dim);
  Int candidates = 1;
  for (int i = 0; i < c.dim; ++i) {
    auto [a, b] = c.coord_range(i, s);
    // First multiple of stride[i] that is >= a.
    Int st = stride[i];
    Int first = ((a % st) + st) % st == 0 ? a : a + (st - (((a % st) + st) % st));
    lo[i] = first;
    hi[i] = b;
    Int n = b < first ? Int(0) : (b - first) / st + 1;
    candidates *= n;
    if (candidates == 0) return {};
  }
  if (candidates > budget) {
    Rational est = rat_pow(s, static_cast<unsigned>(c.dim)) * c.volume() / Rational(g.disc());
    throw std::runtime_error("lattice enumeration budget exceeded (candidates " + candidates.str() +
                             " > " + std::to_string(budget) + "; estimated count " +
                             std::to_string(rat_double(est)) + ")");
  }

  std::vector<std::vector<long long>> out;
  std::vector<long long> h(c.dim);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == c.dim) {
      if (c.contains_dilated(h, s) && lattice_contains(g, h)) out.push_back(h);
      return;
    }
    for (Int v = lo[i]; v <= hi[i]; v += stride[i]) {
      h[i] = v.convert_to<long long>();
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<LipschitzRow> lipschitz_check(const ConvexRegion& c, const std::vector<Rational>& s_values,
                                          const PartitionTuple& g, std::uint64_t budget) {
  std::vector<LipschitzRow> out;
  for (const Rational& s : s_values) {
    LipschitzRow row;
    row.s = s;
    row.count = s == 0 ? Int(0) : Int(lattice_points(c, s, g, budget).size());
    row.expected = rat_pow(s, static_cast<unsigned>(c.dim)) * c.volume() / Rational(g.disc());
    row.residual = std::abs(rat_double(Rational(row.count) - row.expected));
    double denom = c.dim >= 2 ? std::pow(rat_double(s), c.dim - 1) : 1.0;
    row.normalized = denom > 0 ? row.residual / denom : row.residual;
    out.push_back(std::move(row));
  }
  return out;
}

bool avoid_walls_prune(const PartitionTuple& g, const ConvexRegion& c, const Rational& s) {
  const unsigned e = static_cast<unsigned>(g.r * (g.r - 1) / 2);
  return Rational(g.supp()) > rat_pow(s * c.diam1(), e);
}

}  // namespace qrs
