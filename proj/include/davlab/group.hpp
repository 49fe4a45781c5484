#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "davlab/errors.hpp"
#include "davlab/modmath.hpp"

namespace davlab {

// Presentation parameters for the metacyclic group
//   <x, y | x^m = y^n = 1, x^-1 y x = y^s>,
// which has order m*n exactly when ord_n(s) = m. Cyclic groups C_n are the
// degenerate case (1, n, 1).
struct MetacyclicParams {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t s = 1;

  friend bool operator==(const MetacyclicParams&, const MetacyclicParams&) = default;
  friend auto operator<=>(const MetacyclicParams&, const MetacyclicParams&) = default;
};

// Throws ParamOutOfRange for out-of-range fields and InvalidPresentation
// when ord_n(s) != m. Works for n up to 2^31 without building the group.
inline void validate_params(const MetacyclicParams& p) {
  if (p.m < 1) throw ParamOutOfRange("m must be >= 1");
  if (p.n < 1) throw ParamOutOfRange("n must be >= 1");
  constexpr std::int64_t kMaxN = std::int64_t{1} << 31;
  if (p.n > kMaxN) throw ParamOutOfRange("n must be <= 2^31");
  std::int64_t s_max = std::max<std::int64_t>(p.n - 1, 1);
  if (p.s < 1 || p.s > s_max) throw ParamOutOfRange("s must lie in [1, max(n-1, 1)]");
  if (!has_order_mod(p.s, p.m, p.n)) {
    throw InvalidPresentation("ord_n(s) != m for (m=" + std::to_string(p.m) +
                              ", n=" + std::to_string(p.n) + ", s=" + std::to_string(p.s) + ")");
  }
}

// True iff ord_q(s) = m for every prime divisor q of n. Valid cyclic
// presentations (1, n, 1) satisfy this vacuously-by-computation: ord_q(1) = 1.
inline bool star_condition(const MetacyclicParams& p) {
  validate_params(p);
  for (std::int64_t q : prime_factors(p.n)) {
    if (!has_order_mod(p.s, p.m, q)) return false;
  }
  return true;
}

// Group element in the canonical form x^a y^b with a in [0, m) and b in [0, n).
struct Element {
  int a = 0;
  int b = 0;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

// A finite group, either presented metacyclically (multiplication by formula,
// with the powers of s precomputed) or backed by an explicit Cayley table.
// Elements are addressed by linear index a*n + b; for table-backed groups the
// index is simply the row/column position.
class Group {
 public:
  // Table lookups replace the formula when the order is at most this; the
  // same dense table feeds the per-element translation maps used by search.
  static constexpr int kDenseTableCap = 512;
  static constexpr std::int64_t kMaxConstructibleOrder = std::int64_t{1} << 20;
  static constexpr int kDefaultAutomorphismCap = 42;

  static Group metacyclic(const MetacyclicParams& p) {
    validate_params(p);
    if (p.m * p.n > kMaxConstructibleOrder) {
      throw ParamOutOfRange("group order exceeds constructible cap");
    }
    return Group(p);
  }

  // Explicit Cayley table, row-major: table[g * order + h] = g*h. Identity,
  // inverses, closure, and associativity are all verified.
  static Group from_table(std::vector<int> table, int order) {
    return Group(std::move(table), order);
  }

  int order() const { return order_; }
  bool is_metacyclic() const { return metacyclic_; }
  bool is_abelian() const { return abelian_; }
  bool is_cyclic() const { return cyclic_; }
  bool star() const { return star_; }
  int identity() const { return identity_; }

  const MetacyclicParams& params() const {
    if (!metacyclic_) throw Error("group has no metacyclic presentation");
    return params_;
  }

  int m() const { return static_cast<int>(params().m); }
  int n() const { return static_cast<int>(params().n); }

  // s^a mod n for a in [0, m).
  std::int64_t spow(int a) const { return spow_[static_cast<std::size_t>(a)]; }

  int index_of(Element e) const {
    if (!metacyclic_) throw Error("element coordinates require a metacyclic presentation");
    if (e.a < 0 || e.a >= params_.m || e.b < 0 || e.b >= params_.n) {
      throw ParamOutOfRange("element exponents out of range");
    }
    return static_cast<int>(e.a * params_.n + e.b);
  }

  Element element_at(int idx) const {
    check_index(idx);
    if (!metacyclic_) throw Error("element coordinates require a metacyclic presentation");
    return Element{static_cast<int>(idx / params_.n), static_cast<int>(idx % params_.n)};
  }

  // (x^a1 y^b1)(x^a2 y^b2) = x^(a1+a2) y^(b1*s^a2 + b2).
  int mul(int g, int h) const {
    check_index(g);
    check_index(h);
    if (!table_.empty()) return table_[static_cast<std::size_t>(g) * order_ + h];
    std::int64_t ga = g / params_.n, gb = g % params_.n;
    std::int64_t ha = h / params_.n, hb = h % params_.n;
    std::int64_t a = (ga + ha) % params_.m;
    std::int64_t b = (gb * spow_[static_cast<std::size_t>(ha)] + hb) % params_.n;
    return static_cast<int>(a * params_.n + b);
  }

  Element mul(Element g, Element h) const { return element_at(mul(index_of(g), index_of(h))); }

  int inv(int g) const {
    check_index(g);
    if (metacyclic_) {
      std::int64_t ga = g / params_.n, gb = g % params_.n;
      std::int64_t ia = (params_.m - ga) % params_.m;
      std::int64_t ib = mod_reduce(-gb * spow_[static_cast<std::size_t>(ia)], params_.n);
      return static_cast<int>(ia * params_.n + ib);
    }
    return inverse_[static_cast<std::size_t>(g)];
  }

  Element inv(Element g) const { return element_at(inv(index_of(g))); }

  int pow(int g, std::int64_t k) const {
    check_index(g);
    int base = g;
    if (k < 0) {
      base = inv(base);
      k = -k;
    }
    int acc = identity_;
    while (k > 0) {
      if (k & 1) acc = mul(acc, base);
      base = mul(base, base);
      k >>= 1;
    }
    return acc;
  }

  int element_order(int g) const {
    check_index(g);
    int acc = g, ord = 1;
    while (acc != identity_) {
      acc = mul(acc, g);
      ++ord;
    }
    return ord;
  }

  // Canonical projection G -> G/<y> = C_m, returning the exponent of x.
  int quotient_map(int g) const {
    check_index(g);
    if (!metacyclic_) throw Error("quotient map requires a metacyclic presentation");
    return static_cast<int>(g / params_.n);
  }

  bool in_normal_subgroup(int g) const { return quotient_map(g) == 0; }

  // Indices of the normal subgroup N = <y> are exactly [0, n).
  int normal_subgroup_order() const {
    if (!metacyclic_) throw Error("normal subgroup requires a metacyclic presentation");
    return static_cast<int>(params_.n);
  }

  std::map<int, int> element_order_histogram() const {
    std::map<int, int> hist;
    for (int g = 0; g < order_; ++g) ++hist[element_order(g)];
    return hist;
  }

  // All automorphisms as index permutations, sorted lexicographically.
  // Brute force over generator images constrained by element order.
  std::vector<std::vector<int>> automorphisms(int order_cap = kDefaultAutomorphismCap) const {
    if (order_ > order_cap) {
      throw OrderCapExceeded("automorphism search capped at order " + std::to_string(order_cap));
    }
    std::vector<int> gens = generating_set();
    // Express every element as word prefix, BFS from the identity.
    std::vector<int> parent(static_cast<std::size_t>(order_), -1);
    std::vector<int> via_gen(static_cast<std::size_t>(order_), -1);
    std::vector<int> bfs_order;
    bfs_order.reserve(static_cast<std::size_t>(order_));
    std::vector<char> seen(static_cast<std::size_t>(order_), 0);
    seen[static_cast<std::size_t>(identity_)] = 1;
    bfs_order.push_back(identity_);
    for (std::size_t head = 0; head < bfs_order.size(); ++head) {
      int e = bfs_order[head];
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        int f = mul(e, gens[gi]);
        if (!seen[static_cast<std::size_t>(f)]) {
          seen[static_cast<std::size_t>(f)] = 1;
          parent[static_cast<std::size_t>(f)] = e;
          via_gen[static_cast<std::size_t>(f)] = static_cast<int>(gi);
          bfs_order.push_back(f);
        }
      }
    }

    std::vector<std::vector<int>> candidates_per_gen;
    for (int g : gens) {
      int ord = element_order(g);
      std::vector<int> cands;
      for (int h = 0; h < order_; ++h) {
        if (element_order(h) == ord) cands.push_back(h);
      }
      candidates_per_gen.push_back(std::move(cands));
    }

    std::vector<std::vector<int>> autos;
    std::vector<int> images(gens.size(), 0);
    collect_automorphisms(gens, candidates_per_gen, bfs_order, parent, via_gen, 0, images, autos);
    std::sort(autos.begin(), autos.end());
    return autos;
  }

  // One representative (the least index) per automorphism orbit of elements.
  std::vector<int> automorphism_orbit_representatives(int order_cap = kDefaultAutomorphismCap) const {
    auto autos = automorphisms(order_cap);
    std::vector<char> covered(static_cast<std::size_t>(order_), 0);
    std::vector<int> reps;
    for (int g = 0; g < order_; ++g) {
      if (covered[static_cast<std::size_t>(g)]) continue;
      reps.push_back(g);
      for (const auto& f : autos) covered[static_cast<std::size_t>(f[static_cast<std::size_t>(g)])] = 1;
    }
    return reps;
  }

  std::vector<int> multiplication_table() const {
    if (!table_.empty()) return table_;
    std::vector<int> t(static_cast<std::size_t>(order_) * order_);
    for (int g = 0; g < order_; ++g) {
      for (int h = 0; h < order_; ++h) t[static_cast<std::size_t>(g) * order_ + h] = mul(g, h);
    }
    return t;
  }

 private:
  explicit Group(const MetacyclicParams& p) : params_(p), metacyclic_(true) {
    order_ = static_cast<int>(p.m * p.n);
    identity_ = 0;
    spow_.resize(static_cast<std::size_t>(p.m));
    spow_[0] = 1 % p.n;
    for (std::size_t a = 1; a < spow_.size(); ++a) spow_[a] = spow_[a - 1] * p.s % p.n;
    star_ = star_condition(p);
    abelian_ = (p.m == 1);
    if (order_ <= kDenseTableCap) {
      table_.resize(static_cast<std::size_t>(order_) * order_);
      for (int g = 0; g < order_; ++g) {
        std::int64_t ga = g / p.n, gb = g % p.n;
        for (int h = 0; h < order_; ++h) {
          std::int64_t ha = h / p.n, hb = h % p.n;
          std::int64_t a = (ga + ha) % p.m;
          std::int64_t b = (gb * spow_[static_cast<std::size_t>(ha)] + hb) % p.n;
          table_[static_cast<std::size_t>(g) * order_ + h] = static_cast<int>(a * p.n + b);
        }
      }
    }
    cyclic_ = compute_cyclic();
  }

  Group(std::vector<int> table, int order) : metacyclic_(false) {
    if (order < 1) throw ParamOutOfRange("table group order must be >= 1");
    if (table.size() != static_cast<std::size_t>(order) * static_cast<std::size_t>(order)) {
      throw ParamOutOfRange("multiplication table size must be order^2");
    }
    order_ = order;
    table_ = std::move(table);
    for (int v : table_) {
      if (v < 0 || v >= order_) throw InvalidPresentation("table entry out of range");
    }
    identity_ = -1;
    for (int e = 0; e < order_; ++e) {
      bool is_id = true;
      for (int h = 0; h < order_ && is_id; ++h) {
        if (table_[static_cast<std::size_t>(e) * order_ + h] != h ||
            table_[static_cast<std::size_t>(h) * order_ + e] != h) {
          is_id = false;
        }
      }
      if (is_id) {
        identity_ = e;
        break;
      }
    }
    if (identity_ < 0) throw InvalidPresentation("table has no identity element");
    inverse_.assign(static_cast<std::size_t>(order_), -1);
    for (int g = 0; g < order_; ++g) {
      for (int h = 0; h < order_; ++h) {
        if (table_[static_cast<std::size_t>(g) * order_ + h] == identity_ &&
            table_[static_cast<std::size_t>(h) * order_ + g] == identity_) {
          inverse_[static_cast<std::size_t>(g)] = h;
          break;
        }
      }
      if (inverse_[static_cast<std::size_t>(g)] < 0) {
        throw InvalidPresentation("table element lacks an inverse");
      }
    }
    for (int a = 0; a < order_; ++a) {
      for (int b = 0; b < order_; ++b) {
        int ab = table_[static_cast<std::size_t>(a) * order_ + b];
        for (int c = 0; c < order_; ++c) {
          int bc = table_[static_cast<std::size_t>(b) * order_ + c];
          if (table_[static_cast<std::size_t>(ab) * order_ + c] !=
              table_[static_cast<std::size_t>(a) * order_ + bc]) {
            throw InvalidPresentation("table is not associative");
          }
        }
      }
    }
    abelian_ = true;
    for (int g = 0; g < order_ && abelian_; ++g) {
      for (int h = g + 1; h < order_; ++h) {
        if (table_[static_cast<std::size_t>(g) * order_ + h] !=
            table_[static_cast<std::size_t>(h) * order_ + g]) {
          abelian_ = false;
          break;
        }
      }
    }
    spow_ = {0};
    star_ = false;
    cyclic_ = compute_cyclic();
  }

  void check_index(int g) const {
    if (g < 0 || g >= order_) throw ParamOutOfRange("element index out of range");
  }

  bool compute_cyclic() const {
    for (int g = 0; g < order_; ++g) {
      if (element_order(g) == order_) return true;
    }
    return false;
  }

  std::vector<int> generating_set() const {
    if (metacyclic_) {
      std::vector<int> gens;
      if (params_.m > 1) gens.push_back(static_cast<int>(params_.n));  // x = (1, 0)
      if (params_.n > 1) gens.push_back(1);                            // y = (0, 1)
      return gens;
    }
    std::vector<int> gens;
    std::vector<char> closure(static_cast<std::size_t>(order_), 0);
    closure[static_cast<std::size_t>(identity_)] = 1;
    int covered = 1;
    while (covered < order_) {
      int next = -1;
      for (int g = 0; g < order_; ++g) {
        if (!closure[static_cast<std::size_t>(g)]) {
          next = g;
          break;
        }
      }
      gens.push_back(next);
      // Close under multiplication by the enlarged generating set.
      std::vector<int> frontier;
      for (int g = 0; g < order_; ++g) {
        if (closure[static_cast<std::size_t>(g)]) frontier.push_back(g);
      }
      while (!frontier.empty()) {
        std::vector<int> fresh;
        for (int g : frontier) {
          for (int gen : gens) {
            int h = mul(g, gen);
            if (!closure[static_cast<std::size_t>(h)]) {
              closure[static_cast<std::size_t>(h)] = 1;
              fresh.push_back(h);
            }
          }
        }
        frontier = std::move(fresh);
      }
      covered = static_cast<int>(std::count(closure.begin(), closure.end(), 1));
    }
    return gens;
  }

  void collect_automorphisms(const std::vector<int>& gens,
                             const std::vector<std::vector<int>>& candidates_per_gen,
                             const std::vector<int>& bfs_order, const std::vector<int>& parent,
                             const std::vector<int>& via_gen, std::size_t pos,
                             std::vector<int>& images, std::vector<std::vector<int>>& out) const {
    if (pos == gens.size()) {
      std::vector<int> f(static_cast<std::size_t>(order_), -1);
      f[static_cast<std::size_t>(identity_)] = identity_;
      for (int e : bfs_order) {
        if (e == identity_) continue;
        int p = parent[static_cast<std::size_t>(e)];
        int gi = via_gen[static_cast<std::size_t>(e)];
        f[static_cast<std::size_t>(e)] =
            mul(f[static_cast<std::size_t>(p)], images[static_cast<std::size_t>(gi)]);
      }
      std::vector<char> hit(static_cast<std::size_t>(order_), 0);
      for (int v : f) {
        if (hit[static_cast<std::size_t>(v)]) return;
        hit[static_cast<std::size_t>(v)] = 1;
      }
      for (int u = 0; u < order_; ++u) {
        for (int v = 0; v < order_; ++v) {
          if (f[static_cast<std::size_t>(mul(u, v))] !=
              mul(f[static_cast<std::size_t>(u)], f[static_cast<std::size_t>(v)])) {
            return;
          }
        }
      }
      out.push_back(std::move(f));
      return;
    }
    for (int cand : candidates_per_gen[pos]) {
      images[pos] = cand;
      collect_automorphisms(gens, candidates_per_gen, bfs_order, parent, via_gen, pos + 1, images,
                            out);
    }
  }

  MetacyclicParams params_{};
  bool metacyclic_ = false;
  bool star_ = false;
  bool abelian_ = false;
  bool cyclic_ = false;
  int order_ = 1;
  int identity_ = 0;
  std::vector<std::int64_t> spow_;
  std::vector<int> table_;
  std::vector<int> inverse_;  // table-backed groups only
};

inline Group cyclic_group(std::int64_t n) { return Group::metacyclic({1, n, 1}); }

}  // namespace davlab
