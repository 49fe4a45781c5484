#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "davlab/group.hpp"
#include "davlab/oracles.hpp"
#include "davlab/search.hpp"
#include "davlab/sequence.hpp"
#include "davlab/set_algebra.hpp"

namespace davlab {

// Seeded randomized drivers for the lemma checkers. Each driver keeps
// sampling until it has produced the requested number of instances that
// satisfy the lemma's hypotheses (attempts that fail them are recorded, not
// counted), so a clean run means `satisfied == requested, failures == 0`.
struct TrialStats {
  std::string name;
  int requested = 0;
  int satisfied = 0;   // hypothesis-satisfying instances checked
  int rejected = 0;    // sampled instances that failed the hypotheses
  int failures = 0;    // instances where the conclusion failed
  std::uint64_t seed = 0;
};

namespace detail {

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline const std::vector<MetacyclicParams>& star_pool() {
  static const std::vector<MetacyclicParams> pool = star_groups_up_to(42);
  return pool;
}

inline const std::vector<Group>& star_group_pool() {
  static const std::vector<Group> pool = [] {
    std::vector<Group> out;
    for (const auto& p : star_pool()) out.push_back(Group::metacyclic(p));
    return out;
  }();
  return pool;
}

// Every valid presentation (star or not, cyclic included) of order <= 42.
inline const std::vector<Group>& mixed_group_pool() {
  static const std::vector<Group> pool = [] {
    std::vector<Group> out;
    for (int n = 1; n <= 42; ++n) {
      for (int m = 1; m * n <= 42; ++m) {
        for (int s = 1; s <= std::max(n - 1, 1); ++s) {
          if (!has_order_mod(s, m, n)) continue;
          out.push_back(Group::metacyclic({m, n, s}));
        }
      }
    }
    return out;
  }();
  return pool;
}

inline ElementSet random_subset(std::mt19937_64& rng, int universe, int max_size) {
  int size = pick(rng, 1, std::min(universe, max_size));
  ElementSet s(universe);
  while (static_cast<int>(s.size()) < size) s.insert(pick(rng, 0, universe - 1));
  return s;
}

// All sub-multisets of `s` with the given length whose product over a cyclic
// group is the identity. Counts odometer over term multiplicities.
inline std::vector<Sequence> product_one_subs_of_length(const Group& g, const Sequence& s,
                                                        int length) {
  std::vector<Sequence> out;
  const auto& terms = s.terms();
  std::vector<std::int64_t> take(terms.size(), 0);
  while (true) {
    std::int64_t len = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) len += take[i];
    if (len == length) {
      int prod = g.identity();
      for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::int64_t k = 0; k < take[i]; ++k) prod = g.mul(prod, terms[i].first);
      }
      if (prod == g.identity()) {
        Sequence t;
        for (std::size_t i = 0; i < terms.size(); ++i) {
          if (take[i] > 0) t.add(terms[i].first, take[i]);
        }
        out.push_back(std::move(t));
      }
    }
    std::size_t i = 0;
    while (i < terms.size() && take[i] == terms[i].second) {
      take[i] = 0;
      ++i;
    }
    if (i == terms.size()) break;
    ++take[i];
  }
  if (length == 0) {
    out.clear();
    out.push_back(Sequence{});
  }
  return out;
}

}  // namespace detail

inline TrialStats run_kneser_trials(int requested, std::uint64_t seed) {
  TrialStats st{"kneser", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  while (st.satisfied < requested) {
    int n = detail::pick(rng, 2, 42);
    Group g = cyclic_group(n);
    int r = detail::pick(rng, 1, 4);
    std::vector<ElementSet> sets;
    for (int i = 0; i < r; ++i) sets.push_back(detail::random_subset(rng, n, 5));
    KneserCheck k = kneser_check(g, sets);
    ++st.satisfied;
    if (!k.holds) ++st.failures;
  }
  return st;
}

inline TrialStats run_lemma22_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma22", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  const auto& pool = detail::mixed_group_pool();
  while (st.satisfied < requested) {
    const Group& g = pool[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    int r = detail::pick(rng, 1, 4);
    std::vector<ElementSet> sets;
    for (int i = 0; i < r; ++i) sets.push_back(detail::random_subset(rng, g.order(), 3));
    CheckOutcome o = lemma22_check(g, sets);
    if (o.vacuous) {
      ++st.rejected;
      continue;
    }
    ++st.satisfied;
    if (!o.holds) ++st.failures;
  }
  return st;
}

inline TrialStats run_lemma23_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma23", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  while (st.satisfied < requested) {
    int n = detail::pick(rng, 3, 10);
    Group g = cyclic_group(n);
    Sequence s;
    if (detail::pick(rng, 0, 9) < 7) {
      // a free block of maximal length plus a few product-one blocks
      int k = detail::pick(rng, 1, n - 1);
      while (std::gcd(k, n) != 1) k = detail::pick(rng, 1, n - 1);
      for (int i = 0; i < n - 1; ++i) s.add(k);
      int blocks = detail::pick(rng, 0, 2);
      for (int b = 0; b < blocks; ++b) {
        int len = detail::pick(rng, 1, 3);
        int sum = 0;
        for (int i = 0; i < len; ++i) {
          int e = detail::pick(rng, 0, n - 1);
          s.add(e);
          sum = (sum + e) % n;
        }
        s.add((n - sum) % n);
      }
    } else {
      int len = detail::pick(rng, n - 1, n + 4);
      for (int i = 0; i < len; ++i) s.add(detail::pick(rng, 0, n - 1));
    }
    int max_len = detail::max_product_one_sublength(g, s);
    if (static_cast<std::int64_t>(max_len) != s.length() - (n - 1)) {
      ++st.rejected;
      continue;
    }
    bool any = false, bad = false;
    for (const Sequence& t : detail::product_one_subs_of_length(g, s, max_len)) {
      CheckOutcome o = lemma23_check(g, s, t);
      if (o.vacuous) continue;
      any = true;
      if (!o.holds) bad = true;
    }
    if (!any) {
      ++st.rejected;
      continue;
    }
    ++st.satisfied;
    if (bad) ++st.failures;
  }
  return st;
}

// Exhaustive rather than randomized: every product-one free sequence of
// length n-1 over C_n for n in [3,10].
inline TrialStats run_lemma24_exhaustive() {
  TrialStats st{"lemma24", 0, 0, 0, 0, 0};
  for (int n = 3; n <= 10; ++n) {
    Group g = cyclic_group(n);
    EnumerateResult all = enumerate_free(g, n - 1);
    for (const Sequence& s : all.sequences) {
      CheckOutcome o = lemma24_check(g, s, /*strict=*/true);
      ++st.requested;
      ++st.satisfied;
      if (!o.holds) ++st.failures;
    }
  }
  return st;
}

inline TrialStats run_lemma31_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma31", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  const auto& pool = detail::star_pool();
  while (st.satisfied < requested) {
    const MetacyclicParams& p = pool[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    CheckOutcome o = lemma31_check(p);
    ++st.satisfied;
    if (!o.holds) ++st.failures;
  }
  return st;
}

inline TrialStats run_lemma32_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma32", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  const auto& pool = detail::star_group_pool();
  while (st.satisfied < requested) {
    const Group& g = pool[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    auto divs = divisors(g.n());
    std::int64_t m_order = divs[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(divs.size()) - 1))];
    int u;
    if (detail::pick(rng, 0, 1) == 0) {
      // force u into M so the membership premises fire
      std::int64_t step = g.n() / m_order;
      u = static_cast<int>(step * detail::pick(rng, 0, static_cast<int>(m_order) - 1));
    } else {
      u = detail::pick(rng, 0, g.n() - 1);
    }
    CheckOutcome o = lemma32_check(g, static_cast<int>(m_order), u);
    if (o.vacuous) {
      ++st.rejected;
      continue;
    }
    ++st.satisfied;
    if (!o.holds) ++st.failures;
  }
  return st;
}

inline TrialStats run_lemma33_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma33", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  const auto& pool = detail::star_group_pool();
  while (st.satisfied < requested) {
    const Group& g = pool[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    int t_len = detail::pick(rng, 1, g.m());
    Sequence t;
    for (int i = 0; i < t_len; ++i) {
      t.add(g.index_of(Element{detail::pick(rng, 0, g.m() - 1), detail::pick(rng, 0, g.n() - 1)}));
    }
    CheckOutcome o = lemma33_check(g, t);
    if (o.vacuous) {
      ++st.rejected;
      continue;
    }
    ++st.satisfied;
    if (!o.holds) ++st.failures;
  }
  return st;
}

inline TrialStats run_lemma34_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma34", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  const auto& pool = detail::star_group_pool();
  while (st.satisfied < requested) {
    const Group& g = pool[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    int a = detail::pick(rng, 1, g.m() - 1);
    if (std::gcd(a, g.m()) != 1) {
      ++st.rejected;
      continue;
    }
    Sequence t;
    for (int i = 0; i < g.m(); ++i) {
      t.add(g.index_of(Element{a, detail::pick(rng, 0, g.n() - 1)}));
    }
    int u = detail::pick(rng, 0, g.n() - 1);
    CheckOutcome o = lemma34_check(g, t, u);
    if (o.vacuous) {
      ++st.rejected;
      continue;
    }
    ++st.satisfied;
    if (!o.holds) ++st.failures;
  }
  return st;
}

inline TrialStats run_lemma35_trials(int requested, std::uint64_t seed) {
  TrialStats st{"lemma35", requested, 0, 0, 0, seed};
  std::mt19937_64 rng(seed);
  const auto& pool = detail::star_group_pool();
  while (st.satisfied < requested) {
    const Group& g = pool[static_cast<std::size_t>(
        detail::pick(rng, 0, static_cast<int>(pool.size()) - 1))];
    int len = detail::pick(rng, 1, 8);
    // force the quotient image to be product-one by completing the x-part
    std::vector<int> a(static_cast<std::size_t>(len));
    int sum = 0;
    for (int i = 0; i + 1 < len; ++i) {
      a[static_cast<std::size_t>(i)] = detail::pick(rng, 0, g.m() - 1);
      sum = (sum + a[static_cast<std::size_t>(i)]) % g.m();
    }
    a[static_cast<std::size_t>(len - 1)] = (g.m() - sum) % g.m();
    Sequence s;
    for (int i = 0; i < len; ++i) {
      s.add(g.index_of(Element{a[static_cast<std::size_t>(i)], detail::pick(rng, 0, g.n() - 1)}));
    }
    CheckOutcome o = lemma35_check(g, s);
    if (o.vacuous) {
      ++st.rejected;
      continue;
    }
    ++st.satisfied;
    if (!o.holds) ++st.failures;
  }
  return st;
}

// Hand-picked instances with known-good hypotheses, run through the strict
// checkers: any hypothesis rejection throws, any failed conclusion is an
// engine regression reported as an error.
inline void run_curated_fixtures() {
  auto expect = [](CheckOutcome o, const char* what) {
    if (!o.holds || o.vacuous) throw Error(std::string("curated fixture failed: ") + what);
  };
  {
    Group c5 = cyclic_group(5);
    Sequence s = Sequence::repeated(2, 4);  // (y^2)^[4]
    expect(lemma24_check(c5, s, true), "free length-4 sequence over C_5");
  }
  {
    Group c4 = cyclic_group(4);
    Sequence s = Sequence::repeated(1, 3);  // y^[3], free, so the maximal part is empty
    expect(lemma23_check(c4, s, Sequence{}, true), "maximal part of a free sequence over C_4");
    Sequence s2 = s;
    s2.add(0);  // adding the identity makes {1} the maximal product-one part
    expect(lemma23_check(c4, s2, Sequence::repeated(0, 1), true),
           "identity as the maximal part over C_4");
  }
  expect(lemma31_check({3, 7, 2}, true), "presentation arithmetic for (3,7,2)");
  {
    Group g = Group::metacyclic({2, 3, 2});
    expect(lemma32_check(g, 1, 1, true), "conjugate powers against the trivial subgroup");
    Sequence t;  // x * xy, whose quotient image is minimal product-one
    t.add(g.index_of(Element{1, 0}));
    t.add(g.index_of(Element{1, 1}));
    expect(lemma33_check(g, t, true), "conjugate products of x * xy");
    expect(lemma34_check(g, t, 1, true), "translate closure of x * xy by y");
    expect(lemma35_check(g, t, true), "normal-subgroup products of x * xy");
  }
  {
    Group c5 = cyclic_group(5);
    std::vector<ElementSet> sets;
    ElementSet a(5), b(5);
    a.insert(0);
    a.insert(1);
    b.insert(0);
    b.insert(2);
    sets.push_back(a);
    sets.push_back(b);
    if (!kneser_check(c5, sets).holds) throw Error("curated fixture failed: sumset bound over C_5");
    Group s3 = Group::metacyclic({2, 3, 2});
    std::vector<ElementSet> chain;
    ElementSet y_only(6);
    y_only.insert(1);
    chain.push_back(y_only);
    chain.push_back(y_only);
    expect(lemma22_check(s3, chain, true), "subset-product bound for identity-free chains");
  }
}

inline std::vector<TrialStats> run_all_trials(int requested, std::uint64_t seed) {
  std::vector<TrialStats> out;
  out.push_back(run_kneser_trials(requested, seed));
  out.push_back(run_lemma22_trials(requested, seed + 1));
  out.push_back(run_lemma23_trials(requested, seed + 2));
  out.push_back(run_lemma24_exhaustive());
  out.push_back(run_lemma31_trials(requested, seed + 3));
  out.push_back(run_lemma32_trials(requested, seed + 4));
  out.push_back(run_lemma33_trials(requested, seed + 5));
  out.push_back(run_lemma34_trials(requested, seed + 6));
  out.push_back(run_lemma35_trials(requested, seed + 7));
  return out;
}

}  // namespace davlab
