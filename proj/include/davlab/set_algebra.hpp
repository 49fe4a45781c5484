#pragma once

#include <span>
#include <vector>

#include "davlab/element_set.hpp"
#include "davlab/errors.hpp"
#include "davlab/group.hpp"

namespace davlab {

// Exact product set A*B = {a*b : a in A, b in B}.
inline ElementSet set_product(const Group& g, const ElementSet& a, const ElementSet& b) {
  ElementSet out(g.order());
  a.for_each([&](int x) { b.for_each([&](int y) { out.insert(g.mul(x, y)); }); });
  return out;
}

inline ElementSet left_translate(const Group& g, int x, const ElementSet& a) {
  ElementSet out(g.order());
  a.for_each([&](int y) { out.insert(g.mul(x, y)); });
  return out;
}

inline ElementSet right_translate(const Group& g, const ElementSet& a, int x) {
  ElementSet out(g.order());
  a.for_each([&](int y) { out.insert(g.mul(y, x)); });
  return out;
}

// Stab(A) = {x : xA = A}; always a subgroup. A must be nonempty.
inline ElementSet stabilizer(const Group& g, const ElementSet& a) {
  if (a.empty()) throw EmptySetError("stabilizer of the empty set is undefined");
  ElementSet out(g.order());
  for (int x = 0; x < g.order(); ++x) {
    if (left_translate(g, x, a) == a) out.insert(x);
  }
  return out;
}

struct KneserCheck {
  bool holds = false;
  int lhs = 0;  // |A_1 ... A_r|
  int rhs = 0;  // sum |A_i H| - (r-1)|H|
  ElementSet stab;
};

// |A_1 ... A_r| >= sum_i |A_i H| - (r-1)|H| with H = Stab(A_1 ... A_r).
// Requires an abelian ambient group and nonempty sets.
inline KneserCheck kneser_check(const Group& g, std::span<const ElementSet> sets) {
  if (!g.is_abelian()) throw NonAbelianAmbient("Kneser bound requires an abelian ambient group");
  if (sets.empty()) throw EmptySetError("need at least one set");
  ElementSet prod = ElementSet::singleton(g.order(), g.identity());
  for (const ElementSet& a : sets) {
    if (a.empty()) throw EmptySetError("sets must be nonempty");
    prod = set_product(g, prod, a);
  }
  KneserCheck out;
  out.stab = stabilizer(g, prod);
  out.lhs = prod.size();
  int h = out.stab.size();
  int rhs = -(static_cast<int>(sets.size()) - 1) * h;
  for (const ElementSet& a : sets) rhs += set_product(g, a, out.stab).size();
  out.rhs = rhs;
  out.holds = out.lhs >= out.rhs;
  return out;
}

// Pi(A_1, ..., A_l): all products a_{i_1} * ... * a_{i_k} with one factor
// from each chosen set and strictly increasing set indices, k >= 1.
// Accumulated left to right: each set may be skipped or multiplied in.
inline ElementSet pi_of_set_sequence(const Group& g, std::span<const ElementSet> sets) {
  if (sets.empty()) throw EmptySetError("need at least one set");
  ElementSet acc(g.order());
  for (const ElementSet& a : sets) {
    if (a.empty()) throw EmptySetError("sets must be nonempty");
    ElementSet next = acc;        // skip A_i
    next |= set_product(g, acc, a);
    next |= a;                    // start at A_i
    acc = next;
  }
  return acc;
}

struct CheckOutcome {
  bool holds = false;
  bool vacuous = false;
};

// If 1 is not in Pi(A_1, ..., A_l) then |Pi(A_1, ..., A_l)| >= sum |A_i|.
// Instances violating the hypothesis report vacuous truth unless strict.
inline CheckOutcome lemma22_check(const Group& g, std::span<const ElementSet> sets,
                                  bool strict = false) {
  ElementSet products = pi_of_set_sequence(g, sets);
  if (products.contains(g.identity())) {
    if (strict) throw HypothesisViolated("1 lies in the product set");
    return {true, true};
  }
  int total = 0;
  for (const ElementSet& a : sets) total += a.size();
  return {products.size() >= total, false};
}

// View of a subset of the normal subgroup N = <y> as a subset of the cyclic
// group C_n; element indices inside N coincide.
inline ElementSet restrict_to_normal_subgroup(const Group& g, const ElementSet& a) {
  int n = g.normal_subgroup_order();
  ElementSet out(n);
  a.for_each([&](int e) {
    if (e >= n) throw ParamOutOfRange("set is not contained in the normal subgroup");
    out.insert(e);
  });
  return out;
}

// The subgroup of N = <y> of the given order (order must divide n).
inline ElementSet subgroup_of_normal(const Group& g, int subgroup_order) {
  int n = g.normal_subgroup_order();
  if (subgroup_order < 1 || n % subgroup_order != 0) {
    throw ParamOutOfRange("subgroup order must divide n");
  }
  ElementSet out(g.order());
  int step = n / subgroup_order;
  for (int b = 0; b < n; b += step) out.insert(b);
  return out;
}

}  // namespace davlab
