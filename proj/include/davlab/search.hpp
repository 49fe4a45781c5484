#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "davlab/errors.hpp"
#include "davlab/group.hpp"
#include "davlab/sequence.hpp"

namespace davlab {

struct SearchOptions {
  // Longest sequence the search may report; 0 means the group order, which
  // never binds for the free-sequence search and is the proven stop for the
  // minimal-product-one search.
  int max_length = 0;
  std::uint64_t state_cap = kDefaultStateCap;
  // Restrict the least element of every explored multiset to one
  // representative per automorphism orbit. Values and witnesses are
  // unchanged; only the visit count drops.
  bool symmetry_reduction = false;
  int jobs = 1;
  // When nonempty, progress is saved here after every completed top-level
  // branch and a fresh run resumes from the file if it exists.
  std::string checkpoint_path{};
  // Test hook: stop issuing work once this many nodes were visited (0 = run
  // to completion). The partial result is returned with exhaustive = false.
  std::uint64_t abort_after_nodes = 0;
};

struct SearchResult {
  int value = 0;
  Sequence witness;
  std::uint64_t nodes = 0;
  std::int64_t millis = 0;
  bool exhaustive = true;
};

struct EnumerateResult {
  std::vector<Sequence> sequences;
  std::uint64_t nodes = 0;
  std::int64_t millis = 0;
  bool exhaustive = true;
};

namespace detail {

enum class SearchKind { kSmall, kLarge };

inline const char* kind_name(SearchKind k) { return k == SearchKind::kSmall ? "small" : "large"; }

struct BranchOutcome {
  int best = 0;
  std::uint64_t nodes = 0;
  bool cap_hit = false;
  bool state_cap_hit = false;
};

struct AbortBranch {};

// Depth-first exploration of one top-level branch: all multisets whose two
// least elements (with multiplicity) are the branch pair. Elements are added
// in non-decreasing index order, so every multiset is built exactly once.
class BranchRunner {
 public:
  BranchRunner(const Group& g, SearchKind kind, int cap, std::uint64_t state_cap,
               std::atomic<std::uint64_t>* node_counter, std::uint64_t abort_after,
               std::atomic<bool>* abort_flag)
      : group_(g),
        kind_(kind),
        cap_(cap),
        table_(g, state_cap),
        node_counter_(node_counter),
        abort_after_(abort_after),
        abort_flag_(abort_flag) {}

  BranchOutcome run(int first, int second) {
    outcome_ = BranchOutcome{};
    int order = group_.order();
    if (!try_push(first)) return outcome_;
    record_current(1);
    if (cap_ == 1) {
      if (kind_ == SearchKind::kSmall) {
        if (try_push(second)) {
          if (!table_.last_push_hit_identity()) outcome_.cap_hit = true;
          table_.pop();
        }
      } else if (cap_ < order) {
        outcome_.cap_hit = true;
      }
      table_.pop();
      return outcome_;
    }
    if (try_push(second)) {
      bool pruned = kind_ == SearchKind::kSmall && table_.last_push_hit_identity();
      if (!pruned) {
        record_current(2);
        if (2 < cap_) {
          dfs(2, second);
        } else {
          frontier(second);
        }
      }
      table_.pop();
    }
    table_.pop();
    return outcome_;
  }

 private:
  void dfs(int depth, int min_elem) {
    for (int e = min_elem; e < group_.order(); ++e) {
      if (e == group_.identity()) continue;
      if (!try_push(e)) continue;
      bool pruned = kind_ == SearchKind::kSmall && table_.last_push_hit_identity();
      if (!pruned) {
        record_current(depth + 1);
        if (depth + 1 < cap_) {
          dfs(depth + 1, e);
        } else {
          frontier(e);
        }
      }
      table_.pop();
    }
  }

  // Reached the length cap. The free-sequence search peeks one level ahead
  // so an exactly-binding cap still counts as exhaustive; minimality is not
  // hereditary, so the other search can only declare the cap reached.
  void frontier(int last_elem) {
    if (kind_ == SearchKind::kLarge) {
      if (cap_ < group_.order()) outcome_.cap_hit = true;
      return;
    }
    for (int e = last_elem; e < group_.order() && !outcome_.cap_hit; ++e) {
      if (e == group_.identity()) continue;
      if (!try_push(e)) continue;
      if (!table_.last_push_hit_identity()) outcome_.cap_hit = true;
      table_.pop();
    }
  }

  void record_current(int length) {
    if (kind_ == SearchKind::kSmall) {
      outcome_.best = std::max(outcome_.best, length);
    } else if (table_.is_minimal_product_one()) {
      outcome_.best = std::max(outcome_.best, length);
    }
  }

  bool try_push(int elem) {
    if (abort_flag_ && abort_flag_->load(std::memory_order_relaxed)) throw AbortBranch{};
    try {
      table_.push(elem);
    } catch (const StateSpaceCapExceeded&) {
      outcome_.state_cap_hit = true;
      return false;
    }
    ++outcome_.nodes;
    if (node_counter_ && ++local_pending_ >= 512) flush_nodes();
    return true;
  }

  void flush_nodes() {
    std::uint64_t total =
        node_counter_->fetch_add(local_pending_, std::memory_order_relaxed) + local_pending_;
    local_pending_ = 0;
    if (abort_after_ > 0 && total >= abort_after_) {
      abort_flag_->store(true, std::memory_order_relaxed);
    }
  }

  const Group& group_;
  SearchKind kind_;
  int cap_;
  ProductTable table_;
  BranchOutcome outcome_;
  std::atomic<std::uint64_t>* node_counter_;
  std::uint64_t abort_after_;
  std::atomic<bool>* abort_flag_;
  std::uint64_t local_pending_ = 0;
};

// Lexicographically least product-one free sequence of the given length,
// found by depth-first search in canonical order.
inline bool probe_free(const Group& g, ProductTable& t, int depth, int target, int min_elem,
                       Sequence& out) {
  for (int e = min_elem; e < g.order(); ++e) {
    if (e == g.identity()) continue;
    try {
      t.push(e);
    } catch (const StateSpaceCapExceeded&) {
      continue;
    }
    if (!t.last_push_hit_identity()) {
      if (depth + 1 == target) {
        out = t.current_sequence();
        return true;
      }
      if (probe_free(g, t, depth + 1, target, e, out)) return true;
    }
    t.pop();
  }
  return false;
}

inline std::optional<Sequence> lex_min_free_of_length(const Group& g, int target,
                                                      std::uint64_t state_cap) {
  if (target == 0) return Sequence{};
  ProductTable t(g, state_cap);
  Sequence out;
  if (probe_free(g, t, 0, target, 0, out)) return out;
  return std::nullopt;
}

inline bool probe_minimal(const Group& g, ProductTable& t, int depth, int target, int min_elem,
                          Sequence& out) {
  for (int e = min_elem; e < g.order(); ++e) {
    if (e == g.identity()) continue;
    try {
      t.push(e);
    } catch (const StateSpaceCapExceeded&) {
      continue;
    }
    if (depth + 1 == target) {
      if (t.is_minimal_product_one()) {
        out = t.current_sequence();
        return true;
      }
    } else if (probe_minimal(g, t, depth + 1, target, e, out)) {
      return true;
    }
    t.pop();
  }
  return false;
}

inline std::optional<Sequence> lex_min_minimal_of_length(const Group& g, int target,
                                                         std::uint64_t state_cap) {
  if (target == 0) return Sequence{};
  if (target == 1) return Sequence::repeated(g.identity(), 1);
  ProductTable t(g, state_cap);
  Sequence out;
  if (probe_minimal(g, t, 0, target, 0, out)) return out;
  return std::nullopt;
}

struct CheckpointData {
  MetacyclicParams params;
  int length_cap = 0;
  bool has_frontier = false;
  std::pair<int, int> frontier{0, 0};
  std::string kind;
  bool symmetry = false;
  int value = 0;
  std::uint64_t nodes = 0;
  bool cap_hit = false;
  bool state_cap_hit = false;
};

inline void save_checkpoint(const std::string& path, const CheckpointData& d) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint file " + tmp);
    out << "davlab-ckpt v1 " << d.params.m << " " << d.params.n << " " << d.params.s << " "
        << d.length_cap << "\n";
    if (d.has_frontier) {
      out << d.frontier.first << " " << d.frontier.second << "\n";
    } else {
      out << "\n";
    }
    out << "kind " << d.kind << "\n";
    out << "symmetry " << (d.symmetry ? 1 : 0) << "\n";
    out << "value " << d.value << "\n";
    out << "nodes " << d.nodes << "\n";
    out << "flags " << (d.cap_hit ? 1 : 0) << " " << (d.state_cap_hit ? 1 : 0) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

inline CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorruptCheckpoint("cannot open checkpoint file " + path);
  std::string header;
  if (!std::getline(in, header)) throw CorruptCheckpoint("missing checkpoint header");
  std::istringstream hs(header);
  std::string magic, version;
  CheckpointData d;
  if (!(hs >> magic >> version)) throw CorruptCheckpoint("malformed checkpoint header");
  if (magic != "davlab-ckpt") throw CorruptCheckpoint("not a checkpoint file");
  if (version != "v1") throw VersionMismatch("unsupported checkpoint version " + version);
  if (!(hs >> d.params.m >> d.params.n >> d.params.s >> d.length_cap)) {
    throw CorruptCheckpoint("malformed checkpoint header");
  }
  std::string frontier_line;
  if (!std::getline(in, frontier_line)) throw CorruptCheckpoint("missing frontier line");
  {
    std::istringstream fs(frontier_line);
    int i, j;
    if (fs >> i) {
      if (!(fs >> j)) throw CorruptCheckpoint("frontier must list two indices");
      d.has_frontier = true;
      d.frontier = {i, j};
    }
  }
  bool saw_kind = false, saw_sym = false, saw_value = false, saw_nodes = false, saw_flags = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "kind") {
      saw_kind = static_cast<bool>(ls >> d.kind);
    } else if (key == "symmetry") {
      int v;
      saw_sym = static_cast<bool>(ls >> v);
      d.symmetry = v != 0;
    } else if (key == "value") {
      saw_value = static_cast<bool>(ls >> d.value);
    } else if (key == "nodes") {
      saw_nodes = static_cast<bool>(ls >> d.nodes);
    } else if (key == "flags") {
      int a, b;
      saw_flags = static_cast<bool>(ls >> a >> b);
      d.cap_hit = a != 0;
      d.state_cap_hit = b != 0;
    } else {
      throw CorruptCheckpoint("unknown checkpoint field '" + key + "'");
    }
  }
  if (!saw_kind || !saw_sym || !saw_value || !saw_nodes || !saw_flags) {
    throw CorruptCheckpoint("incomplete checkpoint file");
  }
  return d;
}

// Shared driver for both invariants. Top-level branches are the ordered
// pairs of least elements; workers drain them from a queue, and outcomes are
// folded strictly in branch order so that values, node counts, and
// checkpoints never depend on thread scheduling.
inline SearchResult run_value_search(const Group& g, SearchKind kind, const SearchOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  if (opts.jobs < 1) throw ParamOutOfRange("jobs must be >= 1");
  if (opts.max_length < 0) throw ParamOutOfRange("max_length must be >= 0");
  int order = g.order();
  int id = g.identity();
  int cap = opts.max_length > 0 ? std::min(opts.max_length, order) : order;
  bool want_checkpoint = !opts.checkpoint_path.empty();
  if (want_checkpoint && !g.is_metacyclic()) {
    throw Error("checkpointing requires a metacyclic presentation");
  }

  int baseline = kind == SearchKind::kSmall ? 0 : 1;  // the identity alone is minimal product-one

  std::vector<int> firsts;
  if (opts.symmetry_reduction) {
    for (int r : g.automorphism_orbit_representatives()) {
      if (r != id) firsts.push_back(r);
    }
  } else {
    for (int e = 0; e < order; ++e) {
      if (e != id) firsts.push_back(e);
    }
  }
  std::vector<std::pair<int, int>> branches;
  for (int i : firsts) {
    for (int j = i; j < order; ++j) {
      if (j != id) branches.emplace_back(i, j);
    }
  }

  int value = baseline;
  std::uint64_t folded_nodes = 0;
  bool cap_hit = false, state_cap_hit = false;
  std::size_t start_branch = 0;

  auto make_checkpoint = [&](std::size_t low_water) {
    CheckpointData d;
    d.params = g.params();
    d.length_cap = cap;
    d.kind = kind_name(kind);
    d.symmetry = opts.symmetry_reduction;
    d.value = value;
    d.nodes = folded_nodes;
    d.cap_hit = cap_hit;
    d.state_cap_hit = state_cap_hit;
    if (low_water < branches.size()) {
      d.has_frontier = true;
      d.frontier = branches[low_water];
    }
    return d;
  };

  auto finish = [&](bool complete) {
    SearchResult r;
    r.value = value;
    r.nodes = folded_nodes;
    r.exhaustive = complete && !cap_hit && !state_cap_hit;
    auto witness = kind == SearchKind::kSmall
                       ? lex_min_free_of_length(g, r.value, opts.state_cap)
                       : lex_min_minimal_of_length(g, r.value, opts.state_cap);
    if (!witness) throw Error("internal: no witness at the reported length");
    r.witness = *witness;
    r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    return r;
  };

  if (want_checkpoint && std::filesystem::exists(opts.checkpoint_path)) {
    CheckpointData d = load_checkpoint(opts.checkpoint_path);
    if (d.params != g.params()) throw VersionMismatch("checkpoint is for different parameters");
    if (d.length_cap != cap) throw VersionMismatch("checkpoint is for a different length cap");
    if (d.kind != kind_name(kind)) throw VersionMismatch("checkpoint is for a different search");
    if (d.symmetry != opts.symmetry_reduction) {
      throw VersionMismatch("checkpoint is for a different symmetry setting");
    }
    value = d.value;
    folded_nodes = d.nodes;
    cap_hit = d.cap_hit;
    state_cap_hit = d.state_cap_hit;
    if (!d.has_frontier) return finish(true);
    auto it = std::find(branches.begin(), branches.end(), d.frontier);
    if (it == branches.end()) throw CorruptCheckpoint("frontier is not a branch prefix");
    start_branch = static_cast<std::size_t>(it - branches.begin());
  }

  std::mutex mu;
  std::vector<char> done(branches.size(), 0);
  std::vector<BranchOutcome> outcomes(branches.size());
  std::size_t low_water = start_branch;
  std::atomic<std::size_t> next{start_branch};
  std::atomic<std::uint64_t> node_counter{folded_nodes};
  std::atomic<bool> abort_flag{false};

  auto fold_ready = [&] {
    while (low_water < branches.size() && done[low_water]) {
      const BranchOutcome& b = outcomes[low_water];
      value = std::max(value, b.best);
      folded_nodes += b.nodes;
      cap_hit = cap_hit || b.cap_hit;
      state_cap_hit = state_cap_hit || b.state_cap_hit;
      ++low_water;
    }
    if (want_checkpoint) save_checkpoint(opts.checkpoint_path, make_checkpoint(low_water));
  };

  auto worker = [&] {
    BranchRunner runner(g, kind, cap, opts.state_cap, &node_counter, opts.abort_after_nodes,
                        &abort_flag);
    while (!abort_flag.load(std::memory_order_relaxed)) {
      std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= branches.size()) break;
      try {
        BranchOutcome out = runner.run(branches[b].first, branches[b].second);
        std::lock_guard<std::mutex> lock(mu);
        outcomes[b] = out;
        done[b] = 1;
        fold_ready();
      } catch (const AbortBranch&) {
        break;  // partial branch discarded; the frontier stays at or below it
      }
    }
  };

  if (!branches.empty()) {
    int jobs = std::min<int>(opts.jobs, static_cast<int>(branches.size() - start_branch));
    jobs = std::max(jobs, 1);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(jobs));
      for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
  }

  bool complete = low_water == branches.size();
  if (want_checkpoint) save_checkpoint(opts.checkpoint_path, make_checkpoint(low_water));
  return finish(complete);
}

struct EnumBranchOutcome {
  std::vector<Sequence> found;
  std::uint64_t nodes = 0;
  bool state_cap_hit = false;
};

class EnumBranchRunner {
 public:
  EnumBranchRunner(const Group& g, int target, std::uint64_t state_cap)
      : group_(g), target_(target), table_(g, state_cap) {}

  EnumBranchOutcome run(int first, int second) {
    outcome_ = EnumBranchOutcome{};
    if (!try_push(first)) return outcome_;
    if (!table_.last_push_hit_identity()) {
      if (try_push(second)) {
        if (!table_.last_push_hit_identity()) {
          if (target_ == 2) {
            outcome_.found.push_back(table_.current_sequence());
          } else {
            dfs(2, second);
          }
        }
        table_.pop();
      }
    }
    table_.pop();
    return outcome_;
  }

 private:
  void dfs(int depth, int min_elem) {
    for (int e = min_elem; e < group_.order(); ++e) {
      if (e == group_.identity()) continue;
      if (!try_push(e)) continue;
      if (!table_.last_push_hit_identity()) {
        if (depth + 1 == target_) {
          outcome_.found.push_back(table_.current_sequence());
        } else {
          dfs(depth + 1, e);
        }
      }
      table_.pop();
    }
  }

  bool try_push(int elem) {
    try {
      table_.push(elem);
    } catch (const StateSpaceCapExceeded&) {
      outcome_.state_cap_hit = true;
      return false;
    }
    ++outcome_.nodes;
    return true;
  }

  const Group& group_;
  int target_;
  ProductTable table_;
  EnumBranchOutcome outcome_;
};

inline Sequence apply_automorphism(const std::vector<int>& f, const Sequence& s) {
  Sequence out;
  for (const auto& [e, c] : s.terms()) out.add(f[static_cast<std::size_t>(e)], c);
  return out;
}

}  // namespace detail

// Longest product-one free sequence: exhaustive depth-first search over
// multisets in canonical order. A node is pruned exactly when the appended
// element makes some sub-multiset product hit the identity; freeness is
// inherited by sub-multisets, so pruning loses nothing.
inline SearchResult small_davenport(const Group& g, const SearchOptions& opts = {}) {
  return detail::run_value_search(g, detail::SearchKind::kSmall, opts);
}

// Longest minimal product-one sequence. Minimality is not hereditary, so
// every multiset up to the group order (the proven upper bound) is tested.
inline SearchResult large_davenport(const Group& g, const SearchOptions& opts = {}) {
  return detail::run_value_search(g, detail::SearchKind::kLarge, opts);
}

// All product-one free multisets of exactly the given length, sorted in
// canonical order.
inline EnumerateResult enumerate_free(const Group& g, int length, const SearchOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  if (length < 0) throw ParamOutOfRange("length must be >= 0");
  if (opts.jobs < 1) throw ParamOutOfRange("jobs must be >= 1");
  EnumerateResult result;
  int order = g.order();
  int id = g.identity();
  auto done = [&] {
    result.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return result;
  };
  if (length == 0) {
    result.sequences.push_back(Sequence{});
    return done();
  }
  std::vector<int> firsts;
  if (opts.symmetry_reduction) {
    for (int r : g.automorphism_orbit_representatives()) {
      if (r != id) firsts.push_back(r);
    }
  } else {
    for (int e = 0; e < order; ++e) {
      if (e != id) firsts.push_back(e);
    }
  }
  if (length == 1) {
    for (int e : firsts) {
      result.sequences.push_back(Sequence::repeated(e, 1));
      ++result.nodes;
    }
  } else {
    std::vector<std::pair<int, int>> branches;
    for (int i : firsts) {
      for (int j = i; j < order; ++j) {
        if (j != id) branches.emplace_back(i, j);
      }
    }
    std::vector<detail::EnumBranchOutcome> outcomes(branches.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      detail::EnumBranchRunner runner(g, length, opts.state_cap);
      while (true) {
        std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= branches.size()) break;
        outcomes[b] = runner.run(branches[b].first, branches[b].second);
      }
    };
    int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(branches.size())));
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
    for (auto& out : outcomes) {
      for (auto& s : out.found) result.sequences.push_back(std::move(s));
      result.nodes += out.nodes;
      if (out.state_cap_hit) result.exhaustive = false;
    }
  }
  if (opts.symmetry_reduction) {
    // A free sequence maps to a free sequence under any automorphism, and
    // every orbit contains a representative whose least element is an orbit
    // representative, so expanding the reduced list recovers the full one.
    auto autos = g.automorphisms();
    std::set<Sequence> all;
    for (const Sequence& s : result.sequences) {
      for (const auto& f : autos) all.insert(detail::apply_automorphism(f, s));
    }
    result.sequences.assign(all.begin(), all.end());
  }
  return done();
}

}  // namespace davlab
