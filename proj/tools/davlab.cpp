#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "davlab/group.hpp"
#include "davlab/oracles.hpp"
#include "davlab/reporting.hpp"
#include "davlab/search.hpp"
#include "davlab/sequence_io.hpp"
#include "davlab/trials.hpp"

namespace {

using namespace davlab;

constexpr int kExitOk = 0;
constexpr int kExitOracleFailure = 1;  // a theorem or lemma check failed
constexpr int kExitUsage = 2;
constexpr int kExitCapExceeded = 3;
constexpr int kExitCacheMismatch = 4;

struct Flags {
  std::int64_t m = 0, n = 0, s = 0;
  int max_order = 0;
  int length = -1;
  int jobs = 1;
  bool symmetry = false;
  int max_length = 0;
  std::uint64_t state_cap = kDefaultStateCap;
  std::string checkpoint;
  std::string cache;
  bool recompute = false;
  bool pretty = false;
  bool strict = false;
  int trials = 1000;
  std::uint64_t seed = 12345;
  bool mutate_prediction = false;
  std::uint64_t abort_after_nodes = 0;
};

SearchOptions search_options(const Flags& f) {
  SearchOptions o;
  o.max_length = f.max_length;
  o.state_cap = f.state_cap;
  o.symmetry_reduction = f.symmetry;
  o.jobs = f.jobs;
  o.checkpoint_path = f.checkpoint;
  o.abort_after_nodes = f.abort_after_nodes;
  return o;
}

void add_group_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--m", f.m, "x-order of the presentation")->required();
  cmd->add_option("--n", f.n, "y-order of the presentation")->required();
  cmd->add_option("--s", f.s, "conjugation exponent")->required();
}

void add_search_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_flag("--symmetry", f.symmetry, "restrict first elements to automorphism orbits");
  cmd->add_option("--max-length", f.max_length, "cap on sequence length (0 = group order)");
  cmd->add_option("--state-cap", f.state_cap, "cap on product-table cells");
  cmd->add_option("--abort-after-nodes", f.abort_after_nodes, "stop after visiting this many nodes")
      ->group("");
}

int cmd_group(const Flags& f) {
  Group g = Group::metacyclic({f.m, f.n, f.s});
  ordered_json j = group_summary_json(g);
  if (f.pretty) {
    std::cout << "G(" << f.m << "," << f.n << "," << f.s << "): order " << j["order"]
              << ", star " << (j["star"].get<bool>() ? "yes" : "no") << ", cyclic "
              << (j["cyclic"].get<bool>() ? "yes" : "no") << ", abelian "
              << (j["abelian"].get<bool>() ? "yes" : "no") << "\n";
    std::cout << "normal subgroup order " << f.n << ", quotient order " << f.m << "\n";
    std::cout << "element orders:";
    for (const auto& [ord, count] : j["element_order_histogram"].items()) {
      std::cout << " " << ord << "x" << count.get<int>();
    }
    std::cout << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return kExitOk;
}

int run_search_command(const Flags& f, const std::string& kind) {
  Group g = Group::metacyclic({f.m, f.n, f.s});
  const char* value_key = kind == "small" ? "d_computed" : "D_computed";
  std::optional<ResultCache> cache;
  if (!f.cache.empty()) cache.emplace(f.cache);

  auto probe_witness = [&](int value) {
    auto w = kind == "small" ? detail::lex_min_free_of_length(g, value, f.state_cap)
                             : detail::lex_min_minimal_of_length(g, value, f.state_cap);
    if (!w) throw Error("cached value has no witness; cache is inconsistent");
    return *w;
  };

  SearchResult r;
  bool from_cache = false;
  if (cache && !f.recompute) {
    if (auto hit = cache->find(g.params(), kind); hit && hit->exhaustive) {
      r.value = hit->value;
      r.witness = probe_witness(hit->value);
      r.exhaustive = true;
      from_cache = true;
    }
  }
  if (!from_cache) {
    r = kind == "small" ? small_davenport(g, search_options(f))
                        : large_davenport(g, search_options(f));
    if (cache) {
      if (auto prior = cache->find(g.params(), kind);
          prior && prior->exhaustive && r.exhaustive && prior->value != r.value) {
        std::cerr << "cache mismatch for (" << f.m << "," << f.n << "," << f.s << ") " << kind
                  << ": cached=" << prior->value << " recomputed=" << r.value << " engine "
                  << kEngineVersion << "\n";
        std::cerr << "cached witness: " << to_text(g, probe_witness(prior->value)) << "\n";
        std::cerr << "recomputed witness: " << to_text(g, r.witness) << "\n";
        return kExitCacheMismatch;
      }
      cache->put(g.params(), kind, r.value, r.exhaustive);
    }
  }

  ordered_json payload = search_payload_json(g, value_key, r);
  if (f.pretty) {
    std::cout << (kind == "small" ? "d" : "D") << "(G(" << f.m << "," << f.n << "," << f.s
              << ")) = " << r.value << (r.exhaustive ? "" : " (lower bound)")
              << ", witness: " << to_text(g, r.witness) << "\n";
  } else {
    std::cout << payload.dump() << "\n";
  }
  std::cerr << "nodes=" << r.nodes << " ms=" << r.millis << (from_cache ? " cache=hit" : "")
            << "\n";
  return r.exhaustive ? kExitOk : kExitCapExceeded;
}

int cmd_enumerate(const Flags& f) {
  if (f.length < 0) throw ParamOutOfRange("--length is required and must be >= 0");
  Group g = Group::metacyclic({f.m, f.n, f.s});
  EnumerateResult r = enumerate_free(g, f.length, search_options(f));
  for (const Sequence& s : r.sequences) {
    if (f.pretty) {
      std::cout << to_text(g, s) << "\n";
    } else {
      ordered_json j;
      j["sequence"] = to_text(g, s);
      std::cout << j.dump() << "\n";
    }
  }
  std::cerr << "count=" << r.sequences.size() << " nodes=" << r.nodes << " ms=" << r.millis
            << "\n";
  return r.exhaustive ? kExitOk : kExitCapExceeded;
}

void print_sweep_entry(const Flags& f, const SweepEntry& e) {
  if (f.pretty) {
    std::cout << "G(" << e.params.m << "," << e.params.n << "," << e.params.s << ") order "
              << e.order << ": d=" << e.d_computed << " predicted=" << e.d_predicted
              << (e.match ? " match" : " MISMATCH");
    if (e.inverse_ok) std::cout << (*e.inverse_ok ? " inverse-ok" : " INVERSE-FAIL");
    if (!e.exhaustive) std::cout << " (search not exhaustive)";
    std::cout << "\n";
  } else {
    std::cout << sweep_entry_json(e).dump() << "\n";
  }
}

int cmd_verify(const Flags& f, bool single) {
  std::vector<SweepEntry> entries;
  SearchOptions opts = search_options(f);
  if (single) {
    Group g = Group::metacyclic({f.m, f.n, f.s});
    entries.push_back(verify_one(g, opts));
  } else {
    entries = verify_conjecture_sweep(f.max_order, opts);
  }
  bool falsified = false;
  bool capped = false;
  for (SweepEntry& e : entries) {
    if (f.mutate_prediction) {
      e.d_predicted += 1;  // deliberate corruption: the oracle must catch it
      e.match = e.d_computed == e.d_predicted;
    }
    print_sweep_entry(f, e);
    if (e.star) {
      if (e.exhaustive && !e.match) falsified = true;
      if (e.exhaustive && e.inverse_ok && !*e.inverse_ok) falsified = true;
      if (!e.exhaustive) {
        if (e.d_computed > e.d_predicted) falsified = true;  // a long free sequence exists
        capped = true;
      }
    }
  }
  if (falsified) return kExitOracleFailure;
  if (capped) return kExitCapExceeded;
  return kExitOk;
}

int cmd_lemmas(const Flags& f) {
  if (f.trials < 1) throw ParamOutOfRange("--trials must be >= 1");
  if (f.strict) {
    run_curated_fixtures();  // throws HypothesisViolated if the engine regressed
  }
  int failures = 0;
  for (const TrialStats& st : run_all_trials(f.trials, f.seed)) {
    if (f.pretty) {
      std::cout << st.name << ": " << st.satisfied << " satisfied, " << st.rejected
                << " rejected, " << st.failures << " failures (seed " << st.seed << ")\n";
    } else {
      std::cout << trial_stats_json(st).dump() << "\n";
    }
    failures += st.failures;
  }
  return failures == 0 ? kExitOk : kExitOracleFailure;
}

int classify_exception(const std::exception& e) {
  if (dynamic_cast<const StateSpaceCapExceeded*>(&e) != nullptr) return kExitCapExceeded;
  if (dynamic_cast<const OrderCapExceeded*>(&e) != nullptr) return kExitCapExceeded;
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact product-one (zero-sum) computations over metacyclic groups"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* c_group = app.add_subcommand("group", "print a group summary");
  add_group_flags(c_group, f);
  c_group->add_flag("--pretty", f.pretty, "human-readable output");

  CLI::App* c_small = app.add_subcommand("small", "longest product-one free sequence (d)");
  add_group_flags(c_small, f);
  add_search_flags(c_small, f);
  c_small->add_option("--checkpoint", f.checkpoint, "checkpoint file for resumable search");
  c_small->add_option("--cache", f.cache, "result cache file");
  c_small->add_flag("--recompute", f.recompute, "recompute and compare against the cache");
  c_small->add_flag("--pretty", f.pretty, "human-readable output");

  CLI::App* c_large = app.add_subcommand("large", "longest minimal product-one sequence (D)");
  add_group_flags(c_large, f);
  add_search_flags(c_large, f);
  c_large->add_option("--checkpoint", f.checkpoint, "checkpoint file for resumable search");
  c_large->add_option("--cache", f.cache, "result cache file");
  c_large->add_flag("--recompute", f.recompute, "recompute and compare against the cache");
  c_large->add_flag("--pretty", f.pretty, "human-readable output");

  CLI::App* c_enum = app.add_subcommand("enumerate", "all product-one free sequences of a length");
  add_group_flags(c_enum, f);
  add_search_flags(c_enum, f);
  c_enum->add_option("--length", f.length, "sequence length")->required();
  c_enum->add_flag("--pretty", f.pretty, "plain text sequences");

  CLI::App* c_verify = app.add_subcommand("verify", "compare searched d with m+n-2");
  c_verify->add_option("--m", f.m, "x-order of the presentation");
  c_verify->add_option("--n", f.n, "y-order of the presentation");
  c_verify->add_option("--s", f.s, "conjugation exponent");
  c_verify->add_option("--max-order", f.max_order, "sweep every star presentation up to this order");
  add_search_flags(c_verify, f);
  c_verify->add_flag("--pretty", f.pretty, "human-readable output");
  c_verify->add_flag("--mutate-prediction", f.mutate_prediction,
                     "corrupt the predicted value (self-test of the failure path)")
      ->group("");

  CLI::App* c_lemmas = app.add_subcommand("lemmas", "randomized lemma property trials");
  c_lemmas->add_option("--trials", f.trials, "hypothesis-satisfying instances per lemma");
  c_lemmas->add_option("--seed", f.seed, "base random seed");
  c_lemmas->add_flag("--strict", f.strict, "also run the curated fixtures through strict checkers");
  c_lemmas->add_flag("--pretty", f.pretty, "human-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(c_group)) return cmd_group(f);
    if (app.got_subcommand(c_small)) return run_search_command(f, "small");
    if (app.got_subcommand(c_large)) return run_search_command(f, "large");
    if (app.got_subcommand(c_enum)) return cmd_enumerate(f);
    if (app.got_subcommand(c_verify)) {
      bool single = c_verify->count("--m") > 0;
      if (single && (c_verify->count("--n") == 0 || c_verify->count("--s") == 0)) {
        throw ParamOutOfRange("verify needs either --m --n --s or --max-order");
      }
      if (!single && f.max_order < 1) {
        throw ParamOutOfRange("verify needs either --m --n --s or --max-order");
      }
      return cmd_verify(f, single);
    }
    if (app.got_subcommand(c_lemmas)) return cmd_lemmas(f);
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return classify_exception(e);
  }
  return kExitUsage;
}
