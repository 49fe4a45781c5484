#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "davlab/errors.hpp"
#include "davlab/group.hpp"
#include "davlab/oracles.hpp"
#include "davlab/search.hpp"
#include "davlab/sequence_io.hpp"
#include "davlab/trials.hpp"
#include "davlab/version.hpp"

namespace davlab {

using ordered_json = nlohmann::ordered_json;

inline ordered_json group_summary_json(const Group& g) {
  const auto& p = g.params();
  ordered_json j;
  j["m"] = p.m;
  j["n"] = p.n;
  j["s"] = p.s;
  j["order"] = g.order();
  j["star"] = star_condition(p);
  j["cyclic"] = g.is_cyclic();
  j["abelian"] = g.is_abelian();
  ordered_json hist = ordered_json::object();
  for (const auto& [ord, count] : g.element_order_histogram()) {
    hist[std::to_string(ord)] = count;
  }
  j["element_order_histogram"] = hist;
  j["normal_subgroup_order"] = p.n;
  j["quotient_order"] = p.m;
  return j;
}

// Payload for the small/large searches. Node counts and timings go to
// stderr, not into the payload, so identical results stay byte-identical.
inline ordered_json search_payload_json(const Group& g, const char* value_key,
                                        const SearchResult& r) {
  const auto& p = g.params();
  ordered_json j;
  j["m"] = p.m;
  j["n"] = p.n;
  j["s"] = p.s;
  j["order"] = g.order();
  j["star"] = star_condition(p);
  j[value_key] = r.value;
  j["witness"] = to_text(g, r.witness);
  j["exhaustive"] = r.exhaustive;
  return j;
}

inline ordered_json sweep_entry_json(const SweepEntry& e) {
  ordered_json j;
  j["m"] = e.params.m;
  j["n"] = e.params.n;
  j["s"] = e.params.s;
  j["star"] = e.star;
  j["order"] = e.order;
  j["d_computed"] = e.d_computed;
  j["d_predicted"] = e.d_predicted;
  j["match"] = e.match;
  if (e.inverse_ok) {
    j["inverse_ok"] = *e.inverse_ok;
  } else {
    j["inverse_ok"] = nullptr;
  }
  j["nodes"] = e.nodes;
  j["ms"] = e.millis;
  return j;
}

inline ordered_json trial_stats_json(const TrialStats& st) {
  ordered_json j;
  j["lemma"] = st.name;
  j["requested"] = st.requested;
  j["satisfied"] = st.satisfied;
  j["rejected"] = st.rejected;
  j["failures"] = st.failures;
  j["seed"] = st.seed;
  return j;
}

// -------------------------------------------------------------------------
// JSON-lines result cache: a one-line versioned header, then one record per
// (m, n, s) and engine version holding the computed invariant values. A
// cached exhaustive value short-circuits the search; the witness is
// recomputed deterministically, so replayed payloads are byte-identical.
// -------------------------------------------------------------------------

struct CachedValue {
  int value = 0;
  bool exhaustive = false;
};

class ResultCache {
 public:
  explicit ResultCache(std::string path) : path_(std::move(path)) { load(); }

  std::optional<CachedValue> find(const MetacyclicParams& p, const std::string& kind) const {
    auto it = records_.find(key(p));
    if (it == records_.end()) return std::nullopt;
    const ordered_json& rec = it->second;
    const char* vk = kind == "small" ? "d" : "D";
    const char* ek = kind == "small" ? "d_exhaustive" : "D_exhaustive";
    if (!rec.contains(vk) || rec[vk].is_null()) return std::nullopt;
    return CachedValue{rec[vk].get<int>(), rec[ek].get<bool>()};
  }

  void put(const MetacyclicParams& p, const std::string& kind, int value, bool exhaustive) {
    auto it = records_.find(key(p));
    ordered_json rec;
    if (it != records_.end()) {
      rec = it->second;
    } else {
      rec["m"] = p.m;
      rec["n"] = p.n;
      rec["s"] = p.s;
      rec["d"] = nullptr;
      rec["d_exhaustive"] = nullptr;
      rec["D"] = nullptr;
      rec["D_exhaustive"] = nullptr;
      rec["engine"] = std::string(kEngineVersion);
      rec["ts"] = "";
    }
    rec[kind == "small" ? "d" : "D"] = value;
    rec[kind == "small" ? "d_exhaustive" : "D_exhaustive"] = exhaustive;
    rec["ts"] = timestamp();
    records_[key(p)] = std::move(rec);
    save();
  }

 private:
  static std::string key(const MetacyclicParams& p) {
    return std::to_string(p.m) + "," + std::to_string(p.n) + "," + std::to_string(p.s) + "," +
           std::string(kEngineVersion);
  }

  static std::string timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  void load() {
    std::ifstream in(path_);
    if (!in) return;  // absent file: start empty
    std::string line;
    if (!std::getline(in, line)) return;  // empty file: start empty
    ordered_json header = parse_line(line, "cache header");
    if (!header.contains("format") || header["format"] != "davlab-cache") {
      throw FormatError("not a davlab cache file: " + path_);
    }
    if (!header.contains("version") || header["version"] != 1) {
      throw FormatError("unsupported cache version in " + path_);
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ordered_json rec = parse_line(line, "cache record");
      for (const char* field :
           {"m", "n", "s", "d", "d_exhaustive", "D", "D_exhaustive", "engine", "ts"}) {
        if (!rec.contains(field)) {
          throw FormatError("cache record missing field " + std::string(field));
        }
      }
      if (rec["engine"].get<std::string>() != kEngineVersion) {
        other_engine_lines_.push_back(line);  // preserved verbatim, never consulted
        continue;
      }
      MetacyclicParams p{rec["m"].get<std::int64_t>(), rec["n"].get<std::int64_t>(),
                         rec["s"].get<std::int64_t>()};
      records_[key(p)] = rec;
    }
  }

  static ordered_json parse_line(const std::string& line, const char* what) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError(std::string("malformed ") + what);
    return j;
  }

  void save() const {
    std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error("cannot write cache file " + tmp);
      out << R"({"format":"davlab-cache","version":1})" << "\n";
      for (const std::string& line : other_engine_lines_) out << line << "\n";
      for (const auto& [k, rec] : records_) out << rec.dump() << "\n";
    }
    std::filesystem::rename(tmp, path_);
  }

  std::string path_;
  std::map<std::string, ordered_json> records_;
  std::vector<std::string> other_engine_lines_;
};

}  // namespace davlab
