#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <json.hpp>

#include "davlab/errors.hpp"
#include "davlab/group.hpp"
#include "davlab/sequence.hpp"

namespace davlab {

// Text form: whitespace-separated terms x^a*y^b with an optional
// multiplicity suffix [^k], e.g. "x y^2[^4] x^1*y^3". The emitter writes the
// canonical spelling: "1" for the identity, bare "x"/"y" for exponent one,
// parts with exponent zero omitted, and [^k] only for k >= 2.

inline std::string term_to_text(const Group& g, int elem) {
  Element e = g.element_at(elem);
  if (e.a == 0 && e.b == 0) return "1";
  std::string out;
  if (e.a > 0) {
    out += "x";
    if (e.a > 1) out += "^" + std::to_string(e.a);
  }
  if (e.b > 0) {
    if (!out.empty()) out += "*";
    out += "y";
    if (e.b > 1) out += "^" + std::to_string(e.b);
  }
  return out;
}

inline std::string to_text(const Group& g, const Sequence& s) {
  std::string out;
  for (const auto& [elem, count] : s.terms()) {
    if (!out.empty()) out += " ";
    out += term_to_text(g, elem);
    if (count > 1) out += "[^" + std::to_string(count) + "]";
  }
  return out;
}

namespace detail {

inline long parse_uint(std::string_view text, std::size_t& pos, std::string_view what) {
  if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
    throw FormatError("expected " + std::string(what) + " in sequence text");
  }
  long value = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + (text[pos] - '0');
    if (value > (1L << 40)) throw FormatError("numeric overflow in sequence text");
    ++pos;
  }
  return value;
}

}  // namespace detail

// Parses one term of the text form, without the multiplicity suffix.
inline int term_from_text(const Group& g, std::string_view token) {
  std::size_t pos = 0;
  long a = 0, b = 0;
  if (pos < token.size() && token[pos] == '1') {
    ++pos;
  } else {
    if (pos < token.size() && token[pos] == 'x') {
      ++pos;
      a = 1;
      if (pos < token.size() && token[pos] == '^') {
        ++pos;
        a = detail::parse_uint(token, pos, "exponent of x");
      }
      if (pos < token.size() && token[pos] == '*') ++pos;
    }
    if (pos < token.size() && token[pos] == 'y') {
      ++pos;
      b = 1;
      if (pos < token.size() && token[pos] == '^') {
        ++pos;
        b = detail::parse_uint(token, pos, "exponent of y");
      }
    }
  }
  if (pos != token.size()) throw FormatError("bad term '" + std::string(token) + "'");
  if (pos == 0) throw FormatError("empty term");
  const auto& p = g.params();
  return g.index_of(Element{static_cast<int>(a % p.m), static_cast<int>(b % p.n)});
}

inline Sequence sequence_from_text(const Group& g, std::string_view text) {
  Sequence s;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view token = text.substr(start, i - start);
    long count = 1;
    if (auto br = token.find('['); br != std::string_view::npos) {
      std::string_view suffix = token.substr(br);
      token = token.substr(0, br);
      if (suffix.size() < 4 || suffix[1] != '^' || suffix.back() != ']') {
        throw FormatError("bad multiplicity suffix '" + std::string(suffix) + "'");
      }
      std::size_t pos = 2;
      count = detail::parse_uint(suffix, pos, "multiplicity");
      if (pos != suffix.size() - 1) throw FormatError("bad multiplicity suffix");
      if (count < 1) throw FormatError("multiplicity must be >= 1");
    }
    s.add(term_from_text(g, token), static_cast<int>(count));
  }
  return s;
}

// JSON form: {"terms": [[a, b, count], ...]} sorted by linear index.
inline nlohmann::ordered_json sequence_to_json(const Group& g, const Sequence& s) {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [elem, count] : s.terms()) {
    Element e = g.element_at(elem);
    terms.push_back({e.a, e.b, count});
  }
  return nlohmann::ordered_json{{"terms", std::move(terms)}};
}

inline Sequence sequence_from_json(const Group& g, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    throw FormatError("sequence JSON must be {\"terms\": [[a, b, count], ...]}");
  }
  Sequence s;
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
        !t[1].is_number_integer() || !t[2].is_number_integer()) {
      throw FormatError("sequence JSON term must be [a, b, count]");
    }
    int a = t[0].get<int>(), b = t[1].get<int>(), count = t[2].get<int>();
    if (count < 1) throw FormatError("sequence JSON count must be >= 1");
    s.add(g.index_of(Element{a, b}), count);
  }
  return s;
}

}  // namespace davlab
