#pragma once

#include "group.hpp"

#include <cstdlib>
#include <optional>
#include <sstream>

namespace tlab {

namespace detail {

inline std::vector<std::string> default_generator_names(std::size_t n) {
  static const char* const kNames[] = {"a", "b", "c", "d", "f", "g", "h", "k"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < 8 ? std::string(kNames[i]) : "x" + std::to_string(i));
  }
  return out;
}

inline void check_generator_names(const std::vector<std::string>& names) {
  if (names.empty()) {
    throw ConfigError("at least one generator is required");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty() || names[i] == "e" || names[i].find_first_of("^*.() ,") != std::string::npos) {
      throw ConfigError("invalid generator name '" + names[i] + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names[i] == names[j]) {
        throw ConfigError("duplicate generator name '" + names[i] + "'");
      }
    }
  }
}

/// Reads a token as a product of generator powers: "a^3", "ab", "aB" (capital = inverse
/// when every name is a single lowercase letter).
inline std::vector<Letter> parse_generator_token(std::string_view token,
                                                 const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::int64_t e = 0;
    if (parse_power(token, names[i], e)) {
      if (e == 0) {
        return {};
      }
      return {Letter{static_cast<std::int32_t>(i), e}};
    }
  }
  bool single = std::all_of(names.begin(), names.end(), [](const std::string& s) {
    return s.size() == 1 && std::islower(static_cast<unsigned char>(s[0]));
  });
  if (single && !token.empty()) {
    std::vector<Letter> out;
    for (char c : token) {
      bool found = false;
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (c == names[i][0]) {
          out.push_back(Letter{static_cast<std::int32_t>(i), 1});
          found = true;
        } else if (c == std::toupper(static_cast<unsigned char>(names[i][0]))) {
          out.push_back(Letter{static_cast<std::int32_t>(i), -1});
          found = true;
        }
      }
      if (!found) {
        throw ConfigError("letter '" + std::string(1, c) + "' is not in the alphabet");
      }
    }
    return out;
  }
  throw ConfigError("token '" + std::string(token) + "' is not in the alphabet");
}

inline void append_expanded_ranks(const Letter& l, std::vector<std::int64_t>& key) {
  std::int64_t rank = 2 * static_cast<std::int64_t>(l.tag) + (l.value < 0 ? 1 : 0);
  for (std::int64_t i = 0; i < std::llabs(l.value); ++i) {
    key.push_back(rank);
  }
}

}  // namespace detail

/// Free group on n named generators. Canonical words are freely reduced syllable lists
/// (generator index, nonzero exponent) with distinct neighbouring generators.
class FreeGroup final : public Group {
 public:
  explicit FreeGroup(std::size_t rank, std::vector<std::string> names = {})
      : names_(names.empty() ? detail::default_generator_names(rank) : std::move(names)) {
    detail::check_generator_names(names_);
    if (names_.size() != rank) {
      throw ConfigError("free group: generator count does not match rank");
    }
    set_name("F" + std::to_string(rank));
    std::vector<Element> gens;
    for (std::size_t i = 0; i < rank; ++i) {
      gens.push_back(generator(i));
    }
    set_generators(gens);
  }

  GroupKind kind() const override { return GroupKind::free_group; }
  std::size_t rank() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  Element generator(std::size_t i, std::int64_t exponent = 1) const {
    if (exponent == 0) {
      return {};
    }
    return Element({Letter{static_cast<std::int32_t>(i), exponent}});
  }

  Element multiply(const Element& x, const Element& y) const override {
    std::vector<Letter> w = x.word();
    for (const Letter& s : y.word()) {
      push(w, s);
    }
    return Element(std::move(w));
  }

  Element invert(const Element& x) const override {
    std::vector<Letter> w(x.word().rbegin(), x.word().rend());
    for (Letter& l : w) {
      l.value = -l.value;
    }
    return Element(std::move(w));
  }

  std::size_t word_length(const Element& x) const override {
    std::size_t n = 0;
    for (const Letter& l : x.word()) {
      n += static_cast<std::size_t>(std::llabs(l.value));
    }
    return n;
  }

  /// Generator index and sign of the first letter of the reduced word, or nothing for e.
  std::optional<std::pair<std::size_t, int>> first_letter(const Element& x) const {
    if (x.is_identity()) {
      return std::nullopt;
    }
    const Letter& l = x.word().front();
    return std::make_pair(static_cast<std::size_t>(l.tag), l.value > 0 ? 1 : -1);
  }

  std::optional<std::pair<std::size_t, int>> last_letter(const Element& x) const {
    if (x.is_identity()) {
      return std::nullopt;
    }
    const Letter& l = x.word().back();
    return std::make_pair(static_cast<std::size_t>(l.tag), l.value > 0 ? 1 : -1);
  }

  std::string format(const Element& x) const override {
    if (x.is_identity()) {
      return "e";
    }
    std::string out;
    for (const Letter& l : x.word()) {
      if (!out.empty()) {
        out += "*";
      }
      out += detail::format_power(names_[static_cast<std::size_t>(l.tag)], l.value);
    }
    return out;
  }

  void sort_key(const Element& x, std::vector<std::int64_t>& key) const override {
    for (const Letter& l : x.word()) {
      detail::append_expanded_ranks(l, key);
    }
  }

  nlohmann::json to_json() const override {
    return {{"kind", "free"}, {"generators", names_}};
  }

 protected:
  Element parse_token(std::string_view token) const override {
    if (token == "e") {
      return {};
    }
    std::vector<Letter> w;
    for (const Letter& l : detail::parse_generator_token(token, names_)) {
      push(w, l);
    }
    return Element(std::move(w));
  }

  std::size_t length_upper_bound(const Element& x) const override { return word_length(x); }

 private:
  static void push(std::vector<Letter>& w, const Letter& s) {
    if (!w.empty() && w.back().tag == s.tag) {
      w.back().value += s.value;
      if (w.back().value == 0) {
        w.pop_back();
      }
    } else {
      w.push_back(s);
    }
  }

  std::vector<std::string> names_;
};

/// Free abelian group Z^n. Canonical words list (coordinate, nonzero value) by coordinate.
/// Elements print as integers (n = 1) or integer tuples.
class FreeAbelianGroup final : public Group {
 public:
  explicit FreeAbelianGroup(std::size_t rank, std::vector<std::string> names = {})
      : names_(names.empty() ? detail::default_generator_names(rank) : std::move(names)) {
    detail::check_generator_names(names_);
    if (names_.size() != rank) {
      throw ConfigError("free abelian group: generator count does not match rank");
    }
    set_name(rank == 1 ? "Z" : "Z" + std::to_string(rank));
    std::vector<Element> gens;
    for (std::size_t i = 0; i < rank; ++i) {
      std::vector<std::int64_t> c(rank, 0);
      c[i] = 1;
      gens.push_back(from_coordinates(c));
    }
    set_generators(gens);
  }

  GroupKind kind() const override { return GroupKind::free_abelian; }
  std::size_t rank() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  Element from_coordinates(const std::vector<std::int64_t>& c) const {
    std::vector<Letter> w;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0) {
        w.push_back(Letter{static_cast<std::int32_t>(i), c[i]});
      }
    }
    return Element(std::move(w));
  }

  Element integer(std::int64_t v) const { return from_coordinates({v}); }

  std::vector<std::int64_t> coordinates(const Element& x) const {
    std::vector<std::int64_t> c(rank(), 0);
    for (const Letter& l : x.word()) {
      c[static_cast<std::size_t>(l.tag)] = l.value;
    }
    return c;
  }

  std::int64_t coordinate(const Element& x, std::size_t i) const {
    for (const Letter& l : x.word()) {
      if (static_cast<std::size_t>(l.tag) == i) {
        return l.value;
      }
    }
    return 0;
  }

  Element multiply(const Element& x, const Element& y) const override {
    std::vector<std::int64_t> c = coordinates(x);
    for (const Letter& l : y.word()) {
      c[static_cast<std::size_t>(l.tag)] += l.value;
    }
    return from_coordinates(c);
  }

  Element invert(const Element& x) const override {
    std::vector<Letter> w = x.word();
    for (Letter& l : w) {
      l.value = -l.value;
    }
    return Element(std::move(w));
  }

  std::size_t word_length(const Element& x) const override {
    std::size_t n = 0;
    for (const Letter& l : x.word()) {
      n += static_cast<std::size_t>(std::llabs(l.value));
    }
    return n;
  }

  std::string format(const Element& x) const override {
    std::vector<std::int64_t> c = coordinates(x);
    if (c.size() == 1) {
      return std::to_string(c[0]);
    }
    std::string out = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      out += (i ? "," : "") + std::to_string(c[i]);
    }
    return out + ")";
  }

  void sort_key(const Element& x, std::vector<std::int64_t>& key) const override {
    for (const Letter& l : x.word()) {
      detail::append_expanded_ranks(l, key);
    }
  }

  nlohmann::json to_json() const override {
    return {{"kind", "free-abelian"}, {"generators", names_}};
  }

 protected:
  Element parse_token(std::string_view token) const override {
    if (token == "e") {
      return {};
    }
    std::string t(token);
    if (!t.empty() && t.front() == '(' && t.back() == ')') {
      std::vector<std::int64_t> c;
      std::stringstream ss(t.substr(1, t.size() - 2));
      std::string part;
      while (std::getline(ss, part, ',')) {
        c.push_back(parse_int(part));
      }
      if (c.size() != rank()) {
        throw ConfigError("tuple '" + t + "' has the wrong number of coordinates");
      }
      return from_coordinates(c);
    }
    if (rank() == 1 && !t.empty() &&
        (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '-' || t[0] == '+')) {
      return integer(parse_int(t));
    }
    Element acc;
    for (const Letter& l : detail::parse_generator_token(token, names_)) {
      acc = multiply(acc, Element({l}));
    }
    return acc;
  }

  std::size_t length_upper_bound(const Element& x) const override { return word_length(x); }

 private:
  static std::int64_t parse_int(const std::string& s) {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError("malformed integer '" + s + "'");
    }
    if (pos != s.size()) {
      throw ConfigError("malformed integer '" + s + "'");
    }
    return v;
  }

  std::vector<std::string> names_;
};

}  // namespace tlab
