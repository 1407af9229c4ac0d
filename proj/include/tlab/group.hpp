#pragma once

#include "element.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tlab {

enum class GroupKind { free_group, free_abelian, finite, amalgam, hnn };

inline const char* to_string(GroupKind k) {
  switch (k) {
    case GroupKind::free_group: return "free";
    case GroupKind::free_abelian: return "free-abelian";
    case GroupKind::finite: return "finite";
    case GroupKind::amalgam: return "amalgam";
    case GroupKind::hnn: return "hnn";
  }
  return "unknown";
}

/// Upper bound on the number of elements any single ball may hold.
/// Read from TRANSLATION_LAB_MAX_BALL; defaults to four million.
inline std::size_t max_ball_size() {
  if (const char* env = std::getenv("TRANSLATION_LAB_MAX_BALL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) {
      return static_cast<std::size_t>(v);
    }
  }
  return 4'000'000;
}

namespace detail {

/// Splits a word written as tokens separated by '*', '.', or whitespace.
inline std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '*' || c == '.' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    out.push_back(cur);
  }
  return out;
}

/// Parses "name", "name^k" against a given generator name; returns false on mismatch.
inline bool parse_power(std::string_view token, std::string_view name, std::int64_t& exponent) {
  if (token.substr(0, name.size()) != name) {
    return false;
  }
  std::string_view rest = token.substr(name.size());
  if (rest.empty()) {
    exponent = 1;
    return true;
  }
  if (rest.front() != '^' || rest.size() < 2) {
    return false;
  }
  rest.remove_prefix(1);
  std::size_t i = 0;
  bool neg = false;
  if (rest[0] == '-' || rest[0] == '+') {
    neg = rest[0] == '-';
    i = 1;
  }
  if (i >= rest.size()) {
    return false;
  }
  std::int64_t v = 0;
  for (; i < rest.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(rest[i]))) {
      return false;
    }
    v = v * 10 + (rest[i] - '0');
  }
  exponent = neg ? -v : v;
  return true;
}

inline std::string format_power(const std::string& name, std::int64_t e) {
  if (e == 1) {
    return name;
  }
  return name + "^" + std::to_string(e);
}

}  // namespace detail

/// A finitely generated group with solvable word problem, presented through canonical forms.
///
/// Subclasses supply multiplication, inversion and printing; the base class owns the
/// breadth-first ball cache that defines the word metric of the generating set.
class Group {
 public:
  virtual ~Group() = default;

  virtual GroupKind kind() const = 0;
  virtual Element multiply(const Element& x, const Element& y) const = 0;
  virtual Element invert(const Element& x) const = 0;
  virtual std::string format(const Element& x) const = 0;
  virtual nlohmann::json to_json() const = 0;

  /// Appends the shortlex key of x: the letter ranks of its canonical word.
  virtual void sort_key(const Element& x, std::vector<std::int64_t>& key) const = 0;

  /// Length of a shortest word in the generators equal to x.
  virtual std::size_t word_length(const Element& x) const { return bfs_length(x); }

  /// Generating set closed under inversion; each generator is followed by its inverse
  /// unless it is an involution or already listed.
  const std::vector<Element>& generators() const noexcept { return generators_; }

  const std::string& name() const noexcept { return name_; }

  Element identity() const { return Element{}; }

  /// Parses a word of tokens and returns its canonical form.
  Element parse(std::string_view text) const {
    Element acc;
    for (const std::string& tok : detail::split_tokens(text)) {
      acc = multiply(acc, parse_token(tok));
    }
    return acc;
  }

  std::size_t distance(const Element& x, const Element& y) const {
    return word_length(multiply(invert(x), y));
  }

  Element power(const Element& x, std::int64_t k) const {
    Element base = k < 0 ? invert(x) : x;
    std::uint64_t n = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
    Element acc;
    while (n > 0) {
      if (n & 1U) {
        acc = multiply(acc, base);
      }
      n >>= 1U;
      if (n > 0) {
        base = multiply(base, base);
      }
    }
    return acc;
  }

  /// Shortlex comparison: word length first, then the letter ranks of the canonical word.
  int compare(const Element& x, const Element& y) const {
    std::size_t lx = word_length(x);
    std::size_t ly = word_length(y);
    if (lx != ly) {
      return lx < ly ? -1 : 1;
    }
    return compare_keys(x, y);
  }

  bool less(const Element& x, const Element& y) const { return compare(x, y) < 0; }

  void sort_shortlex(std::vector<Element>& xs) const {
    std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> keys(xs.size());
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      keys[i].first = word_length(xs[i]);
      sort_key(xs[i], keys[i].second);
      order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<Element> sorted;
    sorted.reserve(xs.size());
    for (std::size_t i : order) {
      sorted.push_back(std::move(xs[i]));
    }
    xs = std::move(sorted);
  }

  /// All elements of word length at most r, in shortlex order.
  std::vector<Element> enumerate_ball(std::size_t r) const {
    std::lock_guard<std::mutex> lock(mutex_);
    extend_to(r);
    std::vector<Element> out;
    for (std::size_t k = 0; k <= r && k < spheres_.size(); ++k) {
      out.insert(out.end(), spheres_[k].begin(), spheres_[k].end());
    }
    return out;
  }

  /// Elements of word length exactly r, in shortlex order.
  std::vector<Element> enumerate_sphere(std::size_t r) const {
    std::lock_guard<std::mutex> lock(mutex_);
    extend_to(r);
    return r < spheres_.size() ? spheres_[r] : std::vector<Element>{};
  }

 protected:
  Group() = default;

  /// Parses one token (a generator power or a named element) to its canonical form.
  virtual Element parse_token(std::string_view token) const = 0;

  /// Any length known to be at least word_length(x); bounds the breadth-first search.
  virtual std::size_t length_upper_bound(const Element& x) const = 0;

  void set_name(std::string n) { name_ = std::move(n); }

  /// Installs the generating set; inverses are appended after each generator as needed.
  void set_generators(const std::vector<Element>& gens) {
    generators_.clear();
    auto add = [&](const Element& g) {
      if (g.is_identity()) {
        return;
      }
      if (std::find(generators_.begin(), generators_.end(), g) == generators_.end()) {
        generators_.push_back(g);
      }
    };
    for (const Element& g : gens) {
      add(g);
      add(invert(g));
    }
  }

  std::size_t bfs_length(const Element& x) const {
    if (x.is_identity()) {
      return 0;
    }
    std::size_t bound = length_upper_bound(x);
    std::lock_guard<std::mutex> lock(mutex_);
    for (;;) {
      auto it = dist_.find(x);
      if (it != dist_.end()) {
        return it->second;
      }
      if (spheres_.size() > bound) {
        throw std::logic_error("element " + format(x) + " not reached within its length bound");
      }
      extend_to(spheres_.size());
    }
  }

 private:
  int compare_keys(const Element& x, const Element& y) const {
    std::vector<std::int64_t> kx;
    std::vector<std::int64_t> ky;
    sort_key(x, kx);
    sort_key(y, ky);
    if (kx == ky) {
      return 0;
    }
    return kx < ky ? -1 : 1;
  }

  // Caller holds mutex_.
  void extend_to(std::size_t r) const {
    if (spheres_.empty()) {
      spheres_.push_back({Element{}});
      dist_.emplace(Element{}, 0);
    }
    const std::size_t cap = max_ball_size();
    while (spheres_.size() <= r) {
      const std::size_t k = spheres_.size();
      std::vector<Element> next;
      for (const Element& x : spheres_.back()) {
        for (const Element& a : generators_) {
          Element y = multiply(x, a);
          if (dist_.emplace(y, k).second) {
            next.push_back(std::move(y));
            if (dist_.size() > cap) {
              throw ResourceCapError("ball of radius " + std::to_string(k) + " in " + name_ +
                                     " exceeds TRANSLATION_LAB_MAX_BALL=" + std::to_string(cap));
            }
          }
        }
      }
      std::vector<std::pair<std::vector<std::int64_t>, std::size_t>> keyed(next.size());
      for (std::size_t i = 0; i < next.size(); ++i) {
        sort_key(next[i], keyed[i].first);
        keyed[i].second = i;
      }
      std::sort(keyed.begin(), keyed.end());
      std::vector<Element> sorted;
      sorted.reserve(next.size());
      for (auto& kv : keyed) {
        sorted.push_back(std::move(next[kv.second]));
      }
      spheres_.push_back(std::move(sorted));
    }
  }

  std::string name_;
  std::vector<Element> generators_;
  mutable std::mutex mutex_;
  mutable std::vector<std::vector<Element>> spheres_;
  mutable std::unordered_map<Element, std::size_t, ElementHash> dist_;
};

using GroupPtr = std::shared_ptr<const Group>;

}  // namespace tlab
