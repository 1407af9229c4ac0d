#pragma once

#include "subspace.hpp"

namespace tlab {

/// A track (g, F): total product g and visited-suffix set F, stored shortlex-sorted and
/// deduplicated so equal tracks compare equal. Invariant: e and g belong to F.
struct Track {
  Element g;
  std::vector<Element> F{Element{}};

  friend bool operator==(const Track&, const Track&) = default;
};

inline Track identity_track() { return Track{}; }

inline void normalize_track(const Group& G, Track& t) {
  G.sort_shortlex(t.F);
  t.F.erase(std::unique(t.F.begin(), t.F.end()), t.F.end());
}

/// Track of (g_1, ..., g_k): product g_1...g_k and the suffix products g_i...g_k, plus e.
inline Track track_of_sequence(const Group& G, const std::vector<Element>& gs) {
  Track t;
  Element suffix;
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) {
    suffix = G.multiply(*it, suffix);
    t.F.push_back(suffix);
  }
  t.g = suffix;
  normalize_track(G, t);
  return t;
}

/// (g,F)·(g',F') = (gg', Fg' ∪ F').
inline Track compose(const Group& G, const Track& a, const Track& b) {
  Track t;
  t.g = G.multiply(a.g, b.g);
  t.F = b.F;
  for (const Element& h : a.F) {
    t.F.push_back(G.multiply(h, b.g));
  }
  normalize_track(G, t);
  return t;
}

/// True iff x h^-1 lies in B for every h in F: the track operator is nonzero at δ_x.
inline bool track_acts_at(const Group& G, const Track& t, const Subset& B, const Element& x) {
  return std::all_of(t.F.begin(), t.F.end(),
                     [&](const Element& h) { return B.contains(G.multiply(x, G.invert(h))); });
}

/// Shortlex-first x in B ∩ Ball(e,R) at which the track operator is nonzero, if any.
inline std::optional<Element> is_nonzero_on(const Track& t, const Subset& B, std::size_t R) {
  const Group& G = *B.group;
  for (const Element& x : window_points(B, R)) {
    if (track_acts_at(G, t, B, x)) {
      return x;
    }
  }
  return std::nullopt;
}

inline nlohmann::json track_to_json(const Group& G, const Track& t) {
  nlohmann::json F = nlohmann::json::array();
  for (const Element& h : t.F) {
    F.push_back(G.format(h));
  }
  return {{"g", G.format(t.g)}, {"F", F}};
}

/// Reads "(g,{h1,h2,...})". Elements of F are separated by ';' or ','; for groups whose
/// elements print with commas (Z^n tuples) use ';'. e and g are added to F if missing.
inline Track parse_track(const Group& G, const std::string& text) {
  auto fail = [&]() { throw ConfigError("malformed track '" + text + "'"); };
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s += c;
    }
  }
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') {
    fail();
  }
  const std::size_t open = s.find('{');
  const std::size_t close = s.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open || open < 2 ||
      s[open - 1] != ',') {
    fail();
  }
  Track t;
  t.g = G.parse(s.substr(1, open - 2));
  const std::string body = s.substr(open + 1, close - open - 1);
  const char sep = body.find(';') != std::string::npos ? ';' : ',';
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : body) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    }
    if (c == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    parts.push_back(cur);
  }
  for (const std::string& p : parts) {
    t.F.push_back(G.parse(p));
  }
  t.F.push_back(t.g);
  normalize_track(G, t);
  return t;
}

}  // namespace tlab
