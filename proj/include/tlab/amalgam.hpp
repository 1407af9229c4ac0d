#pragma once

#include "factor.hpp"

namespace tlab {

/// Amalgamated free product G *_H S.
///
/// Canonical word: x_1 ... x_n h where each x_i is a nontrivial left-coset representative
/// of the image of H in its factor (tags 0 = G, 1 = S, alternating) and h is the trailing
/// H-part (tag 2, omitted when trivial). Products are absorbed right to left.
class AmalgamGroup final : public Group {
 public:
  static constexpr std::int32_t kG = 0;
  static constexpr std::int32_t kS = 1;
  static constexpr std::int32_t kH = 2;

  AmalgamGroup(Factor G, Factor S, Factor H, Embedding into_G, Embedding into_S,
               std::string name = "amalgam")
      : G_(std::move(G)), S_(std::move(S)), H_(std::move(H)),
        into_G_(std::move(into_G)), into_S_(std::move(into_S)) {
    set_name(std::move(name));
    for (const std::string& n : G_.names()) {
      if (S_.parse(n) && n != "e") {
        throw ConfigError("amalgam: element name '" + n + "' occurs in both factors");
      }
    }
    if (G_.is_cyclic_infinite() && S_.is_cyclic_infinite() && G_.label() == S_.label()) {
      throw ConfigError("amalgam: both factors use the generator name " + G_.label());
    }
    std::vector<Element> gens;
    for (std::int64_t g : G_.generators()) {
      gens.push_back(factor_element(kG, g));
    }
    for (std::int64_t s : S_.generators()) {
      gens.push_back(factor_element(kS, s));
    }
    set_generators(gens);
    all_elements_generate_ = G_.is_finite() && S_.is_finite() &&
                             G_.generators().size() + 1 == G_.order() &&
                             S_.generators().size() + 1 == S_.order();
  }

  GroupKind kind() const override { return GroupKind::amalgam; }

  const Factor& G() const noexcept { return G_; }
  const Factor& S() const noexcept { return S_; }
  const Factor& H() const noexcept { return H_; }
  const Embedding& into_G() const noexcept { return into_G_; }
  const Embedding& into_S() const noexcept { return into_S_; }
  const Factor& factor(std::int32_t side) const { return side == kG ? G_ : S_; }
  const Embedding& embedding(std::int32_t side) const { return side == kG ? into_G_ : into_S_; }

  bool h_is_trivial() const noexcept { return H_.is_finite() && H_.order() == 1; }

  /// Canonical form of the factor element with the given code.
  Element factor_element(std::int32_t side, std::int64_t code) const {
    Form f;
    left_mul_factor(f, side, code);
    return pack(f);
  }

  /// Canonical form of the subgroup element with code k.
  Element h_element(std::int64_t k) const {
    Form f;
    f.h = k;
    return pack(f);
  }

  /// Every element of a finite H, by code.
  std::vector<Element> h_elements() const {
    if (!H_.is_finite()) {
      throw PreconditionError("amalgam: H is infinite");
    }
    std::vector<Element> out;
    for (std::size_t k = 0; k < H_.order(); ++k) {
      out.push_back(h_element(static_cast<std::int64_t>(k)));
    }
    return out;
  }

  /// Normal form of a raw word of (side, factor code) letters.
  Element normal_form(const std::vector<std::pair<std::int32_t, std::int64_t>>& raw) const {
    Form f;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
      if (it->first != kG && it->first != kS) {
        throw ConfigError("amalgam: letter tagged with an unknown factor");
      }
      if (!factor(it->first).valid(it->second)) {
        throw ConfigError("amalgam: letter is not an element of its factor");
      }
      left_mul_factor(f, it->first, it->second);
    }
    return pack(f);
  }

  bool in_H(const Element& x) const {
    return x.is_identity() || (x.word().size() == 1 && x.word()[0].tag == kH);
  }

  /// Factor of the first syllable, or nothing for elements of H.
  std::optional<std::int32_t> first_side(const Element& x) const {
    if (in_H(x)) {
      return std::nullopt;
    }
    return x.word().front().tag;
  }

  /// True iff x lies in the vertex group of the given side.
  bool in_factor(std::int32_t side, const Element& x) const {
    return in_H(x) || (x.word().front().tag == side &&
                       (x.word().size() == 1 || x.word()[1].tag == kH));
  }

  std::size_t syllable_count(const Element& x) const {
    std::size_t n = 0;
    for (const Letter& l : x.word()) {
      n += l.tag == kH ? 0 : 1;
    }
    return n;
  }

  Element multiply(const Element& x, const Element& y) const override {
    Form f = unpack(y);
    Form fx = unpack(x);
    push_h(f, 0, fx.h);
    for (auto it = fx.reps.rbegin(); it != fx.reps.rend(); ++it) {
      left_mul_factor(f, it->tag, it->value);
    }
    return pack(f);
  }

  Element invert(const Element& x) const override {
    Form fx = unpack(x);
    Form f;
    for (const Letter& l : fx.reps) {
      left_mul_factor(f, l.tag, factor(l.tag).inverse(l.value));
    }
    push_h(f, 0, H_.inverse(fx.h));
    return pack(f);
  }

  std::size_t word_length(const Element& x) const override {
    if (h_is_trivial()) {
      std::size_t n = 0;
      for (const Letter& l : x.word()) {
        n += factor(l.tag).length(l.value);
      }
      return n;
    }
    if (all_elements_generate_) {
      std::size_t n = syllable_count(x);
      return n == 0 ? (x.is_identity() ? 0 : 1) : n;
    }
    return bfs_length(x);
  }

  std::string format(const Element& x) const override {
    if (x.is_identity()) {
      return "e";
    }
    // A trailing H syllable is printed merged into the preceding factor letter.
    const auto& w = x.word();
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Letter& l = w[i];
      if (l.tag == kH) {
        if (i == 0) {
          out = G_.name_of(into_G_.apply(l.value));
        }
        continue;
      }
      std::int64_t v = l.value;
      if (i + 1 < w.size() && w[i + 1].tag == kH) {
        const Embedding& emb = l.tag == kG ? into_G_ : into_S_;
        v = factor(l.tag).multiply(v, emb.apply(w[i + 1].value));
      }
      if (!out.empty()) {
        out += "*";
      }
      out += factor(l.tag).name_of(v);
    }
    return out;
  }

  void sort_key(const Element& x, std::vector<std::int64_t>& key) const override {
    for (const Letter& l : x.word()) {
      const std::int64_t base = static_cast<std::int64_t>(l.tag) << 32;
      if (l.tag == kH) {
        G_.append_key(into_G_.apply(l.value), base, key);
      } else {
        factor(l.tag).append_key(l.value, base, key);
      }
    }
  }

  nlohmann::json to_json() const override {
    return {{"kind", "amalgam"},
            {"name", name()},
            {"G", G_.to_json()},
            {"S", S_.to_json()},
            {"H", H_.to_json()},
            {"embed_G", into_G_.to_json()},
            {"embed_S", into_S_.to_json()}};
  }

 protected:
  Element parse_token(std::string_view token) const override {
    if (auto g = G_.parse(token)) {
      return factor_element(kG, *g);
    }
    if (auto s = S_.parse(token)) {
      return factor_element(kS, *s);
    }
    if (token == "e") {
      return {};
    }
    throw ConfigError("token '" + std::string(token) + "' is not a letter of either factor");
  }

  std::size_t length_upper_bound(const Element& x) const override {
    std::size_t n = 0;
    for (const Letter& l : x.word()) {
      n += l.tag == kH ? G_.length(into_G_.apply(l.value)) : factor(l.tag).length(l.value);
    }
    return n;
  }

 private:
  struct Form {
    std::vector<Letter> reps;
    std::int64_t h = 0;
  };

  static Form unpack(const Element& x) {
    Form f;
    for (const Letter& l : x.word()) {
      if (l.tag == kH) {
        f.h = l.value;
      } else {
        f.reps.push_back(l);
      }
    }
    return f;
  }

  static Element pack(Form f) {
    if (f.h != 0) {
      f.reps.push_back(Letter{kH, f.h});
    }
    return Element(std::move(f.reps));
  }

  // Moves k (in H) rightwards through reps[from..], then into the trailing H-part.
  void push_h(Form& f, std::size_t from, std::int64_t k) const {
    for (std::size_t i = from; i < f.reps.size() && k != 0; ++i) {
      const std::int32_t side = f.reps[i].tag;
      const Embedding& e = embedding(side);
      auto [r, k2] = e.split(factor(side).multiply(e.apply(k), f.reps[i].value));
      f.reps[i].value = r;
      k = k2;
    }
    if (k != 0) {
      f.h = H_.multiply(k, f.h);
    }
  }

  void left_mul_factor(Form& f, std::int32_t side, std::int64_t s) const {
    if (s == 0) {
      return;
    }
    const Factor& F = factor(side);
    const Embedding& e = embedding(side);
    if (!f.reps.empty() && f.reps.front().tag == side) {
      auto [r, k] = e.split(F.multiply(s, f.reps.front().value));
      if (r == 0) {
        f.reps.erase(f.reps.begin());
        push_h(f, 0, k);
      } else {
        f.reps.front().value = r;
        push_h(f, 1, k);
      }
      return;
    }
    auto [r, k] = e.split(s);
    if (r == 0) {
      push_h(f, 0, k);
    } else {
      f.reps.insert(f.reps.begin(), Letter{side, r});
      push_h(f, 1, k);
    }
  }

  Factor G_;
  Factor S_;
  Factor H_;
  Embedding into_G_;
  Embedding into_S_;
  bool all_elements_generate_ = false;
};

}  // namespace tlab
