#pragma once

#include "factor.hpp"

namespace tlab {

/// HNN extension G*_H with stable letter t and relations t iota(h) t^-1 = theta(h).
///
/// Canonical word: g_0 t^e_1 g_1 ... t^e_n g_n (identity g's omitted; tags 0 = G element,
/// 1 = stable letter with value +-1). A g_i followed by t is the shortlex-least element of
/// its left coset of K = theta(H); one followed by t^-1 is least in its coset of iota(H);
/// the final g_n is unconstrained. Subgroup parts are pushed to the right.
class HnnGroup final : public Group {
 public:
  static constexpr std::int32_t kG = 0;
  static constexpr std::int32_t kT = 1;

  HnnGroup(Factor G, Factor H, Embedding iota, Embedding theta, std::string stable_letter = "t",
           std::string name = "hnn")
      : G_(std::move(G)), H_(std::move(H)), iota_(std::move(iota)), theta_(std::move(theta)),
        t_name_(std::move(stable_letter)) {
    set_name(std::move(name));
    if (G_.parse(t_name_)) {
      throw ConfigError("hnn: stable letter name clashes with an element of G");
    }
    std::vector<Element> gens;
    for (std::int64_t g : G_.generators()) {
      gens.push_back(g_element(g));
    }
    gens.push_back(stable(1));
    set_generators(gens);
  }

  GroupKind kind() const override { return GroupKind::hnn; }

  const Factor& G() const noexcept { return G_; }
  const Factor& H() const noexcept { return H_; }
  const Embedding& iota() const noexcept { return iota_; }
  const Embedding& theta() const noexcept { return theta_; }
  const std::string& stable_name() const noexcept { return t_name_; }
  bool h_is_trivial() const noexcept { return H_.is_finite() && H_.order() == 1; }

  Element g_element(std::int64_t code) const {
    if (code == 0) {
      return {};
    }
    return Element({Letter{kG, code}});
  }

  Element stable(int sign) const { return Element({Letter{kT, sign > 0 ? 1 : -1}}); }

  /// Image of h under iota (the copy of H) and theta (the copy K), as elements of the group.
  Element iota_element(std::int64_t h) const { return g_element(iota_.apply(h)); }
  Element theta_element(std::int64_t h) const { return g_element(theta_.apply(h)); }

  /// Normal form of a raw word; tag 0 letters are G codes, tag 1 letters are t^(+-1).
  Element normal_form(const std::vector<Letter>& raw) const {
    Form f;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
      left_mul_letter(f, *it);
    }
    return pack(f);
  }

  bool in_G(const Element& x) const {
    return std::none_of(x.word().begin(), x.word().end(),
                        [](const Letter& l) { return l.tag == kT; });
  }

  /// Sign of the first stable letter, or 0 for elements of G.
  int first_stable_sign(const Element& x) const {
    for (const Letter& l : x.word()) {
      if (l.tag == kT) {
        return static_cast<int>(l.value);
      }
    }
    return 0;
  }

  /// True iff x can be written as a reduced word starting with t^-1.
  bool begins_with_inverse_stable(const Element& x) const {
    return !x.is_identity() && x.word().front().tag == kT && x.word().front().value < 0;
  }

  /// The G-prefix g_0 of the canonical form.
  std::int64_t leading_g(const Element& x) const {
    return (!x.is_identity() && x.word().front().tag == kG) ? x.word().front().value : 0;
  }

  Element multiply(const Element& x, const Element& y) const override {
    Form f = unpack(y);
    for (auto it = x.word().rbegin(); it != x.word().rend(); ++it) {
      left_mul_letter(f, *it);
    }
    return pack(f);
  }

  Element invert(const Element& x) const override {
    Form f;
    for (const Letter& l : x.word()) {
      left_mul_letter(f, l.tag == kG ? Letter{kG, G_.inverse(l.value)} : Letter{kT, -l.value});
    }
    return pack(f);
  }

  std::size_t word_length(const Element& x) const override {
    if (h_is_trivial()) {
      return length_upper_bound(x);
    }
    return bfs_length(x);
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
      out += l.tag == kG ? G_.name_of(l.value) : detail::format_power(t_name_, l.value);
    }
    return out;
  }

  void sort_key(const Element& x, std::vector<std::int64_t>& key) const override {
    for (const Letter& l : x.word()) {
      if (l.tag == kG) {
        G_.append_key(l.value, 0, key);
      } else {
        key.push_back((std::int64_t{1} << 32) + (l.value < 0 ? 1 : 0));
      }
    }
  }

  nlohmann::json to_json() const override {
    return {{"kind", "hnn"},
            {"name", name()},
            {"G", G_.to_json()},
            {"H", H_.to_json()},
            {"iota", iota_.to_json()},
            {"theta", theta_.to_json()},
            {"stable_letter", t_name_}};
  }

 protected:
  Element parse_token(std::string_view token) const override {
    std::int64_t e = 0;
    if (detail::parse_power(token, t_name_, e)) {
      std::vector<Letter> raw(static_cast<std::size_t>(std::llabs(e)), Letter{kT, e < 0 ? -1 : 1});
      return normal_form(raw);
    }
    if (auto g = G_.parse(token)) {
      return g_element(*g);
    }
    if (token == "e") {
      return {};
    }
    throw ConfigError("token '" + std::string(token) + "' is not a letter of the HNN extension");
  }

  std::size_t length_upper_bound(const Element& x) const override {
    std::size_t n = 0;
    for (const Letter& l : x.word()) {
      n += l.tag == kG ? G_.length(l.value) : 1;
    }
    return n;
  }

 private:
  struct Form {
    std::vector<std::int64_t> g{0};
    std::vector<int> eps;
  };

  static Form unpack(const Element& x) {
    Form f;
    for (const Letter& l : x.word()) {
      if (l.tag == kG) {
        f.g.back() = l.value;
      } else {
        f.eps.push_back(static_cast<int>(l.value));
        f.g.push_back(0);
      }
    }
    return f;
  }

  static Element pack(const Form& f) {
    std::vector<Letter> w;
    for (std::size_t i = 0; i < f.g.size(); ++i) {
      if (f.g[i] != 0) {
        w.push_back(Letter{kG, f.g[i]});
      }
      if (i < f.eps.size()) {
        w.push_back(Letter{kT, f.eps[i]});
      }
    }
    return Element(std::move(w));
  }

  // Re-normalises g[i..] after g[i] changed.
  void normalize_from(Form& f, std::size_t i) const {
    for (std::size_t j = i; j < f.eps.size(); ++j) {
      std::int64_t h = 0;
      if (f.eps[j] > 0) {
        auto [r, k] = theta_.split(f.g[j]);
        f.g[j] = r;
        h = k;
        if (h != 0) {
          f.g[j + 1] = G_.multiply(iota_.apply(h), f.g[j + 1]);
        }
      } else {
        auto [r, k] = iota_.split(f.g[j]);
        f.g[j] = r;
        h = k;
        if (h != 0) {
          f.g[j + 1] = G_.multiply(theta_.apply(h), f.g[j + 1]);
        }
      }
      if (h == 0) {
        return;
      }
    }
  }

  void left_mul_letter(Form& f, const Letter& l) const {
    if (l.tag == kG) {
      if (!G_.valid(l.value)) {
        throw ConfigError("hnn: letter is not an element of G");
      }
      f.g[0] = G_.multiply(l.value, f.g[0]);
      normalize_from(f, 0);
      return;
    }
    if (l.tag != kT || (l.value != 1 && l.value != -1)) {
      throw ConfigError("hnn: malformed stable letter");
    }
    const int e = static_cast<int>(l.value);
    if (!f.eps.empty() && f.g[0] == 0 && f.eps[0] == -e) {
      f.g.erase(f.g.begin());
      f.eps.erase(f.eps.begin());
    } else {
      f.g.insert(f.g.begin(), 0);
      f.eps.insert(f.eps.begin(), e);
    }
  }

  Factor G_;
  Factor H_;
  Embedding iota_;
  Embedding theta_;
  std::string t_name_;
};

}  // namespace tlab
