#pragma once

#include "factor.hpp"

namespace tlab {

/// A finite group given by its multiplication table. Canonical word: empty for the
/// identity, otherwise the single letter (0, table index).
class FiniteGroup final : public Group {
 public:
  explicit FiniteGroup(Factor table) : table_(std::move(table)) {
    if (!table_.is_finite()) {
      throw ConfigError("finite group requires a multiplication table");
    }
    set_name(table_.label());
    std::vector<Element> gens;
    for (std::int64_t g : table_.generators()) {
      gens.push_back(element(g));
    }
    set_generators(gens);
  }

  GroupKind kind() const override { return GroupKind::finite; }
  const Factor& table() const noexcept { return table_; }
  std::size_t order() const noexcept { return table_.order(); }

  Element element(std::int64_t code) const {
    if (code == 0) {
      return {};
    }
    return Element({Letter{0, code}});
  }

  static std::int64_t code(const Element& x) { return x.is_identity() ? 0 : x.word()[0].value; }

  Element multiply(const Element& x, const Element& y) const override {
    return element(table_.multiply(code(x), code(y)));
  }

  Element invert(const Element& x) const override { return element(table_.inverse(code(x))); }

  std::size_t word_length(const Element& x) const override { return table_.length(code(x)); }

  std::string format(const Element& x) const override { return table_.names()[static_cast<std::size_t>(code(x))]; }

  void sort_key(const Element& x, std::vector<std::int64_t>& key) const override {
    if (!x.is_identity()) {
      key.push_back(code(x));
    }
  }

  nlohmann::json to_json() const override {
    nlohmann::json j = table_.to_json();
    j["kind"] = "finite";
    return j;
  }

 protected:
  Element parse_token(std::string_view token) const override {
    if (auto v = table_.parse(token)) {
      return element(*v);
    }
    if (token == "e") {
      return {};
    }
    throw ConfigError("token '" + std::string(token) + "' is not an element of " + name());
  }

  std::size_t length_upper_bound(const Element& x) const override { return word_length(x); }

 private:
  Factor table_;
};

}  // namespace tlab
