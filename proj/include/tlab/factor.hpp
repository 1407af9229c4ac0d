#pragma once

#include "group.hpp"

#include <deque>
#include <optional>

namespace tlab {

/// A vertex group of an amalgam or HNN extension: a finite group given by its
/// multiplication table, or the infinite cyclic group. Elements are integer codes
/// (table indices, or integers for Z); code 0 is always the identity.
class Factor {
 public:
  static Factor infinite_cyclic(std::string generator_name) {
    Factor f;
    f.cyclic_ = true;
    f.label_ = generator_name;
    f.gen_name_ = std::move(generator_name);
    f.generators_ = {1, -1};
    return f;
  }

  static Factor trivial() {
    return finite("1", {{0}}, {"e"}, {});
  }

  /// table[i][j] is the code of i*j; generators lists codes (empty: every non-identity element).
  static Factor finite(std::string label, std::vector<std::vector<std::int64_t>> table,
                       std::vector<std::string> names, std::vector<std::int64_t> generators) {
    Factor f;
    f.cyclic_ = false;
    f.label_ = std::move(label);
    f.table_ = std::move(table);
    const std::size_t n = f.table_.size();
    if (n == 0) {
      throw ConfigError("finite group '" + f.label_ + "' has an empty table");
    }
    for (const auto& row : f.table_) {
      if (row.size() != n) {
        throw ConfigError("finite group '" + f.label_ + "': table is not square");
      }
      for (std::int64_t v : row) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) {
          throw ConfigError("finite group '" + f.label_ + "': table entry out of range");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (f.table_[0][i] != static_cast<std::int64_t>(i) ||
          f.table_[i][0] != static_cast<std::int64_t>(i)) {
        throw ConfigError("finite group '" + f.label_ + "': element 0 is not the identity");
      }
    }
    f.inverse_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (f.table_[i][j] == 0) {
          f.inverse_[i] = static_cast<std::int64_t>(j);
        }
      }
      if (f.inverse_[i] < 0) {
        throw ConfigError("finite group '" + f.label_ + "': element without inverse");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (f.table_[static_cast<std::size_t>(f.table_[i][j])][k] !=
              f.table_[i][static_cast<std::size_t>(f.table_[j][k])]) {
            throw ConfigError("finite group '" + f.label_ + "': table is not associative");
          }
        }
      }
    }
    if (names.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i) + "_" + f.label_);
      }
    }
    if (names.size() != n) {
      throw ConfigError("finite group '" + f.label_ + "': name count does not match order");
    }
    f.names_ = std::move(names);
    if (generators.empty()) {
      for (std::size_t i = 1; i < n; ++i) {
        generators.push_back(static_cast<std::int64_t>(i));
      }
    }
    for (std::int64_t g : generators) {
      if (g <= 0 || static_cast<std::size_t>(g) >= n) {
        throw ConfigError("finite group '" + f.label_ + "': invalid generator code");
      }
      for (std::int64_t h : {g, f.inverse_[static_cast<std::size_t>(g)]}) {
        if (std::find(f.generators_.begin(), f.generators_.end(), h) == f.generators_.end()) {
          f.generators_.push_back(h);
        }
      }
    }
    f.lengths_.assign(n, -1);
    f.lengths_[0] = 0;
    std::deque<std::int64_t> queue{0};
    while (!queue.empty()) {
      std::int64_t x = queue.front();
      queue.pop_front();
      for (std::int64_t a : f.generators_) {
        std::int64_t y = f.multiply(x, a);
        if (f.lengths_[static_cast<std::size_t>(y)] < 0) {
          f.lengths_[static_cast<std::size_t>(y)] = f.lengths_[static_cast<std::size_t>(x)] + 1;
          queue.push_back(y);
        }
      }
    }
    for (std::int64_t l : f.lengths_) {
      if (l < 0) {
        throw ConfigError("finite group '" + f.label_ + "': generators do not generate");
      }
    }
    return f;
  }

  bool is_cyclic_infinite() const noexcept { return cyclic_; }
  bool is_finite() const noexcept { return !cyclic_; }
  std::size_t order() const noexcept { return table_.size(); }
  const std::string& label() const noexcept { return label_; }
  const std::vector<std::int64_t>& generators() const noexcept { return generators_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool valid(std::int64_t v) const noexcept {
    return cyclic_ || (v >= 0 && static_cast<std::size_t>(v) < table_.size());
  }

  std::int64_t multiply(std::int64_t a, std::int64_t b) const {
    if (cyclic_) {
      return a + b;
    }
    return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  std::int64_t inverse(std::int64_t a) const {
    return cyclic_ ? -a : inverse_[static_cast<std::size_t>(a)];
  }

  std::size_t length(std::int64_t a) const {
    if (cyclic_) {
      return static_cast<std::size_t>(std::llabs(a));
    }
    return static_cast<std::size_t>(lengths_[static_cast<std::size_t>(a)]);
  }

  /// Strict shortlex order inside the factor.
  bool less(std::int64_t a, std::int64_t b) const {
    if (length(a) != length(b)) {
      return length(a) < length(b);
    }
    if (cyclic_) {
      return a > b;  // the positive generator precedes its inverse
    }
    return a < b;
  }

  std::string name_of(std::int64_t a) const {
    if (cyclic_) {
      return a == 0 ? "e" : detail::format_power(gen_name_, a);
    }
    return a == 0 ? "e" : names_[static_cast<std::size_t>(a)];
  }

  std::optional<std::int64_t> parse(std::string_view token) const {
    if (cyclic_) {
      std::int64_t e = 0;
      if (detail::parse_power(token, gen_name_, e)) {
        return e;
      }
      return std::nullopt;
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == token) {
        return static_cast<std::int64_t>(i);
      }
    }
    return std::nullopt;
  }

  /// Appends the letter ranks of a: |a| copies of the generator rank for Z, or a single
  /// rank for a table element. base separates the alphabets of different factors.
  void append_key(std::int64_t a, std::int64_t base, std::vector<std::int64_t>& key) const {
    if (cyclic_) {
      for (std::int64_t i = 0; i < std::llabs(a); ++i) {
        key.push_back(base + (a < 0 ? 1 : 0));
      }
    } else {
      key.push_back(base + a);
    }
  }

  nlohmann::json to_json() const {
    if (cyclic_) {
      return {{"kind", "cyclic"}, {"generator", gen_name_}};
    }
    return {{"kind", "finite"},
            {"label", label_},
            {"table", table_},
            {"elements", names_},
            {"generators", generators_}};
  }

 private:
  Factor() = default;

  bool cyclic_ = false;
  std::string label_;
  std::string gen_name_;
  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::int64_t> inverse_;
  std::vector<std::string> names_;
  std::vector<std::int64_t> generators_;
  std::vector<std::int64_t> lengths_;
};

/// Injective homomorphism from a subgroup factor H into a factor F, together with the
/// left-coset splitting g = rep * image(h) where rep is the shortlex-least element of gH.
class Embedding {
 public:
  /// Z -> Z, h -> m h (m != 0), or trivial H -> anything (m ignored).
  static Embedding multiplier(const Factor& H, const Factor& F, std::int64_t m) {
    Embedding e;
    e.multiplier_ = m;
    e.use_table_ = false;
    e.validate(H, F);
    return e;
  }

  static Embedding table(const Factor& H, const Factor& F, std::vector<std::int64_t> images) {
    Embedding e;
    e.use_table_ = true;
    e.images_ = std::move(images);
    e.validate(H, F);
    return e;
  }

  std::int64_t apply(std::int64_t h) const {
    if (trivial_source_) {
      return 0;
    }
    return use_table_ ? images_[static_cast<std::size_t>(h)] : multiplier_ * h;
  }

  /// Returns (rep, h) with g = rep * apply(h).
  std::pair<std::int64_t, std::int64_t> split(std::int64_t g) const {
    if (trivial_source_) {
      return {g, 0};
    }
    if (!use_table_) {
      const std::int64_t m = std::llabs(multiplier_);
      std::int64_t r = ((g % m) + m) % m;
      if (2 * r > m) {
        r -= m;
      }
      return {r, (g - r) / multiplier_};
    }
    return {rep_[static_cast<std::size_t>(g)], coset_h_[static_cast<std::size_t>(g)]};
  }

  /// True iff g lies in the image.
  bool in_image(std::int64_t g) const { return split(g).first == 0; }

  nlohmann::json to_json() const {
    if (use_table_) {
      return {{"table", images_}};
    }
    return {{"multiplier", multiplier_}};
  }

 private:
  Embedding() = default;

  void validate(const Factor& H, const Factor& F) {
    trivial_source_ = H.is_finite() && H.order() == 1;
    if (trivial_source_) {
      return;
    }
    if (!use_table_) {
      if (!H.is_cyclic_infinite() || !F.is_cyclic_infinite() || multiplier_ == 0) {
        throw ConfigError("multiplier embeddings need Z -> Z with nonzero multiplier");
      }
      return;
    }
    if (!H.is_finite() || !F.is_finite()) {
      throw ConfigError("table embeddings need finite groups on both sides");
    }
    if (images_.size() != H.order()) {
      throw ConfigError("embedding table length does not match the subgroup order");
    }
    for (std::int64_t v : images_) {
      if (!F.valid(v)) {
        throw ConfigError("embedding image is not an element of the target group");
      }
    }
    for (std::size_t a = 0; a < H.order(); ++a) {
      for (std::size_t b = 0; b < H.order(); ++b) {
        if (images_[static_cast<std::size_t>(H.multiply(static_cast<std::int64_t>(a),
                                                        static_cast<std::int64_t>(b)))] !=
            F.multiply(images_[a], images_[b])) {
          throw ConfigError("embedding is not a homomorphism");
        }
        if (a != b && images_[a] == images_[b]) {
          throw ConfigError("embedding is not injective");
        }
      }
    }
    const std::size_t n = F.order();
    std::vector<std::int64_t> preimage(n, -1);
    for (std::size_t h = 0; h < H.order(); ++h) {
      preimage[static_cast<std::size_t>(images_[h])] = static_cast<std::int64_t>(h);
    }
    rep_.assign(n, -1);
    coset_h_.assign(n, -1);
    for (std::size_t g = 0; g < n; ++g) {
      std::int64_t best = static_cast<std::int64_t>(g);
      for (std::size_t h = 0; h < H.order(); ++h) {
        std::int64_t y = F.multiply(static_cast<std::int64_t>(g), images_[h]);
        if (F.less(y, best)) {
          best = y;
        }
      }
      rep_[g] = best;
      std::int64_t img = F.multiply(F.inverse(best), static_cast<std::int64_t>(g));
      coset_h_[g] = preimage[static_cast<std::size_t>(img)];
    }
  }

  bool use_table_ = false;
  bool trivial_source_ = false;
  std::int64_t multiplier_ = 1;
  std::vector<std::int64_t> images_;
  std::vector<std::int64_t> rep_;
  std::vector<std::int64_t> coset_h_;
};

}  // namespace tlab
