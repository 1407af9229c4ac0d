#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tlab {

/// Raised for malformed words, configs and inconsistent group data.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a ball or search exceeds the configured size cap.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's precondition does not hold for its inputs.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One syllable of a canonical word; the meaning of tag and value depends on the group kind.
struct Letter {
  std::int32_t tag = 0;
  std::int64_t value = 0;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// A group element in the canonical form of its group; the identity is the empty word.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<Letter> word) : word_(std::move(word)) {}

  const std::vector<Letter>& word() const noexcept { return word_; }
  bool is_identity() const noexcept { return word_.empty(); }

  friend bool operator==(const Element&, const Element&) = default;

 private:
  std::vector<Letter> word_;
};

/// Hash functor so elements can key unordered containers.
struct ElementHash {
  std::size_t operator()(const Element& x) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const Letter& l : x.word()) {
      std::size_t v = std::hash<std::int64_t>{}(l.value) ^
                      (static_cast<std::size_t>(l.tag) * 0x100000001b3ULL);
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace tlab
