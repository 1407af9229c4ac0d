#pragma once

#include "amalgam.hpp"
#include "free_groups.hpp"
#include "hnn.hpp"
#include "report.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace tlab {

using ElementSet = std::unordered_set<Element, ElementHash>;

/// A subgroup given by generators and a total membership test.
class Subgroup {
 public:
  using Member = std::function<bool(const Element&)>;

  Subgroup() = default;

  static Subgroup trivial(GroupPtr G) {
    Subgroup s(std::move(G), "trivial", {}, [](const Element& x) { return x.is_identity(); });
    s.elements_ = std::vector<Element>{Element{}};
    return s;
  }

  static Subgroup whole(GroupPtr G) {
    std::vector<Element> gens = G->generators();
    return Subgroup(std::move(G), "whole", std::move(gens), [](const Element&) { return true; });
  }

  /// Closure of finitely many elements; throws if it exceeds `cap` elements.
  static Subgroup finite(GroupPtr G, const std::vector<Element>& gens, std::size_t cap = 4096) {
    std::vector<Element> elems{Element{}};
    ElementSet seen{Element{}};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const Element& g : gens) {
        Element y = G->multiply(elems[i], g);
        if (seen.insert(y).second) {
          elems.push_back(y);
          if (elems.size() > cap) {
            throw PreconditionError("subgroup generated by the given elements is not finite within " +
                                    std::to_string(cap) + " elements");
          }
        }
      }
    }
    G->sort_shortlex(elems);
    auto set = std::make_shared<ElementSet>(std::move(seen));
    Subgroup s(G, "finite", gens, [set](const Element& x) { return set->count(x) > 0; });
    s.elements_ = std::move(elems);
    return s;
  }

  /// Subgroup with a caller-supplied membership test (used for infinite subgroups).
  static Subgroup with_predicate(GroupPtr G, std::string tag, std::vector<Element> gens, Member m) {
    return Subgroup(std::move(G), std::move(tag), std::move(gens), std::move(m));
  }

  /// Cyclic subgroup <g>. Exact for groups where |g^k| >= |k| (free, free abelian, finite).
  static Subgroup cyclic(GroupPtr G, const Element& g) {
    if (G->kind() == GroupKind::finite || g.is_identity()) {
      return finite(G, {g});
    }
    if (G->kind() != GroupKind::free_group && G->kind() != GroupKind::free_abelian) {
      throw PreconditionError("cyclic subgroup membership is only decided in free and free abelian groups");
    }
    const Group* raw = G.get();
    const Element gi = G->invert(g);
    return Subgroup(G, "cyclic", {g}, [raw, g, gi](const Element& x) {
      const std::size_t bound = raw->word_length(x);
      Element up;
      Element down;
      for (std::size_t k = 0; k <= bound; ++k) {
        if (up == x || down == x) {
          return true;
        }
        up = raw->multiply(up, g);
        down = raw->multiply(down, gi);
      }
      return false;
    });
  }

  const GroupPtr& group() const noexcept { return group_; }
  const std::string& tag() const noexcept { return tag_; }
  const std::vector<Element>& generators() const noexcept { return gens_; }
  bool is_finite() const noexcept { return elements_.has_value(); }
  bool contains(const Element& x) const { return member_(x); }

  /// Elements of a finite subgroup in shortlex order.
  const std::vector<Element>& elements() const {
    if (!elements_) {
      throw PreconditionError("subgroup '" + tag_ + "' is not finite");
    }
    return *elements_;
  }

  /// Members of word length at most r, shortlex.
  std::vector<Element> elements_within(std::size_t r) const {
    std::vector<Element> out;
    if (elements_) {
      for (const Element& x : *elements_) {
        if (group_->word_length(x) <= r) {
          out.push_back(x);
        }
      }
      return out;
    }
    for (const Element& x : group_->enumerate_ball(r)) {
      if (member_(x)) {
        out.push_back(x);
      }
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json gens = nlohmann::json::array();
    for (const Element& g : gens_) {
      gens.push_back(group_->format(g));
    }
    nlohmann::json j = {{"tag", tag_}, {"generators", gens}, {"finite", is_finite()}};
    if (elements_) {
      j["order"] = elements_->size();
    }
    return j;
  }

 private:
  Subgroup(GroupPtr G, std::string tag, std::vector<Element> gens, Member m)
      : group_(std::move(G)), tag_(std::move(tag)), gens_(std::move(gens)), member_(std::move(m)) {}

  GroupPtr group_;
  std::string tag_;
  std::vector<Element> gens_;
  Member member_;
  std::optional<std::vector<Element>> elements_;
};

struct Subset;
using SubsetPtr = std::shared_ptr<const Subset>;

/// A subset of a group given by a total membership predicate, together with the
/// stabilisers it claims. Claims are checked, never trusted, by verify_stabilisers.
struct Subset {
  GroupPtr group;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::function<bool(const Element&)> predicate;
  Subgroup left;
  Subgroup right;
  SubsetPtr ambient;
  /// Optional fast listing of the members of Ball(e,R); any order, no duplicates.
  std::function<std::vector<Element>(std::size_t)> enumerator;

  bool contains(const Element& x) const { return predicate(x); }

  nlohmann::json to_json() const {
    nlohmann::json j = {{"kind", kind},
                        {"group", group->name()},
                        {"params", params},
                        {"left_stabiliser", left.to_json()},
                        {"right_stabiliser", right.to_json()}};
    if (ambient) {
      j["ambient"] = ambient->kind;
    }
    return j;
  }
};

/// The finite truncation B ∩ Ball(e,R), in shortlex order, with its index map.
class Window {
 public:
  Window(SubsetPtr source, std::size_t R, std::vector<Element> points)
      : source_(std::move(source)), R_(R), points_(std::move(points)) {
    index_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!index_.emplace(points_[i], i).second) {
        throw std::logic_error("window points are not distinct");
      }
    }
  }

  const SubsetPtr& source() const noexcept { return source_; }
  const Group& group() const noexcept { return *source_->group; }
  std::size_t radius() const noexcept { return R_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Element>& points() const noexcept { return points_; }
  const Element& point(std::size_t i) const { return points_.at(i); }

  std::optional<std::size_t> index_of(const Element& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  bool same_as(const Window& other) const {
    return this == &other || (source_ == other.source_ && points_ == other.points_);
  }

  nlohmann::json to_json() const {
    return {{"subset", source_->to_json()}, {"R", R_}, {"size", points_.size()}};
  }

 private:
  SubsetPtr source_;
  std::size_t R_;
  std::vector<Element> points_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

/// Members of `source` in Ball(e,R), shortlex.
inline std::vector<Element> window_points(const Subset& source, std::size_t R) {
  const Group& G = *source.group;
  std::vector<Element> out;
  if (source.enumerator) {
    for (Element& x : source.enumerator(R)) {
      if (G.word_length(x) <= R && source.contains(x)) {
        out.push_back(std::move(x));
      }
    }
    G.sort_shortlex(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  for (const Element& x : G.enumerate_ball(R)) {
    if (source.contains(x)) {
      out.push_back(x);
    }
  }
  return out;
}

inline Window enumerate_window(const SubsetPtr& source, std::size_t R) {
  return Window(source, R, window_points(*source, R));
}

// ---------------------------------------------------------------------------------------
// Built-in subsets

inline SubsetPtr make_whole(GroupPtr G) {
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "whole";
  s->predicate = [](const Element&) { return true; };
  s->left = Subgroup::whole(G);
  s->right = Subgroup::whole(G);
  return s;
}

namespace detail {

inline const FreeAbelianGroup& as_free_abelian(const GroupPtr& G, const char* what) {
  const auto* A = dynamic_cast<const FreeAbelianGroup*>(G.get());
  if (A == nullptr) {
    throw ConfigError(std::string(what) + " requires a free abelian group");
  }
  return *A;
}

inline const FreeGroup& as_free(const GroupPtr& G, const char* what) {
  const auto* F = dynamic_cast<const FreeGroup*>(G.get());
  if (F == nullptr) {
    throw ConfigError(std::string(what) + " requires a free group");
  }
  return *F;
}

// Subgroup of Z^n of vectors whose `coord` entry is divisible by `modulus` (0 = must vanish).
inline Subgroup coordinate_subgroup(const GroupPtr& G, std::size_t coord, std::int64_t modulus) {
  const FreeAbelianGroup& A = as_free_abelian(G, "coordinate subgroup");
  std::vector<Element> gens;
  for (std::size_t i = 0; i < A.rank(); ++i) {
    std::vector<std::int64_t> c(A.rank(), 0);
    if (i != coord) {
      c[i] = 1;
      gens.push_back(A.from_coordinates(c));
    } else if (modulus != 0) {
      c[i] = modulus;
      gens.push_back(A.from_coordinates(c));
    }
  }
  if (gens.empty()) {
    return Subgroup::trivial(G);
  }
  const FreeAbelianGroup* raw = &A;
  return Subgroup::with_predicate(G, "coordinate", gens, [raw, coord, modulus](const Element& x) {
    std::int64_t v = raw->coordinate(x, coord);
    return modulus == 0 ? v == 0 : v % modulus == 0;
  });
}

}  // namespace detail

/// {x in Z^n : lo <= x_coord <= hi}; either bound may be absent. ℕ and half-planes.
inline SubsetPtr make_interval(GroupPtr G, std::size_t coord, std::optional<std::int64_t> lo,
                               std::optional<std::int64_t> hi) {
  const FreeAbelianGroup& A = detail::as_free_abelian(G, "interval subset");
  if (coord >= A.rank()) {
    throw ConfigError("interval subset: coordinate out of range");
  }
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "interval";
  s->params = {{"coordinate", coord}};
  if (lo) {
    s->params["lo"] = *lo;
  }
  if (hi) {
    s->params["hi"] = *hi;
  }
  const FreeAbelianGroup* raw = &A;
  s->predicate = [raw, coord, lo, hi](const Element& x) {
    const std::int64_t v = raw->coordinate(x, coord);
    return (!lo || v >= *lo) && (!hi || v <= *hi);
  };
  s->left = (lo || hi) ? detail::coordinate_subgroup(G, coord, 0) : Subgroup::whole(G);
  s->right = s->left;
  return s;
}

/// {x in Z^n : x_coord = residue mod modulus}.
inline SubsetPtr make_residue(GroupPtr G, std::size_t coord, std::int64_t modulus,
                              std::int64_t residue) {
  const FreeAbelianGroup& A = detail::as_free_abelian(G, "residue subset");
  if (coord >= A.rank() || modulus <= 0) {
    throw ConfigError("residue subset: bad coordinate or modulus");
  }
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "residue";
  s->params = {{"coordinate", coord}, {"modulus", modulus}, {"residue", residue}};
  const FreeAbelianGroup* raw = &A;
  s->predicate = [raw, coord, modulus, residue](const Element& x) {
    std::int64_t d = (raw->coordinate(x, coord) - residue) % modulus;
    return d == 0;
  };
  s->left = detail::coordinate_subgroup(G, coord, modulus);
  s->right = s->left;
  return s;
}

/// Positive words of a free group, with the identity.
inline SubsetPtr make_positive_cone(GroupPtr G) {
  detail::as_free(G, "positive cone");
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "positive-cone";
  s->predicate = [](const Element& x) {
    return std::all_of(x.word().begin(), x.word().end(), [](const Letter& l) { return l.value > 0; });
  };
  s->left = Subgroup::trivial(G);
  s->right = Subgroup::trivial(G);
  const FreeGroup* raw = dynamic_cast<const FreeGroup*>(G.get());
  s->enumerator = [raw](std::size_t R) {
    std::vector<Element> out{Element{}};
    std::vector<Element> layer{Element{}};
    for (std::size_t k = 1; k <= R; ++k) {
      std::vector<Element> next;
      for (const Element& x : layer) {
        for (std::size_t i = 0; i < raw->rank(); ++i) {
          next.push_back(raw->multiply(x, raw->generator(i)));
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      layer = std::move(next);
    }
    return out;
  };
  return s;
}

/// Reduced words of a free group whose first letter is not in `forbidden`
/// (pairs of generator index and sign). The identity is always a member.
inline SubsetPtr make_first_letter(GroupPtr G, std::vector<std::pair<std::size_t, int>> forbidden) {
  const FreeGroup& F = detail::as_free(G, "first-letter subset");
  nlohmann::json names = nlohmann::json::array();
  for (const auto& [i, sign] : forbidden) {
    if (i >= F.rank() || (sign != 1 && sign != -1)) {
      throw ConfigError("first-letter subset: bad forbidden letter");
    }
    names.push_back(F.format(F.generator(i, sign)));
  }
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "first-letter";
  s->params = {{"forbidden", names}};
  const FreeGroup* raw = &F;
  s->predicate = [raw, forbidden](const Element& x) {
    auto first = raw->first_letter(x);
    return !first || std::find(forbidden.begin(), forbidden.end(), *first) == forbidden.end();
  };
  s->left = Subgroup::trivial(G);
  s->right = Subgroup::trivial(G);
  return s;
}

/// Half-spaces from the Bass-Serre tree. Amalgam side "G": canonical form starts in G or
/// lies in H; side "S" likewise for S. HNN ("hnn"): canonical form does not start with t^-1.
inline SubsetPtr make_tree_halfspace(GroupPtr G, const std::string& side) {
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "halfspace";
  if (const auto* A = dynamic_cast<const AmalgamGroup*>(G.get())) {
    std::int32_t tag = 0;
    if (side == "G" || side == "G-vertex") {
      tag = AmalgamGroup::kG;
    } else if (side == "S" || side == "S-vertex") {
      tag = AmalgamGroup::kS;
    } else {
      throw ConfigError("amalgam half-space side must be G or S, not '" + side + "'");
    }
    s->params = {{"side", tag == AmalgamGroup::kG ? "G" : "S"}};
    s->predicate = [A, tag](const Element& x) {
      auto first = A->first_side(x);
      return !first || *first == tag;
    };
    std::vector<Element> hgens;
    if (A->H().is_finite()) {
      for (const Element& h : A->h_elements()) {
        if (!h.is_identity()) {
          hgens.push_back(h);
        }
      }
      s->left = Subgroup::finite(G, hgens);
    } else {
      hgens.push_back(A->h_element(1));
      s->left = Subgroup::with_predicate(G, "H", hgens, [A](const Element& x) { return A->in_H(x); });
    }
    std::vector<Element> fgens;
    const Factor& F = A->factor(tag);
    for (std::int64_t c : F.generators()) {
      fgens.push_back(A->factor_element(tag, c));
    }
    s->right = Subgroup::with_predicate(G, tag == AmalgamGroup::kG ? "G" : "S", fgens,
                                        [A, tag](const Element& x) { return A->in_factor(tag, x); });
    return s;
  }
  if (const auto* N = dynamic_cast<const HnnGroup*>(G.get())) {
    if (side != "hnn" && side != "hnn-B" && side != "B") {
      throw ConfigError("hnn half-space side must be hnn-B, not '" + side + "'");
    }
    s->params = {{"side", "hnn-B"}};
    s->predicate = [N](const Element& x) { return !N->begins_with_inverse_stable(x); };
    std::vector<Element> hgens;
    if (N->H().is_finite()) {
      for (std::size_t k = 1; k < N->H().order(); ++k) {
        hgens.push_back(N->iota_element(static_cast<std::int64_t>(k)));
      }
      s->left = N->h_is_trivial() ? Subgroup::trivial(G) : Subgroup::finite(G, hgens);
    } else {
      hgens.push_back(N->iota_element(1));
      s->left = Subgroup::with_predicate(G, "H", hgens, [N](const Element& x) {
        return N->in_G(x) && N->iota().in_image(N->leading_g(x));
      });
    }
    std::vector<Element> ggens;
    for (std::int64_t c : N->G().generators()) {
      ggens.push_back(N->g_element(c));
    }
    s->right = Subgroup::with_predicate(G, "G", ggens, [N](const Element& x) { return N->in_G(x); });
    return s;
  }
  throw ConfigError("tree half-spaces need an amalgam or hnn group");
}

/// Union of translates g^k·base over integers k (k >= k_min when given). Membership scans
/// |k| <= |x| + 1, which is exact when every member has a representative g^k·u with
/// |k| <= |g^k·u|; that holds for the built-in uses (a translates of sets of reduced words
/// not starting with a^-1 in free groups, and Z^n).
inline SubsetPtr make_coset_union(SubsetPtr base, Element g, std::optional<std::int64_t> k_min = {}) {
  const GroupPtr G = base->group;
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "coset-union";
  s->params = {{"base", base->to_json()}, {"g", G->format(g)}};
  if (k_min) {
    s->params["k_min"] = *k_min;
  }
  const Group* raw = G.get();
  const Element gi = G->invert(g);
  s->predicate = [raw, base, g, gi, k_min](const Element& x) {
    const std::int64_t bound = static_cast<std::int64_t>(raw->word_length(x)) + 1;
    const std::int64_t start = k_min ? std::max(*k_min, -bound) : -bound;
    if (start > bound) {
      return false;
    }
    Element y = raw->multiply(raw->power(g, -start), x);
    for (std::int64_t k = start; k <= bound; ++k) {
      if (base->contains(y)) {
        return true;
      }
      y = raw->multiply(gi, y);
    }
    return false;
  };
  if (base->enumerator) {
    // Under the same assumption a member of Ball(e,R) is g^k·u with |k| <= R and
    // |u| <= R·(1 + |g|).
    s->enumerator = [raw, base, g, k_min](std::size_t R) {
      const std::int64_t r = static_cast<std::int64_t>(R);
      std::vector<Element> out;
      const std::vector<Element> us = base->enumerator(R * (1 + raw->word_length(g)));
      for (std::int64_t k = k_min ? std::max(*k_min, -r) : -r; k <= r; ++k) {
        const Element gk = raw->power(g, k);
        for (const Element& u : us) {
          Element x = raw->multiply(gk, u);
          if (raw->word_length(x) <= R) {
            out.push_back(std::move(x));
          }
        }
      }
      raw->sort_shortlex(out);
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
  }
  if (k_min) {
    s->left = Subgroup::trivial(G);
  } else if (G->kind() == GroupKind::free_group || G->kind() == GroupKind::free_abelian) {
    s->left = Subgroup::cyclic(G, g);
  } else {
    s->left = Subgroup::with_predicate(G, "cyclic", {g}, [](const Element&) { return false; });
  }
  s->right = Subgroup::trivial(G);
  return s;
}

inline SubsetPtr make_finite_set(GroupPtr G, std::vector<Element> elems) {
  G->sort_shortlex(elems);
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  auto set = std::make_shared<ElementSet>(elems.begin(), elems.end());
  auto s = std::make_shared<Subset>();
  s->group = G;
  s->kind = "finite-set";
  nlohmann::json names = nlohmann::json::array();
  for (const Element& x : elems) {
    names.push_back(G->format(x));
  }
  s->params = {{"elements", names}};
  s->predicate = [set](const Element& x) { return set->count(x) > 0; };
  s->left = Subgroup::trivial(G);
  s->right = Subgroup::trivial(G);
  s->enumerator = [elems](std::size_t) { return elems; };
  return s;
}

/// A minus B; the ambient of the result is A.
inline SubsetPtr make_difference(SubsetPtr A, SubsetPtr B) {
  auto s = std::make_shared<Subset>();
  s->group = A->group;
  s->kind = "difference";
  s->params = {{"minuend", A->to_json()}, {"subtrahend", B->to_json()}};
  s->predicate = [A, B](const Element& x) { return A->contains(x) && !B->contains(x); };
  s->left = Subgroup::trivial(A->group);
  s->right = Subgroup::trivial(A->group);
  s->ambient = A;
  return s;
}

inline SubsetPtr make_intersection(SubsetPtr A, SubsetPtr B) {
  auto s = std::make_shared<Subset>();
  s->group = A->group;
  s->kind = "intersection";
  s->params = {{"left", A->to_json()}, {"right", B->to_json()}};
  s->predicate = [A, B](const Element& x) { return A->contains(x) && B->contains(x); };
  s->left = Subgroup::trivial(A->group);
  s->right = Subgroup::trivial(A->group);
  s->ambient = A;
  return s;
}

/// Copy of `source` that records `ambient` as its enclosing set X.
inline SubsetPtr with_ambient(const SubsetPtr& source, SubsetPtr ambient) {
  auto s = std::make_shared<Subset>(*source);
  s->ambient = std::move(ambient);
  return s;
}

// ---------------------------------------------------------------------------------------
// Stabiliser verification

/// First x in Ball(e,r) with pred(gx) != pred(x) (left) or pred(xg) != pred(x) (right).
inline std::optional<Element> stabiliser_counterexample(const Subset& source, const Element& g,
                                                        bool left, std::size_t r) {
  const Group& G = *source.group;
  for (const Element& x : G.enumerate_ball(r)) {
    const Element y = left ? G.multiply(g, x) : G.multiply(x, g);
    if (source.contains(y) != source.contains(x)) {
      return x;
    }
  }
  return std::nullopt;
}

/// Confirms every claimed stabiliser generator (and inverse) on Ball(e,r), then searches
/// Ball(e, r-2) for stabilising elements outside the claimed subgroups.
inline CheckReport verify_stabilisers(const Subset& source, std::size_t r) {
  const Group& G = *source.group;
  CheckReport rep;
  rep.name = "verify-stabilisers";
  rep.params = {{"subset", source.to_json()}, {"r", r}, {"search_radius", r >= 2 ? r - 2 : 0}};
  for (int side = 0; side < 2; ++side) {
    const bool left = side == 0;
    const Subgroup& claimed = left ? source.left : source.right;
    const char* label = left ? "left" : "right";
    if (claimed.tag() == "whole") {
      continue;
    }
    std::vector<Element> gens = claimed.generators();
    for (const Element& h : claimed.generators()) {
      gens.push_back(G.invert(h));
    }
    for (const Element& h : gens) {
      ++rep.compared_count;
      if (auto x = stabiliser_counterexample(source, h, left, r)) {
        rep.verdict = Verdict::falsified;
        rep.witnesses.push_back({{"side", label}, {"claimed", G.format(h)}, {"x", G.format(*x)}});
      }
    }
    for (const Element& g : G.enumerate_ball(r >= 2 ? r - 2 : 0)) {
      if (g.is_identity() || claimed.contains(g)) {
        continue;
      }
      ++rep.compared_count;
      if (!stabiliser_counterexample(source, g, left, r)) {
        if (rep.verdict == Verdict::verified) {
          rep.verdict = Verdict::inconclusive;
        }
        rep.witnesses.push_back({{"side", label}, {"unclaimed", G.format(g)}});
      }
    }
  }
  return rep;
}

}  // namespace tlab
