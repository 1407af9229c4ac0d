#pragma once

#include "operator.hpp"

#include <deque>
#include <set>

namespace tlab {

namespace detail {

inline nlohmann::json format_all(const Group& G, const std::vector<Element>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Element& x : xs) {
    out.push_back(G.format(x));
  }
  return out;
}

/// True iff L·C is the whole group: C meets L, and L·C is closed under right
/// multiplication by every generator. Certifies that a search over C is exhaustive for
/// any property invariant under left multiplication by L. Candidate lists longer than
/// `limit` are truncated first (the certificate is then only sought on the prefix).
inline bool covers_group(const Group& G, const Subgroup& L, std::vector<Element> C,
                         std::size_t limit = 128) {
  if (C.size() > limit) {
    C.resize(limit);
  }
  auto in_LC = [&](const Element& x) {
    return std::any_of(C.begin(), C.end(),
                       [&](const Element& c) { return L.contains(G.multiply(x, G.invert(c))); });
  };
  if (!in_LC(Element{})) {
    return false;
  }
  for (const Element& c : C) {
    for (const Element& a : G.generators()) {
      if (!in_LC(G.multiply(c, a))) {
        return false;
      }
    }
  }
  return true;
}

/// Nearest point of `target` to x within distance r, if any (shortlex over Ball(e,r)).
inline std::optional<Element> point_within(const Group& G, const Element& x, std::size_t r,
                                           const std::function<bool(const Element&)>& target) {
  for (const Element& y : G.enumerate_ball(r)) {
    const Element z = G.multiply(x, y);
    if (target(z)) {
      return z;
    }
  }
  return std::nullopt;
}

/// Partitions `xs` into classes under x ~ y iff x y^-1 ∈ H (right cosets Hx), keeping the
/// input order of first appearance.
inline std::vector<std::vector<Element>> right_coset_classes(const Group& G, const Subgroup& H,
                                                             const std::vector<Element>& xs) {
  std::vector<std::vector<Element>> classes;
  for (const Element& x : xs) {
    bool placed = false;
    for (auto& cls : classes) {
      if (H.contains(G.multiply(x, G.invert(cls.front())))) {
        cls.push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) {
      classes.push_back({x});
    }
  }
  return classes;
}

/// Stabiliser claims of B usable as a periodicity certificate inside X: the claimed left
/// stabiliser of B, when its generators also stabilise X on Ball(e,r) and lie in K.
inline std::optional<Subgroup> periodicity_group(const Subset& B, const Subset& X, const Subgroup& K,
                                                 std::size_t r) {
  const Subgroup& L = B.left;
  if (L.tag() == "trivial" || L.generators().empty()) {
    return std::nullopt;
  }
  for (const Element& l : L.generators()) {
    if (!K.contains(l) || stabiliser_counterexample(B, l, true, r) ||
        stabiliser_counterexample(X, l, true, r)) {
      return std::nullopt;
    }
  }
  return L;
}

}  // namespace detail

/// Searches B ∩ Ball(e,R) in shortlex order for x with Ball(x,r) ⊆ B.
inline CheckReport deep_witness(const Subset& B, std::size_t r, std::size_t R) {
  const Group& G = *B.group;
  CheckReport rep;
  rep.name = "deep";
  rep.params = {{"subset", B.to_json()}, {"r", r}, {"R", R}};
  if (r > R) {
    throw PreconditionError("deep_witness: r must not exceed R");
  }
  auto outside = [&](const Element& z) { return !B.contains(z); };
  for (const Element& x : window_points(B, R)) {
    ++rep.compared_count;
    if (!detail::point_within(G, x, r, outside)) {
      rep.witnesses.push_back({{"x", G.format(x)}, {"ball_radius", r}});
      return rep;
    }
  }
  rep.verdict = Verdict::inconclusive;
  nlohmann::json w = {{"note", "no ball of the given radius inside B within the search radius"}};
  // With a claimed left stabiliser L of B and L·Ball(e,R) = Γ the failure is global; the
  // verdict stays bounded and the certificate is attached.
  const Subgroup& L = B.left;
  if (L.tag() != "trivial" && !L.generators().empty() && R >= r &&
      std::none_of(L.generators().begin(), L.generators().end(),
                   [&](const Element& l) { return stabiliser_counterexample(B, l, true, R).has_value(); }) &&
      detail::covers_group(G, L, G.enumerate_ball(R))) {
    w["falsifiable"] = "left stabiliser translates of the searched ball cover the group";
  }
  rep.witnesses.push_back(w);
  return rep;
}

/// Relative deepness at rate r: every coset Kx meeting X ∩ Ball(e,R-r) must contain a
/// point b of B ∩ Ball(e,R-r) with Ball(b,r) ∩ (X∖B) empty. A coset with no such point is
/// falsified when the coset lies inside the window, or when the claimed left stabiliser L
/// of B (L ≤ K, stabilising X) satisfies L·Ball(e,R-r) = Γ; otherwise inconclusive.
inline CheckReport relatively_deep_check(const Subset& B, const Subset& X, const Subgroup& K,
                                         std::size_t r, std::size_t R) {
  const Group& G = *B.group;
  CheckReport rep;
  rep.name = "relatively-deep";
  rep.params = {{"B", B.to_json()}, {"X", X.to_json()}, {"K", K.to_json()}, {"r", r}, {"R", R}};
  if (r > R) {
    throw PreconditionError("relatively_deep_check: r must not exceed R");
  }
  for (const Element& x : window_points(B, R)) {
    if (!X.contains(x)) {
      throw PreconditionError("B is not contained in X: " + G.format(x) + " lies in B but not in X");
    }
  }
  const std::size_t inner = R - r;
  const std::vector<Element> xs = window_points(X, inner);
  auto bad = [&](const Element& z) { return X.contains(z) && !B.contains(z); };
  // If L stabilises B and X, L ≤ K and L·Ball(e,R-r) = Γ, every point of B ∩ Kx is an
  // L-translate of a scanned point of the same coset, so a scanned failure is global.
  const auto periodic = detail::periodicity_group(B, X, K, R);
  const bool periodic_cover = periodic && detail::covers_group(G, *periodic, G.enumerate_ball(inner));
  for (const auto& coset : detail::right_coset_classes(G, K, xs)) {
    std::optional<Element> deep;
    nlohmann::json failures = nlohmann::json::array();
    for (const Element& b : coset) {
      if (!B.contains(b)) {
        continue;
      }
      ++rep.compared_count;
      auto z = detail::point_within(G, b, r, bad);
      if (!z) {
        deep = b;
        break;
      }
      if (failures.size() < 4) {
        failures.push_back({{"b", G.format(b)}, {"near_complement", G.format(*z)}});
      }
    }
    if (deep) {
      rep.witnesses.push_back({{"coset", G.format(coset.front())}, {"deep_point", G.format(*deep)}});
      continue;
    }
    // A finite coset lying inside the window has been scanned completely.
    bool complete = false;
    if (K.is_finite()) {
      complete = std::all_of(K.elements().begin(), K.elements().end(), [&](const Element& k) {
        return G.word_length(G.multiply(k, coset.front())) <= inner;
      });
    }
    std::string reason;
    if (complete) {
      reason = "coset scanned completely";
    } else if (periodic_cover) {
      reason = "left stabiliser of B carries the tested points onto the whole coset";
    }
    nlohmann::json w = {{"coset", G.format(coset.front())}, {"failures", failures}};
    if (!reason.empty()) {
      w["certificate"] = reason;
      rep.verdict = Verdict::falsified;
    } else if (rep.verdict == Verdict::verified) {
      rep.verdict = Verdict::inconclusive;
    }
    rep.witnesses.push_back(w);
  }
  return rep;
}

/// The set whose H-coset cover measures almost invariance: (B△Bg) when X is the whole
/// group, (Bg∖B) ∩ X otherwise; restricted to Ball(e,R), shortlex.
inline std::vector<Element> almost_invariant_support(const Subset& B, const Subset& X,
                                                     const Element& g, std::size_t R) {
  const Group& G = *B.group;
  const Element gi = G.invert(g);
  const bool whole = X.kind == "whole";
  // Every point of the support lies in B or in Bg, so candidates come from B near the ball.
  std::vector<Element> candidates;
  for (const Element& b : window_points(B, R + G.word_length(g))) {
    for (Element y : {b, G.multiply(b, g)}) {
      if (G.word_length(y) <= R) {
        candidates.push_back(std::move(y));
      }
    }
  }
  G.sort_shortlex(candidates);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<Element> out;
  for (const Element& y : candidates) {
    const bool in_B = B.contains(y);
    const bool in_Bg = B.contains(G.multiply(y, gi));
    if (whole ? (in_B != in_Bg) : (in_Bg && !in_B && X.contains(y))) {
      out.push_back(y);
    }
  }
  return out;
}

/// Greedy cover of shortlex-sorted `support` by right cosets H·f, choosing the
/// shortlex-least uncovered point as the next representative f.
inline std::vector<Element> greedy_right_coset_cover(const Group& G, const Subgroup& H,
                                                     const std::vector<Element>& support) {
  std::vector<Element> reps;
  for (const auto& cls : detail::right_coset_classes(G, H, support)) {
    reps.push_back(cls.front());
  }
  return reps;
}

/// Coset counts of the almost-invariance support at each radius.
inline std::vector<std::size_t> almost_invariant_counts(const Subset& B, const Subset& X,
                                                        const Subgroup& H, const Element& g,
                                                        const std::vector<std::size_t>& radii) {
  std::vector<std::size_t> counts;
  for (std::size_t R : radii) {
    counts.push_back(
        greedy_right_coset_cover(*B.group, H, almost_invariant_support(B, X, g, R)).size());
  }
  return counts;
}

/// Covers the support by right H-cosets at R and R+2; a stable count is evidence of
/// almost invariance, growth is evidence against it.
inline CheckReport almost_invariant_check(const Subset& B, const Subset& X, const Subgroup& H,
                                          const Element& g, std::size_t R) {
  const Group& G = *B.group;
  CheckReport rep;
  rep.name = "almost-invariant";
  rep.params = {{"B", B.to_json()}, {"X", X.to_json()}, {"H", H.to_json()},
                {"g", G.format(g)}, {"R", R}, {"mode", X.kind == "whole" ? "symmetric" : "relative"}};
  const auto s1 = almost_invariant_support(B, X, g, R);
  const auto s2 = almost_invariant_support(B, X, g, R + 2);
  const auto F1 = greedy_right_coset_cover(G, H, s1);
  const auto F2 = greedy_right_coset_cover(G, H, s2);
  rep.compared_count = s1.size() + s2.size();
  rep.witnesses.push_back({{"R", R}, {"F", detail::format_all(G, F1)}, {"cosets", F1.size()}});
  rep.witnesses.push_back({{"R", R + 2}, {"F", detail::format_all(G, F2)}, {"cosets", F2.size()}});
  if (F1.size() != F2.size()) {
    rep.verdict = Verdict::inconclusive;
    rep.witnesses.push_back({{"note", "coset count grows with the radius"}});
  }
  return rep;
}

struct CoseparabilityResult {
  CheckReport report;
  std::optional<std::vector<Element>> F_prime;
};

/// Smallest F' ⊆ Ball(e, f_radius), by size then shortlex, such that for every g in
/// Ball(e, g_radius): F' ∩ (B△gB) = ∅ iff g ∈ H. Sizes above `max_size` or more than
/// `budget` search nodes give an inconclusive verdict.
inline CoseparabilityResult coseparability_search(const Subset& B, const Subgroup& H,
                                                  std::size_t f_radius, std::size_t g_radius,
                                                  std::size_t max_size = 4,
                                                  std::size_t budget = 20'000'000) {
  const Group& G = *B.group;
  CoseparabilityResult res;
  CheckReport& rep = res.report;
  rep.name = "coseparable";
  rep.params = {{"subset", B.to_json()}, {"H", H.to_json()}, {"f_radius", f_radius},
                {"g_radius", g_radius}, {"max_size", max_size}};
  const std::vector<Element> pool = G.enumerate_ball(f_radius);
  std::vector<bool> in_B(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    in_B[i] = B.contains(pool[i]);
  }
  // Points meeting B△hB for some h ∈ H are excluded from F'.
  std::vector<bool> allowed(pool.size(), true);
  std::vector<std::vector<std::size_t>> constraints;
  std::vector<Element> constraint_g;
  for (const Element& g : G.enumerate_ball(g_radius)) {
    const Element gi = G.invert(g);
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (in_B[i] != B.contains(G.multiply(gi, pool[i]))) {
        hits.push_back(i);
      }
    }
    ++rep.compared_count;
    if (H.contains(g)) {
      for (std::size_t i : hits) {
        allowed[i] = false;
      }
    } else {
      constraints.push_back(std::move(hits));
      constraint_g.push_back(g);
    }
  }
  std::vector<std::size_t> idx;  // allowed pool indices
  std::vector<std::size_t> slot(pool.size(), SIZE_MAX);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (allowed[i]) {
      slot[i] = idx.size();
      idx.push_back(i);
    }
  }
  // Constraint sets over allowed slots; an empty one blocks every F'.
  std::set<std::vector<std::size_t>> unique;
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    std::vector<std::size_t> s;
    for (std::size_t i : constraints[c]) {
      if (slot[i] != SIZE_MAX) {
        s.push_back(slot[i]);
      }
    }
    if (s.empty()) {
      rep.verdict = Verdict::inconclusive;
      rep.witnesses.push_back({{"blocking_g", G.format(constraint_g[c])},
                               {"note", "B△gB misses every admissible point of the candidate ball"}});
      return res;
    }
    unique.insert(std::move(s));
  }
  std::vector<std::vector<std::size_t>> cons(unique.begin(), unique.end());
  const std::size_t m = idx.size();
  // member[j] = constraints containing slot j; last[c] = largest slot in constraint c.
  std::vector<std::vector<std::size_t>> member(m);
  std::vector<std::size_t> last(cons.size());
  for (std::size_t c = 0; c < cons.size(); ++c) {
    for (std::size_t j : cons[c]) {
      member[j].push_back(c);
    }
    last[c] = cons[c].back();
  }
  std::vector<std::size_t> hit_count(cons.size(), 0);
  std::size_t unhit = cons.size();
  std::vector<std::size_t> chosen;
  std::size_t nodes = 0;
  bool exhausted_budget = false;
  std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t k) -> bool {
    if (unhit == 0) {
      return true;
    }
    if (k == 0) {
      return false;
    }
    if (++nodes > budget) {
      exhausted_budget = true;
      return false;
    }
    for (std::size_t c = 0; c < cons.size(); ++c) {
      if (hit_count[c] == 0 && last[c] < start) {
        return false;
      }
    }
    for (std::size_t j = start; j < m && !exhausted_budget; ++j) {
      chosen.push_back(j);
      for (std::size_t c : member[j]) {
        if (hit_count[c]++ == 0) {
          --unhit;
        }
      }
      if (dfs(j + 1, k - 1)) {
        return true;
      }
      for (std::size_t c : member[j]) {
        if (--hit_count[c] == 0) {
          ++unhit;
        }
      }
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t k = 0; k <= std::min(max_size, m) && !exhausted_budget; ++k) {
    if (dfs(0, k)) {
      std::vector<Element> F;
      for (std::size_t j : chosen) {
        F.push_back(pool[idx[j]]);
      }
      res.F_prime = F;
      rep.witnesses.push_back({{"F_prime", detail::format_all(G, F)}, {"size", F.size()}});
      return res;
    }
  }
  rep.verdict = Verdict::inconclusive;
  rep.witnesses.push_back({{"note", exhausted_budget ? "search budget exhausted"
                                                      : "no separating set within the size bound"}});
  return res;
}

struct IsolationSets {
  std::vector<Element> F_prime;
  std::vector<Element> E1;
  std::vector<Element> E2;
  std::vector<Element> F1;
  std::vector<Element> F2;

  nlohmann::json to_json(const Group& G) const {
    return {{"F_prime", detail::format_all(G, F_prime)}, {"E1", detail::format_all(G, E1)},
            {"E2", detail::format_all(G, E2)}, {"F1", detail::format_all(G, F1)},
            {"F2", detail::format_all(G, F2)}};
  }
};

/// E1 = F'∩B, E2 = F'∖B (each enlarged by the shortlex-first suitable point of
/// Ball(e, enlarge_radius) when empty), F1 = E1⁻¹, F2 = E2⁻¹.
inline IsolationSets h_isolation_sets(const Subset& B, const std::vector<Element>& F_prime,
                                      std::size_t enlarge_radius = 10) {
  const Group& G = *B.group;
  IsolationSets s;
  s.F_prime = F_prime;
  for (const Element& x : F_prime) {
    (B.contains(x) ? s.E1 : s.E2).push_back(x);
  }
  auto enlarge = [&](std::vector<Element>& E, bool want_in_B) {
    if (!E.empty()) {
      return;
    }
    for (const Element& x : G.enumerate_ball(enlarge_radius)) {
      if (B.contains(x) == want_in_B) {
        E.push_back(x);
        s.F_prime.push_back(x);
        return;
      }
    }
    throw PreconditionError("h_isolation_sets: could not enlarge F' within the radius bound");
  };
  enlarge(s.E1, true);
  enlarge(s.E2, false);
  G.sort_shortlex(s.F_prime);
  for (const Element& x : s.E1) {
    s.F1.push_back(G.invert(x));
  }
  for (const Element& x : s.E2) {
    s.F2.push_back(G.invert(x));
  }
  G.sort_shortlex(s.F1);
  G.sort_shortlex(s.F2);
  return s;
}

/// Checks H = ⋂_{g∈F1} Bg ∖ ⋃_{g∈F2} Bg on Ball(e,R).
inline CheckReport verify_h_isolation(const Subset& B, const Subgroup& H,
                                      const std::vector<Element>& F1,
                                      const std::vector<Element>& F2, std::size_t R) {
  const Group& G = *B.group;
  if (F1.empty() || F2.empty()) {
    throw PreconditionError("verify_h_isolation: F1 and F2 must be nonempty");
  }
  CheckReport rep;
  rep.name = "h-isolation";
  rep.params = {{"subset", B.to_json()}, {"H", H.to_json()}, {"F1", detail::format_all(G, F1)},
                {"F2", detail::format_all(G, F2)}, {"R", R}};
  std::size_t in_lhs = 0;
  for (const Element& x : G.enumerate_ball(R)) {
    ++rep.compared_count;
    bool lhs = std::all_of(F1.begin(), F1.end(),
                           [&](const Element& g) { return B.contains(G.multiply(x, G.invert(g))); }) &&
               std::none_of(F2.begin(), F2.end(),
                            [&](const Element& g) { return B.contains(G.multiply(x, G.invert(g))); });
    in_lhs += lhs ? 1 : 0;
    if (lhs != H.contains(x)) {
      rep.verdict = Verdict::falsified;
      rep.witnesses.push_back({{"x", G.format(x)}, {"in_formula", lhs}, {"in_H", H.contains(x)}});
      return rep;
    }
  }
  rep.witnesses.push_back({{"H_points_in_ball", in_lhs}});
  return rep;
}

/// {b ∈ B ∩ Ball(e,R) : b·a ∉ B for some generator a}, shortlex.
inline std::vector<Element> boundary_set(const Subset& B, std::size_t R) {
  const Group& G = *B.group;
  std::vector<Element> out;
  for (const Element& b : window_points(B, R)) {
    if (std::any_of(G.generators().begin(), G.generators().end(),
                    [&](const Element& a) { return !B.contains(G.multiply(b, a)); })) {
      out.push_back(b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// Presentations and bounded convexity

/// A presentation <Σ | R> over the group's generating set. Relators are closed under
/// cyclic permutation and inversion and include every a a⁻¹.
struct Presentation {
  GroupPtr group;
  std::vector<Element> letters;
  std::vector<std::size_t> inverse;
  std::set<std::vector<std::size_t>> relators;

  Element evaluate(const std::vector<std::size_t>& w) const {
    Element x;
    for (std::size_t i : w) {
      x = group->multiply(x, letters[i]);
    }
    return x;
  }

  std::vector<std::size_t> invert_word(const std::vector<std::size_t>& w) const {
    std::vector<std::size_t> out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      out.push_back(inverse[*it]);
    }
    return out;
  }

  void add_relator(const std::vector<std::size_t>& r) {
    if (r.empty()) {
      return;
    }
    if (!evaluate(r).is_identity()) {
      throw std::logic_error("relator does not evaluate to the identity");
    }
    for (const auto& base : {r, invert_word(r)}) {
      for (std::size_t k = 0; k < base.size(); ++k) {
        std::vector<std::size_t> rot(base.begin() + static_cast<std::ptrdiff_t>(k), base.end());
        rot.insert(rot.end(), base.begin(), base.begin() + static_cast<std::ptrdiff_t>(k));
        relators.insert(rot);
      }
    }
  }

  std::string word_string(const std::vector<std::size_t>& w) const {
    std::string s;
    for (std::size_t i : w) {
      s += (s.empty() ? "" : " ") + group->format(letters[i]);
    }
    return s.empty() ? "e" : s;
  }

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : relators) {
      rs.push_back(word_string(r));
    }
    return {{"letters", detail::format_all(*group, letters)}, {"relators", rs}};
  }
};

/// Presentation over the group's generators: a a⁻¹ for every letter; for finite or amalgam
/// factors, every length-3 word of letters from one factor with trivial product;
/// commutators for Z^n; t·w(ι(h))·t⁻¹·w(θ(h))⁻¹ for generators h of H in an HNN extension.
inline Presentation make_presentation(GroupPtr G) {
  Presentation p;
  p.group = G;
  p.letters = G->generators();
  const std::size_t n = p.letters.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Element inv = G->invert(p.letters[i]);
    auto it = std::find(p.letters.begin(), p.letters.end(), inv);
    if (it == p.letters.end()) {
      throw std::logic_error("generating set is not closed under inversion");
    }
    p.inverse.push_back(static_cast<std::size_t>(it - p.letters.begin()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.add_relator({i, p.inverse[i]});
  }
  auto triples_within = [&](const std::function<bool(const Element&)>& in_part) {
    std::vector<std::size_t> part;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_part(p.letters[i])) {
        part.push_back(i);
      }
    }
    for (std::size_t a : part) {
      for (std::size_t b : part) {
        for (std::size_t c : part) {
          if (p.evaluate({a, b, c}).is_identity()) {
            p.add_relator({a, b, c});
          }
        }
      }
    }
  };
  switch (G->kind()) {
    case GroupKind::free_group:
      break;
    case GroupKind::free_abelian:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (p.inverse[i] != j && i != j) {
            p.add_relator({i, j, p.inverse[i], p.inverse[j]});
          }
        }
      }
      break;
    case GroupKind::finite:
      triples_within([](const Element&) { return true; });
      break;
    case GroupKind::amalgam: {
      const auto* A = dynamic_cast<const AmalgamGroup*>(G.get());
      triples_within([A](const Element& x) { return A->in_factor(AmalgamGroup::kG, x); });
      triples_within([A](const Element& x) { return A->in_factor(AmalgamGroup::kS, x); });
      break;
    }
    case GroupKind::hnn: {
      const auto* N = dynamic_cast<const HnnGroup*>(G.get());
      triples_within([N](const Element& x) { return N->in_G(x); });
      std::vector<std::size_t> g_letters;
      std::size_t t_letter = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (N->in_G(p.letters[i])) {
          g_letters.push_back(i);
        } else if (p.letters[i] == N->stable(1)) {
          t_letter = i;
        }
      }
      // Shortest G-letter word for an element of G (breadth first, bounded).
      auto word_for = [&](const Element& target) {
        std::deque<std::pair<Element, std::vector<std::size_t>>> q{{Element{}, {}}};
        ElementSet seen{Element{}};
        while (!q.empty()) {
          auto [x, w] = q.front();
          q.pop_front();
          if (x == target) {
            return w;
          }
          if (w.size() >= 64) {
            continue;
          }
          for (std::size_t i : g_letters) {
            Element y = G->multiply(x, p.letters[i]);
            if (seen.insert(y).second) {
              auto w2 = w;
              w2.push_back(i);
              q.emplace_back(y, w2);
            }
          }
        }
        throw std::logic_error("no G-word found for an element of G");
      };
      std::vector<std::int64_t> hgens;
      if (N->H().is_finite()) {
        for (std::size_t k = 1; k < N->H().order(); ++k) {
          hgens.push_back(static_cast<std::int64_t>(k));
        }
      } else {
        hgens.push_back(1);
      }
      for (std::int64_t h : hgens) {
        std::vector<std::size_t> r{t_letter};
        for (std::size_t i : word_for(N->iota_element(h))) {
          r.push_back(i);
        }
        r.push_back(p.inverse[t_letter]);
        for (std::size_t i : p.invert_word(word_for(N->theta_element(h)))) {
          r.push_back(i);
        }
        p.add_relator(r);
      }
      break;
    }
  }
  return p;
}

/// For every pair of words of length ≤ L staying in B with equal product, searches for a
/// chain of single-relation rewrites through words staying in B of length ≤ L + slack.
/// Unconnected pairs are reported; they make the verdict inconclusive, since a longer
/// chain may exist.
inline CheckReport convexity_bounded_check(const Subset& B, const Presentation& P, std::size_t L,
                                           std::size_t slack = 1,
                                           std::size_t node_budget = 2'000'000) {
  const Group& G = *B.group;
  CheckReport rep;
  rep.name = "convexity";
  rep.params = {{"subset", B.to_json()}, {"presentation", P.to_json()}, {"L", L}, {"slack", slack}};
  if (!B.contains(Element{})) {
    throw PreconditionError("convexity check needs e in B");
  }
  const std::size_t cap = L + slack;
  using Word = std::vector<std::size_t>;
  auto stays = [&](const Word& w) {
    Element x;
    for (std::size_t i : w) {
      x = G.multiply(x, P.letters[i]);
      if (!B.contains(x)) {
        return false;
      }
    }
    return true;
  };
  // Replacement table: v -> v' with v v'^-1 a relator.
  std::map<Word, std::vector<Word>> moves;
  std::size_t max_v = 0;
  for (const Word& r : P.relators) {
    for (std::size_t k = 0; k <= r.size(); ++k) {
      Word v(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
      Word rest(r.begin() + static_cast<std::ptrdiff_t>(k), r.end());
      moves[v].push_back(P.invert_word(rest));
      max_v = std::max(max_v, v.size());
    }
  }
  for (auto& [v, outs] : moves) {
    std::sort(outs.begin(), outs.end());
    outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
  }
  // Words of length ≤ L staying in B, grouped by product.
  std::vector<Word> targets;
  std::function<void(Word&, const Element&)> grow = [&](Word& w, const Element& x) {
    targets.push_back(w);
    if (w.size() == L) {
      return;
    }
    for (std::size_t i = 0; i < P.letters.size(); ++i) {
      Element y = G.multiply(x, P.letters[i]);
      if (B.contains(y)) {
        w.push_back(i);
        grow(w, y);
        w.pop_back();
      }
    }
  };
  Word start;
  grow(start, Element{});
  std::map<Word, std::size_t> component;
  std::size_t ncomp = 0;
  std::size_t nodes = 0;
  bool budget_hit = false;
  for (const Word& t : targets) {
    if (component.count(t) > 0) {
      continue;
    }
    const std::size_t id = ncomp++;
    std::deque<Word> q{t};
    component[t] = id;
    while (!q.empty() && !budget_hit) {
      Word w = q.front();
      q.pop_front();
      for (std::size_t i = 0; i <= w.size(); ++i) {
        for (std::size_t len = 0; len <= max_v && i + len <= w.size(); ++len) {
          auto it = moves.find(Word(w.begin() + static_cast<std::ptrdiff_t>(i),
                                    w.begin() + static_cast<std::ptrdiff_t>(i + len)));
          if (it == moves.end()) {
            continue;
          }
          for (const Word& v2 : it->second) {
            if (w.size() - len + v2.size() > cap) {
              continue;
            }
            Word w2(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            w2.insert(w2.end(), v2.begin(), v2.end());
            w2.insert(w2.end(), w.begin() + static_cast<std::ptrdiff_t>(i + len), w.end());
            if (component.count(w2) > 0 || !stays(w2)) {
              continue;
            }
            component[w2] = id;
            q.push_back(std::move(w2));
            if (++nodes > node_budget) {
              budget_hit = true;
            }
          }
        }
      }
    }
  }
  std::unordered_map<Element, std::pair<Word, std::size_t>, ElementHash> first_of;
  std::size_t unconnected = 0;
  for (const Word& t : targets) {
    const Element x = P.evaluate(t);
    auto [it, fresh] = first_of.emplace(x, std::make_pair(t, component[t]));
    ++rep.compared_count;
    if (!fresh && it->second.second != component[t]) {
      if (++unconnected <= 8) {
        rep.witnesses.push_back({{"w", P.word_string(it->second.first)}, {"w_prime", P.word_string(t)}});
      }
    }
  }
  rep.witnesses.push_back({{"words", targets.size()}, {"explored_nodes", component.size()},
                           {"unconnected_pairs", unconnected}});
  if (unconnected > 0 || budget_hit) {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

/// Deepness at radius r against the track formulation: the ball test succeeds within R
/// iff every track (e,F) with e ∈ F ⊆ Ball(e,r) acts nonzero somewhere on B ∩ Ball(e,R).
/// Tracks are enumerated exhaustively when Ball(e,r) has at most 21 points; otherwise the
/// full-ball track decides the universal statement (every smaller F inherits its witness)
/// and tracks with |F| ≤ 3 are enumerated as a cross-check.
inline CheckReport track_deepness_equivalence(const Subset& B, std::size_t r, std::size_t R) {
  const Group& G = *B.group;
  CheckReport rep;
  rep.name = "deep-track-equivalence";
  rep.params = {{"subset", B.to_json()}, {"r", r}, {"R", R}};
  const bool ball_deep = deep_witness(B, r, R).verdict == Verdict::verified;
  const std::vector<Element> ball = G.enumerate_ball(r);
  const std::size_t n = ball.size() - 1;  // ball[0] = e
  // mask(x) = {h ∈ Ball(e,r)∖{e} : x h⁻¹ ∈ B}, for x in the B-window.
  std::vector<std::vector<bool>> masks;
  std::vector<Element> xs = window_points(B, R);
  for (const Element& x : xs) {
    std::vector<bool> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = B.contains(G.multiply(x, G.invert(ball[i + 1])));
    }
    masks.push_back(std::move(m));
  }
  auto has_witness = [&](const std::vector<std::size_t>& F) {
    return std::any_of(masks.begin(), masks.end(), [&](const std::vector<bool>& m) {
      return std::all_of(F.begin(), F.end(), [&](std::size_t i) { return m[i]; });
    });
  };
  bool all_tracks = true;
  std::optional<std::vector<std::size_t>> failing;
  std::size_t tracks = 0;
  auto consider = [&](const std::vector<std::size_t>& F) {
    ++tracks;
    if (!has_witness(F)) {
      all_tracks = false;
      if (!failing) {
        failing = F;
      }
    }
  };
  bool exhaustive = n <= 20;
  if (exhaustive) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      std::vector<std::size_t> F;
      for (std::size_t i = 0; i < n; ++i) {
        if (bits >> i & 1U) {
          F.push_back(i);
        }
      }
      consider(F);
    }
  } else {
    std::vector<std::size_t> full(n);
    std::iota(full.begin(), full.end(), 0);
    consider(full);
    for (std::size_t i = 0; i < n; ++i) {
      consider({i});
      for (std::size_t j = i + 1; j < n; ++j) {
        consider({i, j});
        for (std::size_t k = j + 1; k < n; ++k) {
          consider({i, j, k});
        }
      }
    }
  }
  // Independent cross-check of the mask logic through the track operator semantics.
  std::vector<std::size_t> full(n);
  std::iota(full.begin(), full.end(), 0);
  Track full_track;
  full_track.F = ball;
  normalize_track(G, full_track);
  const bool full_nonzero = is_nonzero_on(full_track, B, R).has_value();
  rep.compared_count = tracks;
  auto F_json = [&](const std::vector<std::size_t>& F) {
    nlohmann::json j = nlohmann::json::array({"e"});
    for (std::size_t i : F) {
      j.push_back(G.format(ball[i + 1]));
    }
    return j;
  };
  nlohmann::json w = {{"ball_witness", ball_deep}, {"all_tracks_nonzero", all_tracks},
                      {"tracks_checked", tracks}, {"exhaustive", exhaustive},
                      {"full_ball_track_nonzero", full_nonzero}};
  if (failing) {
    w["first_zero_track_F"] = F_json(*failing);
  }
  rep.witnesses.push_back(w);
  if (ball_deep != all_tracks || full_nonzero != has_witness(full)) {
    rep.verdict = Verdict::falsified;
  }
  return rep;
}

}  // namespace tlab
