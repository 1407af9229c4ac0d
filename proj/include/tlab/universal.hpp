#pragma once

#include "group_io.hpp"
#include "checks.hpp"

namespace tlab {

/// Digit n (n ≥ 0) of the concatenation of all binary strings, ordered by length and then
/// lexicographically with 0 < 1: 0 1 00 01 10 11 000 ... Strings of length ℓ start at
/// offset (ℓ-2)·2^ℓ + 2.
inline int universal_z_digit(std::uint64_t n) {
  std::uint64_t len = 1;
  std::uint64_t start = 0;
  while (true) {
    const std::uint64_t block = len << len;  // len · 2^len digits
    if (n < start + block) {
      break;
    }
    start += block;
    ++len;
  }
  const std::uint64_t off = n - start;
  const std::uint64_t index = off / len;
  const std::uint64_t pos = off % len;
  return static_cast<int>((index >> (len - 1 - pos)) & 1U);
}

inline std::string universal_z_prefix(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += static_cast<char>('0' + universal_z_digit(i));
  }
  return s;
}

/// U ⊂ ℤ: n ∈ U iff n ≥ 0 and digit n is 1. N is the length of the prefix recorded in the
/// parameters; membership is computed for every n.
inline SubsetPtr build_universal_z(std::size_t N, GroupPtr Z = nullptr) {
  if (N < 1) {
    throw ConfigError("universal subset needs N >= 1");
  }
  if (!Z) {
    Z = builtin_group("Z");
  }
  const auto* raw = dynamic_cast<const FreeAbelianGroup*>(Z.get());
  if (raw == nullptr || raw->rank() != 1) {
    throw PreconditionError("universal subset of the integers needs the group Z");
  }
  auto s = std::make_shared<Subset>();
  s->group = Z;
  s->kind = "universal";
  s->params = {{"N", N}, {"prefix", universal_z_prefix(std::min<std::size_t>(N, 64))}};
  s->predicate = [raw](const Element& x) {
    const std::int64_t n = raw->coordinate(x, 0);
    return n >= 0 && universal_z_digit(static_cast<std::uint64_t>(n)) == 1;
  };
  s->enumerator = [raw](std::size_t R) {
    std::vector<Element> out;
    for (std::uint64_t n = 0; n <= R; ++n) {
      if (universal_z_digit(n) == 1) {
        out.push_back(raw->integer(static_cast<std::int64_t>(n)));
      }
    }
    return out;
  };
  s->left = Subgroup::trivial(Z);
  s->right = Subgroup::trivial(Z);
  return s;
}

namespace detail {

/// Bitmask of {y ∈ ball : x·y ∈ U}; bit i stands for ball[i].
inline std::uint64_t local_pattern(const Group& G, const Subset& U, const std::vector<Element>& ball,
                                   const Element& x) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (U.contains(G.multiply(x, ball[i]))) {
      m |= std::uint64_t{1} << i;
    }
  }
  return m;
}

inline nlohmann::json pattern_json(const Group& G, const std::vector<Element>& ball, std::uint64_t m) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (m >> i & 1U) {
      j.push_back(G.format(ball[i]));
    }
  }
  return j;
}

/// True iff the claimed left stabiliser of U is nontrivial, checked on Ball(e,r), and its
/// translates of `points` cover the group.
inline bool stabiliser_covers(const Subset& U, const std::vector<Element>& points, std::size_t r) {
  const Subgroup& L = U.left;
  if (L.tag() == "trivial" || L.generators().empty()) {
    return false;
  }
  for (const Element& l : L.generators()) {
    if (stabiliser_counterexample(U, l, true, r)) {
      return false;
    }
  }
  return covers_group(*U.group, L, points);
}

}  // namespace detail

/// For every F ⊆ Ball(e,r) searches a center x with U ∩ Ball(x,r) = xF, over `centers`
/// (default Ball(e, bound)). Missing patterns give an inconclusive verdict, or falsified
/// when translates of the searched centers by the left stabiliser of U cover the group.
inline CheckReport universality_check(const Subset& U, std::size_t r, std::size_t bound,
                                      std::vector<Element> centers = {}) {
  const Group& G = *U.group;
  const std::vector<Element> ball = G.enumerate_ball(r);
  if (ball.size() > 24) {
    throw ResourceCapError("universality_check: 2^" + std::to_string(ball.size()) + " patterns is too many");
  }
  CheckReport rep;
  rep.name = "universality";
  rep.params = {{"subset", U.to_json()}, {"r", r}, {"bound", bound}};
  if (centers.empty()) {
    centers = G.enumerate_ball(bound);
  } else {
    rep.params["centers"] = centers.size();
  }
  const std::uint64_t total = std::uint64_t{1} << ball.size();
  std::vector<std::optional<std::size_t>> found(total);
  std::uint64_t count = 0;
  for (std::size_t c = 0; c < centers.size() && count < total; ++c) {
    ++rep.compared_count;
    const std::uint64_t m = detail::local_pattern(G, U, ball, centers[c]);
    if (!found[m]) {
      found[m] = c;
      ++count;
    }
  }
  nlohmann::json table = nlohmann::json::array();
  nlohmann::json missing = nlohmann::json::array();
  for (std::uint64_t m = 0; m < total; ++m) {
    if (found[m]) {
      table.push_back({{"F", detail::pattern_json(G, ball, m)}, {"x", G.format(centers[*found[m]])}});
    } else if (missing.size() < 8) {
      missing.push_back(detail::pattern_json(G, ball, m));
    }
  }
  rep.witnesses.push_back({{"patterns", total}, {"found", count}, {"centers", table}, {"missing", missing}});
  if (count < total) {
    rep.verdict = detail::stabiliser_covers(U, centers, r + 1) ? Verdict::falsified : Verdict::inconclusive;
  }
  return rep;
}

/// Linear independence of the track operators T^U_{g,F}. Tracks are grouped by g; within a
/// group the inclusion-minimal remaining F_i is peeled off together with a witness x in
/// Ball(e,R) satisfying U ∩ Ball(x,r) = xF_i⁻¹ (r bounds every F). Then T_{g,F_j}δ_x is
/// δ_{xg⁻¹} for F_j ⊆ F_i and 0 otherwise, so the evaluation matrix
/// A[l][k] = ⟨T_l δ_{x_k}, δ_{x_k g_k⁻¹}⟩ is triangular with unit diagonal in peeling order;
/// its exact rank is reported. When some track has no witness, the operators are compared
/// on the window instead; a rank deficiency there is falsifying when translates of the
/// compared rows by the left stabiliser of U cover the group (the operators commute with
/// those translations), else inconclusive.
inline CheckReport track_independence_check(const SubsetPtr& U, std::vector<Track> tracks, std::size_t R) {
  const Group& G = *U->group;
  for (Track& t : tracks) {
    t.F.push_back(Element{});
    t.F.push_back(t.g);
    normalize_track(G, t);
  }
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = i + 1; j < tracks.size(); ++j) {
      if (tracks[i] == tracks[j]) {
        throw PreconditionError("duplicate track " + track_to_json(G, tracks[i]).dump());
      }
    }
  }
  CheckReport rep;
  rep.name = "track-independence";
  nlohmann::json tj = nlohmann::json::array();
  for (const Track& t : tracks) {
    tj.push_back(track_to_json(G, t));
  }
  rep.params = {{"subset", U->to_json()}, {"tracks", tj}, {"R", R}};
  const std::size_t n = tracks.size();
  if (n == 0) {
    return rep;
  }
  std::size_t r = 0;
  for (const Track& t : tracks) {
    for (const Element& h : t.F) {
      r = std::max(r, G.word_length(h));
    }
  }
  const std::vector<Element> ball = G.enumerate_ball(r);
  if (ball.size() > 63) {
    throw ResourceCapError("track_independence_check: track sets reach too far");
  }
  auto pattern_of = [&](const Track& t) {
    std::uint64_t m = 0;
    for (const Element& h : t.F) {
      const Element hi = G.invert(h);
      const auto it = std::find(ball.begin(), ball.end(), hi);
      m |= std::uint64_t{1} << static_cast<std::size_t>(it - ball.begin());
    }
    return m;
  };
  // Pattern → first center in the search ball.
  std::unordered_map<std::uint64_t, Element> center_of;
  for (const Element& x : G.enumerate_ball(R)) {
    center_of.emplace(detail::local_pattern(G, *U, ball, x), x);
  }
  std::vector<std::size_t> order;
  std::vector<Element> witness(n);
  std::vector<bool> has_witness(n, false);
  std::vector<bool> peeled(n, false);
  bool all_found = true;
  for (std::size_t round = 0; round < n; ++round) {
    // Smallest remaining F (then shortlex by g, F): inclusion-minimal within its g-group.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (peeled[i]) {
        continue;
      }
      if (!pick || tracks[i].F.size() < tracks[*pick].F.size()) {
        pick = i;
      }
    }
    peeled[*pick] = true;
    order.push_back(*pick);
    auto it = center_of.find(pattern_of(tracks[*pick]));
    if (it != center_of.end()) {
      witness[*pick] = it->second;
      has_witness[*pick] = true;
    } else {
      all_found = false;
    }
  }
  nlohmann::json wit = nlohmann::json::array();
  for (std::size_t i : order) {
    nlohmann::json j = {{"track", track_to_json(G, tracks[i])}};
    if (has_witness[i]) {
      j["x"] = G.format(witness[i]);
    }
    wit.push_back(j);
  }
  if (all_found) {
    // A[l][k] computed from the operator definition, independent of the peeling argument.
    std::vector<std::map<std::size_t, Rational>> rows(n);
    bool triangular = true;
    for (std::size_t kk = 0; kk < n; ++kk) {
      const std::size_t k = order[kk];
      for (std::size_t ll = 0; ll < n; ++ll) {
        const std::size_t l = order[ll];
        if (tracks[l].g == tracks[k].g && track_acts_at(G, tracks[l], *U, witness[k])) {
          rows[ll][kk] = 1;
          triangular = triangular && ll <= kk;
        }
      }
      ++rep.compared_count;
    }
    const std::size_t rank = rank_of_rows(rows);
    rep.witnesses.push_back({{"witnesses", wit}, {"rank", rank}, {"tracks", n},
                             {"triangular", triangular}, {"local_radius", r}});
    if (rank != n) {
      rep.verdict = Verdict::falsified;
    }
    return rep;
  }
  // Fallback: compare the operators on the window.
  const WindowPtr w = make_window(U, R);
  std::vector<Operator> ops;
  for (const Track& t : tracks) {
    ops.push_back(op_from_track(w, t));
  }
  std::vector<std::size_t> rows_used;
  for (std::size_t x = 0; x < w->size(); ++x) {
    if (std::none_of(ops.begin(), ops.end(), [&](const Operator& o) { return o.row_clipped(x); })) {
      rows_used.push_back(x);
    }
  }
  std::vector<std::map<std::size_t, Rational>> vecs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x : rows_used) {
      for (const auto& [y, v] : ops[i].row(x)) {
        vecs[i][x * w->size() + y] = v;
      }
    }
  }
  const std::size_t rank = rank_of_rows(vecs);
  nlohmann::json equal_pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (vecs[i] == vecs[j] && equal_pairs.size() < 8) {
        equal_pairs.push_back({track_to_json(G, tracks[i]), track_to_json(G, tracks[j])});
      }
    }
  }
  std::vector<Element> compared_points;
  for (std::size_t x : rows_used) {
    compared_points.push_back(w->point(x));
  }
  const bool global = detail::stabiliser_covers(*U, compared_points, R);
  rep.compared_count = rows_used.size();
  rep.witnesses.push_back({{"witnesses", wit}, {"window_rank", rank}, {"tracks", n},
                           {"equal_pairs", equal_pairs}, {"compared_rows", rows_used.size()},
                           {"dependence_is_global", global && rank < n}});
  if (rank < n) {
    rep.verdict = global ? Verdict::falsified : Verdict::inconclusive;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

/// Sparse universal-type subset of F_2 inside the reduced words starting with b: the k-th
/// pattern F_k ⊆ Ball(e,r_k) (radius 0..r_max, then by size, then shortlex) is placed as
/// x_k F_k with x_k = b a^{m_k}, m_0 = r_max + 3, m_{k+1} = m_k + factor·(r_k + r_{k+1} + 1).
struct UniversalWords {
  SubsetPtr U;
  std::vector<Element> centers;
  nlohmann::json placements;
};

inline UniversalWords build_universal_in_b_words(const GroupPtr& F, std::size_t r_max = 1,
                                                 std::size_t factor = 4) {
  const auto& FF = detail::as_free(F, "universal b-words");
  if (FF.rank() != 2) {
    throw PreconditionError("universal b-words construction needs F_2");
  }
  const Group& G = *F;
  const Element a = FF.generator(0);
  const Element b = FF.generator(1);
  struct Pattern {
    std::size_t radius;
    std::vector<Element> F;
  };
  std::vector<Pattern> patterns;
  for (std::size_t rad = 0; rad <= r_max; ++rad) {
    const std::vector<Element> ball = G.enumerate_ball(rad);
    if (ball.size() > 20) {
      throw ResourceCapError("universal b-words: too many patterns");
    }
    std::vector<std::vector<std::size_t>> subsets;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << ball.size()); ++m) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < ball.size(); ++i) {
        if (m >> i & 1U) {
          s.push_back(i);
        }
      }
      subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& x, const auto& y) {
      return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    for (const auto& s : subsets) {
      Pattern p{rad, {}};
      for (std::size_t i : s) {
        p.F.push_back(ball[i]);
      }
      patterns.push_back(std::move(p));
    }
  }
  UniversalWords out;
  std::vector<Element> members;
  out.placements = nlohmann::json::array();
  std::int64_t m = static_cast<std::int64_t>(r_max) + 3;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    if (k > 0) {
      const std::int64_t gap =
          static_cast<std::int64_t>(factor * (patterns[k - 1].radius + patterns[k].radius + 1));
      if (gap <= static_cast<std::int64_t>(patterns[k - 1].radius + patterns[k].radius)) {
        throw ConfigError("universal b-words: placement separation too small, balls overlap");
      }
      m += gap;
    }
    const Element x = G.multiply(b, G.power(a, m));
    out.centers.push_back(x);
    for (const Element& y : patterns[k].F) {
      const Element u = G.multiply(x, y);
      if (!FF.first_letter(u) || *FF.first_letter(u) != std::make_pair(std::size_t{1}, 1)) {
        throw std::logic_error("placed element does not start with b");
      }
      members.push_back(u);
    }
    out.placements.push_back({{"k", k}, {"radius", patterns[k].radius}, {"m", m},
                              {"F", detail::format_all(G, patterns[k].F)}});
  }
  const std::size_t count = members.size();
  auto U = std::make_shared<Subset>(*make_finite_set(F, members));
  if (U->enumerator(0).size() != count) {
    throw ConfigError("universal b-words: placements overlap");
  }
  U->kind = "universal";
  U->params = {{"construction", "b-words"}, {"r_max", r_max}, {"factor", factor},
               {"placements", out.placements}};
  out.U = U;
  return out;
}

/// Bounded reproduction of the co-separability counterexample: X = ⟨a⟩U and
/// B = {a^n u : n ≥ 0, u ∈ U}. Expects relative deepness and stable coset covers for
/// g ∈ {a, b}, and no co-separating F' within Ball(e, f_radius). The demo verdict is
/// verified when all three expectations hold. Universality of U, X and B at radius 1 is
/// recorded alongside.
inline CheckReport example_coseparability_demo(std::size_t r = 2, std::size_t R = 12,
                                               std::size_t f_radius = 4, std::size_t g_radius = 4) {
  const GroupPtr F = builtin_group("F2");
  const auto& FF = detail::as_free(F, "coseparability demo");
  const UniversalWords uw = build_universal_in_b_words(F);
  const Element a = FF.generator(0);
  const SubsetPtr X = make_coset_union(uw.U, a);
  const SubsetPtr B = with_ambient(make_coset_union(uw.U, a, 0), X);
  CheckReport rep;
  rep.name = "coseparability-demo";
  rep.params = {{"r", r}, {"R", R}, {"f_radius", f_radius}, {"g_radius", g_radius}};
  const CheckReport deep = relatively_deep_check(*B, *X, X->left, r, R);
  rep.witnesses.push_back(deep.to_json());
  bool ai_ok = true;
  for (const Element& g : {a, FF.generator(1)}) {
    const CheckReport ai = almost_invariant_check(*B, *X, Subgroup::trivial(F), g, R);
    ai_ok = ai_ok && ai.passed();
    rep.witnesses.push_back(ai.to_json());
  }
  const CoseparabilityResult cs = coseparability_search(*B, Subgroup::trivial(F), f_radius, g_radius);
  rep.witnesses.push_back(cs.report.to_json());
  rep.compared_count = deep.compared_count + cs.report.compared_count;
  // Universality of U, X and B at radius 1, searched at the placement centers.
  nlohmann::json universal = nlohmann::json::object();
  for (const auto& [label, S] : {std::pair{"U", uw.U}, std::pair{"X", X}, std::pair{"B", B}}) {
    universal[label] = universality_check(*S, 1, 0, uw.centers).passed();
  }
  const bool contrast = deep.passed() && ai_ok && !cs.F_prime;
  rep.witnesses.push_back({{"relatively_deep", deep.passed()}, {"almost_invariant", ai_ok},
                           {"coseparating_set_found", cs.F_prime.has_value()},
                           {"universal_r1", universal}});
  if (!contrast) {
    rep.verdict = cs.F_prime ? Verdict::falsified : Verdict::inconclusive;
  }
  return rep;
}

}  // namespace tlab
