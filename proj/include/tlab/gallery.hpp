#pragma once

#include "group_io.hpp"
#include "hilbert_module.hpp"

namespace tlab {

namespace detail {

/// Sub-report for one operator identity lhs = rhs on unclipped rows.
inline CheckReport identity_report(const std::string& name, const Operator& lhs, const Operator& rhs) {
  CheckReport rep;
  rep.name = name;
  const EqualityCertificate cert = guarded_equal(lhs, rhs);
  rep.compared_count = cert.compared;
  rep.witnesses.push_back(cert.to_json(lhs.window()));
  if (!cert.equal) {
    rep.verdict = Verdict::falsified;
  }
  return rep;
}

inline CheckReport boolean_report(const std::string& name, bool ok, nlohmann::json detail_json) {
  CheckReport rep;
  rep.name = name;
  rep.compared_count = 1;
  rep.witnesses.push_back(std::move(detail_json));
  if (!ok) {
    rep.verdict = Verdict::falsified;
  }
  return rep;
}

inline Operator range_projection(const Operator& T) { return compose(T, adjoint(T)); }
inline Operator source_projection(const Operator& T) { return compose(adjoint(T), T); }

inline const AmalgamGroup& as_amalgam(const GroupPtr& G, const char* what) {
  const auto* A = dynamic_cast<const AmalgamGroup*>(G.get());
  if (!A) {
    throw PreconditionError(std::string(what) + " needs an amalgamated free product");
  }
  return *A;
}

inline const HnnGroup& as_hnn(const GroupPtr& G, const char* what) {
  const auto* N = dynamic_cast<const HnnGroup*>(G.get());
  if (!N) {
    throw PreconditionError(std::string(what) + " needs an HNN extension");
  }
  return *N;
}

}  // namespace detail

/// B = ℕ ⊂ ℤ: T_1 T_{-1} = 1 and T_{-1} T_1 = 1 − p_0 with p_0 from the isolation formula.
inline CheckReport run_toeplitz_check(std::size_t R) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr N = make_interval(Z, 0, 0, std::nullopt);
  const WindowPtr w = make_window(N, R);
  CheckReport rep;
  rep.name = "toeplitz";
  rep.params = {{"R", R}};
  const Operator T1 = build_generator_op(w, Z->parse("1"));
  const Operator Tm = build_generator_op(w, Z->parse("-1"));
  const Operator I = Operator::identity(w);
  const Operator p0 = ph_from_isolation(w, Subgroup::trivial(Z), {Z->parse("0")}, {Z->parse("1")});
  rep.absorb(detail::identity_report("T1*T-1 = 1", T1 * Tm, I));
  rep.absorb(detail::identity_report("T-1*T1 = 1 - p0", Tm * T1, I - p0));
  rep.absorb(detail::identity_report("p0^2 = p0", p0 * p0, p0));
  rep.absorb(detail::identity_report("p0 = e00", p0, coset_projection(w, {Element{}}, Element{})));
  rep.absorb(deep_witness(*N, 3, R));
  return rep;
}

/// B = reduced words of F_n not beginning with s_1⁻¹.
inline CheckReport run_pv_check(std::size_t n, std::size_t R) {
  if (n < 2) {
    throw PreconditionError("pv check needs n >= 2");
  }
  const GroupPtr F = builtin_group("F" + std::to_string(n));
  const auto& FF = detail::as_free(F, "pv check");
  const SubsetPtr B = make_first_letter(F, {{0, -1}});
  const WindowPtr w = make_window(B, R);
  CheckReport rep;
  rep.name = "pimsner-voiculescu";
  rep.params = {{"n", n}, {"R", R}};
  const Operator I = Operator::identity(w);
  const Operator pe = coset_projection(w, {Element{}}, Element{});
  for (std::size_t i = 1; i < n; ++i) {
    const Operator T = build_generator_op(w, FF.generator(i));
    const std::string s = FF.format(FF.generator(i));
    rep.absorb(detail::identity_report("T_" + s + " T_" + s + "* = 1", detail::range_projection(T), I));
    rep.absorb(detail::identity_report("T_" + s + "* T_" + s + " = 1", detail::source_projection(T), I));
    rep.absorb(detail::identity_report("T_" + s + "* = T_" + s + "^-1", adjoint(T),
                                       build_generator_op(w, FF.generator(i, -1))));
  }
  const Operator T1 = build_generator_op(w, FF.generator(0));
  rep.absorb(detail::identity_report("T_s1 T_s1* = 1", detail::range_projection(T1), I));
  const Operator defect = I - detail::source_projection(T1);
  rep.absorb(detail::identity_report("T_s1* T_s1 = 1 - p_e", detail::source_projection(T1), I - pe));
  const std::size_t rank = matrix_rank(defect, true);
  rep.absorb(detail::boolean_report("defect rank", rank == 1, {{"rank", rank}}));
  return rep;
}

/// E_n on the positive cone (V_i = T^B_{s_i⁻¹}) and O_n on X = ∪_k s_1^k B
/// (W_i = T^X_{s_i⁻¹}), on windows of radius L.
inline CheckReport run_cuntz_check(std::size_t n, std::size_t L) {
  if (n < 2) {
    throw PreconditionError("cuntz check needs n >= 2");
  }
  const GroupPtr F = builtin_group("F" + std::to_string(n));
  const auto& FF = detail::as_free(F, "cuntz check");
  const SubsetPtr B = make_positive_cone(F);
  const SubsetPtr X = make_coset_union(B, FF.generator(0));
  CheckReport rep;
  rep.name = "cuntz";
  rep.params = {{"n", n}, {"L", L}};
  {
    const WindowPtr w = make_window(B, L);
    const Operator I = Operator::identity(w);
    std::vector<Operator> ranges;
    Operator sum = Operator::zero(w);
    for (std::size_t i = 0; i < n; ++i) {
      const Operator V = build_generator_op(w, FF.generator(i, -1));
      rep.absorb(detail::identity_report("V" + std::to_string(i + 1) + "* V = 1", detail::source_projection(V), I));
      ranges.push_back(detail::range_projection(V));
      sum = sum + ranges.back();
    }
    rep.absorb(detail::identity_report("sum V_i V_i* = 1 - p_e", sum,
                                       I - coset_projection(w, {Element{}}, Element{})));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        rep.absorb(detail::identity_report("range " + std::to_string(i + 1) + " orthogonal to " + std::to_string(j + 1),
                                           ranges[i] * ranges[j], Operator::zero(w)));
      }
    }
    rep.absorb(detail::boolean_report("E_n window", true, {{"points", w->size()}}));
  }
  {
    const WindowPtr w = make_window(X, L);
    const Operator I = Operator::identity(w);
    std::vector<Operator> ranges;
    Operator sum = Operator::zero(w);
    for (std::size_t i = 0; i < n; ++i) {
      const Operator W = build_generator_op(w, FF.generator(i, -1));
      rep.absorb(detail::identity_report("W" + std::to_string(i + 1) + "* W = 1", detail::source_projection(W), I));
      ranges.push_back(detail::range_projection(W));
      sum = sum + ranges.back();
    }
    rep.absorb(detail::identity_report("sum W_i W_i* = 1", sum, I));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        rep.absorb(detail::identity_report("X range " + std::to_string(i + 1) + " orthogonal to " + std::to_string(j + 1),
                                           ranges[i] * ranges[j], Operator::zero(w)));
      }
    }
    rep.absorb(detail::boolean_report("O_n window", true, {{"points", w->size()}}));
  }
  return rep;
}

/// Relation words of length ≤ 3 with letters from one factor and trivial product,
/// deduplicated, in a fixed order. Each is classified by whether every prefix stays in B.
struct RelationWord {
  std::vector<Element> letters;
  bool stays_in_B = true;
};

inline std::vector<RelationWord> factor_relations(const Subset& B) {
  const Group& G = *B.group;
  const auto& A = dynamic_cast<const AmalgamGroup&>(G);
  std::vector<RelationWord> out;
  for (std::int32_t side : {AmalgamGroup::kG, AmalgamGroup::kS}) {
    std::vector<Element> part;
    for (const Element& a : G.generators()) {
      if (A.in_factor(side, a)) {
        part.push_back(a);
      }
    }
    auto add = [&](std::vector<Element> w) {
      RelationWord r;
      Element x;
      for (const Element& a : w) {
        x = G.multiply(x, a);
        r.stays_in_B = r.stays_in_B && B.contains(x);
      }
      if (!x.is_identity()) {
        return;
      }
      r.letters = std::move(w);
      out.push_back(std::move(r));
    };
    for (const Element& a : part) {
      for (const Element& b : part) {
        // Words with letters in H are shared by both factors; keep them once.
        if (side == AmalgamGroup::kS && A.in_H(a) && A.in_H(b)) {
          continue;
        }
        add({a, b});
        for (const Element& c : part) {
          if (side == AmalgamGroup::kS && A.in_H(a) && A.in_H(b) && A.in_H(c)) {
            continue;
          }
          add({a, b, c});
        }
      }
    }
  }
  return out;
}

/// Every relation staying in B evaluates to 1 and every crossing relation to 1 − p_H.
inline CheckReport run_relation_classification(const SubsetPtr& B, std::size_t R) {
  const Group& G = *B->group;
  detail::as_amalgam(B->group, "relation classification");
  if (!B->left.is_finite()) {
    throw PreconditionError("relation classification needs a finite H");
  }
  const WindowPtr w = make_window(B, R);
  CheckReport rep;
  rep.name = "relation-classification";
  rep.params = {{"subset", B->to_json()}, {"R", R}};
  const Operator I = Operator::identity(w);
  const Operator pH = Operator::diagonal(w, [&](const Element& x) { return B->left.contains(x); });
  std::size_t staying = 0;
  std::size_t crossing = 0;
  nlohmann::json failures = nlohmann::json::array();
  for (const RelationWord& r : factor_relations(*B)) {
    Operator prod = I;
    std::string text;
    for (const Element& a : r.letters) {
      prod = prod * build_generator_op(w, a);
      text += (text.empty() ? "" : " ") + G.format(a);
    }
    const Operator expected = r.stays_in_B ? I : I - pH;
    const EqualityCertificate cert = guarded_equal(prod, expected);
    rep.compared_count += cert.compared;
    (r.stays_in_B ? staying : crossing) += 1;
    if (!cert.equal) {
      rep.verdict = Verdict::falsified;
      failures.push_back({{"relation", text}, {"stays_in_B", r.stays_in_B}, {"certificate", cert.to_json(*w)}});
    }
  }
  rep.witnesses.push_back({{"staying_relations", staying}, {"crossing_relations", crossing},
                           {"failures", failures}});
  return rep;
}

/// Which representation an element of the group algebra of a factor comes from.
enum class LanceRep { mu, nu };

/// Γ = G *_H S with H trivial, B the G-side half-space. On the grid S-window × B-window
/// (identified with Γ via (s,β) ↦ sβ), θ(x) is right translation by the group element of
/// x and θ'(x) = 1 ⊗ x. Reports the support of θ − θ', its scalar rank on unclipped rows
/// and its rank over ℚ[S], computed on the rows (e,β) as a matrix of Laurent polynomials
/// in the generator of S evaluated at several rational points (S infinite cyclic), or
/// over ℚ directly when S is finite.
inline CheckReport run_lance_difference_check(const GroupPtr& Gam, LanceRep which, const Element& g,
                                              std::size_t R) {
  const auto& A = detail::as_amalgam(Gam, "lance check");
  if (!A.h_is_trivial()) {
    throw PreconditionError("lance check is limited to trivial H");
  }
  const Group& G = *Gam;
  const SubsetPtr B = make_tree_halfspace(Gam, "G");
  const bool g_ok = which == LanceRep::mu ? A.in_factor(AmalgamGroup::kG, g) : A.in_factor(AmalgamGroup::kS, g);
  if (!g_ok) {
    throw PreconditionError("lance check: the element must lie in the factor of the chosen representation");
  }
  CheckReport rep;
  rep.name = "lance-difference";
  rep.params = {{"group", G.name()}, {"rep", which == LanceRep::mu ? "mu" : "nu"}, {"x", G.format(g)}, {"R", R}};
  // (s, β) with s the leading S-syllable of γ (or e) and β = s⁻¹γ ∈ B.
  auto split = [&](const Element& x) -> std::pair<Element, Element> {
    auto side = A.first_side(x);
    if (side && *side == AmalgamGroup::kS) {
      const Element s = A.factor_element(AmalgamGroup::kS, x.word().front().value);
      return {s, G.multiply(G.invert(s), x)};
    }
    return {Element{}, x};
  };
  std::vector<Element> S_win;
  for (const Element& x : G.enumerate_ball(R)) {
    if (A.in_factor(AmalgamGroup::kS, x)) {
      S_win.push_back(x);
    }
  }
  const std::vector<Element> B_win = window_points(*B, R);
  std::vector<Element> grid;
  nlohmann::json bad_split = nlohmann::json::array();
  for (const Element& s : S_win) {
    for (const Element& b : B_win) {
      const Element x = G.multiply(s, b);
      if (split(x) != std::make_pair(s, b) && bad_split.size() < 4) {
        bad_split.push_back({{"s", G.format(s)}, {"b", G.format(b)}});
      }
      grid.push_back(x);
    }
  }
  if (!bad_split.empty()) {
    rep.verdict = Verdict::falsified;
    rep.witnesses.push_back({{"bijection_failures", bad_split}});
    return rep;
  }
  const auto w = std::make_shared<const Window>(make_whole(Gam), R, grid);
  const Element gi = G.invert(g);
  // x acting on ℓ²(B): μ(ρ(g)) = T^B_g; ν(ρ(s)) = T^{B*}_s ⊕ 0 with B* = B∖{e}.
  auto x_on_B = [&](const Element& b) -> std::optional<Element> {
    if (which == LanceRep::nu && b.is_identity()) {
      return std::nullopt;
    }
    const Element y = G.multiply(b, gi);
    if (!B->contains(y) || (which == LanceRep::nu && y.is_identity())) {
      return std::nullopt;
    }
    return y;
  };
  Operator theta(w);
  Operator theta_p(w);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [s, b] = split(grid[i]);
    if (auto j = w->index_of(G.multiply(grid[i], gi))) {
      theta.set(i, *j, 1);
    } else {
      theta.clip_row(i);
    }
    if (!w->index_of(G.multiply(grid[i], g))) {
      theta.clip_col(i);
    }
    if (auto y = x_on_B(b)) {
      if (auto j = w->index_of(G.multiply(s, *y))) {
        theta_p.set(i, *j, 1);
      } else {
        theta_p.clip_row(i);
      }
    }
    // Column (s, β) receives from (s, βg) when that is a grid point acted on nontrivially.
    const Element pre = G.multiply(b, g);
    if (B->contains(pre) && x_on_B(pre) && !w->index_of(G.multiply(s, pre))) {
      theta_p.clip_col(i);
    }
  }
  const Operator diff = theta - theta_p;
  // Support: rows and columns of nonzero entries must lie in S × {e}.
  std::size_t off_support = 0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (diff.row_clipped(i)) {
      continue;
    }
    for (const auto& [j, v] : diff.row(i)) {
      ++nonzero;
      if (!split(grid[i]).second.is_identity() || !split(grid[j]).second.is_identity()) {
        ++off_support;
      }
    }
  }
  const std::size_t scalar_rank = matrix_rank(diff, true);
  // Module rank: rows (e, β) of the difference, entries collected by target (s', β').
  std::vector<std::size_t> B_index_rows;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::int64_t, Rational>>> poly;
  std::size_t module_rows = 0;
  const bool S_cyclic_infinite = !A.S().is_finite();
  for (std::size_t bi = 0; bi < B_win.size(); ++bi) {
    const auto i = w->index_of(B_win[bi]);
    if (!i || diff.row_clipped(*i)) {
      continue;
    }
    ++module_rows;
    for (const auto& [j, v] : diff.row(*i)) {
      const auto [s2, b2] = split(grid[j]);
      const std::size_t bj = static_cast<std::size_t>(
          std::find(B_win.begin(), B_win.end(), b2) - B_win.begin());
      const std::int64_t code = s2.is_identity() ? 0 : s2.word().front().value;
      poly[{bi, bj}].emplace_back(code, v);
    }
  }
  std::size_t module_rank = 0;
  nlohmann::json evaluations = nlohmann::json::array();
  if (S_cyclic_infinite) {
    for (const Rational& t : {Rational(2), Rational(3), Rational(1, 2), Rational(5, 3), Rational(-7)}) {
      std::vector<std::map<std::size_t, Rational>> rows(B_win.size());
      for (const auto& [key, terms] : poly) {
        Rational val = 0;
        for (const auto& [k, c] : terms) {
          Rational p = 1;
          const Rational base = k >= 0 ? t : Rational(1) / t;
          for (std::int64_t e = 0; e < (k >= 0 ? k : -k); ++e) {
            p *= base;
          }
          val += c * p;
        }
        if (val != 0) {
          rows[key.first][key.second] = val;
        }
      }
      const std::size_t r = rank_of_rows(rows);
      module_rank = std::max(module_rank, r);
      evaluations.push_back({{"t", rational_to_json(t)}, {"rank", r}});
    }
  } else {
    // Finite S: rank over ℚ[S] is bounded by the number of nonzero rows (e, β).
    std::set<std::size_t> rows_used;
    for (const auto& [key, terms] : poly) {
      rows_used.insert(key.first);
    }
    module_rank = rows_used.size();
  }
  rep.compared_count = grid.size();
  rep.witnesses.push_back({{"grid_points", grid.size()}, {"nonzero_entries", nonzero},
                           {"entries_outside_S_x_e", off_support}, {"scalar_rank", scalar_rank},
                           {"module_rank", module_rank}, {"module_rows_compared", module_rows},
                           {"evaluations", evaluations}});
  const bool expect_zero = which == LanceRep::mu;
  if (off_support != 0 || (expect_zero ? nonzero != 0 : module_rank != 1)) {
    rep.verdict = Verdict::falsified;
  }
  return rep;
}

/// Γ = Γ_L ⊔ G ⊔ Γ_R on Ball(e,R) by the sign of the first stable letter (t⁻¹: Γ_L,
/// t: Γ_R). Checks that G·B^c lands in Γ_L and G·tB in Γ_R with fibers exactly the
/// H- (resp. K-) orbits (g,x) ~ (gh⁻¹, hx), and that every element of Γ_L, Γ_R splits
/// as (leading G-prefix)·(rest) with rest in B^c, resp. tB.
inline CheckReport run_hnn_partition_check(const GroupPtr& Gam, std::size_t R) {
  const auto& N = detail::as_hnn(Gam, "hnn partition check");
  const Group& G = *Gam;
  const SubsetPtr B = make_tree_halfspace(Gam, "hnn");
  CheckReport rep;
  rep.name = "hnn-partition";
  rep.params = {{"group", G.name()}, {"R", R}};
  const std::vector<Element> ball = G.enumerate_ball(R);
  std::size_t nL = 0, nG = 0, nR = 0;
  nlohmann::json problems = nlohmann::json::array();
  auto problem = [&](nlohmann::json j) {
    rep.verdict = Verdict::falsified;
    if (problems.size() < 8) {
      problems.push_back(std::move(j));
    }
  };
  const Element t = N.stable(1);
  for (const Element& x : ball) {
    ++rep.compared_count;
    const int sign = N.first_stable_sign(x);
    const bool in_G = N.in_G(x);
    const int classes = (sign < 0) + (sign > 0) + (in_G ? 1 : 0);
    if (classes != 1) {
      problem({{"x", G.format(x)}, {"issue", "not in exactly one part"}});
    }
    (sign < 0 ? nL : sign > 0 ? nR : nG) += 1;
    if (sign != 0) {
      const Element g0 = N.g_element(N.leading_g(x));
      const Element rest = G.multiply(G.invert(g0), x);
      const bool ok = sign < 0 ? !B->contains(rest) : B->contains(G.multiply(G.invert(t), rest));
      if (!ok) {
        problem({{"x", G.format(x)}, {"issue", "leading split leaves the expected factor"}});
      }
    }
  }
  // Fibers: products g·x over windows.
  std::vector<Element> Gwin;
  for (const Element& x : ball) {
    if (N.in_G(x)) {
      Gwin.push_back(x);
    }
  }
  auto fiber_check = [&](const std::vector<Element>& xs, int expected_sign, bool use_K) {
    std::unordered_map<Element, std::pair<Element, Element>, ElementHash> first;
    std::size_t pairs = 0;
    for (const Element& g : Gwin) {
      for (const Element& x : xs) {
        ++pairs;
        const Element y = G.multiply(g, x);
        if (N.first_stable_sign(y) != expected_sign) {
          problem({{"g", G.format(g)}, {"x", G.format(x)}, {"issue", "product in the wrong part"}});
        }
        auto [it, fresh] = first.emplace(y, std::make_pair(g, x));
        if (fresh) {
          continue;
        }
        // g1 x1 = g2 x2 forces g2⁻¹g1 in H (resp. K) with x2 = (g2⁻¹g1) x1.
        const auto& [g1, x1] = it->second;
        const Element h = G.multiply(G.invert(g), g1);
        const std::int64_t code = N.leading_g(h);
        const bool in_sub = N.in_G(h) && (use_K ? N.theta().in_image(code) : N.iota().in_image(code));
        if (!in_sub || G.multiply(h, x1) != x) {
          problem({{"g", G.format(g)}, {"x", G.format(x)}, {"issue", "fiber is not an orbit"}});
        }
      }
    }
    return std::make_pair(pairs, first.size());
  };
  std::vector<Element> Bc;
  std::vector<Element> tB;
  for (const Element& x : ball) {
    if (!B->contains(x)) {
      Bc.push_back(x);
    }
    const Element y = G.multiply(G.invert(t), x);
    if (B->contains(y)) {
      tB.push_back(x);
    }
  }
  const auto [pl, il] = fiber_check(Bc, -1, false);
  const auto [pr, ir] = fiber_check(tB, 1, true);
  rep.compared_count += pl + pr;
  rep.witnesses.push_back({{"Gamma_L", nL}, {"G", nG}, {"Gamma_R", nR}, {"ball", ball.size()},
                           {"left_pairs", pl}, {"left_images", il}, {"right_pairs", pr},
                           {"right_images", ir}, {"problems", problems}});
  return rep;
}

/// For each sampled g: (1−P) T^X_g (1−P) = T^B_g on the X-window, and T^X_g − T^B_g has
/// entries only in rows or columns of X∖B. The sample is the first `sample` elements of
/// Ball(e,2) in shortlex order.
inline CheckReport run_quotient_consistency_check(const SubsetPtr& B, const SubsetPtr& X,
                                                  std::size_t sample, std::size_t R) {
  const Group& G = *B->group;
  for (const Element& x : window_points(*B, R)) {
    if (!X->contains(x)) {
      throw PreconditionError("B is not contained in X: " + G.format(x));
    }
  }
  CheckReport rep;
  rep.name = "quotient-consistency";
  rep.params = {{"B", B->to_json()}, {"X", X->to_json()}, {"sample", sample}, {"R", R}};
  const WindowPtr w = make_window(X, R);
  const Operator I = Operator::identity(w);
  const Operator P = Operator::diagonal(w, [&](const Element& x) { return !B->contains(x); });
  std::vector<Element> gs = G.enumerate_ball(2);
  if (gs.size() > sample) {
    gs.resize(sample);
  }
  for (const Element& g : gs) {
    const Operator TX = build_generator_op(w, g);
    const Operator TB = build_generator_op(w, g, B.get());
    CheckReport sub = detail::identity_report("compression g=" + G.format(g), (I - P) * TX * (I - P), TB);
    const Operator diff = TX - TB;
    std::size_t stray = 0;
    for (std::size_t i = 0; i < w->size(); ++i) {
      for (const auto& [j, v] : diff.row(i)) {
        if (B->contains(w->point(i)) && B->contains(w->point(j))) {
          ++stray;
        }
      }
    }
    sub.witnesses.push_back({{"difference_entries_inside_B_block", stray}});
    if (stray != 0) {
      sub.verdict = Verdict::falsified;
    }
    if (g.is_identity()) {
      sub.absorb(detail::identity_report("g=e difference is P", diff, P));
    }
    rep.absorb(sub);
  }
  return rep;
}

/// Reduced words a_1⋯a_n (n ≤ L) with syllables alternating between G∖H and S∖H, taken
/// from the generating letters; T^B_w = T^B_{a_1}⋯T^B_{a_n}. Also ν(e) = T_t*T_t = 1 − p_H
/// for t ∈ S∖H, ν(s) = T^{B*}_s ⊕ 0 = T^B_s T_t*T_t, and ν(h) = μ(h)(1 − p_H) = (1 − p_H)μ(h).
inline CheckReport run_mu_nu_generation_check(const SubsetPtr& B, std::size_t L, std::size_t R) {
  const auto& A = detail::as_amalgam(B->group, "mu/nu generation check");
  const Group& G = *B->group;
  if (!B->left.is_finite()) {
    throw PreconditionError("mu/nu generation check needs a finite H");
  }
  const WindowPtr w = make_window(B, R);
  CheckReport rep;
  rep.name = "mu-nu-generation";
  rep.params = {{"subset", B->to_json()}, {"L", L}, {"R", R}};
  const Operator I = Operator::identity(w);
  const Operator pH = Operator::diagonal(w, [&](const Element& x) { return B->left.contains(x); });
  std::vector<Element> letters[2];
  for (const Element& a : G.generators()) {
    if (A.in_H(a)) {
      continue;
    }
    letters[A.in_factor(AmalgamGroup::kG, a) ? 0 : 1].push_back(a);
  }
  std::size_t words = 0;
  nlohmann::json failures = nlohmann::json::array();
  std::function<void(std::vector<Element>&, int)> walk = [&](std::vector<Element>& wd, int last) {
    if (!wd.empty()) {
      ++words;
      Element prod_el;
      Operator prod = I;
      std::string text;
      for (const Element& a : wd) {
        prod_el = G.multiply(prod_el, a);
        prod = prod * build_generator_op(w, a);
        text += (text.empty() ? "" : " ") + G.format(a);
      }
      const EqualityCertificate cert = guarded_equal(build_generator_op(w, prod_el), prod);
      rep.compared_count += cert.compared;
      if (!cert.equal) {
        rep.verdict = Verdict::falsified;
        if (failures.size() < 8) {
          failures.push_back({{"word", text}, {"certificate", cert.to_json(*w)}});
        }
      }
    }
    if (wd.size() == L) {
      return;
    }
    for (int side = 0; side < 2; ++side) {
      if (side == last) {
        continue;
      }
      for (const Element& a : letters[side]) {
        wd.push_back(a);
        walk(wd, side);
        wd.pop_back();
      }
    }
  };
  std::vector<Element> start;
  walk(start, -1);
  rep.witnesses.push_back({{"reduced_words", words}, {"failures", failures}});
  if (letters[1].empty()) {
    throw PreconditionError("mu/nu generation check needs S to be larger than H");
  }
  const Element t = letters[1].front();
  const Operator Tt = build_generator_op(w, t);
  const Operator nu_e = detail::source_projection(Tt);
  rep.absorb(detail::identity_report("nu(e) = 1 - p_H", nu_e, I - pH));
  rep.absorb(detail::identity_report("mu(e) = 1", build_generator_op(w, Element{}), I));
  std::vector<Element> H_elements = B->left.elements();
  const SubsetPtr Bstar = make_difference(B, make_finite_set(B->group, H_elements));
  for (const Element& s : G.generators()) {
    if (!A.in_factor(AmalgamGroup::kS, s)) {
      continue;
    }
    const Operator nu_s = build_generator_op(w, s, Bstar.get());
    rep.absorb(detail::identity_report("nu(" + G.format(s) + ") = T_s T_t* T_t", nu_s,
                                       build_generator_op(w, s) * nu_e));
  }
  for (const Element& h : H_elements) {
    const Operator mu_h = build_generator_op(w, h);
    const Operator nu_h = build_generator_op(w, h, Bstar.get());
    rep.absorb(detail::identity_report("nu(" + G.format(h) + ") = mu(h)(1 - p_H)", nu_h, mu_h * (I - pH)));
    rep.absorb(detail::identity_report("nu(" + G.format(h) + ") = (1 - p_H)mu(h)", nu_h, (I - pH) * mu_h));
  }
  return rep;
}

}  // namespace tlab
