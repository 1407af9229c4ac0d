// Hilbert-module model and the extension gallery. Oracles: Sylvester minors for positivity,
// pointwise evaluation of relation words, and first-stable-letter scans of printed words.

#include "tlab/gallery.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace tlab;

struct Fix {
  GroupPtr Z = builtin_group("Z");
  GroupPtr Z2 = builtin_group("Z2");
  GroupPtr F2 = builtin_group("F2");
  GroupPtr A = builtin_group("Z4*Z2Z6");
  GroupPtr BS = builtin_group("BS(1,2)");
  SubsetPtr nat = make_interval(Z, 0, 0, std::nullopt);
  SubsetPtr plane = make_interval(Z2, 0, 0, std::nullopt);
  SubsetPtr cone = make_positive_cone(F2);
  SubsetPtr amalgam = make_tree_halfspace(A, "G");
  Subgroup HA = Subgroup::finite(A, {A->parse("2_G")});
};

TEST(Module, InnerProductExamples) {
  Fix f;
  const Subgroup H0 = Subgroup::trivial(f.Z);
  const auto s = [&](const char* x) { return SigmaVector::single(f.Z->parse(x)); };
  EXPECT_TRUE(module_inner_product(*f.nat, H0, s("2"), s("5")).is_zero());
  const HAlgebraElement same = module_inner_product(*f.nat, H0, s("3"), s("3"));
  EXPECT_EQ(same, HAlgebraElement::basis(f.Z, Element{}));
  EXPECT_EQ(same.to_json().dump(), R"({"0":[1,1]})");
  EXPECT_THROW(module_inner_product(*f.nat, H0, s("-1"), s("3")), PreconditionError);

  const Element h = f.A->parse("2_G");
  const Element b = f.A->parse("1_G*1_S");
  const HAlgebraElement ip = module_inner_product(*f.amalgam, f.HA, SigmaVector::single(f.A->multiply(h, b)),
                                                  SigmaVector::single(b));
  EXPECT_EQ(ip, HAlgebraElement::basis(f.A, h));
}

/// PSD via Sylvester: every principal minor of a symmetric matrix is nonnegative.
bool all_principal_minors_nonnegative(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        idx.push_back(i);
      }
    }
    // Determinant by exact Gaussian elimination.
    std::vector<std::vector<Rational>> a(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) {
        a[i][j] = m[idx[i]][idx[j]];
      }
    }
    Rational det = 1;
    for (std::size_t c = 0; c < a.size(); ++c) {
      std::size_t p = c;
      while (p < a.size() && a[p][c] == 0) {
        ++p;
      }
      if (p == a.size()) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(a[p], a[c]);
        det = -det;
      }
      det *= a[c][c];
      for (std::size_t r = c + 1; r < a.size(); ++r) {
        const Rational factor = a[r][c] / a[c][c];
        for (std::size_t k = c; k < a.size(); ++k) {
          a[r][k] -= factor * a[c][k];
        }
      }
    }
    if (det < 0) {
      return false;
    }
  }
  return true;
}

TEST(Module, InnerProductIsPositive) {
  Fix f;
  const nlohmann::json c3 = {{"kind", "finite"},
                             {"label", "C"},
                             {"table", {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}},
                             {"generators", {1, 2}}};
  const GroupPtr C = group_from_json(c3);
  struct Case {
    SubsetPtr B;
    Subgroup H;
    std::vector<Element> points;
  };
  const std::vector<Case> cases = {
      {f.amalgam, f.HA, window_points(*f.amalgam, 2)},
      {make_whole(C), Subgroup::finite(C, {C->parse("1_C")}), C->enumerate_ball(1)}};
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (const Case& c : cases) {
    const std::vector<Element> H = c.H.elements();
    for (int trial = 0; trial < 100; ++trial) {
      SigmaVector x;
      for (const Element& p : c.points) {
        if (coef(rng) > 1) {
          x.add(p, Rational(coef(rng), 1 + (trial % 3)));
        }
      }
      const auto m = module_inner_product(*c.B, c.H, x, x).regular_matrix(H);
      EXPECT_TRUE(all_principal_minors_nonnegative(m));
      EXPECT_TRUE(is_positive_semidefinite(m));
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
          EXPECT_EQ(m[i][j], m[j][i]);
        }
      }
    }
  }
  // A non-positive matrix is recognised.
  EXPECT_FALSE(is_positive_semidefinite({{Rational(1), Rational(2)}, {Rational(2), Rational(1)}}));
}

// ⟨σ_g T_k, σ_m⟩ = ⟨σ_g, σ_m T_{k⁻¹}⟩.
TEST(Module, RightActionIsAdjointable) {
  Fix f;
  const std::vector<Element> pts = window_points(*f.amalgam, 3);
  const std::vector<Element> ks = f.A->enumerate_ball(2);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < pts.size(); i += 3) {
    for (std::size_t j = 0; j < pts.size(); j += 5) {
      for (const Element& k : ks) {
        const SigmaVector g = SigmaVector::single(pts[i]);
        const SigmaVector m = SigmaVector::single(pts[j]);
        const auto lhs = module_inner_product(*f.amalgam, f.HA, sigma_act(*f.amalgam, g, k), m);
        const auto rhs =
            module_inner_product(*f.amalgam, f.HA, g, sigma_act(*f.amalgam, m, f.A->invert(k)));
        EXPECT_EQ(lhs, rhs);
        nonzero += lhs.is_zero() ? 0 : 1;
      }
    }
  }
  EXPECT_GT(nonzero, 0U);
}

TEST(Module, ProjectionFromIsolation) {
  Fix f;
  const WindowPtr wn = make_window(f.nat, 10);
  const Operator p0 = ph_from_isolation(wn, Subgroup::trivial(f.Z), {f.Z->parse("0")}, {f.Z->parse("1")});
  EXPECT_EQ(p0.to_json(), coset_projection(wn, {Element{}}, Element{}).to_json());

  const WindowPtr wp = make_window(f.plane, 4);
  const Operator axis =
      ph_from_isolation(wp, f.plane->left, {f.Z2->parse("(0,0)")}, {f.Z2->parse("(1,0)")});
  const Operator expected = Operator::diagonal(wp, [&](const Element& x) {
    return f.Z2->format(x).rfind("(0,", 0) == 0;
  });
  EXPECT_TRUE(guarded_equal(axis, expected).equal);
  EXPECT_EQ(matrix_rank(axis, true), 9U);  // (0,-4) ... (0,4)

  const WindowPtr wa = make_window(f.amalgam, 4);
  const auto res = coseparability_search(*f.amalgam, f.HA, 2, 4);
  ASSERT_TRUE(res.F_prime.has_value());
  const auto sets = h_isolation_sets(*f.amalgam, *res.F_prime);
  const Operator pH = ph_from_isolation(wa, f.HA, sets.F1, sets.F2);
  EXPECT_TRUE(guarded_equal(pH, coset_projection(wa, f.HA.elements(), Element{})).equal);
  EXPECT_EQ(matrix_rank(pH, true), 2U);
  for (const Operator& p : {p0, axis, pH}) {
    EXPECT_TRUE(guarded_equal(p * p, p).equal);
    EXPECT_TRUE(guarded_equal(adjoint(p), p).equal);
  }
  // H must lie in B.
  const SubsetPtr shifted = make_interval(f.Z, 0, 1, std::nullopt);
  EXPECT_THROW(ph_from_isolation(make_window(shifted, 5), Subgroup::trivial(f.Z), {f.Z->parse("0")},
                                 {f.Z->parse("1")}),
               PreconditionError);
}

TEST(Module, ProjectionLiesInIdeal) {
  Fix f;
  EXPECT_EQ(verify_ph_in_ideal(*f.nat, make_whole(f.Z), Subgroup::trivial(f.Z), f.Z->parse("1"), 12).verdict,
            Verdict::verified);
  EXPECT_EQ(verify_ph_in_ideal(*f.amalgam, make_whole(f.A), f.HA, f.A->parse("1_S"), 5).verdict,
            Verdict::verified);
  EXPECT_THROW(verify_ph_in_ideal(*f.nat, make_whole(f.Z), Subgroup::trivial(f.Z), f.Z->parse("-1"), 8),
               PreconditionError);
}

TEST(Module, CosetDecomposition) {
  Fix f;
  const CheckReport nat = pg_coset_decomposition(*f.nat, make_whole(f.Z), Subgroup::trivial(f.Z), f.Z->parse("2"), 8);
  EXPECT_EQ(nat.verdict, Verdict::verified);
  EXPECT_EQ(nat.witnesses[0]["support"], nlohmann::json({"0", "1"}));
  EXPECT_EQ(nat.witnesses[0]["cosets"], 2);
  const CheckReport plane =
      pg_coset_decomposition(*f.plane, make_whole(f.Z2), f.plane->left, f.Z2->parse("(1,0)"), 5);
  EXPECT_EQ(plane.verdict, Verdict::verified);
  EXPECT_EQ(plane.witnesses[1]["cosets"], 1);
  const CheckReport cone =
      pg_coset_decomposition(*f.cone, make_whole(f.F2), Subgroup::trivial(f.F2), f.F2->parse("a"), 4);
  EXPECT_NE(cone.verdict, Verdict::verified);
  EXPECT_LT(cone.witnesses[0]["cosets"].get<std::size_t>(), cone.witnesses[1]["cosets"].get<std::size_t>());
}

TEST(Gallery, Toeplitz) {
  const CheckReport rep = run_toeplitz_check(20);
  EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  EXPECT_GE(rep.witnesses[0]["compared_count"].get<std::size_t>(), 19U);
  EXPECT_GE(rep.witnesses[1]["compared_count"].get<std::size_t>(), 19U);
}

TEST(Gallery, PimsnerVoiculescu) {
  for (std::size_t n : {2, 3}) {
    const CheckReport rep = run_pv_check(n, 4);
    EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  }
  EXPECT_THROW(run_pv_check(1, 4), PreconditionError);
}

TEST(Gallery, Cuntz) {
  for (std::size_t L : {3, 4}) {
    const CheckReport rep = run_cuntz_check(2, L);
    EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  }
  // The positive-word window of radius 3 has 1 + 2 + 4 + 8 points.
  const nlohmann::json j = run_cuntz_check(2, 3).to_json();
  bool found = false;
  for (const auto& w : j["witnesses"]) {
    if (w["name"] == "E_n window") {
      EXPECT_EQ(w["witnesses"][0]["points"], 15);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(run_cuntz_check(3, 3).verdict, Verdict::verified);
}

TEST(Gallery, RelationClassification) {
  Fix f;
  const CheckReport rep = run_relation_classification(f.amalgam, 5);
  EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  EXPECT_GT(rep.witnesses[0]["staying_relations"].get<std::size_t>(), 0U);
  EXPECT_GT(rep.witnesses[0]["crossing_relations"].get<std::size_t>(), 0U);
  // Pointwise oracle: a relation fixes δ_x, or kills exactly the points of H when it crosses.
  const Element h = f.A->parse("2_G");
  for (const RelationWord& r : factor_relations(*f.amalgam)) {
    for (const Element& x0 : window_points(*f.amalgam, 4)) {
      Element x = x0;
      bool alive = true;
      for (auto it = r.letters.rbegin(); it != r.letters.rend() && alive; ++it) {
        const Element y = f.A->multiply(x, f.A->invert(*it));
        alive = f.amalgam->contains(y);
        x = y;
      }
      const bool in_H = x0.is_identity() || x0 == h;
      EXPECT_EQ(alive, r.stays_in_B || !in_H);
      if (alive) {
        EXPECT_EQ(x, x0);
      }
    }
  }
}

TEST(Gallery, LanceDifference) {
  const GroupPtr ZZ = builtin_group("Z*Z");
  const CheckReport nu = run_lance_difference_check(ZZ, LanceRep::nu, ZZ->parse("b"), 4);
  EXPECT_EQ(nu.verdict, Verdict::verified) << nu.to_json().dump();
  EXPECT_EQ(nu.witnesses[0]["module_rank"], 1);
  EXPECT_EQ(nu.witnesses[0]["entries_outside_S_x_e"], 0);
  EXPECT_GT(nu.witnesses[0]["nonzero_entries"].get<std::size_t>(), 0U);
  const CheckReport mu = run_lance_difference_check(ZZ, LanceRep::mu, ZZ->parse("a"), 4);
  EXPECT_EQ(mu.verdict, Verdict::verified);
  EXPECT_EQ(mu.witnesses[0]["nonzero_entries"], 0);
  const CheckReport e = run_lance_difference_check(ZZ, LanceRep::nu, Element{}, 4);
  EXPECT_EQ(e.verdict, Verdict::verified);
  EXPECT_EQ(e.witnesses[0]["module_rank"], 1);
  EXPECT_THROW(run_lance_difference_check(builtin_group("Z4*Z2Z6"), LanceRep::nu, Element{}, 3),
               PreconditionError);
}

/// -1 when the first stable letter is t⁻¹, +1 when it is t, 0 without stable letters.
int first_stable_sign(const std::string& w) {
  const std::size_t p = w.find('t');
  if (p == std::string::npos) {
    return 0;
  }
  return w.compare(p, 3, "t^-") == 0 ? -1 : 1;
}

TEST(Gallery, HnnPartition) {
  for (const char* name : {"BS(1,2)", "Z*<t>"}) {
    const GroupPtr G = builtin_group(name);
    const CheckReport rep = run_hnn_partition_check(G, 4);
    EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
    std::size_t counts[3] = {0, 0, 0};
    for (const Element& x : G->enumerate_ball(4)) {
      ++counts[first_stable_sign(G->format(x)) + 1];
    }
    const nlohmann::json& w = rep.witnesses[0];
    EXPECT_EQ(w["Gamma_L"], counts[0]) << name;
    EXPECT_EQ(w["G"], counts[1]) << name;
    EXPECT_EQ(w["Gamma_R"], counts[2]) << name;
    EXPECT_EQ(w["problems"].size(), 0U);
  }
  // With H trivial the fiber maps are injective.
  const nlohmann::json w = run_hnn_partition_check(builtin_group("Z*<t>"), 4).witnesses[0];
  EXPECT_EQ(w["left_pairs"], w["left_images"]);
  EXPECT_EQ(w["right_pairs"], w["right_images"]);
  EXPECT_THROW(run_hnn_partition_check(builtin_group("F2"), 3), PreconditionError);
}

TEST(Gallery, QuotientConsistency) {
  Fix f;
  EXPECT_EQ(run_quotient_consistency_check(f.nat, make_whole(f.Z), 5, 8).verdict, Verdict::verified);
  EXPECT_EQ(run_quotient_consistency_check(f.amalgam, make_whole(f.A), 6, 4).verdict, Verdict::verified);
  const SubsetPtr X = make_coset_union(f.cone, f.F2->parse("a"));
  EXPECT_EQ(run_quotient_consistency_check(f.cone, X, 5, 4).verdict, Verdict::verified);
}

TEST(Gallery, MuNuGeneration) {
  Fix f;
  const CheckReport rep = run_mu_nu_generation_check(f.amalgam, 3, 5);
  EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  EXPECT_GT(rep.witnesses[0]["reduced_words"].get<std::size_t>(), 20U);
}

// Verdicts do not change when the window grows by 2.
TEST(Gallery, StableUnderWindowGrowth) {
  Fix f;
  EXPECT_EQ(run_toeplitz_check(10).verdict, run_toeplitz_check(12).verdict);
  EXPECT_EQ(run_pv_check(2, 3).verdict, run_pv_check(2, 5).verdict);
  EXPECT_EQ(run_cuntz_check(2, 2).verdict, run_cuntz_check(2, 4).verdict);
  EXPECT_EQ(run_relation_classification(f.amalgam, 3).verdict, run_relation_classification(f.amalgam, 5).verdict);
  EXPECT_EQ(run_hnn_partition_check(f.BS, 2).verdict, run_hnn_partition_check(f.BS, 4).verdict);
}

}  // namespace
