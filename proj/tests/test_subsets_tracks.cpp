// Subsets, windows, stabiliser verification and the track monoid.

#include "tlab/group_io.hpp"
#include "tlab/track.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace tlab;

std::vector<std::string> formatted(const Group& G, const std::vector<Element>& xs) {
  std::vector<std::string> out;
  for (const Element& x : xs) {
    out.push_back(G.format(x));
  }
  return out;
}

struct Fixtures {
  GroupPtr Z = builtin_group("Z");
  GroupPtr F2 = builtin_group("F2");
  GroupPtr A = builtin_group("Z4*Z2Z6");
  GroupPtr ZZ = builtin_group("Z*Z");
  GroupPtr BS = builtin_group("BS(1,2)");
  SubsetPtr nat = make_interval(Z, 0, 0, std::nullopt);
  SubsetPtr evens = make_residue(Z, 0, 2, 0);
  SubsetPtr cone = make_positive_cone(F2);
};

TEST(Subsets, MembershipExamples) {
  Fixtures f;
  EXPECT_FALSE(f.nat->contains(f.Z->parse("-1")));
  EXPECT_TRUE(f.nat->contains(f.Z->parse("0")));
  EXPECT_TRUE(f.cone->contains(f.F2->parse("a*b")));
  EXPECT_FALSE(f.cone->contains(f.F2->parse("a*b^-1")));
  EXPECT_TRUE(f.cone->contains(Element{}));
  EXPECT_FALSE(f.cone->contains(f.F2->parse("a^-1")));

  const SubsetPtr B = make_tree_halfspace(f.A, "G");
  EXPECT_TRUE(B->contains(Element{}));
  EXPECT_TRUE(B->contains(f.A->parse("2_G")));  // the nontrivial element of H
  for (const char* s : {"1_S", "2_S", "4_S", "5_S"}) {
    EXPECT_FALSE(B->contains(f.A->multiply(f.A->parse(s), f.A->parse("1_G")))) << s;
  }
  const SubsetPtr hnn = make_tree_halfspace(f.BS, "hnn-B");
  EXPECT_FALSE(hnn->contains(f.BS->parse("t^-1")));
  EXPECT_TRUE(hnn->contains(f.BS->parse("a^-3*t^2")));
  EXPECT_THROW(make_tree_halfspace(f.A, "hnn-B"), ConfigError);
  EXPECT_THROW(make_tree_halfspace(f.Z, "G"), ConfigError);
  EXPECT_THROW(make_positive_cone(f.Z), ConfigError);
}

TEST(Subsets, WindowExamples) {
  Fixtures f;
  EXPECT_EQ(formatted(*f.Z, window_points(*f.nat, 5)),
            (std::vector<std::string>{"0", "1", "2", "3", "4", "5"}));
  EXPECT_EQ(formatted(*f.F2, window_points(*f.cone, 2)),
            (std::vector<std::string>{"e", "a", "b", "a^2", "a*b", "b*a", "b^2"}));
  const SubsetPtr B = make_tree_halfspace(f.ZZ, "G");
  EXPECT_EQ(formatted(*f.ZZ, window_points(*B, 1)), (std::vector<std::string>{"e", "a", "a^-1"}));
}

// Positive words of length k number 2^k; checked against a scan of the full ball.
TEST(Subsets, PositiveConeCountsMatchBallScan) {
  Fixtures f;
  for (std::size_t R = 0; R <= 6; ++R) {
    std::size_t scan = 0;
    for (const Element& x : f.F2->enumerate_ball(R)) {
      const std::string w = f.F2->format(x);
      scan += w.find("^-") == std::string::npos ? 1 : 0;
    }
    EXPECT_EQ(window_points(*f.cone, R).size(), scan) << R;
    EXPECT_EQ(scan, (std::size_t{1} << (R + 1)) - 1) << R;
  }
}

TEST(Subsets, WindowsAreMonotone) {
  Fixtures f;
  const std::vector<SubsetPtr> specs = {f.nat, f.evens, f.cone, make_tree_halfspace(f.A, "G"),
                                        make_tree_halfspace(f.BS, "hnn-B"),
                                        make_coset_union(f.cone, f.F2->parse("a"))};
  for (const SubsetPtr& s : specs) {
    for (std::size_t R = 0; R < 5; ++R) {
      const auto small = window_points(*s, R);
      const auto big = window_points(*s, R + 1);
      std::size_t j = 0;
      for (const Element& x : small) {
        while (j < big.size() && !(big[j] == x)) {
          ++j;
        }
        ASSERT_LT(j, big.size()) << s->kind << " R=" << R;
      }
    }
  }
}

TEST(Subsets, AmalgamHalfspacesMeetInH) {
  Fixtures f;
  const SubsetPtr B = make_tree_halfspace(f.A, "G");
  const SubsetPtr Bp = make_tree_halfspace(f.A, "S");
  const Element h = f.A->parse("2_G");
  for (std::size_t R = 0; R <= 5; ++R) {
    for (const Element& x : f.A->enumerate_ball(R)) {
      EXPECT_TRUE(B->contains(x) || Bp->contains(x));
      const bool in_H = x.is_identity() || x == h;
      EXPECT_EQ(B->contains(x) && Bp->contains(x), in_H) << f.A->format(x);
    }
  }
}

TEST(Subsets, HnnHalfspaceIsRightGInvariantAndClosedUnderT) {
  Fixtures f;
  const SubsetPtr B = make_tree_halfspace(f.BS, "hnn-B");
  const Element a = f.BS->parse("a");
  const Element t = f.BS->parse("t");
  for (const Element& x : f.BS->enumerate_ball(5)) {
    EXPECT_EQ(B->contains(f.BS->multiply(x, a)), B->contains(x)) << f.BS->format(x);
    if (B->contains(x)) {
      EXPECT_TRUE(B->contains(f.BS->multiply(x, t))) << f.BS->format(x);
    }
  }
}

TEST(Subsets, CosetUnionExamples) {
  Fixtures f;
  const Element a = f.F2->parse("a");
  const SubsetPtr X = make_coset_union(f.cone, a);
  EXPECT_TRUE(X->contains(f.F2->parse("a^-3")));
  EXPECT_FALSE(X->contains(f.F2->parse("b^-1")));
  EXPECT_TRUE(X->contains(f.F2->parse("a^-2*b*a")));
  EXPECT_FALSE(stabiliser_counterexample(*X, a, true, 5).has_value());
  EXPECT_FALSE(stabiliser_counterexample(*X, f.F2->parse("a^-1"), true, 5).has_value());
  // Enumerator-backed windows agree with a scan of the ball.
  for (std::size_t R = 0; R <= 6; ++R) {
    std::vector<Element> scan;
    for (const Element& x : f.F2->enumerate_ball(R)) {
      if (X->contains(x)) {
        scan.push_back(x);
      }
    }
    EXPECT_EQ(window_points(*X, R), scan) << R;
  }
}

TEST(Subsets, StabiliserVerification) {
  Fixtures f;
  const CheckReport nat = verify_stabilisers(*f.nat, 6);
  EXPECT_EQ(nat.verdict, Verdict::verified) << nat.to_json().dump();
  const CheckReport amalgam = verify_stabilisers(*make_tree_halfspace(f.A, "G"), 5);
  EXPECT_EQ(amalgam.verdict, Verdict::verified) << amalgam.to_json().dump();
  // Right multiplication by a moves a^-1 (outside) to e (inside).
  const auto w = stabiliser_counterexample(*f.cone, f.F2->parse("a"), false, 2);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(f.F2->format(*w), "a^-1");
  // A false claim is caught.
  auto bad = std::make_shared<Subset>(*f.nat);
  bad->left = Subgroup::cyclic(f.Z, f.Z->parse("1"));
  EXPECT_EQ(verify_stabilisers(*bad, 4).verdict, Verdict::falsified);
  // An unclaimed stabiliser is reported: evens are fixed by translation by 2.
  EXPECT_EQ(verify_stabilisers(*f.evens, 6).verdict, Verdict::verified);
  auto unclaimed = std::make_shared<Subset>(*f.evens);
  unclaimed->left = Subgroup::trivial(f.Z);
  EXPECT_EQ(verify_stabilisers(*unclaimed, 6).verdict, Verdict::inconclusive);
}

TEST(Tracks, SequenceExamples) {
  Fixtures f;
  const Group& Z = *f.Z;
  auto tr = [&](std::vector<const char*> xs) {
    std::vector<Element> gs;
    for (const char* x : xs) {
      gs.push_back(Z.parse(x));
    }
    return track_of_sequence(Z, gs);
  };
  EXPECT_EQ(tr({}), identity_track());
  EXPECT_EQ(tr({"1"}), parse_track(Z, "(1,{0;1})"));
  EXPECT_EQ(tr({"-1", "1"}), parse_track(Z, "(0,{0;1})"));
  EXPECT_EQ(tr({"1", "-1"}), parse_track(Z, "(0,{0;-1})"));
  EXPECT_EQ(compose(Z, tr({"-1", "1"}), tr({"1", "-1"})), parse_track(Z, "(0,{-1;0;1})"));
  EXPECT_EQ(track_to_json(Z, tr({"1", "-1"})).dump(), R"({"F":["0","-1"],"g":"0"})");
}

TEST(Tracks, ParseRejectsMalformed) {
  Fixtures f;
  EXPECT_THROW(parse_track(*f.Z, "0,{0}"), ConfigError);
  EXPECT_THROW(parse_track(*f.Z, "(0;{0})"), ConfigError);
  const Track t = parse_track(*f.Z, "(2,{1})");
  EXPECT_EQ(t.F.size(), 3U);  // e and g are added
}

Track random_track(const Group& G, const std::vector<Element>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<std::size_t> len(0, 3);
  std::vector<Element> gs;
  for (std::size_t n = len(rng), i = 0; i < n; ++i) {
    gs.push_back(pool[pick(rng)]);
  }
  return track_of_sequence(G, gs);
}

TEST(Tracks, MonoidLaws) {
  Fixtures f;
  const Group& G = *f.F2;
  const std::vector<Element> gens = G.enumerate_sphere(1);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Track a = random_track(G, gens, rng);
    const Track b = random_track(G, gens, rng);
    const Track c = random_track(G, gens, rng);
    ASSERT_LE(a.F.size(), 4U);
    EXPECT_EQ(compose(G, compose(G, a, b), c), compose(G, a, compose(G, b, c)));
    EXPECT_EQ(compose(G, identity_track(), a), a);
    EXPECT_EQ(compose(G, a, identity_track()), a);
  }
}

// The track of a concatenation is the composite of the tracks.
TEST(Tracks, ConcatenationIsComposition) {
  Fixtures f;
  std::mt19937_64 rng(5);
  for (const GroupPtr& Gp : {f.Z, f.F2, f.BS}) {
    const Group& G = *Gp;
    const std::vector<Element> pool = G.enumerate_ball(2);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 300; ++i) {
      std::vector<Element> s1(static_cast<std::size_t>(i % 4));
      std::vector<Element> s2(static_cast<std::size_t>((i / 4) % 4));
      for (Element& x : s1) {
        x = pool[pick(rng)];
      }
      for (Element& x : s2) {
        x = pool[pick(rng)];
      }
      std::vector<Element> both = s1;
      both.insert(both.end(), s2.begin(), s2.end());
      const Track t = compose(G, track_of_sequence(G, s1), track_of_sequence(G, s2));
      EXPECT_EQ(track_of_sequence(G, both), t);
      EXPECT_TRUE(std::find(t.F.begin(), t.F.end(), Element{}) != t.F.end());
      EXPECT_TRUE(std::find(t.F.begin(), t.F.end(), t.g) != t.F.end());
    }
  }
}

TEST(Tracks, NonzeroWitnessExamples) {
  Fixtures f;
  const auto w = is_nonzero_on(parse_track(*f.Z, "(0,{0;1})"), *f.nat, 10);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(f.Z->format(*w), "1");
  for (std::size_t R : {5, 20, 60}) {
    EXPECT_FALSE(is_nonzero_on(parse_track(*f.Z, "(0,{0;1})"), *f.evens, R).has_value());
  }
  const Track t = track_of_sequence(*f.F2, {f.F2->parse("a^-1"), f.F2->parse("a")});
  const auto wc = is_nonzero_on(t, *f.cone, 4);
  ASSERT_TRUE(wc.has_value());
  EXPECT_EQ(f.F2->format(*wc), "a");
}

}  // namespace
