// Universal subsets, track independence, the co-separability demonstration, and config IO.

#include "tlab/gallery.hpp"
#include "tlab/subset_io.hpp"
#include "tlab/universal.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#ifndef TLAB_CONFIG_DIR
#error "TLAB_CONFIG_DIR must name the configs directory"
#endif

namespace {

using namespace tlab;

std::string config(const char* name) { return std::string(TLAB_CONFIG_DIR) + "/" + name; }

/// Direct digit expansion of "0 1 00 01 10 11 000 ...".
std::string expansion(std::size_t n) {
  std::string s;
  for (std::size_t len = 1; s.size() < n; ++len) {
    for (std::size_t v = 0; v < (std::size_t{1} << len); ++v) {
      for (std::size_t b = len; b-- > 0;) {
        s += (v >> b & 1U) ? '1' : '0';
      }
    }
  }
  return s.substr(0, n);
}

TEST(UniversalZ, PrefixAndMembership) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr U = build_universal_z(64, Z);
  EXPECT_EQ(universal_z_prefix(10), "0100011011");
  EXPECT_EQ(U->params["prefix"].get<std::string>().substr(0, 10), "0100011011");
  std::vector<std::string> members;
  for (const Element& x : window_points(*U, 9)) {
    members.push_back(Z->format(x));
  }
  EXPECT_EQ(members, (std::vector<std::string>{"1", "5", "6", "8", "9"}));
  EXPECT_FALSE(U->contains(Z->parse("-1")));
  const std::string s = expansion(20000);
  for (std::size_t n = 0; n < s.size(); ++n) {
    ASSERT_EQ(universal_z_digit(n), s[n] - '0') << n;
  }
  EXPECT_THROW(build_universal_z(0, Z), ConfigError);
  EXPECT_THROW(build_universal_z(8, builtin_group("Z2")), PreconditionError);
}

TEST(UniversalZ, PatternSearch) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr U = build_universal_z(64, Z);
  const CheckReport r2 = universality_check(*U, 2, 5000);
  EXPECT_EQ(r2.verdict, Verdict::verified);
  EXPECT_EQ(r2.witnesses[0]["found"], 32);
  // Every reported center really shows its pattern.
  for (const auto& entry : r2.witnesses[0]["centers"]) {
    const Element x = Z->parse(entry["x"].get<std::string>());
    std::vector<std::string> local;
    for (const Element& y : Z->enumerate_ball(2)) {
      if (U->contains(Z->multiply(x, y))) {
        local.push_back(Z->format(y));
      }
    }
    EXPECT_EQ(nlohmann::json(local), entry["F"]);
  }
  EXPECT_EQ(universality_check(*U, 0, 10).witnesses[0]["found"], 2);
  const CheckReport ev = universality_check(*make_residue(Z, 0, 2, 0), 1, 50);
  EXPECT_EQ(ev.verdict, Verdict::falsified);
  EXPECT_EQ(ev.witnesses[0]["found"], 2);
  // Monotone evidence: what is found at a smaller bound is found at a larger one.
  const auto small = universality_check(*U, 3, 200).witnesses[0]["centers"];
  const auto large = universality_check(*U, 3, 400).witnesses[0]["centers"];
  for (const auto& e : small) {
    bool seen = false;
    for (const auto& f : large) {
      seen = seen || f["F"] == e["F"];
    }
    EXPECT_TRUE(seen);
  }
  EXPECT_THROW(universality_check(*make_whole(builtin_group("F2")), 3, 2), ResourceCapError);
}

std::vector<Track> small_tracks(const Group& Z) {
  std::vector<Track> out;
  const std::vector<Element> ball = Z.enumerate_ball(2);
  for (std::int64_t g = -1; g <= 1; ++g) {
    const Element ge = Z.parse(std::to_string(g));
    std::vector<Element> rest;
    for (const Element& h : ball) {
      if (!h.is_identity() && h != ge) {
        rest.push_back(h);
      }
    }
    for (std::uint32_t m = 0; m < (1U << rest.size()); ++m) {
      Track t;
      t.g = ge;
      t.F.push_back(ge);
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (m >> i & 1U) {
          t.F.push_back(rest[i]);
        }
      }
      normalize_track(Z, t);
      out.push_back(t);
    }
  }
  return out;
}

/// Rank of the operators flattened over their exact rows: full rank proves independence.
std::size_t window_rank(const SubsetPtr& B, const std::vector<Track>& tracks, std::size_t R) {
  const WindowPtr w = make_window(B, R);
  std::vector<Operator> ops;
  for (const Track& t : tracks) {
    ops.push_back(op_from_track(w, t));
  }
  std::vector<std::map<std::size_t, Rational>> rows;
  for (const Operator& op : ops) {
    std::map<std::size_t, Rational> flat;
    for (std::size_t x = 0; x < op.size(); ++x) {
      bool exact = true;
      for (const Operator& o : ops) {
        exact = exact && !o.row_clipped(x);
      }
      if (!exact) {
        continue;
      }
      for (const auto& [y, v] : op.row(x)) {
        flat[x * op.size() + y] = v;
      }
    }
    rows.push_back(flat);
  }
  return rank_of_rows(rows);
}

TEST(TrackIndependence, ThreeTracksOnUniversalSet) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr U = build_universal_z(64, Z);
  const std::vector<Track> tracks = {parse_track(*Z, "(0,{0})"), parse_track(*Z, "(0,{0;1})"),
                                     parse_track(*Z, "(0,{0;-1})")};
  const CheckReport rep = track_independence_check(U, tracks, 100);
  EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  EXPECT_EQ(rep.witnesses[0]["rank"], 3);
  EXPECT_EQ(window_rank(U, tracks, 100), 3U);
  // Witnesses realise U ∩ Ball(x,r) = x F⁻¹ exactly.
  for (const auto& w : rep.witnesses[0]["witnesses"]) {
    const Element x = Z->parse(w["x"].get<std::string>());
    const Track t = parse_track(*Z, "(" + w["track"]["g"].get<std::string>() + ",{" + [&] {
      std::string body;
      for (const auto& h : w["track"]["F"]) {
        body += (body.empty() ? "" : ";") + h.get<std::string>();
      }
      return body;
    }() + "})");
    for (const Element& y : Z->enumerate_ball(1)) {
      const bool in_pattern =
          std::find(t.F.begin(), t.F.end(), Z->invert(y)) != t.F.end();
      EXPECT_EQ(U->contains(Z->multiply(x, y)), in_pattern) << Z->format(x);
    }
  }
  const CheckReport single = track_independence_check(U, {tracks[1]}, 100);
  EXPECT_EQ(single.verdict, Verdict::verified);
}

TEST(TrackIndependence, ManyTracks) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr U = build_universal_z(64, Z);
  const std::vector<Track> tracks = small_tracks(*Z);
  ASSERT_GE(tracks.size(), 20U);
  const CheckReport rep = track_independence_check(U, tracks, 5000);
  EXPECT_EQ(rep.verdict, Verdict::verified);
  EXPECT_EQ(rep.witnesses[0]["rank"], tracks.size());
  EXPECT_EQ(rep.witnesses[0]["triangular"], true);
  EXPECT_EQ(window_rank(U, tracks, 800), tracks.size());
}

TEST(TrackIndependence, DependenceOnWholeGroup) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr W = make_whole(Z);
  const std::vector<Track> tracks = {parse_track(*Z, "(0,{0})"), parse_track(*Z, "(0,{0;1})"),
                                     parse_track(*Z, "(0,{0;-1})")};
  const CheckReport rep = track_independence_check(W, tracks, 20);
  EXPECT_EQ(rep.verdict, Verdict::falsified) << rep.to_json().dump();
  EXPECT_EQ(window_rank(W, tracks, 20), 1U);
  EXPECT_THROW(track_independence_check(W, {tracks[0], tracks[0]}, 10), PreconditionError);
}

TEST(UniversalWords, Construction) {
  const GroupPtr F = builtin_group("F2");
  const UniversalWords uw = build_universal_in_b_words(F);
  EXPECT_EQ(uw.placements.size(), 34U);  // 2 + 2^5 patterns of radius 0 and 1
  for (const Element& u : uw.U->enumerator(0)) {
    EXPECT_EQ(F->format(u).front(), 'b');
  }
  for (std::size_t k = 1; k < uw.placements.size(); ++k) {
    const auto& p = uw.placements[k - 1];
    const auto& q = uw.placements[k];
    const std::int64_t sep = q["m"].get<std::int64_t>() - p["m"].get<std::int64_t>();
    EXPECT_GE(sep, 4 * (p["radius"].get<std::int64_t>() + q["radius"].get<std::int64_t>()));
    EXPECT_EQ(F->distance(uw.centers[k - 1], uw.centers[k]), static_cast<std::size_t>(sep));
  }
  EXPECT_EQ(universality_check(*uw.U, 1, 0, uw.centers).verdict, Verdict::verified);
  EXPECT_THROW(build_universal_in_b_words(F, 1, 0), ConfigError);
  EXPECT_THROW(build_universal_in_b_words(builtin_group("F3")), PreconditionError);
}

TEST(UniversalWords, CoseparabilityDemo) {
  const CheckReport rep = example_coseparability_demo();
  EXPECT_EQ(rep.verdict, Verdict::verified) << rep.to_json().dump();
  const nlohmann::json& summary = rep.witnesses.back();
  EXPECT_EQ(summary["relatively_deep"], true);
  EXPECT_EQ(summary["almost_invariant"], true);
  EXPECT_EQ(summary["coseparating_set_found"], false);
  EXPECT_EQ(summary["universal_r1"]["U"], true);
}

TEST(ConfigIO, ShippedConfigsLoad) {
  const GroupPtr Z = load_group(config("z.json"));
  EXPECT_EQ(window_points(*load_subset(Z, config("nat.json")), 3).size(), 4U);
  EXPECT_EQ(window_points(*load_subset(Z, config("evens.json")), 4).size(), 5U);
  EXPECT_EQ(load_subset(Z, config("universal_z.json"))->kind, "universal");
  EXPECT_TRUE(load_subset(Z, config("nat_in_z.json"))->ambient != nullptr);
  const GroupPtr F = load_group(config("f2.json"));
  EXPECT_EQ(window_points(*load_subset(F, config("positive_cone.json")), 3).size(), 15U);
  EXPECT_FALSE(load_subset(F, config("first_letter.json"))->contains(F->parse("a^-1*b")));
  const GroupPtr A = load_group(config("amalgam_z4_z6.json"));
  EXPECT_EQ(A->enumerate_ball(5).size(), builtin_group("Z4*Z2Z6")->enumerate_ball(5).size());
  EXPECT_TRUE(load_subset(A, config("amalgam_halfspace.json"))->contains(A->parse("2_G")));
  const GroupPtr BS = load_group(config("bs12.json"));
  EXPECT_EQ(BS->parse("t*a*t^-1"), BS->parse("a^2"));
  EXPECT_FALSE(load_subset(BS, config("hnn_halfspace.json"))->contains(BS->parse("t^-1")));
  const GroupPtr Z2 = load_group(config("z2.json"));
  EXPECT_TRUE(load_subset(Z2, config("halfplane.json"))->contains(Z2->parse("(0,-3)")));
  // Every shipped file parses.
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(TLAB_CONFIG_DIR)) {
    EXPECT_NO_THROW(read_json_file(entry.path().string())) << entry.path();
    ++files;
  }
  EXPECT_GE(files, 14U);
}

TEST(ConfigIO, InlineSubsetsAndErrors) {
  const GroupPtr Z = builtin_group("Z");
  const SubsetPtr s = load_subset(Z, R"({"kind":"finite-set","elements":[3,-2,"5"]})");
  EXPECT_EQ(window_points(*s, 10).size(), 3U);
  const SubsetPtr r = load_subset(Z, R"({"kind":"residue","modulus":3,"residue":1})");
  EXPECT_TRUE(r->contains(Z->parse("-2")));
  const SubsetPtr c = load_subset(
      Z, R"({"kind":"interval","lo":0,"left_stabiliser":{"tag":"trivial"},"ambient":{"kind":"whole"}})");
  EXPECT_EQ(c->ambient->kind, "whole");
  const GroupPtr F = builtin_group("F2");
  const SubsetPtr X = load_subset(F, R"({"kind":"coset-union","base":{"kind":"positive-cone"},"g":"a"})");
  EXPECT_TRUE(X->contains(F->parse("a^-3")));
  EXPECT_THROW(load_subset(Z, R"({"kind":"nonsense"})"), ConfigError);
  EXPECT_THROW(load_subset(Z, R"({"kind":)"), ConfigError);
  EXPECT_THROW(load_subset(Z, R"({"kind":"residue"})"), ConfigError);
  EXPECT_THROW(load_subset(Z, "/nonexistent/file.json"), ConfigError);
  EXPECT_THROW(load_subset(Z, R"({"kind":"positive-cone"})"), ConfigError);
  EXPECT_THROW(load_subset(F, R"({"kind":"first-letter","forbidden":["a*b"]})"), ConfigError);
  EXPECT_THROW(load_group("no-such-group"), ConfigError);
}

TEST(ConfigIO, ReportsAreCanonical) {
  EXPECT_EQ(emit_report({}), "{\"suites\":[]}\n");
  Suite s;
  s.name = "demo";
  s.reports.push_back(run_toeplitz_check(6));
  const std::string once = emit_report({s});
  EXPECT_EQ(once, emit_report({s}));
  const nlohmann::json j = nlohmann::json::parse(once);
  EXPECT_EQ(j.dump() + "\n", once);  // keys already sorted, compact form
}

}  // namespace
