// Command-line front end: loads group and subset configs, runs one check or suite, and
// prints a canonical JSON report. Exit codes: 0 no falsified verdict, 1 falsified,
// 2 usage or precondition error, 3 malformed config, 4 resource cap.

#include "tlab/gallery.hpp"
#include "tlab/subset_io.hpp"
#include "tlab/universal.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace tlab;

constexpr int kExitFalsified = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitResource = 4;

struct Options {
  std::string group;
  std::string subset;
  std::string ambient;
  std::string H;
  std::string K;
  std::string out;
  std::size_t R = 10;
  std::size_t r = 1;
  std::size_t L = 3;
  std::size_t n = 2;
  std::size_t N = 64;
  std::size_t bound = 5000;
  std::size_t f_radius = 3;
  std::size_t g_radius = 3;
  std::vector<std::string> g;
  std::string op;
  std::string lhs;
  std::string rhs;
  std::string x;
  std::string y;
  std::string rep = "nu";
  std::vector<std::string> F1;
  std::vector<std::string> F2;
  std::vector<std::string> tracks;
};

GroupPtr group_or(const Options& o, const std::string& fallback) {
  return load_group(o.group.empty() ? fallback : o.group);
}

SubsetPtr subset_or(const Options& o, const GroupPtr& G, const std::string& fallback_json) {
  return load_subset(G, o.subset.empty() ? fallback_json : o.subset);
}

/// --ambient if given, else the subset's recorded ambient, else the whole group.
SubsetPtr ambient_of(const Options& o, const SubsetPtr& B) {
  if (!o.ambient.empty()) {
    return load_subset(B->group, o.ambient);
  }
  return B->ambient ? B->ambient : make_whole(B->group);
}

Subgroup subgroup_arg(const std::string& arg, const GroupPtr& G, const Subgroup& fallback) {
  if (arg.empty()) {
    return fallback;
  }
  if (arg == "trivial" || arg == "whole") {
    return detail::subgroup_from_json(G, {{"tag", arg}});
  }
  try {
    return detail::subgroup_from_json(G, nlohmann::json::parse(arg));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed subgroup argument: ") + e.what());
  }
}

std::vector<Element> elements_arg(const Group& G, const std::vector<std::string>& xs) {
  std::vector<Element> out;
  for (const std::string& s : xs) {
    out.push_back(G.parse(s));
  }
  return out;
}

/// "b1=c1;b2=c2" with rational coefficients p or p/q; a bare element has coefficient 1.
SigmaVector sigma_arg(const Group& G, const std::string& text) {
  SigmaVector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) {
      continue;
    }
    const auto eq = item.find('=');
    Rational c = 1;
    if (eq != std::string::npos) {
      try {
        c = Rational(item.substr(eq + 1));
        if (c.get_den() == 0) {
          throw std::invalid_argument("zero denominator");
        }
        c.canonicalize();
      } catch (const std::invalid_argument&) {
        throw ConfigError("bad coefficient in '" + item + "'");
      }
    }
    v.add(G.parse(item.substr(0, eq)), c);
  }
  return v;
}

/// Operator expression: ["1-"] factor ("|" factor)*, factors applied right to left as in an
/// operator product. A factor is [adj:] id | zero | g:ELEMENT | track:TRACK | p:ELEMENT
/// (diagonal projection onto one point).
Operator op_arg(const WindowPtr& w, const std::string& text) {
  const Group& G = w->group();
  std::string body = text;
  bool complement = false;
  if (body.rfind("1-", 0) == 0) {
    complement = true;
    body = body.substr(2);
  }
  std::vector<std::string> factors;
  std::stringstream ss(body);
  std::string f;
  while (std::getline(ss, f, '|')) {
    factors.push_back(f);
  }
  if (factors.empty()) {
    throw ConfigError("empty operator expression");
  }
  auto factor = [&](std::string s) {
    bool adj = false;
    if (s.rfind("adj:", 0) == 0) {
      adj = true;
      s = s.substr(4);
    }
    Operator op = Operator::zero(w);
    if (s == "id") {
      op = Operator::identity(w);
    } else if (s == "zero") {
    } else if (s.rfind("g:", 0) == 0) {
      op = build_generator_op(w, G.parse(s.substr(2)));
    } else if (s.rfind("track:", 0) == 0) {
      op = op_from_track(w, parse_track(G, s.substr(6)));
    } else if (s.rfind("p:", 0) == 0) {
      const Element x = G.parse(s.substr(2));
      op = Operator::diagonal(w, [&](const Element& y) { return y == x; });
    } else {
      throw ConfigError("unknown operator factor '" + s + "'");
    }
    return adj ? adjoint(op) : op;
  };
  Operator acc = factor(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) {
    acc = compose(acc, factor(factors[i]));
  }
  return complement ? Operator::identity(w) - acc : acc;
}

CheckReport info_report(const std::string& name, nlohmann::json params, nlohmann::json witness) {
  CheckReport rep;
  rep.name = name;
  rep.params = std::move(params);
  rep.witnesses.push_back(std::move(witness));
  return rep;
}

// ---------------------------------------------------------------------------------------
// check

std::vector<CheckReport> run_check(const std::string& which, const Options& o) {
  const GroupPtr G = group_or(o, "Z");
  const SubsetPtr B = subset_or(o, G, R"({"kind":"interval","coordinate":0,"lo":0})");
  if (which == "deep") {
    return {deep_witness(*B, o.r, o.R)};
  }
  if (which == "rel-deep") {
    const SubsetPtr X = ambient_of(o, B);
    return {relatively_deep_check(*B, *X, subgroup_arg(o.K, G, X->left), o.r, o.R)};
  }
  if (which == "almost-invariant") {
    const SubsetPtr X = ambient_of(o, B);
    const Subgroup H = subgroup_arg(o.H, G, B->left);
    std::vector<Element> gs = o.g.empty() ? G->generators() : elements_arg(*G, o.g);
    std::vector<CheckReport> out;
    for (const Element& g : gs) {
      out.push_back(almost_invariant_check(*B, *X, H, g, o.R));
    }
    return out;
  }
  if (which == "coseparable" || which == "isolation") {
    const Subgroup H = subgroup_arg(o.H, G, B->left);
    std::vector<Element> F1 = elements_arg(*G, o.F1);
    std::vector<Element> F2 = elements_arg(*G, o.F2);
    std::vector<CheckReport> out;
    if (which == "coseparable" || F1.empty() || F2.empty()) {
      const CoseparabilityResult cs = coseparability_search(*B, H, o.f_radius, o.g_radius);
      out.push_back(cs.report);
      if (which == "coseparable" || !cs.F_prime) {
        return out;
      }
      const IsolationSets sets = h_isolation_sets(*B, *cs.F_prime);
      out.push_back(info_report("isolation-sets", {{"F_prime", detail::format_all(*G, *cs.F_prime)}},
                                sets.to_json(*G)));
      F1 = sets.F1;
      F2 = sets.F2;
    }
    out.push_back(verify_h_isolation(*B, H, F1, F2, o.R));
    return out;
  }
  if (which == "boundary") {
    const auto bd = boundary_set(*B, o.R);
    return {info_report("boundary", {{"subset", B->to_json()}, {"R", o.R}},
                        {{"boundary", detail::format_all(*G, bd)}, {"size", bd.size()}})};
  }
  if (which == "convexity") {
    return {convexity_bounded_check(*B, make_presentation(G), o.L)};
  }
  throw CLI::ValidationError("unknown check '" + which + "'");
}

// ---------------------------------------------------------------------------------------
// op

std::vector<CheckReport> run_op(const std::string& which, const Options& o) {
  const GroupPtr G = group_or(o, "Z");
  const SubsetPtr B = subset_or(o, G, R"({"kind":"interval","coordinate":0,"lo":0})");
  const WindowPtr w = make_window(B, o.R);
  const nlohmann::json params = {{"subset", B->to_json()}, {"R", o.R}};
  auto with = [&](nlohmann::json extra) {
    nlohmann::json p = params;
    p.update(extra);
    return p;
  };
  if (which == "build" || which == "adjoint") {
    Operator a = op_arg(w, o.op);
    if (which == "adjoint") {
      a = adjoint(a);
    }
    return {info_report("op-" + which, with({{"op", o.op}}), a.to_json())};
  }
  if (which == "mul") {
    const Operator c = compose(op_arg(w, o.lhs), op_arg(w, o.rhs));
    return {info_report("op-mul", with({{"lhs", o.lhs}, {"rhs", o.rhs}}), c.to_json())};
  }
  if (which == "eq") {
    const EqualityCertificate cert = guarded_equal(op_arg(w, o.lhs), op_arg(w, o.rhs));
    CheckReport rep = info_report("op-eq", with({{"lhs", o.lhs}, {"rhs", o.rhs}}), cert.to_json(*w));
    rep.compared_count = cert.compared;
    rep.verdict = cert.equal ? Verdict::verified : Verdict::falsified;
    return {rep};
  }
  if (which == "rank") {
    const Operator a = op_arg(w, o.op);
    return {info_report("op-rank", with({{"op", o.op}}),
                        {{"rank", matrix_rank(a)}, {"rank_unclipped_rows", matrix_rank(a, true)},
                         {"clipped_rows", a.clipped_row_count()}})};
  }
  throw CLI::ValidationError("unknown op '" + which + "'");
}

// ---------------------------------------------------------------------------------------
// module

std::vector<CheckReport> run_module(const std::string& which, const Options& o) {
  const GroupPtr G = group_or(o, "Z");
  const SubsetPtr B = subset_or(o, G, R"({"kind":"interval","coordinate":0,"lo":0})");
  const Subgroup H = subgroup_arg(o.H, G, B->left);
  if (which == "inner") {
    const SigmaVector x = sigma_arg(*G, o.x);
    const SigmaVector y = sigma_arg(*G, o.y.empty() ? o.x : o.y);
    const HAlgebraElement ip = module_inner_product(*B, H, x, y);
    return {info_report("module-inner", {{"subset", B->to_json()}, {"H", H.to_json()},
                                         {"x", x.to_json(*G)}, {"y", y.to_json(*G)}},
                        {{"inner_product", ip.to_json()}})};
  }
  const SubsetPtr X = ambient_of(o, B);
  if (which == "ph") {
    std::vector<Element> F1 = elements_arg(*G, o.F1);
    std::vector<Element> F2 = elements_arg(*G, o.F2);
    std::vector<CheckReport> out;
    if (F1.empty() || F2.empty()) {
      const CoseparabilityResult cs = coseparability_search(*B, H, o.f_radius, o.g_radius);
      out.push_back(cs.report);
      if (!cs.F_prime) {
        return out;
      }
      const IsolationSets sets = h_isolation_sets(*B, *cs.F_prime);
      F1 = sets.F1;
      F2 = sets.F2;
    }
    const WindowPtr w = make_window(B, o.R);
    const Operator ph = ph_from_isolation(w, H, F1, F2);
    const EqualityCertificate cert = guarded_equal(ph, coset_projection(w, H.elements_within(o.R), Element{}));
    CheckReport rep = info_report("module-ph",
                                  {{"subset", B->to_json()}, {"H", H.to_json()}, {"R", o.R},
                                   {"F1", detail::format_all(*G, F1)}, {"F2", detail::format_all(*G, F2)}},
                                  {{"equals_coset_projection", cert.to_json(*w)},
                                   {"rank", matrix_rank(ph)}});
    rep.compared_count = cert.compared;
    rep.verdict = cert.equal ? Verdict::verified : Verdict::falsified;
    out.push_back(rep);
    return out;
  }
  const std::vector<Element> gs = elements_arg(*G, o.g);
  if (gs.size() != 1) {
    throw CLI::ValidationError("module " + which + " needs exactly one --g");
  }
  if (which == "ideal") {
    return {verify_ph_in_ideal(*B, X, H, gs[0], o.R)};
  }
  if (which == "coset-decomp") {
    return {pg_coset_decomposition(*B, X, H, gs[0], o.R)};
  }
  throw CLI::ValidationError("unknown module operation '" + which + "'");
}

// ---------------------------------------------------------------------------------------
// gallery

std::vector<CheckReport> run_gallery(const std::string& which, const Options& o) {
  if (which == "toeplitz") {
    return {run_toeplitz_check(o.R)};
  }
  if (which == "pv") {
    return {run_pv_check(o.n, o.R)};
  }
  if (which == "cuntz") {
    return {run_cuntz_check(o.n, o.L)};
  }
  if (which == "lance") {
    const GroupPtr G = group_or(o, "Z*Z");
    if (o.rep != "mu" && o.rep != "nu") {
      throw CLI::ValidationError("--rep must be mu or nu");
    }
    const LanceRep rep = o.rep == "mu" ? LanceRep::mu : LanceRep::nu;
    const std::vector<std::string> gs = o.g.empty() ? std::vector<std::string>{"b"} : o.g;
    std::vector<CheckReport> out;
    for (const Element& g : elements_arg(*G, gs)) {
      out.push_back(run_lance_difference_check(G, rep, g, o.R));
    }
    return out;
  }
  if (which == "hnn") {
    return {run_hnn_partition_check(group_or(o, "BS(1,2)"), o.R)};
  }
  if (which == "relations") {
    const GroupPtr G = group_or(o, "Z4*Z2Z6");
    return {run_relation_classification(subset_or(o, G, R"({"kind":"halfspace","side":"G"})"), o.R)};
  }
  if (which == "quotient") {
    const GroupPtr G = group_or(o, "Z");
    const SubsetPtr B = subset_or(o, G, R"({"kind":"interval","coordinate":0,"lo":0})");
    return {run_quotient_consistency_check(B, ambient_of(o, B), o.n, o.R)};
  }
  if (which == "generation") {
    const GroupPtr G = group_or(o, "Z4*Z2Z6");
    return {run_mu_nu_generation_check(subset_or(o, G, R"({"kind":"halfspace","side":"G"})"), o.L, o.R)};
  }
  throw CLI::ValidationError("unknown gallery item '" + which + "'");
}

// ---------------------------------------------------------------------------------------
// universal

std::vector<CheckReport> run_universal(const std::string& which, const Options& o) {
  if (which == "demo") {
    return {example_coseparability_demo(o.r, o.R, o.f_radius, o.g_radius)};
  }
  const GroupPtr G = group_or(o, "Z");
  const std::string fallback = G->kind() == GroupKind::free_group
                                   ? R"({"kind":"universal","construction":"b-words"})"
                                   : R"({"kind":"universal","N":)" + std::to_string(o.N) + "}";
  const SubsetPtr U = subset_or(o, G, fallback);
  if (which == "build") {
    return {info_report("universal-build", {{"subset", U->to_json()}, {"R", o.R}},
                        {{"members", detail::format_all(*G, window_points(*U, o.R))}})};
  }
  if (which == "verify") {
    return {universality_check(*U, o.r, o.bound)};
  }
  if (which == "independence") {
    std::vector<Track> ts;
    for (const std::string& t : o.tracks) {
      ts.push_back(parse_track(*G, t));
    }
    if (ts.empty()) {
      throw CLI::ValidationError("universal independence needs at least one --track");
    }
    return {track_independence_check(U, ts, o.R)};
  }
  throw CLI::ValidationError("unknown universal operation '" + which + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded exact checks for partial translation algebras on subsets of groups"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "group: JSON file or built-in name");
    sub->add_option("--subset", o.subset, "subset: JSON file or inline JSON");
    sub->add_option("--ambient", o.ambient, "ambient subset X: JSON file or inline JSON");
    sub->add_option("--H", o.H, "subgroup H: trivial, whole, or JSON {tag, generators}");
    sub->add_option("--K", o.K, "subgroup K (relative deepness): as --H");
    sub->add_option("--R", o.R, "window radius");
    sub->add_option("--r", o.r, "local radius");
    sub->add_option("--L", o.L, "word length bound");
    sub->add_option("--n", o.n, "rank or sample size");
    sub->add_option("--N", o.N, "universal prefix length");
    sub->add_option("--bound", o.bound, "search radius for universality centers");
    sub->add_option("--f-radius", o.f_radius, "radius of candidate co-separating sets");
    sub->add_option("--g-radius", o.g_radius, "radius of tested group elements");
    sub->add_option("--g", o.g, "group element (repeatable)");
    sub->add_option("--op", o.op, "operator expression");
    sub->add_option("--lhs", o.lhs, "left operator expression");
    sub->add_option("--rhs", o.rhs, "right operator expression");
    sub->add_option("--x", o.x, "sigma vector b=c;...");
    sub->add_option("--y", o.y, "sigma vector b=c;...");
    sub->add_option("--rep", o.rep, "representation for the Lance check: mu or nu");
    sub->add_option("--F1", o.F1, "isolation set F1 element (repeatable)");
    sub->add_option("--F2", o.F2, "isolation set F2 element (repeatable)");
    sub->add_option("--track", o.tracks, "track (g,{h1;h2;...}) (repeatable)");
    sub->add_option("--out", o.out, "also write the report to this file");
  };

  struct Family {
    const char* name;
    std::vector<std::string> items;
    std::vector<CheckReport> (*run)(const std::string&, const Options&);
  };
  const std::vector<Family> families = {
      {"check", {"deep", "rel-deep", "almost-invariant", "coseparable", "isolation", "boundary", "convexity"}, run_check},
      {"op", {"build", "mul", "adjoint", "eq", "rank"}, run_op},
      {"module", {"inner", "ph", "ideal", "coset-decomp"}, run_module},
      {"gallery", {"toeplitz", "pv", "cuntz", "lance", "hnn", "relations", "quotient", "generation"}, run_gallery},
      {"universal", {"build", "verify", "independence", "demo"}, run_universal},
  };
  std::string chosen_family;
  std::string chosen_item;
  const Family* chosen = nullptr;
  for (const Family& f : families) {
    CLI::App* fam = app.add_subcommand(f.name, std::string(f.name) + " operations");
    fam->require_subcommand(1);
    for (const std::string& item : f.items) {
      CLI::App* sub = fam->add_subcommand(item, item);
      common(sub);
      sub->callback([&, item, fp = &f] {
        chosen = fp;
        chosen_family = fp->name;
        chosen_item = item;
      });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Suite suite{chosen_family + " " + chosen_item, chosen->run(chosen_item, o)};
    const std::string text = emit_report({suite});
    std::cout << text;
    if (!o.out.empty()) {
      std::ofstream out(o.out, std::ios::binary);
      if (!out) {
        throw ConfigError("cannot write '" + o.out + "'");
      }
      out << text;
    }
    return suite.verdict() == Verdict::falsified ? kExitFalsified : 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  }
}
