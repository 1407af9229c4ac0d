#pragma once

#include "group_io.hpp"
#include "universal.hpp"

namespace tlab {

namespace detail {

inline Element parse_element(const Group& G, const nlohmann::json& j) {
  if (j.is_number_integer()) {
    return G.parse(std::to_string(j.get<std::int64_t>()));
  }
  return G.parse(j.get<std::string>());
}

inline std::vector<Element> parse_elements(const Group& G, const nlohmann::json& j) {
  std::vector<Element> out;
  for (const auto& x : j) {
    out.push_back(parse_element(G, x));
  }
  return out;
}

/// {"tag": "trivial" | "whole" | "finite" | "cyclic", "generators": [...]}.
inline Subgroup subgroup_from_json(const GroupPtr& G, const nlohmann::json& j) {
  const std::string tag = j.value("tag", std::string("finite"));
  const std::vector<Element> gens =
      parse_elements(*G, j.value("generators", nlohmann::json::array()));
  if (tag == "trivial") {
    return Subgroup::trivial(G);
  }
  if (tag == "whole") {
    return Subgroup::whole(G);
  }
  if (tag == "finite") {
    return Subgroup::finite(G, gens);
  }
  if (tag == "cyclic") {
    if (gens.size() != 1) {
      throw ConfigError("cyclic subgroup needs exactly one generator");
    }
    return Subgroup::cyclic(G, gens[0]);
  }
  throw ConfigError("unknown subgroup tag '" + tag + "'");
}

inline std::optional<std::int64_t> optional_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<std::int64_t>();
}

}  // namespace detail

/// Builds a subset of G from its JSON definition. Parameters sit beside the kind tag:
///   whole | positive-cone
///   interval      {coordinate, lo?, hi?}
///   residue       {coordinate, modulus, residue}
///   first-letter  {forbidden: [letters]}          (alias custom-first-letter)
///   halfspace     {side: G | S | hnn-B}
///   coset-union   {base: subset, g, k_min?}
///   universal     {N} on Z, or {construction: "b-words", r_max?, factor?} on F2
///   finite-set    {elements: [...]}
/// Optional "left_stabiliser"/"right_stabiliser" replace the built-in claims, and
/// "ambient" records an enclosing subset X.
inline SubsetPtr subset_from_json(const GroupPtr& G, const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    SubsetPtr s;
    if (kind == "whole") {
      s = make_whole(G);
    } else if (kind == "positive-cone") {
      s = make_positive_cone(G);
    } else if (kind == "interval") {
      s = make_interval(G, j.value("coordinate", std::size_t{0}), detail::optional_int(j, "lo"),
                        detail::optional_int(j, "hi"));
    } else if (kind == "residue") {
      s = make_residue(G, j.value("coordinate", std::size_t{0}), j.at("modulus").get<std::int64_t>(),
                       j.value("residue", std::int64_t{0}));
    } else if (kind == "first-letter" || kind == "custom-first-letter") {
      const FreeGroup& F = detail::as_free(G, "first-letter subset");
      std::vector<std::pair<std::size_t, int>> forbidden;
      for (const Element& x : detail::parse_elements(*G, j.at("forbidden"))) {
        if (x.word().size() != 1 || G->word_length(x) != 1) {
          throw ConfigError("first-letter subset: forbidden entries must be single letters");
        }
        forbidden.push_back(*F.first_letter(x));
      }
      s = make_first_letter(G, std::move(forbidden));
    } else if (kind == "halfspace") {
      s = make_tree_halfspace(G, j.value("side", std::string(G->kind() == GroupKind::hnn ? "hnn-B" : "G")));
    } else if (kind == "coset-union") {
      s = make_coset_union(subset_from_json(G, j.at("base")), detail::parse_element(*G, j.at("g")),
                           detail::optional_int(j, "k_min"));
    } else if (kind == "universal") {
      if (j.value("construction", std::string("z")) == "b-words") {
        s = build_universal_in_b_words(G, j.value("r_max", std::size_t{1}), j.value("factor", std::size_t{4})).U;
      } else {
        s = build_universal_z(j.value("N", std::size_t{64}), G);
      }
    } else if (kind == "finite-set") {
      s = make_finite_set(G, detail::parse_elements(*G, j.at("elements")));
    } else {
      throw ConfigError("unknown subset kind '" + kind + "'");
    }
    if (j.contains("left_stabiliser") || j.contains("right_stabiliser") || j.contains("ambient")) {
      auto copy = std::make_shared<Subset>(*s);
      if (j.contains("left_stabiliser")) {
        copy->left = detail::subgroup_from_json(G, j.at("left_stabiliser"));
      }
      if (j.contains("right_stabiliser")) {
        copy->right = detail::subgroup_from_json(G, j.at("right_stabiliser"));
      }
      if (j.contains("ambient")) {
        copy->ambient = subset_from_json(G, j.at("ambient"));
      }
      s = copy;
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed subset config: ") + e.what());
  }
}

/// Resolves a subset argument: inline JSON (starting with '{') or a JSON file path.
inline SubsetPtr load_subset(const GroupPtr& G, const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    try {
      return subset_from_json(G, nlohmann::json::parse(arg));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("malformed inline subset: ") + e.what());
    }
  }
  return subset_from_json(G, read_json_file(arg));
}

}  // namespace tlab
