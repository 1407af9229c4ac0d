#pragma once

#include "amalgam.hpp"
#include "finite_group.hpp"
#include "free_groups.hpp"
#include "hnn.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tlab {

/// Multiplication table of Z/n with codes 0..n-1.
inline std::vector<std::vector<std::int64_t>> cyclic_table(std::size_t n) {
  std::vector<std::vector<std::int64_t>> t(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t[i][j] = static_cast<std::int64_t>((i + j) % n);
    }
  }
  return t;
}

inline Factor factor_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") {
    return Factor::infinite_cyclic(j.at("generator").get<std::string>());
  }
  if (kind == "trivial") {
    return Factor::trivial();
  }
  if (kind == "cyclic-finite") {
    const auto n = j.at("order").get<std::size_t>();
    return Factor::finite(j.value("label", "C" + std::to_string(n)), cyclic_table(n),
                          j.value("elements", std::vector<std::string>{}),
                          j.value("generators", std::vector<std::int64_t>{}));
  }
  if (kind == "finite") {
    return Factor::finite(j.value("label", std::string("G")),
                          j.at("table").get<std::vector<std::vector<std::int64_t>>>(),
                          j.value("elements", std::vector<std::string>{}),
                          j.value("generators", std::vector<std::int64_t>{}));
  }
  throw ConfigError("unknown factor kind '" + kind + "'");
}

inline Embedding embedding_from_json(const nlohmann::json& j, const Factor& H, const Factor& F) {
  if (j.contains("table")) {
    return Embedding::table(H, F, j.at("table").get<std::vector<std::int64_t>>());
  }
  return Embedding::multiplier(H, F, j.value("multiplier", std::int64_t{1}));
}

/// Z/4 *_{Z/2} Z/6 with H = {0,2} in Z/4 identified with {0,3} in Z/6; every non-identity
/// factor element is a generator.
inline GroupPtr make_amalgam_z4_z6() {
  Factor G = Factor::finite("G", cyclic_table(4), {}, {});
  Factor S = Factor::finite("S", cyclic_table(6), {}, {});
  Factor H = Factor::finite("H", cyclic_table(2), {}, {});
  Embedding eg = Embedding::table(H, G, {0, 2});
  Embedding es = Embedding::table(H, S, {0, 3});
  return std::make_shared<AmalgamGroup>(std::move(G), std::move(S), std::move(H), std::move(eg),
                                        std::move(es), "Z4*Z2Z6");
}

/// Z * Z = <a> * <b> as an amalgam over the trivial group.
inline GroupPtr make_amalgam_z_z() {
  Factor G = Factor::infinite_cyclic("a");
  Factor S = Factor::infinite_cyclic("b");
  Factor H = Factor::trivial();
  Embedding eg = Embedding::multiplier(H, G, 1);
  Embedding es = Embedding::multiplier(H, S, 1);
  return std::make_shared<AmalgamGroup>(std::move(G), std::move(S), std::move(H), std::move(eg),
                                        std::move(es), "Z*Z");
}

/// Baumslag-Solitar group BS(m,n) = <a, t | t a^m t^-1 = a^n>.
inline GroupPtr make_baumslag_solitar(std::int64_t m, std::int64_t n) {
  Factor G = Factor::infinite_cyclic("a");
  Factor H = Factor::infinite_cyclic("h");
  Embedding iota = Embedding::multiplier(H, G, m);
  Embedding theta = Embedding::multiplier(H, G, n);
  return std::make_shared<HnnGroup>(std::move(G), std::move(H), std::move(iota), std::move(theta),
                                    "t", "BS(" + std::to_string(m) + "," + std::to_string(n) + ")");
}

/// Z *_{1} = <a> * <t>, the HNN extension of Z over the trivial subgroup.
inline GroupPtr make_hnn_z_trivial() {
  Factor G = Factor::infinite_cyclic("a");
  Factor H = Factor::trivial();
  Embedding iota = Embedding::multiplier(H, G, 1);
  Embedding theta = Embedding::multiplier(H, G, 1);
  return std::make_shared<HnnGroup>(std::move(G), std::move(H), std::move(iota), std::move(theta),
                                    "t", "Z*<t>");
}

inline GroupPtr builtin_group(const std::string& name);

inline GroupPtr group_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "builtin") {
      return builtin_group(j.at("name").get<std::string>());
    }
    if (kind == "free" || kind == "free-abelian") {
      std::vector<std::string> names = j.value("generators", std::vector<std::string>{});
      std::size_t rank = j.value("rank", names.size());
      if (kind == "free") {
        return std::make_shared<FreeGroup>(rank, names);
      }
      return std::make_shared<FreeAbelianGroup>(rank, names);
    }
    if (kind == "finite") {
      return std::make_shared<FiniteGroup>(factor_from_json(j));
    }
    if (kind == "amalgam") {
      Factor G = factor_from_json(j.at("G"));
      Factor S = factor_from_json(j.at("S"));
      Factor H = factor_from_json(j.at("H"));
      Embedding eg = embedding_from_json(j.at("embed_G"), H, G);
      Embedding es = embedding_from_json(j.at("embed_S"), H, S);
      return std::make_shared<AmalgamGroup>(std::move(G), std::move(S), std::move(H),
                                            std::move(eg), std::move(es),
                                            j.value("name", std::string("amalgam")));
    }
    if (kind == "hnn") {
      Factor G = factor_from_json(j.at("G"));
      Factor H = factor_from_json(j.at("H"));
      Embedding iota = embedding_from_json(j.at("iota"), H, G);
      Embedding theta = embedding_from_json(j.at("theta"), H, G);
      return std::make_shared<HnnGroup>(std::move(G), std::move(H), std::move(iota),
                                        std::move(theta), j.value("stable_letter", std::string("t")),
                                        j.value("name", std::string("hnn")));
    }
    throw ConfigError("unknown group kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed group config: ") + e.what());
  }
}

/// Built-in groups by name: Z, Z2, Zn, F2, Fn, Z4*Z2Z6, Z*Z, BS(1,2), BS(m,n), Z*<t>.
inline GroupPtr builtin_group(const std::string& name) {
  if (name.empty()) {
    throw ConfigError("empty group name");
  }
  if (name == "Z") {
    return std::make_shared<FreeAbelianGroup>(1);
  }
  if (name == "Z4*Z2Z6") {
    return make_amalgam_z4_z6();
  }
  if (name == "Z*Z") {
    return make_amalgam_z_z();
  }
  if (name == "Z*<t>") {
    return make_hnn_z_trivial();
  }
  if ((name[0] == 'Z' || name[0] == 'F') && name.size() > 1 &&
      name.find_first_not_of("0123456789", 1) == std::string::npos) {
    const std::size_t n = std::stoul(name.substr(1));
    if (n == 0 || n > 8) {
      throw ConfigError("rank out of range in '" + name + "'");
    }
    if (name[0] == 'Z') {
      return std::make_shared<FreeAbelianGroup>(n);
    }
    return std::make_shared<FreeGroup>(n);
  }
  long long m = 0;
  long long n = 0;
  char close = 0;
  if (std::sscanf(name.c_str(), "BS(%lld,%lld%c", &m, &n, &close) == 3 && close == ')') {
    return make_baumslag_solitar(m, n);
  }
  throw ConfigError("unknown group '" + name + "'");
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open '" + path + "'");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

/// Resolves a group argument: a JSON file path, or a built-in name.
inline GroupPtr load_group(const std::string& arg) {
  std::ifstream probe(arg);
  if (probe.good()) {
    return group_from_json(read_json_file(arg));
  }
  return builtin_group(arg);
}

}  // namespace tlab
