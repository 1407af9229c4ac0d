#pragma once

#include <gmpxx.h>

#include <json.hpp>

#include <string>

namespace tlab {

/// Exact rational scalar used for every operator entry and group-algebra coefficient.
using Rational = mpq_class;

namespace detail {

inline nlohmann::json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) {
    return static_cast<long long>(z.get_si());
  }
  return z.get_str();
}

}  // namespace detail

/// Serialises q as the pair [num, den] with den > 0.
inline nlohmann::json rational_to_json(const Rational& q) {
  return nlohmann::json::array(
      {detail::integer_to_json(q.get_num()), detail::integer_to_json(q.get_den())});
}

/// Inverse of rational_to_json; accepts integers or decimal strings for each part.
inline Rational rational_from_json(const nlohmann::json& j) {
  auto part = [](const nlohmann::json& p) {
    if (p.is_string()) {
      return mpz_class(p.get<std::string>());
    }
    return mpz_class(std::to_string(p.get<long long>()));
  };
  if (j.is_number_integer()) {
    return Rational(part(j));
  }
  Rational q(part(j.at(0)), part(j.at(1)));
  q.canonicalize();
  return q;
}

}  // namespace tlab
