#pragma once

#include "checks.hpp"

namespace tlab {

/// Finite formal sum Σ c_h ρ(h) in ℚ[H]. Multiplication follows ρ(a)ρ(b) = ρ(ab); the
/// involution sends c ρ(h) to c ρ(h⁻¹).
class HAlgebraElement {
 public:
  explicit HAlgebraElement(GroupPtr G) : G_(std::move(G)) {}

  static HAlgebraElement basis(GroupPtr G, const Element& h, Rational c = 1) {
    HAlgebraElement a(std::move(G));
    a.add_term(h, c);
    return a;
  }

  const Group& group() const { return *G_; }

  Rational coefficient(const Element& h) const {
    auto it = coeffs_.find(h);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  void add_term(const Element& h, const Rational& c) {
    if (c == 0) {
      return;
    }
    Rational& slot = coeffs_[h];
    slot += c;
    if (slot == 0) {
      coeffs_.erase(h);
    }
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Support in shortlex order.
  std::vector<Element> support() const {
    std::vector<Element> s;
    for (const auto& [h, c] : coeffs_) {
      s.push_back(h);
    }
    G_->sort_shortlex(s);
    return s;
  }

  HAlgebraElement star() const {
    HAlgebraElement out(G_);
    for (const auto& [h, c] : coeffs_) {
      out.add_term(G_->invert(h), c);
    }
    return out;
  }

  friend HAlgebraElement operator+(const HAlgebraElement& a, const HAlgebraElement& b) {
    HAlgebraElement out = a;
    for (const auto& [h, c] : b.coeffs_) {
      out.add_term(h, c);
    }
    return out;
  }

  friend HAlgebraElement operator-(const HAlgebraElement& a, const HAlgebraElement& b) {
    HAlgebraElement out = a;
    for (const auto& [h, c] : b.coeffs_) {
      out.add_term(h, -c);
    }
    return out;
  }

  friend HAlgebraElement operator*(const HAlgebraElement& a, const HAlgebraElement& b) {
    HAlgebraElement out(a.G_);
    for (const auto& [x, c] : a.coeffs_) {
      for (const auto& [y, d] : b.coeffs_) {
        out.add_term(a.G_->multiply(x, y), c * d);
      }
    }
    return out;
  }

  friend bool operator==(const HAlgebraElement& a, const HAlgebraElement& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// Matrix of left multiplication on ℚ[H] in the basis `H` (listing every element once):
  /// entry (i, j) is the coefficient of h_i in a·h_j, i.e. c_{h_i h_j⁻¹}.
  std::vector<std::vector<Rational>> regular_matrix(const std::vector<Element>& H) const {
    std::vector<std::vector<Rational>> m(H.size(), std::vector<Rational>(H.size()));
    for (std::size_t i = 0; i < H.size(); ++i) {
      for (std::size_t j = 0; j < H.size(); ++j) {
        m[i][j] = coefficient(G_->multiply(H[i], G_->invert(H[j])));
      }
    }
    return m;
  }

  /// Serialised as {word: [num, den]}.
  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const Element& h : support()) {
      j[G_->format(h)] = rational_to_json(coefficient(h));
    }
    return j;
  }

 private:
  GroupPtr G_;
  std::unordered_map<Element, Rational, ElementHash> coeffs_;
};

/// Exact positive semidefiniteness of a symmetric rational matrix by symmetric Gaussian
/// elimination: a negative pivot, or a zero pivot with a nonzero row, rules it out.
inline bool is_positive_semidefinite(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) {
        return false;
      }
    }
  }
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    // Any remaining positive diagonal entry serves as pivot.
    std::optional<std::size_t> p;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) {
        continue;
      }
      if (m[i][i] < 0) {
        return false;
      }
      if (m[i][i] > 0 && !p) {
        p = i;
      }
    }
    if (!p) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!done[i] && !done[j] && m[i][j] != 0) {
            return false;
          }
        }
      }
      return true;
    }
    const std::size_t k = *p;
    done[k] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || m[i][k] == 0) {
        continue;
      }
      const Rational f = m[i][k] / m[k][k];
      for (std::size_t j = 0; j < n; ++j) {
        if (!done[j]) {
          m[i][j] -= f * m[k][j];
        }
      }
    }
  }
  return true;
}

/// Formal combination Σ c_b σ_b of module generators, b ∈ B.
struct SigmaVector {
  std::unordered_map<Element, Rational, ElementHash> coeffs;

  static SigmaVector single(const Element& b, Rational c = 1) {
    SigmaVector v;
    v.coeffs[b] = c;
    return v;
  }

  void add(const Element& b, const Rational& c) {
    if (c == 0) {
      return;
    }
    Rational& slot = coeffs[b];
    slot += c;
    if (slot == 0) {
      coeffs.erase(b);
    }
  }

  nlohmann::json to_json(const Group& G) const {
    std::vector<Element> keys;
    for (const auto& [b, c] : coeffs) {
      keys.push_back(b);
    }
    G.sort_shortlex(keys);
    nlohmann::json j = nlohmann::json::object();
    for (const Element& b : keys) {
      j[G.format(b)] = rational_to_json(coeffs.at(b));
    }
    return j;
  }
};

namespace detail {

inline void require_in_B(const Subset& B, const SigmaVector& x) {
  for (const auto& [b, c] : x.coeffs) {
    if (!B.contains(b)) {
      throw PreconditionError("sigma symbol " + B.group->format(b) + " lies outside B");
    }
  }
}

}  // namespace detail

/// ⟨x, y⟩ = Σ c_g d_k ρ(gk⁻¹) over pairs with gk⁻¹ ∈ H.
inline HAlgebraElement module_inner_product(const Subset& B, const Subgroup& H, const SigmaVector& x,
                                            const SigmaVector& y) {
  detail::require_in_B(B, x);
  detail::require_in_B(B, y);
  const Group& G = *B.group;
  HAlgebraElement out(B.group);
  for (const auto& [g, c] : x.coeffs) {
    for (const auto& [k, d] : y.coeffs) {
      const Element h = G.multiply(g, G.invert(k));
      if (H.contains(h)) {
        out.add_term(h, c * d);
      }
    }
  }
  return out;
}

/// Right action of T^B_k: σ_g ↦ σ_{gk} when gk ∈ B, else 0.
inline SigmaVector sigma_act(const Subset& B, const SigmaVector& x, const Element& k) {
  detail::require_in_B(B, x);
  const Group& G = *B.group;
  SigmaVector out;
  for (const auto& [g, c] : x.coeffs) {
    const Element gk = G.multiply(g, k);
    if (B.contains(gk)) {
      out.add(gk, c);
    }
  }
  return out;
}

/// Π_{g∈F1} T_g*T_g · Π_{g∈F2} (1 − T_g*T_g) on the B-window. Requires H ⊆ B, checked on
/// H ∩ window when H is infinite.
inline Operator ph_from_isolation(const WindowPtr& w, const Subgroup& H,
                                  const std::vector<Element>& F1, const std::vector<Element>& F2) {
  const Subset& B = *w->source();
  for (const Element& h : H.elements_within(w->radius())) {
    if (!B.contains(h)) {
      throw PreconditionError("H is not contained in B: " + B.group->format(h));
    }
  }
  Operator out = Operator::identity(w);
  auto range_of = [&](const Element& g) {
    const Operator T = build_generator_op(w, g);
    return compose(adjoint(T), T);
  };
  for (const Element& g : F1) {
    out = compose(out, range_of(g));
  }
  for (const Element& g : F2) {
    out = compose(out, Operator::identity(w) - range_of(g));
  }
  return out;
}

/// p_H = p_H·P^g on the X-window, with P the projection onto X∖B and
/// P^g = (T^X_g)* P T^X_g. Requires g⁻¹ ∈ X∖B.
inline CheckReport verify_ph_in_ideal(const Subset& B, const SubsetPtr& X, const Subgroup& H,
                                      const Element& g, std::size_t R) {
  const Group& G = *B.group;
  const Element gi = G.invert(g);
  if (!X->contains(gi) || B.contains(gi)) {
    throw PreconditionError("verify_ph_in_ideal needs g^-1 in X minus B; got g = " + G.format(g));
  }
  CheckReport rep;
  rep.name = "ph-in-ideal";
  rep.params = {{"B", B.to_json()}, {"X", X->to_json()}, {"H", H.to_json()}, {"g", G.format(g)}, {"R", R}};
  const WindowPtr w = make_window(X, R);
  const Operator P = Operator::diagonal(w, [&](const Element& x) { return !B.contains(x); });
  const Operator T = build_generator_op(w, g);
  const Operator Pg = compose(adjoint(T), compose(P, T));
  const Operator pH = Operator::diagonal(w, [&](const Element& x) { return H.contains(x); });
  const EqualityCertificate cert = guarded_equal(pH, compose(pH, Pg));
  rep.compared_count = cert.compared;
  rep.witnesses.push_back(cert.to_json(*w));
  if (!cert.equal) {
    rep.verdict = Verdict::falsified;
  }
  return rep;
}

/// Support of P^g(1−P): {x ∈ B : xg⁻¹ ∈ X∖B} ∩ Ball(e,R), shortlex.
inline std::vector<Element> pg_support(const Subset& B, const Subset& X, const Element& g,
                                       std::size_t R) {
  const Group& G = *B.group;
  const Element gi = G.invert(g);
  std::vector<Element> out;
  for (const Element& x : window_points(B, R)) {
    const Element y = G.multiply(x, gi);
    if (X.contains(y) && !B.contains(y)) {
      out.push_back(x);
    }
  }
  return out;
}

/// Partitions the support of P^g(1−P) into H-cosets Hx at R and R+2 (verified iff the
/// counts agree) and checks that the operator P^g(1−P) is the diagonal projection onto
/// that support on the X-window.
inline CheckReport pg_coset_decomposition(const Subset& B, const SubsetPtr& X, const Subgroup& H,
                                          const Element& g, std::size_t R) {
  const Group& G = *B.group;
  CheckReport rep;
  rep.name = "pg-coset-decomposition";
  rep.params = {{"B", B.to_json()}, {"X", X->to_json()}, {"H", H.to_json()}, {"g", G.format(g)}, {"R", R}};
  std::vector<std::size_t> counts;
  for (std::size_t radius : {R, R + 2}) {
    const auto support = pg_support(B, *X, g, radius);
    const auto classes = detail::right_coset_classes(G, H, support);
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& cls : classes) {
      reps.push_back(G.format(cls.front()));
    }
    counts.push_back(classes.size());
    rep.compared_count += support.size();
    rep.witnesses.push_back({{"R", radius}, {"support", detail::format_all(G, support)},
                             {"coset_representatives", reps}, {"cosets", classes.size()}});
  }
  const WindowPtr w = make_window(X, R);
  const Operator P = Operator::diagonal(w, [&](const Element& x) { return !B.contains(x); });
  const Operator T = build_generator_op(w, g);
  const Operator Pg = compose(adjoint(T), compose(P, T));
  const Operator lhs = compose(Pg, Operator::identity(w) - P);
  const auto support = pg_support(B, *X, g, R);
  const ElementSet sset(support.begin(), support.end());
  const EqualityCertificate cert =
      guarded_equal(lhs, Operator::diagonal(w, [&](const Element& x) { return sset.count(x) > 0; }));
  rep.witnesses.push_back({{"operator_matches_support", cert.to_json(*w)}});
  if (!cert.equal) {
    rep.verdict = Verdict::falsified;
  } else if (counts[0] != counts[1]) {
    rep.verdict = Verdict::inconclusive;
    rep.witnesses.push_back({{"note", "coset count grows with the radius"}});
  }
  return rep;
}

}  // namespace tlab
