#pragma once

#include "rational.hpp"
#include "track.hpp"

#include <map>

namespace tlab {

using WindowPtr = std::shared_ptr<const Window>;

inline WindowPtr make_window(const SubsetPtr& source, std::size_t R) {
  return std::make_shared<const Window>(enumerate_window(source, R));
}

class Operator;

/// Outcome of comparing two operators on the rows both know exactly.
struct EqualityCertificate {
  bool equal = true;
  std::size_t compared = 0;
  std::size_t excluded = 0;
  std::optional<std::size_t> first_mismatch;
  nlohmann::json mismatch_detail;

  nlohmann::json to_json(const Window& w) const {
    nlohmann::json j = {{"equal", equal}, {"compared_rows", compared}, {"excluded_rows", excluded}};
    if (first_mismatch) {
      j["first_mismatch"] = w.group().format(w.point(*first_mismatch));
      j["detail"] = mismatch_detail;
    }
    return j;
  }
};

/// Exact sparse operator on ℓ²(window). Row x lists the coefficients of T δ_x, so entry
/// (x, y) is the coefficient of δ_y. A clipped row is one whose untruncated image leaves
/// the window; a clipped column is one that receives mass from outside the window.
/// Unclipped rows are exactly correct.
class Operator {
 public:
  using Row = std::map<std::size_t, Rational>;

  explicit Operator(WindowPtr w)
      : w_(std::move(w)), rows_(w_->size()), clipped_rows_(w_->size(), false),
        clipped_cols_(w_->size(), false) {}

  static Operator zero(WindowPtr w) { return Operator(std::move(w)); }

  static Operator identity(WindowPtr w) {
    Operator op(std::move(w));
    for (std::size_t i = 0; i < op.size(); ++i) {
      op.rows_[i][i] = 1;
    }
    return op;
  }

  /// Diagonal 0/1 projection onto the window points satisfying `keep`.
  static Operator diagonal(WindowPtr w, const std::function<bool(const Element&)>& keep) {
    Operator op(std::move(w));
    for (std::size_t i = 0; i < op.size(); ++i) {
      if (keep(op.w_->point(i))) {
        op.rows_[i][i] = 1;
      }
    }
    return op;
  }

  const Window& window() const noexcept { return *w_; }
  const WindowPtr& window_ptr() const noexcept { return w_; }
  std::size_t size() const noexcept { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_.at(i); }
  bool row_clipped(std::size_t i) const { return clipped_rows_.at(i); }
  bool col_clipped(std::size_t i) const { return clipped_cols_.at(i); }

  std::size_t clipped_row_count() const {
    return static_cast<std::size_t>(std::count(clipped_rows_.begin(), clipped_rows_.end(), true));
  }

  Rational entry(std::size_t r, std::size_t c) const {
    auto it = rows_.at(r).find(c);
    return it == rows_[r].end() ? Rational(0) : it->second;
  }

  void set(std::size_t r, std::size_t c, const Rational& v) {
    if (v == 0) {
      rows_.at(r).erase(c);
    } else {
      rows_.at(r)[c] = v;
    }
  }

  void clip_row(std::size_t r) { clipped_rows_.at(r) = true; }
  void clip_col(std::size_t c) { clipped_cols_.at(c) = true; }

  /// a·b: apply b first, then a. Row x of the product is exact when b is exact at x and
  /// a is exact on every point b δ_x touches; columns dually.
  friend Operator compose(const Operator& a, const Operator& b) {
    check_same(a, b);
    Operator out(a.w_);
    for (std::size_t x = 0; x < b.size(); ++x) {
      bool clipped = b.clipped_rows_[x];
      for (const auto& [y, by] : b.rows_[x]) {
        clipped = clipped || a.clipped_rows_[y];
        for (const auto& [z, az] : a.rows_[y]) {
          Rational& v = out.rows_[x][z];
          v += by * az;
          if (v == 0) {
            out.rows_[x].erase(z);
          }
        }
      }
      out.clipped_rows_[x] = clipped;
    }
    out.clipped_cols_ = a.clipped_cols_;
    for (std::size_t y = 0; y < b.size(); ++y) {
      if (b.clipped_cols_[y]) {
        for (const auto& [z, az] : a.rows_[y]) {
          out.clipped_cols_[z] = true;
        }
      }
    }
    return out;
  }

  friend Operator adjoint(const Operator& a) {
    Operator out(a.w_);
    for (std::size_t x = 0; x < a.size(); ++x) {
      for (const auto& [y, v] : a.rows_[x]) {
        out.rows_[y][x] = v;
      }
    }
    out.clipped_rows_ = a.clipped_cols_;
    out.clipped_cols_ = a.clipped_rows_;
    return out;
  }

  friend Operator linear_combination(const std::vector<Rational>& coeffs,
                                     const std::vector<Operator>& ops) {
    if (coeffs.size() != ops.size() || ops.empty()) {
      throw PreconditionError("linear_combination: coefficient and operator counts differ");
    }
    Operator out(ops[0].w_);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      check_same(out, ops[k]);
      for (std::size_t x = 0; x < out.size(); ++x) {
        for (const auto& [y, v] : ops[k].rows_[x]) {
          Rational& t = out.rows_[x][y];
          t += coeffs[k] * v;
          if (t == 0) {
            out.rows_[x].erase(y);
          }
        }
        out.clipped_rows_[x] = out.clipped_rows_[x] || ops[k].clipped_rows_[x];
        out.clipped_cols_[x] = out.clipped_cols_[x] || ops[k].clipped_cols_[x];
      }
    }
    return out;
  }

  friend Operator operator+(const Operator& a, const Operator& b) {
    return linear_combination(std::vector<Rational>{1, 1}, std::vector<Operator>{a, b});
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    return linear_combination(std::vector<Rational>{1, -1}, std::vector<Operator>{a, b});
  }
  friend Operator operator*(const Operator& a, const Operator& b) { return compose(a, b); }

  /// Compares rows outside clipped(a) ∪ clipped(b).
  friend EqualityCertificate guarded_equal(const Operator& a, const Operator& b) {
    check_same(a, b);
    EqualityCertificate cert;
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (a.clipped_rows_[x] || b.clipped_rows_[x]) {
        ++cert.excluded;
        continue;
      }
      ++cert.compared;
      if (a.rows_[x] != b.rows_[x] && cert.equal) {
        cert.equal = false;
        cert.first_mismatch = x;
        cert.mismatch_detail = {{"lhs", a.row_json(x)}, {"rhs", b.row_json(x)}};
      }
    }
    return cert;
  }

  /// True iff every entry is 0 or 1 with at most one nonzero per row and per column.
  bool is_partial_permutation() const {
    std::vector<bool> used(size(), false);
    for (const Row& r : rows_) {
      if (r.size() > 1) {
        return false;
      }
      for (const auto& [y, v] : r) {
        if (v != 1 || used[y]) {
          return false;
        }
        used[y] = true;
      }
    }
    return true;
  }

  /// Rows with a nonzero entry, as window indices.
  std::vector<std::size_t> support_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < size(); ++x) {
      if (!rows_[x].empty()) {
        out.push_back(x);
      }
    }
    return out;
  }

  nlohmann::json row_json(std::size_t x) const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [y, v] : rows_[x]) {
      j.push_back({window().group().format(w_->point(y)), rational_to_json(v)});
    }
    return j;
  }

  /// {window, entries: [[row, col, num, den]], clipped: [row]} in window order.
  nlohmann::json to_json() const {
    const Group& G = window().group();
    nlohmann::json entries = nlohmann::json::array();
    nlohmann::json clipped = nlohmann::json::array();
    for (std::size_t x = 0; x < size(); ++x) {
      for (const auto& [y, v] : rows_[x]) {
        entries.push_back({G.format(w_->point(x)), G.format(w_->point(y)),
                           detail::integer_to_json(v.get_num()),
                           detail::integer_to_json(v.get_den())});
      }
      if (clipped_rows_[x]) {
        clipped.push_back(G.format(w_->point(x)));
      }
    }
    return {{"window", w_->to_json()}, {"entries", entries}, {"clipped", clipped}};
  }

 private:
  static void check_same(const Operator& a, const Operator& b) {
    if (!a.w_->same_as(*b.w_)) {
      throw PreconditionError("operators live on different windows");
    }
  }

  WindowPtr w_;
  std::vector<Row> rows_;
  std::vector<bool> clipped_rows_;
  std::vector<bool> clipped_cols_;
};

// Namespace-scope declaration so calls with braced arguments find the friend.
Operator linear_combination(const std::vector<Rational>& coeffs, const std::vector<Operator>& ops);

/// T^B_g on the window, with B decided by `domain` (default: the window's own subset):
/// δ_x ↦ δ_{xg⁻¹} iff x and xg⁻¹ lie in B. A row is clipped when xg⁻¹ ∈ B lies outside
/// the window; a column y is clipped when its preimage yg ∈ B lies outside.
inline Operator build_generator_op(const WindowPtr& w, const Element& g,
                                   const Subset* domain = nullptr) {
  const Subset& B = domain ? *domain : *w->source();
  const Group& G = w->group();
  const Element gi = G.invert(g);
  Operator op(w);
  for (std::size_t i = 0; i < w->size(); ++i) {
    const Element& x = w->point(i);
    if (!B.contains(x)) {
      continue;
    }
    const Element y = G.multiply(x, gi);
    if (B.contains(y)) {
      if (auto j = w->index_of(y)) {
        op.set(i, *j, 1);
      } else {
        op.clip_row(i);
      }
    }
    const Element pre = G.multiply(x, g);
    if (B.contains(pre) && !w->index_of(pre)) {
      op.clip_col(i);
    }
  }
  return op;
}

/// Operator of a track: δ_x ↦ δ_{xg⁻¹} iff xh⁻¹ ∈ B for every h ∈ F.
inline Operator op_from_track(const WindowPtr& w, const Track& t, const Subset* domain = nullptr) {
  const Subset& B = domain ? *domain : *w->source();
  const Group& G = w->group();
  const Element gi = G.invert(t.g);
  Operator op(w);
  for (std::size_t i = 0; i < w->size(); ++i) {
    const Element& x = w->point(i);
    if (track_acts_at(G, t, B, x)) {
      const Element y = G.multiply(x, gi);
      if (auto j = w->index_of(y)) {
        op.set(i, *j, 1);
      } else {
        op.clip_row(i);
      }
    }
    // Column i receives from z = x g when z's track condition holds.
    const Element z = G.multiply(x, t.g);
    if (!w->index_of(z) && track_acts_at(G, t, B, z)) {
      op.clip_col(i);
    }
  }
  return op;
}

/// Diagonal projection onto the window points of the right coset H·b.
inline Operator coset_projection(const WindowPtr& w, const std::vector<Element>& H,
                                 const Element& b) {
  const Group& G = w->group();
  ElementSet coset;
  for (const Element& h : H) {
    coset.insert(G.multiply(h, b));
  }
  return Operator::diagonal(w, [&](const Element& x) { return coset.count(x) > 0; });
}

/// Exact rank over ℚ of the listed rows (all rows by default), by fraction-free integer
/// elimination: rows are scaled to primitive integer vectors and pivots eliminate by
/// cross-multiplication.
inline std::size_t rank_of_rows(const std::vector<std::map<std::size_t, Rational>>& rows) {
  using IRow = std::map<std::size_t, mpz_class>;
  auto primitive = [](IRow& r) {
    mpz_class g = 0;
    for (const auto& [c, v] : r) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    if (g > 1) {
      for (auto& [c, v] : r) {
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
      }
    }
  };
  std::vector<IRow> work;
  for (const auto& r : rows) {
    if (r.empty()) {
      continue;
    }
    mpz_class l = 1;
    for (const auto& [c, v] : r) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    }
    IRow ir;
    for (const auto& [c, v] : r) {
      mpz_class num = v.get_num() * (l / v.get_den());
      ir[c] = num;
    }
    primitive(ir);
    work.push_back(std::move(ir));
  }
  // Pivot rows keyed by leading column.
  std::map<std::size_t, IRow> pivots;
  for (IRow& r : work) {
    while (!r.empty()) {
      const std::size_t lead = r.begin()->first;
      auto p = pivots.find(lead);
      if (p == pivots.end()) {
        pivots.emplace(lead, std::move(r));
        break;
      }
      const mpz_class a = p->second.begin()->second;
      const mpz_class b = r.begin()->second;
      IRow next;
      for (const auto& [c, v] : r) {
        next[c] = v * a;
      }
      for (const auto& [c, v] : p->second) {
        mpz_class& t = next[c];
        t -= v * b;
      }
      for (auto it = next.begin(); it != next.end();) {
        it = it->second == 0 ? next.erase(it) : std::next(it);
      }
      primitive(next);
      r = std::move(next);
    }
  }
  return pivots.size();
}

/// Exact rank of the truncated matrix; with `unclipped_only`, of its exact rows alone.
inline std::size_t matrix_rank(const Operator& a, bool unclipped_only = false) {
  std::vector<std::map<std::size_t, Rational>> rows;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (!unclipped_only || !a.row_clipped(x)) {
      rows.push_back(a.row(x));
    }
  }
  return rank_of_rows(rows);
}

}  // namespace tlab
