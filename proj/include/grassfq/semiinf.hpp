#pragma once

// A computable corner of the semi-infinite Grassmannian over F_q.
//
// The ambient space is ℓ ⊕ ℓ° with bases e_1, e_2, ... and f_1, f_2, ....
// Putting e_i at position 1 - i and f_j at position j turns J (e_i -> e_{i-1},
// e_1 -> f_1, f_k -> f_{k+1}) into the unit shift of positions.  A window of
// size n is the span of e_1..e_n, f_1..f_n, laid out in that order, i.e. the
// same coordinates as F_q^{2n} in grassmann.hpp.
//
// Fredholm index is dim ker - dim coker throughout, so theta(J) = +1.

#include "grassfq/error.hpp"
#include "grassfq/fqlinalg.hpp"
#include "grassfq/gf.hpp"
#include "grassfq/grassmann.hpp"

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace grassfq {

enum class Block : unsigned char { e, f };

/// Basis vector e_index or f_index, index >= 1.
struct Coord {
  Block block = Block::e;
  std::size_t index = 1;

  friend auto operator<=>(const Coord&, const Coord&) = default;

  std::string str() const { return (block == Block::e ? "e" : "f") + std::to_string(index); }
};

inline Coord e(std::size_t i) { return {Block::e, i}; }
inline Coord f(std::size_t j) { return {Block::f, j}; }

inline long position(Coord c) { return c.block == Block::e ? 1 - static_cast<long>(c.index) : static_cast<long>(c.index); }

inline Coord at_position(long x) {
  return x <= 0 ? Coord{Block::e, static_cast<std::size_t>(1 - x)} : Coord{Block::f, static_cast<std::size_t>(x)};
}

inline bool in_window(long x, std::size_t n) { return x > -static_cast<long>(n) && x <= static_cast<long>(n); }

inline std::size_t window_column(long x, std::size_t n) {
  return x <= 0 ? static_cast<std::size_t>(-x) : n + static_cast<std::size_t>(x) - 1;
}

inline long column_position(std::size_t col, std::size_t n) {
  return col < n ? -static_cast<long>(col) : static_cast<long>(col - n) + 1;
}

// ------------------------------------------------------- stable operators

/// Operator on ℓ given by an M×M' corner on e_1..e_M -> e_1..e_{M'}, with
/// e_{M+t} -> e_{M'+t} for t >= 1.
class StableOperator {
 public:
  StableOperator() = default;
  explicit StableOperator(MatrixFq corner) : corner_(std::move(corner)) {}

  static StableOperator identity(const FieldSpec& field) { return StableOperator(MatrixFq(field, 0, 0)); }

  const FieldSpec& field() const noexcept { return corner_.field(); }
  const MatrixFq& corner() const noexcept { return corner_; }
  std::size_t in_size() const noexcept { return corner_.rows(); }
  std::size_t out_size() const noexcept { return corner_.cols(); }

  /// corner ⊕ I_t: the same operator on a larger corner.
  StableOperator padded(std::size_t t) const {
    MatrixFq c(field(), in_size() + t, out_size() + t);
    c.set_block(0, 0, corner_);
    for (std::size_t i = 0; i < t; ++i) c(in_size() + i, out_size() + i) = 1;
    return StableOperator(std::move(c));
  }

  /// The tail is injective onto e_{>M'}, so kernel and cokernel live in the corner.
  std::size_t kernel_dim() const { return in_size() - rank(corner_); }
  std::size_t cokernel_dim() const { return out_size() - rank(corner_); }

  friend bool operator==(const StableOperator& a, const StableOperator& b) {
    if (!(a.field() == b.field())) return false;
    if (static_cast<long>(a.in_size()) - static_cast<long>(a.out_size()) !=
        static_cast<long>(b.in_size()) - static_cast<long>(b.out_size()))
      return false;
    const std::size_t m = std::max(a.in_size(), b.in_size());
    return a.padded(m - a.in_size()).corner_ == b.padded(m - b.in_size()).corner_;
  }

 private:
  MatrixFq corner_;
};

inline long fredholm_index(const StableOperator& a) {
  const long ind = static_cast<long>(a.kernel_dim()) - static_cast<long>(a.cokernel_dim());
  require(ind == static_cast<long>(a.in_size()) - static_cast<long>(a.out_size()), errc::precondition_violated,
          "index disagrees with corner shape");
  return ind;
}

/// A then B (row vectors: v(AB) = (vA)B).  Corners are padded to a common window.
inline StableOperator fredholm_compose(const StableOperator& a, const StableOperator& b) {
  require(a.field() == b.field(), errc::spec_mismatch, "operators over different fields");
  const std::size_t ta = b.in_size() > a.out_size() ? b.in_size() - a.out_size() : 0;
  const std::size_t tb = a.out_size() > b.in_size() ? a.out_size() - b.in_size() : 0;
  return StableOperator(a.padded(ta).corner() * b.padded(tb).corner());
}

struct CanonicalForm {
  StableOperator g1;     // invertible, M×M
  StableOperator jform;  // corner (0 0; 0 I_r), M×M'
  StableOperator g2;     // invertible, M'×M'
  std::size_t alpha = 0;  // dim coker
  std::size_t beta = 0;   // dim ker
};

namespace detail {

// P (M×M) and Q (M'×M') invertible with P C Q = (0 0; 0 I_r).  Rows are
// reduced first, so an invertible C gives Q = I.
struct TwoSided {
  MatrixFq p, q;
  std::size_t rank = 0;
};

inline TwoSided two_sided_reduce(const MatrixFq& c) {
  const FieldSpec& fld = c.field();
  const std::size_t m = c.rows(), mp = c.cols();
  MatrixFq aug = hstack(c, MatrixFq::identity(fld, m));
  const auto piv = gauss_jordan(aug, mp);
  const std::size_t r = piv.size();
  const MatrixFq red = aug.block(0, 0, m, mp);
  const MatrixFq p0 = aug.block(0, mp, m, m);

  // Move the r nonzero rows to the bottom.
  MatrixFq perm(fld, m, m);
  for (std::size_t i = 0; i < m; ++i) perm(i < r ? m - r + i : i - r, i) = 1;

  // Clear non-pivot columns against the pivot columns (these operations commute).
  MatrixFq q1 = MatrixFq::identity(fld, mp);
  std::vector<bool> is_pivot(mp, false);
  for (std::size_t i = 0; i < r; ++i) is_pivot[piv[i]] = true;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < mp; ++j)
      if (!is_pivot[j]) q1(piv[i], j) = fld.neg(red(i, j));

  // Non-pivot columns first in order, then pivot column i to slot mp - r + i.
  MatrixFq q2(fld, mp, mp);
  std::size_t slot = 0;
  for (std::size_t j = 0; j < mp; ++j)
    if (!is_pivot[j]) q2(j, slot++) = 1;
  for (std::size_t i = 0; i < r; ++i) q2(piv[i], mp - r + i) = 1;

  return {perm * p0, q1 * q2, r};
}

inline MatrixFq j_corner(const FieldSpec& fld, std::size_t m, std::size_t mp, std::size_t r) {
  MatrixFq j(fld, m, mp);
  for (std::size_t i = 0; i < r; ++i) j(m - r + i, mp - r + i) = 1;
  return j;
}

}  // namespace detail

/// A = g1 · J-form · g2 with J-form of corner (0 0; 0 I).
inline CanonicalForm fredholm_canonical_form(const StableOperator& a) {
  const detail::TwoSided ts = detail::two_sided_reduce(a.corner());
  CanonicalForm out;
  out.g1 = StableOperator(*inverse(ts.p));
  out.g2 = StableOperator(*inverse(ts.q));
  out.jform = StableOperator(detail::j_corner(a.field(), a.in_size(), a.out_size(), ts.rank));
  out.beta = a.in_size() - ts.rank;
  out.alpha = a.out_size() - ts.rank;
  return out;
}

// --------------------------------------------------- stable group elements

/// J^s · C where C is invertible on the window of size N and the identity
/// outside it; v · g = (v J^s) C.
class StableGroupElement {
 public:
  StableGroupElement() = default;

  StableGroupElement(FieldSpec field, long shift, MatrixFq corner)
      : field_(std::move(field)), shift_(shift), corner_(std::move(corner)) {
    require(corner_.rows() == corner_.cols() && corner_.rows() % 2 == 0, errc::ambient_mismatch,
            "corner must be 2N×2N");
    require(corner_.rows() == 0 || corner_.field() == field_, errc::spec_mismatch, "corner over another field");
    require(is_invertible(corner_), errc::singular, "corner is not invertible");
  }

  static StableGroupElement identity(const FieldSpec& field) { return {field, 0, MatrixFq(field, 0, 0)}; }
  static StableGroupElement J(const FieldSpec& field, long power = 1) { return {field, power, MatrixFq(field, 0, 0)}; }
  static StableGroupElement finite(const MatrixFq& corner) { return {corner.field(), 0, corner}; }

  /// Block form (a b; c d): a on e_1..e_N, d on f_1..f_N.
  static StableGroupElement from_blocks(const MatrixFq& a, const MatrixFq& b, const MatrixFq& c, const MatrixFq& d) {
    return finite(vstack(hstack(a, b), hstack(c, d)));
  }

  const FieldSpec& field() const noexcept { return field_; }
  long shift() const noexcept { return shift_; }
  const MatrixFq& corner() const noexcept { return corner_; }
  std::size_t window() const noexcept { return corner_.rows() / 2; }

  MatrixFq a_block() const { return corner_.block(0, 0, window(), window()); }
  MatrixFq b_block() const { return corner_.block(0, window(), window(), window()); }
  MatrixFq c_block() const { return corner_.block(window(), 0, window(), window()); }
  MatrixFq d_block() const { return corner_.block(window(), window(), window(), window()); }

  /// Matrix of v -> v J^{-t} C J^{t} on a window of size n (the map is the
  /// identity outside positions [-N+1+t, N+t]).
  MatrixFq conjugated_corner(long t, std::size_t n) const {
    const std::size_t N = window();
    require(static_cast<long>(n) >= static_cast<long>(N) + std::labs(t), errc::window_too_small,
            "window too small for the conjugated corner");
    MatrixFq out(field_, 2 * n, 2 * n);
    for (std::size_t col = 0; col < 2 * n; ++col) {
      const long x = column_position(col, n);
      const long y = x - t;
      if (!in_window(y, N)) {
        out(col, col) = 1;
        continue;
      }
      const std::size_t src = window_column(y, N);
      for (std::size_t k = 0; k < 2 * N; ++k) {
        const Elem v = corner_(src, k);
        if (v != 0) out(col, window_column(column_position(k, N) + t, n)) = v;
      }
    }
    return out;
  }

  /// C on a window of size n >= N.
  MatrixFq corner_on_window(std::size_t n) const { return conjugated_corner(0, n); }

  /// Rows are vectors on window n_in; returns their images on window n_out.
  /// Every image must fit in window n_out.
  MatrixFq act(const MatrixFq& rows, std::size_t n_in, std::size_t n_out) const {
    require(rows.cols() == 2 * n_in, errc::ambient_mismatch, "rows do not match the window");
    require(n_out >= window(), errc::window_too_small, "output window smaller than the corner");
    MatrixFq shifted(field_, rows.rows(), 2 * n_out);
    for (std::size_t r = 0; r < rows.rows(); ++r)
      for (std::size_t c = 0; c < 2 * n_in; ++c) {
        if (rows(r, c) == 0) continue;
        const long x = column_position(c, n_in) + shift_;
        require(in_window(x, n_out), errc::window_too_small, "image leaves the window");
        shifted(r, window_column(x, n_out)) = rows(r, c);
      }
    return shifted * corner_on_window(n_out);
  }

  /// The ℓ -> ℓ block as a stable operator: e_i -> e_{i-s} beyond the corner.
  StableOperator a_operator() const {
    const std::size_t N = window();
    const long s = shift_;
    const std::size_t m_in = N + static_cast<std::size_t>(std::labs(s));
    const std::size_t m_out = static_cast<std::size_t>(static_cast<long>(m_in) - s);
    const std::size_t n = std::max(m_in, m_out) + 1;
    MatrixFq basis(field_, m_in, 2 * n);
    for (std::size_t i = 1; i <= m_in; ++i) basis(i - 1, i - 1) = 1;
    const MatrixFq img = act(basis, n, n + static_cast<std::size_t>(std::labs(s)));
    return StableOperator(img.block(0, 0, m_in, m_out));
  }

  bool is_parabolic() const { return shift_ == 0 && c_block().is_zero(); }

  std::string str() const { return "J^" + std::to_string(shift_) + "·[" + corner_.str() + "]"; }

 private:
  FieldSpec field_;
  long shift_ = 0;
  MatrixFq corner_;
};

/// g·h (first g, then h).  J^s C J^t D = J^{s+t} (J^{-t} C J^t) D.
inline StableGroupElement compose(const StableGroupElement& g, const StableGroupElement& h) {
  require(g.field() == h.field(), errc::spec_mismatch, "group elements over different fields");
  const long t = h.shift();
  const std::size_t n = std::max(g.window() + static_cast<std::size_t>(std::labs(t)), h.window());
  return {g.field(), g.shift() + t, g.conjugated_corner(t, n) * h.corner_on_window(n)};
}

/// (J^s C)^{-1} = C^{-1} J^{-s} = J^{-s} (J^{s} C^{-1} J^{-s}).
inline StableGroupElement inverse(const StableGroupElement& g) {
  const StableGroupElement cinv(g.field(), 0, *inverse(g.corner()));
  const long s = g.shift();
  return {g.field(), -s, cinv.conjugated_corner(-s, g.window() + static_cast<std::size_t>(std::labs(s)))};
}

inline bool operator==(const StableGroupElement& g, const StableGroupElement& h) {
  if (!(g.field() == h.field()) || g.shift() != h.shift()) return false;
  const std::size_t n = std::max(g.window(), h.window());
  return g.corner_on_window(n) == h.corner_on_window(n);
}

/// theta(g) = ind(a).  Always equals the shift power; computing it through
/// kernel and cokernel of the a-block keeps that a checked fact.
inline long theta(const StableGroupElement& g) {
  const long ind = fredholm_index(g.a_operator());
  require(ind == g.shift(), errc::precondition_violated, "theta disagrees with the shift power");
  return ind;
}

// ----------------------------------------------------------- chart points

struct ChartEntry {
  Coord row;  // basis vector of V[Ω,Ξ]
  Coord col;  // basis vector of W[Ω,Ξ]
  Elem value = 0;

  friend bool operator==(const ChartEntry&, const ChartEntry&) = default;
};

/// graph(T : V[Ω,Ξ] -> W[Ω,Ξ]) for a finitely supported T.
class ChartPoint {
 public:
  ChartPoint() = default;

  ChartPoint(FieldSpec field, std::vector<std::size_t> omega, std::vector<std::size_t> xi,
             std::vector<ChartEntry> entries = {})
      : field_(std::move(field)), omega_(std::move(omega)), xi_(std::move(xi)) {
    std::sort(omega_.begin(), omega_.end());
    std::sort(xi_.begin(), xi_.end());
    require(std::adjacent_find(omega_.begin(), omega_.end()) == omega_.end() &&
                std::adjacent_find(xi_.begin(), xi_.end()) == xi_.end(),
            errc::parameter_out_of_range, "repeated chart index");
    for (std::size_t i : omega_) require(i >= 1, errc::parameter_out_of_range, "chart indices are positive");
    for (std::size_t j : xi_) require(j >= 1, errc::parameter_out_of_range, "chart indices are positive");
    for (const ChartEntry& t : entries) {
      require(t.row.index >= 1 && t.col.index >= 1, errc::parameter_out_of_range, "coordinate indices are positive");
      require(in_v(t.row), errc::parameter_out_of_range, "row " + t.row.str() + " is not a basis vector of V[Ω,Ξ]");
      require(!in_v(t.col), errc::parameter_out_of_range, "column " + t.col.str() + " is not a basis vector of W[Ω,Ξ]");
      require(t.value < field_.order(), errc::parameter_out_of_range, "entry outside the field");
      if (t.value != 0) entries_.push_back(t);
    }
    std::sort(entries_.begin(), entries_.end(), [](const ChartEntry& a, const ChartEntry& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    for (std::size_t i = 1; i < entries_.size(); ++i)
      require(!(entries_[i].row == entries_[i - 1].row && entries_[i].col == entries_[i - 1].col),
              errc::parameter_out_of_range, "repeated coordinate entry");
  }

  const FieldSpec& field() const noexcept { return field_; }
  const std::vector<std::size_t>& omega() const noexcept { return omega_; }
  const std::vector<std::size_t>& xi() const noexcept { return xi_; }
  const std::vector<ChartEntry>& entries() const noexcept { return entries_; }

  /// Whether c is a basis vector of V[Ω,Ξ].
  bool in_v(Coord c) const {
    if (c.block == Block::e) return !std::binary_search(omega_.begin(), omega_.end(), c.index);
    return std::binary_search(xi_.begin(), xi_.end(), c.index);
  }

  std::size_t max_index() const {
    std::size_t m = 0;
    for (std::size_t i : omega_) m = std::max(m, i);
    for (std::size_t j : xi_) m = std::max(m, j);
    for (const ChartEntry& t : entries_) m = std::max({m, t.row.index, t.col.index});
    return m;
  }

  ChartIndex chart() const { return {omega_, xi_}; }

  friend bool operator==(const ChartPoint& a, const ChartPoint& b) {
    return a.field_ == b.field_ && a.omega_ == b.omega_ && a.xi_ == b.xi_ && a.entries_ == b.entries_;
  }

  std::string str() const {
    std::string out = chart().str() + "{";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ",";
      out += entries_[i].row.str() + "->" + entries_[i].col.str() + ":" + field_.format(entries_[i].value);
    }
    return out + "}";
  }

 private:
  FieldSpec field_;
  std::vector<std::size_t> omega_, xi_;
  std::vector<ChartEntry> entries_;
};

/// Generators u + uT on window n: e_i (i <= n, i ∉ Ω) then f_j (j ∈ Ξ).
/// Beyond the window the point is spanned by e_{n+1}, e_{n+2}, ....
inline MatrixFq window_generators(const ChartPoint& p, std::size_t n) {
  require(n >= p.max_index(), errc::window_too_small,
          "window " + std::to_string(n) + " is smaller than the max index " + std::to_string(p.max_index()));
  std::vector<Coord> rows;
  for (std::size_t i = 1; i <= n; ++i)
    if (p.in_v(e(i))) rows.push_back(e(i));
  for (std::size_t j : p.xi()) rows.push_back(f(j));
  MatrixFq g(p.field(), rows.size(), 2 * n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    g(r, window_column(position(rows[r]), n)) = 1;
    for (const ChartEntry& t : p.entries())
      if (t.row == rows[r]) g(r, window_column(position(t.col), n)) = t.value;
  }
  return g;
}

/// The coordinate matrix on window n, rows and columns in chart_columns order.
inline MatrixFq dense_coords(const ChartPoint& p, std::size_t n) {
  require(n >= p.max_index(), errc::window_too_small, "window smaller than the max index");
  const ChartColumns cols = chart_columns(p.chart(), n);
  MatrixFq t(p.field(), cols.v.size(), cols.w.size());
  for (const ChartEntry& en : p.entries()) {
    const std::size_t vc = window_column(position(en.row), n), wc = window_column(position(en.col), n);
    const auto r = std::find(cols.v.begin(), cols.v.end(), vc) - cols.v.begin();
    const auto c = std::find(cols.w.begin(), cols.w.end(), wc) - cols.w.begin();
    t(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = en.value;
  }
  return t;
}

/// Dim L = dim(L ∩ W) - dim(V / p(L)), on the window n = max index + 1.
inline long relative_dimension(const ChartPoint& p) {
  const std::size_t n = p.max_index() + 1;
  const Subspace L = row_space(window_generators(p, n));
  const std::size_t proj = rank(L.basis().block(0, 0, L.dim(), n));
  const std::size_t meet_w = L.dim() - proj;
  return static_cast<long>(meet_w) - static_cast<long>(n - proj);
}

/// π_n(L): the image of L ∩ Y_n in Y_n / X_n = F_q^{2n}.
inline Subspace pi_n(const ChartPoint& p, std::size_t n) { return row_space(window_generators(p, n)); }

/// Same subspace of ℓ ⊕ ℓ°.
inline bool same_subspace(const ChartPoint& a, const ChartPoint& b) {
  const std::size_t n = std::max(a.max_index(), b.max_index()) + 1;
  return a.field() == b.field() && pi_n(a, n) == pi_n(b, n);
}

namespace detail {

// Combinations of {1..m} of size k in lexicographic order.
inline std::vector<std::vector<std::size_t>> combinations(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > m) return out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i + 1;
  for (;;) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == m - k + i) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

inline std::size_t set_max(const std::vector<std::size_t>& s) { return s.empty() ? 0 : s.back(); }

// Express the subspace (lw ⊕ e_{>n}) in the first chart of relative dimension d.
inline ChartPoint chart_of_window(const Subspace& lw, std::size_t n, long d) {
  const FieldSpec& fld = lw.field();
  for (std::size_t m = 0; m <= n; ++m)
    for (std::size_t a = 0; a <= m; ++a) {
      const long b = static_cast<long>(a) + d;
      if (b < 0 || b > static_cast<long>(m)) continue;
      const auto omegas = combinations(m, a), xis = combinations(m, static_cast<std::size_t>(b));
      for (const auto& om : omegas)
        for (const auto& xi : xis) {
          if (std::max(set_max(om), set_max(xi)) != m) continue;
          const ChartIndex c{om, xi};
          const auto t = chart_membership(lw, c, n);
          if (!t) continue;
          const ChartColumns cols = chart_columns(c, n);
          std::vector<ChartEntry> entries;
          for (std::size_t r = 0; r < t->rows(); ++r)
            for (std::size_t s = 0; s < t->cols(); ++s)
              if ((*t)(r, s) != 0)
                entries.push_back({at_position(column_position(cols.v[r], n)), at_position(column_position(cols.w[s], n)),
                                   (*t)(r, s)});
          return ChartPoint(fld, om, xi, std::move(entries));
        }
    }
  fail(errc::chart_search_exhausted, "no chart within window " + std::to_string(n));
}

}  // namespace detail

/// p · g computed on an explicit window n; n must satisfy
/// n >= max index + |s| + N + 1.
inline ChartPoint group_act_in_window(const ChartPoint& p, const StableGroupElement& g, std::size_t n) {
  require(p.field() == g.field(), errc::spec_mismatch, "point and group element over different fields");
  const long s = g.shift();
  const std::size_t abs_s = static_cast<std::size_t>(std::labs(s));
  require(n >= p.max_index() + abs_s + g.window() + 1, errc::window_too_small, "window too small for group_act");

  const FieldSpec& fld = p.field();
  const MatrixFq gens = window_generators(p, n);
  // Shift by J^s; generators pushed past e_n join the tail (they are pure e_i).
  std::vector<Vec> rows;
  for (std::size_t r = 0; r < gens.rows(); ++r) {
    Vec v(2 * n, 0);
    bool inside = true;
    std::size_t support = 0;
    for (std::size_t c = 0; c < 2 * n; ++c) {
      if (gens(r, c) == 0) continue;
      ++support;
      const long x = column_position(c, n) + s;
      if (!in_window(x, n)) {
        inside = false;
        continue;
      }
      v[window_column(x, n)] = gens(r, c);
    }
    if (!inside) {
      require(support == 1 && s < 0, errc::chart_search_exhausted, "non-pure generator left the window");
      continue;
    }
    rows.push_back(std::move(v));
  }
  // For s > 0 the tail e_{>n} J^s starts at e_{n-s+1}.
  for (std::size_t i = n - abs_s + 1; s > 0 && i <= n; ++i) {
    Vec v(2 * n, 0);
    v[i - 1] = 1;
    rows.push_back(std::move(v));
  }
  const MatrixFq shifted = MatrixFq::from_rows(fld, rows, 2 * n);
  const Subspace lw = row_space(shifted * g.corner_on_window(n));

  const long d = static_cast<long>(lw.dim()) - static_cast<long>(n);
  require(d == relative_dimension(p) + s, errc::precondition_violated, "relative dimension not equivariant");
  return detail::chart_of_window(lw, n, d);
}

inline ChartPoint group_act(const ChartPoint& p, const StableGroupElement& g) {
  const std::size_t n = p.max_index() + static_cast<std::size_t>(std::labs(g.shift())) + g.window() + 1;
  ChartPoint out = group_act_in_window(p, g, n);
#ifndef NDEBUG
  require(group_act_in_window(p, g, n + 1) == out, errc::window_too_small, "group_act depends on the window");
#endif
  return out;
}

// ---------------------------------------------------------- factorization

struct Gl0Factorization {
  StableGroupElement h;  // acts on ℓ only
  StableGroupElement s;  // finite
  StableGroupElement r;  // parabolic
};

/// g = h · s · r for theta(g) = 0, following the corner normalization,
/// row exchange and elimination steps.
inline Gl0Factorization factor_gl0(const StableGroupElement& g) {
  require(g.shift() == 0, errc::precondition_violated, "factor_gl0 needs theta(g) = 0, got " + std::to_string(g.shift()));
  const FieldSpec& fld = g.field();
  const StableGroupElement id = StableGroupElement::identity(fld);
  if (g.is_parabolic()) return {id, id, g};

  const std::size_t N = g.window();
  auto diag_l = [&](const MatrixFq& u) {
    MatrixFq m = MatrixFq::identity(fld, 2 * N);
    m.set_block(0, 0, u);
    return m;
  };

  // Step 1: u1 a v1 = (0 0; 0 1), k = dim ker a.
  const detail::TwoSided ts = detail::two_sided_reduce(g.a_block());
  const std::size_t k = N - ts.rank;
  const MatrixFq U1 = diag_l(ts.p), V1 = diag_l(ts.q);
  const MatrixFq g2 = U1 * g.corner() * V1;

  // Step 2: kill q in c'' = (p q) using rows e_{k+1}..e_N.
  MatrixFq E1 = MatrixFq::identity(fld, 2 * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = k; j < N; ++j) E1(N + i, j) = fld.neg(g2(N + i, j));
  const MatrixFq g3 = E1 * g2;

  // Step 3: swap k independent rows of p into e_1..e_k.
  const MatrixFq p = g3.block(N, 0, N, k);
  const auto chosen = rref(p.transpose()).pivots;
  require(chosen.size() == k, errc::singular, "p has rank below k");
  MatrixFq Pi = MatrixFq::identity(fld, 2 * N);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t a = t, b = N + chosen[t];
    Pi(a, a) = 0;
    Pi(b, b) = 0;
    Pi(a, b) = 1;
    Pi(b, a) = 1;
  }
  const MatrixFq g4 = Pi * g3;

  // Step 4: normalize the h block to the identity.
  MatrixFq u2 = MatrixFq::identity(fld, N);
  if (k > 0) u2.set_block(0, 0, *inverse(g4.block(0, 0, k, k)));
  const MatrixFq U2 = diag_l(u2);
  const MatrixFq g5 = U2 * g4;

  // Step 5: kill p' with rows e_1..e_k.
  MatrixFq E2 = MatrixFq::identity(fld, 2 * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < k; ++j) E2(N + i, j) = fld.neg(g5(N + i, j));
  const MatrixFq g6 = E2 * g5;
  require(g6.block(N, 0, N, N).is_zero(), errc::precondition_violated, "elimination left a nonzero c-block");

  const MatrixFq h = *inverse(U1);
  const MatrixFq s = *inverse(E1) * *inverse(Pi) * *inverse(U2) * *inverse(E2);
  const MatrixFq r = g6 * *inverse(V1);
  return {StableGroupElement::finite(h), StableGroupElement::finite(s), StableGroupElement::finite(r)};
}

}  // namespace grassfq
