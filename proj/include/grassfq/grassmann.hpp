#pragma once

// Finite Grassmannians Gr_m^k over F_q.
//
// In F_q^{2n} the first n coordinates span V (basis e_1..e_n) and the last n
// span W (basis f_1..f_n).  P-orbits are indexed by k = dim(L ∩ W).

#include "grassfq/error.hpp"
#include "grassfq/fqlinalg.hpp"
#include "grassfq/gf.hpp"
#include "grassfq/random.hpp"
#include "grassfq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace grassfq {

struct GrassmannianSpec {
  FieldSpec field;
  std::size_t m = 0;
  std::size_t k = 0;

  GrassmannianSpec(FieldSpec f, std::size_t m_, std::size_t k_) : field(std::move(f)), m(m_), k(k_) {
    require(k <= m, errc::parameter_out_of_range, "subspace dimension exceeds ambient dimension");
  }
};

// ---------------------------------------------------------------- counting

/// #GL(m, F_q) = prod_{j=0}^{m-1} (q^m - q^j).
inline BigInt gl_count(unsigned m, std::uint64_t q) {
  BigInt result = 1;
  const BigInt qm = big_pow(BigInt(q), m);
  for (unsigned j = 0; j < m; ++j) result *= qm - big_pow(BigInt(q), j);
  return result;
}

/// Gaussian binomial [m choose k]_q.
inline BigInt grassmannian_count(unsigned m, unsigned k, std::uint64_t q) {
  require(k <= m, errc::parameter_out_of_range, "k > m");
  BigInt num = 1, den = 1;
  for (unsigned j = 0; j < k; ++j) {
    num *= big_pow(BigInt(q), m - j) - 1;
    den *= big_pow(BigInt(q), k - j) - 1;
  }
  return num / den;
}

/// #{L in Gr_{2n}^n : dim(L ∩ W) = k}, evaluated from
/// q^{n^2 - k^2} prod_{j=n-k+1}^{n} (1-q^{-j})^2 / prod_{j=1}^{k} (1-q^{-j})^2.
inline BigInt orbit_count(unsigned n, unsigned k, std::uint64_t q) {
  require(k <= n, errc::parameter_out_of_range, "orbit index exceeds n");
  QRational value = q_power(static_cast<std::int64_t>(q), static_cast<long>(n) * n - static_cast<long>(k) * k);
  for (unsigned j = n - k + 1; j <= n; ++j) {
    const QRational f = 1 - q_power(static_cast<std::int64_t>(q), -static_cast<long>(j));
    value *= f * f;
  }
  for (unsigned j = 1; j <= k; ++j) {
    const QRational f = 1 - q_power(static_cast<std::int64_t>(q), -static_cast<long>(j));
    value /= f * f;
  }
  require(is_integer(value), errc::not_an_integer, "orbit count evaluated to " + to_string(value));
  return numerator(value);
}

struct ExactMeasure {
  QRational value;
};

/// mu_n(S) = #S / q^{n^2}.
inline ExactMeasure mu_n(const BigInt& count, unsigned n, std::uint64_t q) {
  return {QRational(count) / QRational(big_pow(BigInt(q), n * n))};
}

// ------------------------------------------------------------- enumeration

inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

/// Streams Gr_m^k: pivot sets in lexicographic order, then free entries as an
/// odometer whose last position turns fastest.
class SubspaceEnumerator {
 public:
  explicit SubspaceEnumerator(GrassmannianSpec g, std::uint64_t cap = default_enumeration_cap)
      : g_(std::move(g)) {
    const BigInt total = grassmannian_count(static_cast<unsigned>(g_.m), static_cast<unsigned>(g_.k), g_.field.order());
    require(total <= cap, errc::too_large,
            "Gr_" + std::to_string(g_.m) + "^" + std::to_string(g_.k) + " has " + to_string(total) +
                " elements, above the cap " + std::to_string(cap));
    for (std::size_t i = 0; i < g_.k; ++i) pivots_.push_back(i);
    load_pattern();
  }

  /// Writes the next subspace into out; false once exhausted.
  bool next(Subspace& out) {
    if (done_) return false;
    MatrixFq m(g_.field, g_.k, g_.m);
    for (std::size_t i = 0; i < g_.k; ++i) m(i, pivots_[i]) = 1;
    for (std::size_t t = 0; t < free_.size(); ++t) m(free_[t].first, free_[t].second) = digits_[t];
    out = row_space(m);
    advance();
    return true;
  }

 private:
  void load_pattern() {
    free_.clear();
    for (std::size_t i = 0; i < g_.k; ++i)
      for (std::size_t c = pivots_[i] + 1; c < g_.m; ++c)
        if (!std::binary_search(pivots_.begin(), pivots_.end(), c)) free_.emplace_back(i, c);
    digits_.assign(free_.size(), 0);
  }

  void advance() {
    const Elem q = g_.field.order();
    for (std::size_t t = digits_.size(); t-- > 0;) {
      if (++digits_[t] < q) return;
      digits_[t] = 0;
    }
    // Odometer wrapped: next pivot set.
    const std::size_t k = g_.k, m = g_.m;
    std::size_t i = k;
    while (i > 0 && pivots_[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) {
      done_ = true;
      return;
    }
    ++pivots_[i - 1];
    for (std::size_t j = i; j < k; ++j) pivots_[j] = pivots_[j - 1] + 1;
    load_pattern();
  }

  GrassmannianSpec g_;
  std::vector<std::size_t> pivots_;
  std::vector<std::pair<std::size_t, std::size_t>> free_;
  std::vector<Elem> digits_;
  bool done_ = false;
};

inline std::vector<Subspace> enumerate(const GrassmannianSpec& g, std::uint64_t cap = default_enumeration_cap) {
  SubspaceEnumerator it(g, cap);
  std::vector<Subspace> out;
  Subspace s;
  while (it.next(s)) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------- orbits

inline Subspace w_subspace(const FieldSpec& f, std::size_t n) {
  MatrixFq m(f, n, 2 * n);
  for (std::size_t j = 0; j < n; ++j) m(j, n + j) = 1;
  return row_space(m);
}

inline Subspace v_subspace(const FieldSpec& f, std::size_t n) {
  MatrixFq m(f, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return row_space(m);
}

/// dim(L ∩ W).  The projection of L onto V along W has kernel L ∩ W.
inline std::size_t orbit_index(const Subspace& L, std::size_t n) {
  require(L.ambient_dim() == 2 * n, errc::ambient_mismatch, "orbit_index expects a subspace of F_q^{2n}");
  return L.dim() - rank(L.basis().block(0, 0, L.dim(), n));
}

// ---------------------------------------------------------------- charts

/// Chart M_n[Ω, Ξ]; indices are 1-based and kept sorted.
struct ChartIndex {
  std::vector<std::size_t> omega;
  std::vector<std::size_t> xi;

  friend bool operator==(const ChartIndex&, const ChartIndex&) = default;

  std::string str() const {
    auto set = [](const std::vector<std::size_t>& s) {
      std::string out = "{";
      for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
      return out + "}";
    };
    return "[" + set(omega) + "," + set(xi) + "]";
  }
};

/// Column layout of a chart inside F_q^{2n}.
struct ChartColumns {
  std::vector<std::size_t> v;  // e_i (i ∉ Ω) then f_j (j ∈ Ξ)
  std::vector<std::size_t> w;  // e_i (i ∈ Ω) then f_j (j ∉ Ξ)
};

inline ChartColumns chart_columns(const ChartIndex& c, std::size_t n) {
  for (std::size_t i : c.omega) require(i >= 1 && i <= n, errc::parameter_out_of_range, "chart index outside 1..n");
  for (std::size_t j : c.xi) require(j >= 1 && j <= n, errc::parameter_out_of_range, "chart index outside 1..n");
  ChartColumns out;
  auto in = [](const std::vector<std::size_t>& s, std::size_t x) { return std::find(s.begin(), s.end(), x) != s.end(); };
  for (std::size_t i = 1; i <= n; ++i)
    if (!in(c.omega, i)) out.v.push_back(i - 1);
  for (std::size_t j = 1; j <= n; ++j)
    if (in(c.xi, j)) out.v.push_back(n + j - 1);
  for (std::size_t i = 1; i <= n; ++i)
    if (in(c.omega, i)) out.w.push_back(i - 1);
  for (std::size_t j = 1; j <= n; ++j)
    if (!in(c.xi, j)) out.w.push_back(n + j - 1);
  return out;
}

/// The T with L = graph(T: V[Ω,Ξ] -> W[Ω,Ξ]), if the projection of L to V[Ω,Ξ] is bijective.
inline std::optional<MatrixFq> chart_membership(const Subspace& L, const ChartIndex& c, std::size_t n) {
  require(L.ambient_dim() == 2 * n, errc::ambient_mismatch, "chart_membership expects a subspace of F_q^{2n}");
  const ChartColumns cols = chart_columns(c, n);
  if (L.dim() != cols.v.size()) return std::nullopt;
  const auto a_inv = inverse(L.basis().select_columns(cols.v));
  if (!a_inv) return std::nullopt;
  return *a_inv * L.basis().select_columns(cols.w);
}

/// Row space of [I | T] laid out in the chart's columns.
inline Subspace graph_of(const MatrixFq& T, const ChartIndex& c, std::size_t n) {
  const ChartColumns cols = chart_columns(c, n);
  require(T.rows() == cols.v.size() && T.cols() == cols.w.size(), errc::ambient_mismatch,
          "coordinate matrix does not fit the chart");
  MatrixFq m(T.field(), cols.v.size(), 2 * n);
  for (std::size_t r = 0; r < cols.v.size(); ++r) {
    m(r, cols.v[r]) = 1;
    for (std::size_t s = 0; s < cols.w.size(); ++s) m(r, cols.w[s]) = T(r, s);
  }
  return row_space(m);
}

/// All charts M_n[Ω,Ξ] with |Ω| = |Ξ|, ordered by max index, then |Ω|, then lexicographically.
inline std::vector<ChartIndex> finite_charts(std::size_t n) {
  std::vector<std::vector<std::size_t>> subsets;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(i + 1);
    subsets.push_back(std::move(s));
  }
  std::vector<ChartIndex> out;
  for (const auto& o : subsets)
    for (const auto& x : subsets)
      if (o.size() == x.size()) out.push_back({o, x});
  auto max_index = [](const ChartIndex& c) {
    std::size_t m = 0;
    for (std::size_t i : c.omega) m = std::max(m, i);
    for (std::size_t j : c.xi) m = std::max(m, j);
    return m;
  };
  std::stable_sort(out.begin(), out.end(), [&](const ChartIndex& a, const ChartIndex& b) {
    if (max_index(a) != max_index(b)) return max_index(a) < max_index(b);
    if (a.omega.size() != b.omega.size()) return a.omega.size() < b.omega.size();
    if (a.omega != b.omega) return a.omega < b.omega;
    return a.xi < b.xi;
  });
  return out;
}

struct ChartHit {
  ChartIndex chart;
  MatrixFq coords;
};

inline std::optional<ChartHit> first_chart(const Subspace& L, std::size_t n) {
  for (const ChartIndex& c : finite_charts(n))
    if (auto t = chart_membership(L, c, n)) return ChartHit{c, *t};
  return std::nullopt;
}

/// (a + T c)^{-1} (b + T d) where g = (a b; c d) is split after rows(T) rows
/// and rows(T) columns.
inline MatrixFq moebius_action(const MatrixFq& T, const MatrixFq& g) {
  const std::size_t r = T.rows(), s = T.cols();
  require(g.rows() == r + s && g.cols() == r + s, errc::ambient_mismatch, "group element does not match T");
  const MatrixFq a = g.block(0, 0, r, r), b = g.block(0, r, r, s);
  const MatrixFq c = g.block(r, 0, s, r), d = g.block(r, r, s, s);
  const auto inv = inverse(a + T * c);
  require(inv.has_value(), errc::singular, "a + Tc is singular");
  return *inv * (b + T * d);
}

// --------------------------------------------------------------- sampling

inline MatrixFq random_matrix(const FieldSpec& f, std::size_t rows, std::size_t cols, Rng& rng) {
  MatrixFq m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<Elem>(rng.below(f.order()));
  return m;
}

inline MatrixFq random_invertible(const FieldSpec& f, std::size_t n, Rng& rng) {
  for (;;) {
    MatrixFq m = random_matrix(f, n, n, rng);
    if (is_invertible(m)) return m;
  }
}

/// Uniform on Gr_m^k: every subspace has exactly #GL(k) spanning k×m matrices.
inline Subspace sample_uniform_subspace(const GrassmannianSpec& g, Rng& rng) {
  for (;;) {
    const MatrixFq m = random_matrix(g.field, g.k, g.m, rng);
    RrefResult r = rref(m);
    if (r.rank == g.k) return row_space(r.reduced);
  }
}

// ------------------------------------------------- hyperplanes, overspaces

namespace detail {

// Non-pivot unit vectors: a complement of s whose image in F^m/s is a basis.
inline MatrixFq complement_basis(const Subspace& s) {
  const auto piv = s.pivots();
  MatrixFq c(s.field(), s.ambient_dim() - s.dim(), s.ambient_dim());
  std::size_t r = 0;
  for (std::size_t j = 0; j < s.ambient_dim(); ++j)
    if (!std::binary_search(piv.begin(), piv.end(), j)) c(r++, j) = 1;
  return c;
}

inline Subspace hyperplane_from(const Subspace& L, const Subspace& coords) {
  if (coords.dim() == 0) return Subspace(L.field(), L.ambient_dim());
  return row_space(coords.basis() * L.basis());
}

inline Subspace overspace_from(const Subspace& K, const MatrixFq& complement, const Subspace& line) {
  return row_space(vstack(K.basis(), line.basis() * complement));
}

}  // namespace detail

/// All codimension-1 subspaces of L.
inline std::vector<Subspace> hyperplanes(const Subspace& L) {
  require(L.dim() >= 1, errc::parameter_out_of_range, "the zero subspace has no hyperplanes");
  std::vector<Subspace> out;
  for (const Subspace& c : enumerate({L.field(), L.dim(), L.dim() - 1})) out.push_back(detail::hyperplane_from(L, c));
  return out;
}

/// All (dim K + 1)-dimensional subspaces of F_q^m containing K.
inline std::vector<Subspace> overspaces(const Subspace& K) {
  require(K.dim() < K.ambient_dim(), errc::parameter_out_of_range, "the full space has no overspaces");
  const MatrixFq comp = detail::complement_basis(K);
  std::vector<Subspace> out;
  for (const Subspace& line : enumerate({K.field(), comp.rows(), 1}))
    out.push_back(detail::overspace_from(K, comp, line));
  return out;
}

inline Subspace sample_hyperplane(const Subspace& L, Rng& rng) {
  require(L.dim() >= 1, errc::pattern_out_of_range, "cannot step down from the zero subspace");
  return detail::hyperplane_from(L, sample_uniform_subspace({L.field(), L.dim(), L.dim() - 1}, rng));
}

inline Subspace sample_overspace(const Subspace& K, Rng& rng) {
  require(K.dim() < K.ambient_dim(), errc::pattern_out_of_range, "cannot step up from the full space");
  const MatrixFq comp = detail::complement_basis(K);
  return detail::overspace_from(K, comp, sample_uniform_subspace({K.field(), comp.rows(), 1}, rng));
}

// ------------------------------------------------------------------- flags

using Flag = std::vector<Subspace>;

inline void check_pattern(std::size_t start_dim, std::size_t m, const std::vector<int>& pattern) {
  long d = static_cast<long>(start_dim);
  for (int step : pattern) {
    require(step == 1 || step == -1, errc::pattern_out_of_range, "pattern steps must be +1 or -1");
    d += step;
    require(d >= 0 && d <= static_cast<long>(m), errc::pattern_out_of_range,
            "pattern leaves the dimension range [0, " + std::to_string(m) + "]");
  }
}

/// Chain start = X_0, X_1, ...: -1 picks a uniform hyperplane, +1 a uniform overspace.
inline Flag sample_flag(const Subspace& start, const std::vector<int>& pattern, Rng& rng) {
  check_pattern(start.dim(), start.ambient_dim(), pattern);
  Flag out{start};
  for (int step : pattern) out.push_back(step < 0 ? sample_hyperplane(out.back(), rng) : sample_overspace(out.back(), rng));
  return out;
}

struct FlagLess {
  bool operator()(const Flag& a, const Flag& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), SubspaceLess{});
  }
};

using FlagLaw = std::map<Flag, QRational, FlagLess>;

/// Uniform probability on Gr_m^k, as a law on one-element flags.
inline FlagLaw uniform_law(const GrassmannianSpec& g) {
  const auto all = enumerate(g);
  FlagLaw law;
  const QRational p = QRational(1) / QRational(all.size());
  for (const Subspace& s : all) law[{s}] = p;
  return law;
}

/// Exact law of the chain obtained by extending every flag of `initial` with
/// uniform hyperplane / overspace steps.
inline FlagLaw flag_law(const FlagLaw& initial, const std::vector<int>& pattern) {
  FlagLaw law = initial;
  for (int step : pattern) {
    FlagLaw next;
    for (const auto& [flag, p] : law) {
      const Subspace& last = flag.back();
      check_pattern(last.dim(), last.ambient_dim(), {step});
      const auto children = step < 0 ? hyperplanes(last) : overspaces(last);
      const QRational pc = p / QRational(children.size());
      for (const Subspace& c : children) {
        Flag f = flag;
        f.push_back(c);
        next[f] += pc;
      }
    }
    law = std::move(next);
  }
  return law;
}

/// Pushforward under the map keeping the flag entries at `keep`.
inline FlagLaw forget(const FlagLaw& law, const std::vector<std::size_t>& keep) {
  FlagLaw out;
  for (const auto& [flag, p] : law) {
    Flag f;
    for (std::size_t i : keep) f.push_back(flag.at(i));
    out[f] += p;
  }
  return out;
}

}  // namespace grassfq
