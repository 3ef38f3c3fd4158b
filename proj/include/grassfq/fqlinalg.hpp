#pragma once

// Dense matrices over F_q and subspaces of F_q^m.
//
// Vectors are rows.  A Subspace is the row space of a reduced row echelon
// matrix without zero rows; that form is unique, so equality is entrywise.

#include "grassfq/error.hpp"
#include "grassfq/gf.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace grassfq {

using Vec = std::vector<Elem>;

class MatrixFq {
 public:
  MatrixFq() = default;
  MatrixFq(FieldSpec field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static MatrixFq identity(const FieldSpec& field, std::size_t n) {
    MatrixFq m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static MatrixFq from_rows(const FieldSpec& field, const std::vector<Vec>& rows, std::size_t cols) {
    MatrixFq m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == cols, errc::ambient_mismatch, "row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) {
        require(rows[i][j] < field.order(), errc::parameter_out_of_range, "entry outside field");
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  static MatrixFq from_rows(const FieldSpec& field, const std::vector<Vec>& rows) {
    return from_rows(field, rows, rows.empty() ? 0 : rows.front().size());
  }

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vec row_vec(std::size_t r) const { return Vec(row(r).begin(), row(r).end()); }

  const std::vector<Elem>& data() const noexcept { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x == 0; });
  }

  MatrixFq transpose() const {
    MatrixFq t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  MatrixFq select_columns(std::span<const std::size_t> cols) const {
    MatrixFq out(field_, rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(i, cols[j]);
    return out;
  }

  MatrixFq select_rows(std::span<const std::size_t> rows) const {
    MatrixFq out(field_, rows.size(), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(rows[i], j);
    return out;
  }

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  MatrixFq block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    MatrixFq out(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const MatrixFq& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  friend MatrixFq operator*(const MatrixFq& a, const MatrixFq& b) {
    require(a.field_ == b.field_, errc::spec_mismatch, "matrix product over different fields");
    require(a.cols_ == b.rows_, errc::ambient_mismatch,
            "matrix product shape " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " * " +
                std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    const FieldSpec& f = a.field_;
    MatrixFq c(f, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Elem aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
      }
    return c;
  }

  friend MatrixFq operator+(const MatrixFq& a, const MatrixFq& b) {
    require(a.field_ == b.field_, errc::spec_mismatch, "matrix sum over different fields");
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, errc::ambient_mismatch, "matrix sum shape");
    MatrixFq c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
    return c;
  }

  MatrixFq operator-() const {
    MatrixFq c = *this;
    for (Elem& x : c.data_) x = field_.neg(x);
    return c;
  }

  friend MatrixFq operator-(const MatrixFq& a, const MatrixFq& b) { return a + (-b); }

  friend bool operator==(const MatrixFq& a, const MatrixFq& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i != 0) out += ';';
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j != 0 && field_.degree() > 1) out += ',';
        out += field_.format((*this)(i, j));
      }
    }
    return out;
  }

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

inline MatrixFq hstack(const MatrixFq& a, const MatrixFq& b) {
  require(a.rows() == b.rows(), errc::ambient_mismatch, "hstack row count");
  MatrixFq out(a.field(), a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

inline MatrixFq vstack(const MatrixFq& a, const MatrixFq& b) {
  require(a.cols() == b.cols(), errc::ambient_mismatch, "vstack column count");
  MatrixFq out(a.field(), a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

struct RrefResult {
  MatrixFq reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

namespace detail {

// Gauss-Jordan in place; returns pivot columns.  Only the first `search_cols`
// columns are used for pivots, the rest ride along (augmented systems).
inline std::vector<std::size_t> gauss_jordan(MatrixFq& m, std::size_t search_cols) {
  const FieldSpec& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < search_cols && r < m.rows(); ++c) {
    std::size_t pr = r;
    while (pr < m.rows() && m(pr, c) == 0) ++pr;
    if (pr == m.rows()) continue;
    if (pr != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pr, j), m(r, j));
    const Elem scale = f.inv(m(r, c));
    if (scale != 1)
      for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), scale);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Elem factor = f.neg(m(i, c));
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.add(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline RrefResult rref(const MatrixFq& m) {
  RrefResult out{m, 0, {}};
  out.pivots = detail::gauss_jordan(out.reduced, m.cols());
  out.rank = out.pivots.size();
  return out;
}

inline std::size_t rank(const MatrixFq& m) { return rref(m).rank; }

inline std::optional<MatrixFq> inverse(const MatrixFq& m) {
  require(m.rows() == m.cols(), errc::ambient_mismatch, "inverse of a non-square matrix");
  MatrixFq aug = hstack(m, MatrixFq::identity(m.field(), m.rows()));
  const auto pivots = detail::gauss_jordan(aug, m.cols());
  if (pivots.size() != m.rows()) return std::nullopt;
  return aug.block(0, m.cols(), m.rows(), m.rows());
}

inline bool is_invertible(const MatrixFq& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

/// Canonical subspace of F_q^m.
class Subspace {
 public:
  Subspace() = default;

  /// Zero subspace of F_q^m.
  Subspace(FieldSpec field, std::size_t ambient) : basis_(std::move(field), 0, ambient) {}

  const FieldSpec& field() const noexcept { return basis_.field(); }
  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  /// RREF basis, one row per basis vector.
  const MatrixFq& basis() const noexcept { return basis_; }

  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      std::size_t c = 0;
      while (basis_(i, c) == 0) ++c;
      out.push_back(c);
    }
    return out;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

  std::string str() const { return "<" + basis_.str() + ">"; }

 private:
  friend Subspace row_space(const MatrixFq& m);
  explicit Subspace(MatrixFq rref_basis) : basis_(std::move(rref_basis)) {}

  MatrixFq basis_;
};

/// Span of the rows of m.
inline Subspace row_space(const MatrixFq& m) {
  RrefResult r = rref(m);
  return Subspace(r.reduced.block(0, 0, r.rank, m.cols()));
}

inline Subspace full_space(const FieldSpec& field, std::size_t m) {
  return row_space(MatrixFq::identity(field, m));
}

/// {v : v * m = 0}, a subspace of F_q^{rows(m)}.
inline Subspace kernel_basis(const MatrixFq& m) {
  MatrixFq aug = hstack(m, MatrixFq::identity(m.field(), m.rows()));
  const std::size_t rk = detail::gauss_jordan(aug, m.cols()).size();
  return row_space(aug.block(rk, m.cols(), m.rows() - rk, m.rows()));
}

inline void check_same_ambient(const Subspace& a, const Subspace& b) {
  require(a.field() == b.field(), errc::spec_mismatch, "subspaces over different fields");
  require(a.ambient_dim() == b.ambient_dim(), errc::ambient_mismatch,
          "ambient dimensions " + std::to_string(a.ambient_dim()) + " and " + std::to_string(b.ambient_dim()));
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  check_same_ambient(a, b);
  return row_space(vstack(a.basis(), b.basis()));
}

// Left kernel of the stacked system [A; B]: xA + yB = 0 gives xA in both.
inline Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  check_same_ambient(a, b);
  if (a.dim() == 0 || b.dim() == 0) return Subspace(a.field(), a.ambient_dim());
  const Subspace relations = kernel_basis(vstack(a.basis(), b.basis()));
  const MatrixFq x = relations.basis().block(0, 0, relations.dim(), a.dim());
  return row_space(x * a.basis());
}

inline bool contains(const Subspace& s, std::span<const Elem> v) {
  require(v.size() == s.ambient_dim(), errc::ambient_mismatch, "vector length differs from ambient dimension");
  const FieldSpec& f = s.field();
  // Reduce v against the RREF basis; v lies in s iff the remainder vanishes.
  Vec r(v.begin(), v.end());
  const auto piv = s.pivots();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const Elem c = r[piv[i]];
    if (c == 0) continue;
    const Elem factor = f.neg(c);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = f.add(r[j], f.mul(factor, s.basis()(i, j)));
  }
  return std::all_of(r.begin(), r.end(), [](Elem x) { return x == 0; });
}

inline bool is_subspace_of(const Subspace& small, const Subspace& big) {
  check_same_ambient(small, big);
  for (std::size_t i = 0; i < small.dim(); ++i)
    if (!contains(big, small.basis().row(i))) return false;
  return true;
}

inline std::size_t quotient_dim(const Subspace& big, const Subspace& small) {
  require(is_subspace_of(small, big), errc::not_a_subspace, "quotient by a non-subspace");
  return big.dim() - small.dim();
}

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(s.ambient_dim() * 131 + s.dim());
    for (Elem x : s.basis().data()) h = h * 1000003u ^ x;
    return h;
  }
};

struct SubspaceLess {
  bool operator()(const Subspace& a, const Subspace& b) const {
    if (a.ambient_dim() != b.ambient_dim()) return a.ambient_dim() < b.ambient_dim();
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.basis().data() < b.basis().data();
  }
};

}  // namespace grassfq
