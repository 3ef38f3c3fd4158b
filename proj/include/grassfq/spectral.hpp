#pragma once

// Averaging operators on P-invariant functions of the orbit index k, their
// eigen-identities, finite brute-force oracles and Monte Carlo drivers.

#include "grassfq/error.hpp"
#include "grassfq/fqlinalg.hpp"
#include "grassfq/grassmann.hpp"
#include "grassfq/qspecial.hpp"
#include "grassfq/random.hpp"
#include "grassfq/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace grassfq {

/// (T y)(k) = down(k) y(k-1) + stay(k) y(k) + up(k) y(k+1), k >= 0, with an
/// optional last index n.
struct TridiagonalOperator {
  std::function<QRational(long)> down, stay, up;
  std::optional<long> cutoff;

  /// y must hold y(0..k+1) (or y(0..n) at the cutoff).
  QRational apply(const std::vector<QRational>& y, long k) const {
    QRational out = stay(k) * y.at(static_cast<std::size_t>(k));
    if (k > 0) out += down(k) * y.at(static_cast<std::size_t>(k - 1));
    if (!cutoff || k < *cutoff) out += up(k) * y.at(static_cast<std::size_t>(k + 1));
    return out;
  }
};

// ------------------------------------------------------------- q-Hahn, finite n

/// B(k) y(k+1) - (B(k)+D(k)) y(k) + D(k) y(k-1) with B(k) = (1-q^{k-n})^2 and
/// D(k) = q^{-2n-1} (1-q^k)^2.  With this D the 3phi2 values Q_j are
/// eigenfunctions, eigenvalue hahn_eigenvalue(j, n, q).
inline TridiagonalOperator hahn_operator(long n, std::int64_t q) {
  require(n >= 1, errc::parameter_out_of_range, "hahn_operator needs n >= 1");
  auto B = [n, q](long k) {
    const QRational t = 1 - qpow(q, k - n);
    return t * t;
  };
  auto D = [n, q](long k) {
    const QRational t = 1 - qpow(q, k);
    return qpow(q, -2 * n - 1) * t * t;
  };
  return {D, [B, D](long k) { return -(B(k) + D(k)); }, B, n};
}

/// The same operator with D(k) = (1 - q^{-2n-2}) (1 - q^k)^2 instead; Q_j are not its eigenfunctions.
inline TridiagonalOperator hahn_operator_alt(long n, std::int64_t q) {
  require(n >= 1, errc::parameter_out_of_range, "hahn_operator needs n >= 1");
  auto B = [n, q](long k) {
    const QRational t = 1 - qpow(q, k - n);
    return t * t;
  };
  auto D = [n, q](long k) {
    const QRational t = 1 - qpow(q, k);
    return (1 - qpow(q, -2 * n - 2)) * t * t;
  };
  return {D, [B, D](long k) { return -(B(k) + D(k)); }, B, n};
}

/// (1 - q^{-j})(1 - q^{j-2n-1}); its negative is the eigenvalue of hahn_operator.
inline QRational hahn_eigenvalue_positive(long j, long n, std::int64_t q) {
  return (1 - qpow(q, -j)) * (1 - qpow(q, j - 2 * n - 1));
}

inline QRational hahn_eigenvalue(long j, long n, std::int64_t q) { return -hahn_eigenvalue_positive(j, n, q); }

/// (L Q_j - lambda Q_j)(k) for k = 0..n.
inline std::vector<QRational> eigen_residuals(const TridiagonalOperator& op, long j, long n, std::int64_t q,
                                              const QRational& lambda) {
  std::vector<QRational> y;
  for (long k = 0; k <= n; ++k) y.push_back(q_hahn(j, k, n, q));
  std::vector<QRational> res;
  for (long k = 0; k <= n; ++k) res.push_back(op.apply(y, k) - lambda * y[static_cast<std::size_t>(k)]);
  return res;
}

inline std::vector<QRational> hahn_eigencheck(long j, long n, std::int64_t q) {
  require(j >= 0 && j <= n, errc::parameter_out_of_range, "hahn_eigencheck needs 0 <= j <= n");
  return eigen_residuals(hahn_operator(n, q), j, n, q, hahn_eigenvalue(j, n, q));
}

/// hahn_operator_alt against the positive eigenvalue; nonzero for j >= 1.
inline std::vector<QRational> hahn_eigencheck_alt(long j, long n, std::int64_t q) {
  require(j >= 0 && j <= n, errc::parameter_out_of_range, "hahn_eigencheck needs 0 <= j <= n");
  return eigen_residuals(hahn_operator_alt(n, q), j, n, q, hahn_eigenvalue_positive(j, n, q));
}

inline bool all_zero(const std::vector<QRational>& v) {
  return std::all_of(v.begin(), v.end(), [](const QRational& x) { return x == 0; });
}

// -------------------------------------------------------- Δ, infinite model

/// down(k) = (1-q^{-k})^2, stay(k) = 2q^{-k} - q^{-2k} - q^{-2k-1}, up(k) = q^{-2k-1}.
inline TridiagonalOperator delta_operator(std::int64_t q) {
  return {[q](long k) {
            const QRational t = 1 - qpow(q, -k);
            return t * t;
          },
          [q](long k) { return 2 * qpow(q, -k) - qpow(q, -2 * k) - qpow(q, -2 * k - 1); },
          [q](long k) { return qpow(q, -2 * k - 1); },
          std::nullopt};
}

/// (Δ V_j - q^{-j} V_j)(k) for k = 0..K-1.
inline std::vector<QRational> asc_eigencheck(long j, std::int64_t q, long K) {
  require(j >= 0 && K >= 1, errc::parameter_out_of_range, "asc_eigencheck needs j >= 0, K >= 1");
  const TridiagonalOperator d = delta_operator(q);
  std::vector<QRational> v;
  for (long k = 0; k <= K; ++k) v.push_back(alsalam_carlitz2(j, k, q));
  const QRational lambda = qpow(q, -j);
  std::vector<QRational> res;
  for (long k = 0; k < K; ++k) res.push_back(d.apply(v, k) - lambda * v[static_cast<std::size_t>(k)]);
  return res;
}

/// w(k) up(k) = w(k+1) down(k+1) for all k < K.
inline bool detailed_balance_check(std::int64_t q, long K) {
  const TridiagonalOperator d = delta_operator(q);
  for (long k = 0; k < K; ++k)
    if (orbit_weight(k, q) * d.up(k) != orbit_weight(k + 1, q) * d.down(k + 1)) return false;
  return true;
}

// --------------------------------------------------- finite brute force

struct JumpProbabilities {
  QRational down, stay, up;
};

/// From L = span{f_1..f_k, e_{k+1}..e_n}: uniform hyperplane K ⊂ L, then a
/// uniform n-dimensional M ⊃ K; classify dim(M ∩ W) - k.
inline JumpProbabilities jump_probabilities_bruteforce(std::size_t n, std::size_t k, const FieldSpec& field) {
  require(n >= 1 && k <= n, errc::parameter_out_of_range, "jump probabilities need n >= 1 and k <= n");
  MatrixFq rep(field, n, 2 * n);
  for (std::size_t j = 0; j < k; ++j) rep(j, n + j) = 1;
  for (std::size_t i = k; i < n; ++i) rep(i, i) = 1;
  const Subspace L = row_space(rep);

  std::uint64_t counts[3] = {0, 0, 0}, total = 0;
  for (const Subspace& K : hyperplanes(L))
    for (const Subspace& M : overspaces(K)) {
      const long delta = static_cast<long>(orbit_index(M, n)) - static_cast<long>(k);
      require(delta >= -1 && delta <= 1, errc::precondition_violated, "orbit index jumped by more than one");
      ++counts[delta + 1];
      ++total;
    }
  const QRational t(total);
  return {QRational(counts[0]) / t, QRational(counts[1]) / t, QRational(counts[2]) / t};
}

/// Limits of the finite jump probabilities as n grows.
inline JumpProbabilities jump_limits(long k, std::int64_t q) {
  const TridiagonalOperator d = delta_operator(q);
  return {d.down(k), d.stay(k), d.up(k)};
}

// ---------------------------------------------------------- simulation

/// Chain on k >= 0 with the Δ kernel.  Transition thresholds are the exact
/// rationals rounded to double.
inline std::vector<std::uint32_t> markov_walk(std::int64_t q, std::uint32_t k0, std::uint64_t steps, Rng& rng) {
  const TridiagonalOperator d = delta_operator(q);
  constexpr std::uint32_t table = 64;  // up(k) < 2^{-127} beyond this
  std::vector<double> p_down(table + 1), p_up(table + 1);
  for (std::uint32_t k = 0; k <= table; ++k) {
    p_down[k] = to_double(d.down(k));
    p_up[k] = to_double(d.up(k));
  }
  std::vector<std::uint32_t> path;
  path.reserve(steps + 1);
  std::uint32_t k = k0;
  path.push_back(k);
  for (std::uint64_t t = 0; t < steps; ++t) {
    const std::uint32_t idx = std::min(k, table);
    const double u = rng.unit();
    if (u < p_down[idx])
      --k;
    else if (u >= 1.0 - p_up[idx])
      ++k;
    path.push_back(k);
  }
  return path;
}

struct OrbitBin {
  std::size_t k = 0;
  std::uint64_t count = 0;
  QRational exact;   // orbit_count / grassmannian_count
  double freq = 0;   // empirical
  double se = 0;     // binomial standard error of freq under the exact law
};

inline std::vector<OrbitBin> mc_orbit_distribution(std::size_t n, const FieldSpec& field, std::uint64_t samples, Rng& rng) {
  require(samples >= 1, errc::parameter_out_of_range, "need at least one sample");
  std::vector<std::uint64_t> tally(n + 1, 0);
  const GrassmannianSpec g(field, 2 * n, n);
  for (std::uint64_t t = 0; t < samples; ++t) ++tally[orbit_index(sample_uniform_subspace(g, rng), n)];
  const BigInt total = grassmannian_count(static_cast<unsigned>(2 * n), static_cast<unsigned>(n), field.order());
  std::vector<OrbitBin> out;
  for (std::size_t k = 0; k <= n; ++k) {
    OrbitBin b;
    b.k = k;
    b.count = tally[k];
    b.exact = QRational(orbit_count(static_cast<unsigned>(n), static_cast<unsigned>(k), field.order()), total);
    b.freq = static_cast<double>(tally[k]) / static_cast<double>(samples);
    const double p = to_double(b.exact);
    b.se = std::sqrt(p * (1 - p) / static_cast<double>(samples));
    out.push_back(b);
  }
  return out;
}

// ------------------------------------------------ finite averaging matrix

inline constexpr std::uint64_t averaging_budget = 60'000;

struct AveragingReport {
  std::size_t n = 0;
  std::vector<std::vector<QRational>> matrix;  // (n+1)×(n+1), rows stochastic
  std::vector<QRational> charpoly;             // det(λ - A), constant term first
  std::vector<double> eigenvalues;             // descending
  std::vector<QRational> q_powers;             // q^{-j}, j = 0..n
  std::vector<QRational> hahn_eigenvalues;     // hahn_eigenvalue(j, n, q), j = 0..n
};

namespace detail {

// Characteristic polynomial det(λ I - A) of a tridiagonal matrix by the
// three-term recurrence on leading minors.
inline std::vector<QRational> tridiagonal_charpoly(const std::vector<std::vector<QRational>>& a) {
  std::vector<QRational> prev{1}, cur{1};
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<QRational> next(cur.size() + 1, 0);
    for (std::size_t d = 0; d < cur.size(); ++d) {
      next[d + 1] += cur[d];
      next[d] -= a[i][i] * cur[d];
    }
    if (i > 0) {
      const QRational c = a[i - 1][i] * a[i][i - 1];
      for (std::size_t d = 0; d < prev.size(); ++d) next[d] -= c * prev[d];
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// Eigenvalues of the symmetric tridiagonal matrix (diag, off) by Sturm-count bisection.
inline std::vector<double> symmetric_tridiagonal_eigenvalues(const std::vector<double>& diag, const std::vector<double>& off) {
  const std::size_t n = diag.size();
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  auto below = [&](double x) {  // eigenvalues < x
    std::size_t count = 0;
    double d = 1;
    for (std::size_t i = 0; i < n; ++i) {
      d = diag[i] - x - (i > 0 ? off[i - 1] * off[i - 1] / d : 0.0);
      if (d == 0) d = -1e-300;
      if (d < 0) ++count;
    }
    return count;
  };
  std::vector<double> out;
  for (std::size_t idx = 0; idx < n; ++idx) {
    double a = lo - 1, b = hi + 1;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      (below(mid) > idx ? b : a) = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace detail

/// The finite-model averaging operator on functions of k in {0..n}, with
/// rows from jump_probabilities_bruteforce.  Reported next to q^{-j}
/// and the q-Hahn eigenvalues; no identity between them is asserted.
inline AveragingReport finite_averaging_matrix(std::size_t n, const FieldSpec& field) {
  require(n >= 1, errc::parameter_out_of_range, "n must be at least 1");
  const std::uint64_t q = field.order();
  const BigInt pairs = (big_pow(BigInt(q), static_cast<unsigned>(n)) - 1) / (q - 1) *
                       ((big_pow(BigInt(q), static_cast<unsigned>(n + 1)) - 1) / (q - 1)) * (n + 1);
  require(pairs <= averaging_budget, errc::too_large,
          "finite averaging matrix needs " + to_string(pairs) + " enumeration steps, above " +
              std::to_string(averaging_budget));
  AveragingReport rep;
  rep.n = n;
  rep.matrix.assign(n + 1, std::vector<QRational>(n + 1, 0));
  for (std::size_t k = 0; k <= n; ++k) {
    const JumpProbabilities jp = jump_probabilities_bruteforce(n, k, field);
    if (k > 0) rep.matrix[k][k - 1] = jp.down;
    rep.matrix[k][k] = jp.stay;
    if (k < n) rep.matrix[k][k + 1] = jp.up;
    require(k < n || jp.up == 0, errc::precondition_violated, "up move out of the top orbit");
  }
  rep.charpoly = detail::tridiagonal_charpoly(rep.matrix);

  std::vector<double> diag, off;
  for (std::size_t k = 0; k <= n; ++k) diag.push_back(to_double(rep.matrix[k][k]));
  for (std::size_t k = 0; k < n; ++k) off.push_back(std::sqrt(to_double(rep.matrix[k][k + 1] * rep.matrix[k + 1][k])));
  rep.eigenvalues = detail::symmetric_tridiagonal_eigenvalues(diag, off);

  const auto qi = static_cast<std::int64_t>(q);
  for (long j = 0; j <= static_cast<long>(n); ++j) {
    rep.q_powers.push_back(qpow(qi, -j));
    rep.hahn_eigenvalues.push_back(hahn_eigenvalue(j, static_cast<long>(n), qi));
  }
  return rep;
}

/// Horner evaluation of an exact polynomial, constant term first.
inline QRational evaluate(const std::vector<QRational>& poly, const QRational& x) {
  QRational acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
  return acc;
}

}  // namespace grassfq
