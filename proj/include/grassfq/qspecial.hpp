#pragma once

// Exact q-series: Pochhammer symbols, terminating basic hypergeometric
// series, the q-Hahn and Al-Salam–Carlitz II families, orbit weights.

#include "grassfq/error.hpp"
#include "grassfq/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace grassfq {

/// (a; base)_k = (1-a)(1-a base)...(1-a base^{k-1}).
inline QRational qpochhammer(const QRational& a, const QRational& base, std::size_t k) {
  QRational result = 1, x = a;
  for (std::size_t i = 0; i < k; ++i) {
    result *= 1 - x;
    if (result == 0) break;
    x *= base;
  }
  return result;
}

struct SeriesParams {
  std::vector<QRational> upper;
  std::vector<QRational> lower;
  QRational base;
  QRational argument;
};

inline constexpr std::size_t default_term_cap = 10'000;

namespace detail {

// Smallest j < cap with a base^j = 1, i.e. (a; base)_{j+1} = 0.
inline std::optional<std::size_t> vanishing_index(const QRational& a, const QRational& base, std::size_t cap) {
  using boost::multiprecision::abs;
  if (a == 0) return std::nullopt;
  QRational x = a;
  const QRational ab = abs(base);
  for (std::size_t j = 0; j < cap; ++j) {
    if (x == 1) return j;
    const QRational ax = abs(x);
    // |a base^j| moves monotonically; once it is past 1 in the direction of travel it never returns.
    if (ab == 1) {
      if (ax != 1) return std::nullopt;
    } else if ((ab > 1 && ax > 1) || (ab < 1 && ax < 1)) {
      return std::nullopt;
    }
    x *= base;
  }
  return std::nullopt;
}

}  // namespace detail

/// r phi s (upper; lower; base; argument), with the term factor
/// ((-1)^m base^{m(m-1)/2})^{1+s-r}.  Only terminating series are summed.
inline QRational phi(const SeriesParams& sp, std::size_t cap = default_term_cap) {
  std::optional<std::size_t> last;
  for (const QRational& a : sp.upper)
    if (auto j = detail::vanishing_index(a, sp.base, cap); j && (!last || *j < *last)) last = j;
  require(last.has_value(), errc::non_terminating,
          "no upper parameter produces a vanishing Pochhammer factor within " + std::to_string(cap) + " terms");

  const long r = static_cast<long>(sp.upper.size()), s = static_cast<long>(sp.lower.size());
  const long power = 1 + s - r;
  QRational sum = 1, term = 1;
  QRational base_pow = 1;  // base^{m-1}
  for (std::size_t m = 1; m <= *last; ++m) {
    QRational num = 1, den = 1 - sp.base * base_pow;  // (base; base) factor
    for (const QRational& a : sp.upper) num *= 1 - a * base_pow;
    for (const QRational& b : sp.lower) den *= 1 - b * base_pow;
    require(den != 0, errc::lower_parameter_pole, "lower Pochhammer factor vanishes at term " + std::to_string(m));
    // ((-1)^m base^{m(m-1)/2})^{power} over ((-1)^{m-1} base^{(m-1)(m-2)/2})^{power} = (-base^{m-1})^{power}
    const QRational step = rat_pow(-base_pow, power);
    term *= num / den * step * sp.argument;
    sum += term;
    base_pow *= sp.base;
  }
  return sum;
}

inline QRational qpow(std::int64_t q, long e) { return q_power(q, e); }

/// Q_j(q^{-k}) = 3phi2(q^{-j}, q^{j-2n-1}, q^{-k}; q^{-n}, q^{-n}; q; q).
inline QRational q_hahn(long j, long k, long n, std::int64_t q) {
  require(n >= 0 && j >= 0 && j <= n && k >= 0 && k <= n, errc::parameter_out_of_range,
          "q_hahn needs 0 <= j, k <= n");
  return phi({{qpow(q, -j), qpow(q, j - 2 * n - 1), qpow(q, -k)}, {qpow(q, -n), qpow(q, -n)}, QRational(q), QRational(q)});
}

/// V_j(q^k) = (-1)^j q^{j(j-1)/2} 2phi0(q^j, q^k; -; q^{-1}; q^{-j}).
inline QRational alsalam_carlitz2(long j, long k, std::int64_t q) {
  require(j >= 0 && k >= 0, errc::parameter_out_of_range, "alsalam_carlitz2 needs j, k >= 0");
  const QRational series = phi({{qpow(q, j), qpow(q, k)}, {}, qpow(q, -1), qpow(q, -j)});
  const QRational sign = j % 2 == 0 ? 1 : -1;
  return sign * qpow(q, j * (j - 1) / 2) * series;
}

/// w(k) = q^{-k^2} / prod_{j=1}^k (1 - q^{-j})^2.
inline QRational orbit_weight(long k, std::int64_t q) {
  require(k >= 0, errc::parameter_out_of_range, "orbit index must be nonnegative");
  QRational w = qpow(q, -k * k);
  for (long j = 1; j <= k; ++j) {
    const QRational f = 1 - qpow(q, -j);
    w /= f * f;
  }
  return w;
}

/// prod_{j=1}^J (1 - q^{-j})^{-1}.
inline QRational total_mass_partial(long J, std::int64_t q) {
  require(J >= 1, errc::parameter_out_of_range, "partial product needs J >= 1");
  QRational p = 1;
  for (long j = 1; j <= J; ++j) p /= 1 - qpow(q, -j);
  return p;
}

/// The infinite product in floating point; factors are dropped once q^{-j} < 1e-17.
inline double total_mass_float(std::int64_t q) {
  require(q >= 2, errc::parameter_out_of_range, "q must be at least 2");
  double p = 1, x = 1;
  for (int j = 1; j < 4096; ++j) {
    x /= static_cast<double>(q);
    if (x < 1e-17) break;
    p /= 1 - x;
  }
  return p;
}

}  // namespace grassfq
