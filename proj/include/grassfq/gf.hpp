#pragma once

// Exact arithmetic in F_q, q = p^e.
//
// Elements are stored as canonical integers in [0, q): for e = 1 the residue
// mod p, otherwise the coefficient vector c_0 + c_1 x + ... + c_{e-1} x^{e-1}
// packed as c_0 + c_1 p + ... + c_{e-1} p^{e-1}.  That packing is also the
// enumeration order, so for F_4 the order is 0, 1, x, x+1.

#include "grassfq/error.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace grassfq {

using Elem = std::uint32_t;

namespace detail {

constexpr unsigned max_field_order = 1u << 16;
constexpr unsigned max_extension_degree = 4;
constexpr unsigned table_order_limit = 256;

inline bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense polynomials over F_p, coefficient i of x^i; no trailing zeros.
using Poly = std::vector<unsigned>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& m, unsigned p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  // m is monic.
  while (a.size() > dm) {
    const unsigned lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + (p - lead) * m[i]) % p;
    trim(a);
  }
  return a;
}

// Packed integer -> polynomial with `len` coefficients.
inline Poly unpack(unsigned v, unsigned p, unsigned len) {
  Poly out(len, 0);
  for (unsigned i = 0; i < len; ++i) {
    out[i] = v % p;
    v /= p;
  }
  return out;
}

inline bool is_irreducible(const Poly& f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    unsigned count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned low = 0; low < count; ++low) {
      Poly g = unpack(low, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

struct FieldData {
  unsigned p = 2;
  unsigned e = 1;
  unsigned q = 2;
  Poly modulus;  // monic, degree e
  std::vector<std::uint16_t> add_table;
  std::vector<std::uint16_t> mul_table;
  std::vector<Elem> neg_table;
  std::vector<Elem> inv_table;

  Elem add_slow(Elem a, Elem b) const {
    Elem out = 0, place = 1;
    for (unsigned i = 0; i < e; ++i) {
      out += ((a % p + b % p) % p) * place;
      a /= p;
      b /= p;
      place *= p;
    }
    return out;
  }

  Elem neg_slow(Elem a) const {
    Elem out = 0, place = 1;
    for (unsigned i = 0; i < e; ++i) {
      out += ((p - a % p) % p) * place;
      a /= p;
      place *= p;
    }
    return out;
  }

  Elem mul_slow(Elem a, Elem b) const {
    if (e == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p);
    const Poly pa = unpack(a, p, e), pb = unpack(b, p, e);
    Poly prod(2 * e - 1, 0);
    for (unsigned i = 0; i < e; ++i)
      for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p;
    const Poly r = poly_mod(prod, modulus, p);
    Elem out = 0, place = 1;
    for (unsigned c : r) {
      out += c * place;
      place *= p;
    }
    return out;
  }
};

}  // namespace detail

/// The field F_q.  Immutable; copies share the arithmetic tables.
class FieldSpec {
 public:
  FieldSpec() : FieldSpec(make(2, 1)) {}

  /// F_{p^e} with the lexicographically least monic irreducible modulus.
  static FieldSpec make(unsigned p, unsigned e = 1) {
    require(detail::is_prime(p), errc::non_prime, "characteristic " + std::to_string(p) + " is not prime");
    require(e >= 1 && e <= detail::max_extension_degree, errc::degree_out_of_range,
            "extension degree must lie in [1, 4], got " + std::to_string(e));
    std::uint64_t q = 1;
    for (unsigned i = 0; i < e; ++i) q *= p;
    require(q <= detail::max_field_order, errc::degree_out_of_range,
            "field order " + std::to_string(q) + " exceeds 2^16");

    auto d = std::make_shared<detail::FieldData>();
    d->p = p;
    d->e = e;
    d->q = static_cast<unsigned>(q);
    if (e == 1) {
      d->modulus = {0, 1};
    } else {
      for (unsigned low = 0; low < d->q; ++low) {
        detail::Poly f = detail::unpack(low, p, e);
        f.push_back(1);
        if (detail::is_irreducible(f, p)) {
          d->modulus = std::move(f);
          break;
        }
      }
      require(!d->modulus.empty(), errc::no_irreducible_found,
              "no irreducible polynomial of degree " + std::to_string(e));
    }
    build_tables(*d);
    return FieldSpec(std::move(d));
  }

  /// F_q from its order; q must be a prime power.
  static FieldSpec of_order(unsigned q) {
    require(q >= 2, errc::non_prime, "field order must be at least 2");
    unsigned p = 2;
    while (q % p != 0) ++p;
    unsigned e = 0, rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    require(rest == 1, errc::non_prime, std::to_string(q) + " is not a prime power");
    return make(p, e);
  }

  unsigned characteristic() const noexcept { return d_->p; }
  unsigned degree() const noexcept { return d_->e; }
  unsigned order() const noexcept { return d_->q; }
  /// Coefficients of the modulus, constant term first.
  const std::vector<unsigned>& modulus() const noexcept { return d_->modulus; }

  Elem add(Elem a, Elem b) const noexcept {
    if (d_->e == 1) {
      const Elem s = a + b;
      return s >= d_->p ? s - d_->p : s;
    }
    if (!d_->add_table.empty()) return d_->add_table[a * d_->q + b];
    return d_->add_slow(a, b);
  }
  Elem neg(Elem a) const noexcept {
    if (d_->e == 1) return a == 0 ? 0 : d_->p - a;
    if (!d_->neg_table.empty()) return d_->neg_table[a];
    return d_->neg_slow(a);
  }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (d_->e == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % d_->p);
    if (!d_->mul_table.empty()) return d_->mul_table[a * d_->q + b];
    return d_->mul_slow(a, b);
  }
  Elem inv(Elem a) const {
    require(a != 0, errc::division_by_zero, "inverse of zero");
    return d_->inv_table[a];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const noexcept {
    Elem result = 1;
    while (k != 0) {
      if (k & 1) result = mul(result, a);
      a = mul(a, a);
      k >>= 1;
    }
    return result;
  }

  /// Human-readable form: "3" in prime fields, "x^2+2x+1" style otherwise.
  std::string format(Elem a) const {
    if (d_->e == 1) return std::to_string(a);
    if (a == 0) return "0";
    const detail::Poly c = detail::unpack(a, d_->p, d_->e);
    std::string out;
    for (unsigned i = d_->e; i-- > 0;) {
      if (c[i] == 0) continue;
      if (!out.empty()) out += '+';
      if (i == 0 || c[i] != 1) out += std::to_string(c[i]);
      if (i >= 1) out += 'x';
      if (i >= 2) out += '^' + std::to_string(i);
    }
    return out;
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
    return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->e == b.d_->e);
  }

 private:
  explicit FieldSpec(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}

  static void build_tables(detail::FieldData& d) {
    const unsigned q = d.q;
    if (d.e > 1 && q <= detail::table_order_limit) {
      d.add_table.resize(static_cast<std::size_t>(q) * q);
      d.mul_table.resize(static_cast<std::size_t>(q) * q);
      d.neg_table.resize(q);
      for (Elem a = 0; a < q; ++a) {
        d.neg_table[a] = d.neg_slow(a);
        for (Elem b = 0; b < q; ++b) {
          d.add_table[a * q + b] = static_cast<std::uint16_t>(d.add_slow(a, b));
          d.mul_table[a * q + b] = static_cast<std::uint16_t>(d.mul_slow(a, b));
        }
      }
    }
    // a^{-1} = a^{q-2}
    d.inv_table.assign(q, 0);
    for (Elem a = 1; a < q; ++a) {
      Elem result = 1, base = a;
      for (std::uint64_t k = q - 2; k != 0; k >>= 1) {
        if (k & 1) result = d.mul_slow(result, base);
        base = d.mul_slow(base, base);
      }
      d.inv_table[a] = result;
    }
  }

  std::shared_ptr<const detail::FieldData> d_;
};

/// A field element bound to its field; arithmetic across fields throws SpecMismatch.
class FieldElement {
 public:
  FieldElement(FieldSpec spec, Elem value) : spec_(std::move(spec)), value_(value) {
    require(value_ < spec_.order(), errc::parameter_out_of_range, "element outside [0, q)");
  }

  const FieldSpec& spec() const noexcept { return spec_; }
  Elem value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement inv() const { return {spec_, spec_.inv(value_)}; }
  FieldElement operator-() const { return {spec_, spec_.neg(value_)}; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.spec_, a.spec_.add(a.value_, b.value_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.spec_, a.spec_.sub(a.value_, b.value_)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.spec_, a.spec_.mul(a.value_, b.value_)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {a.spec_, a.spec_.div(a.value_, b.value_)};
  }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.value_ == b.value_;
  }

  std::string str() const { return spec_.format(value_); }

 private:
  static void check(const FieldElement& a, const FieldElement& b) {
    require(a.spec_ == b.spec_, errc::spec_mismatch, "operands belong to different fields");
  }

  FieldSpec spec_;
  Elem value_;
};

/// All q elements in canonical order: 0, 1, then increasing packed value.
inline std::vector<FieldElement> elements(const FieldSpec& spec) {
  std::vector<FieldElement> out;
  out.reserve(spec.order());
  for (Elem a = 0; a < spec.order(); ++a) out.emplace_back(spec, a);
  return out;
}

}  // namespace grassfq
