#pragma once

// Invariant suites run by `grassfq verify`.  Each check returns pass/fail with
// a one-line detail; suites are listed in a fixed order.

#include "grassfq/fqlinalg.hpp"
#include "grassfq/gf.hpp"
#include "grassfq/grassmann.hpp"
#include "grassfq/qspecial.hpp"
#include "grassfq/random.hpp"
#include "grassfq/semiinf.hpp"
#include "grassfq/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace grassfq::verify {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<Outcome()> run;
};

struct Result {
  std::string suite;
  std::string check;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct Options {
  std::uint64_t seed = 0;
  unsigned q = 2;  // field for the randomized checks
};

namespace detail {

inline Outcome expect(bool ok, std::string detail) { return {ok, std::move(detail)}; }

inline std::vector<Check> gf_suite(const Options&) {
  return {
      {"field_axioms_q_le_16",
       [] {
         for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
           const FieldSpec f = FieldSpec::of_order(q);
           for (Elem a = 0; a < q; ++a)
             for (Elem b = 0; b < q; ++b)
               for (Elem c = 0; c < q; ++c)
                 if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c)) ||
                     f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)))
                   return expect(false, "axiom fails in F_" + std::to_string(q));
         }
         return expect(true, "associativity and distributivity, 10 fields");
       }},
      {"multiplicative_order",
       [] {
         for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
           const FieldSpec f = FieldSpec::of_order(q);
           for (Elem a = 1; a < q; ++a)
             if (f.pow(a, q - 1) != 1 || f.mul(a, f.inv(a)) != 1) return expect(false, "a^(q-1) != 1 in F_" + std::to_string(q));
         }
         return expect(true, "a^(q-1) = 1 and a·inv(a) = 1");
       }},
      {"f4_modulus",
       [] {
         const FieldSpec f = FieldSpec::make(2, 2);
         return expect(f.mul(2, 2) == 3 && f.mul(2, 3) == 1, "x^2 = x + 1");
       }},
  };
}

inline std::vector<Check> fqlinalg_suite(const Options& o) {
  return {
      {"canonicality",
       [o] {
         Rng rng(o.seed);
         for (unsigned q : {2u, 3u}) {
           const FieldSpec f = FieldSpec::make(q);
           for (int t = 0; t < 200; ++t) {
             const std::size_t m = 1 + rng.below(6);
             const MatrixFq a = random_matrix(f, rng.below(m + 1), m, rng);
             const MatrixFq g = a.rows() == 0 ? MatrixFq(f, 0, 0) : random_invertible(f, a.rows(), rng);
             if (!(row_space(g * a) == row_space(a))) return expect(false, "row space changed under row operations");
           }
         }
         return expect(true, "400 random matrices, q in {2,3}, m <= 6");
       }},
      {"modular_law",
       [o] {
         Rng rng(o.seed + 1);
         const FieldSpec f = FieldSpec::of_order(o.q);
         for (int t = 0; t < 300; ++t) {
           const std::size_t m = 1 + rng.below(6);
           const Subspace a = row_space(random_matrix(f, rng.below(m + 1), m, rng));
           const Subspace b = row_space(random_matrix(f, rng.below(m + 1), m, rng));
           if (a.dim() + b.dim() != subspace_sum(a, b).dim() + subspace_intersection(a, b).dim())
             return expect(false, "dimension formula fails");
         }
         return expect(true, "300 random pairs");
       }},
      {"rref_idempotent",
       [o] {
         Rng rng(o.seed + 2);
         const FieldSpec f = FieldSpec::of_order(o.q);
         for (int t = 0; t < 300; ++t) {
           const MatrixFq m = random_matrix(f, rng.below(6), 1 + rng.below(6), rng);
           if (!(rref(rref(m).reduced).reduced == rref(m).reduced)) return expect(false, "rref not idempotent");
         }
         return expect(true, "300 random matrices");
       }},
  };
}

inline std::vector<Check> grassmann_suite(const Options& o) {
  return {
      {"orbit_partition",
       [] {
         for (unsigned q : {2u, 3u, 4u})
           for (unsigned n = 0; n <= 6; ++n) {
             BigInt s = 0;
             for (unsigned k = 0; k <= n; ++k) s += orbit_count(n, k, q);
             if (s != grassmannian_count(2 * n, n, q)) return expect(false, "partition fails at n=" + std::to_string(n));
           }
         return expect(true, "n <= 6, q in {2,3,4}");
       }},
      {"enumeration_soundness",
       [] {
         for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
           std::vector<BigInt> tally(n + 1, 0);
           std::set<Subspace, SubspaceLess> seen;
           SubspaceEnumerator it({FieldSpec::make(q), 2 * n, n});
           Subspace L;
           while (it.next(L)) {
             tally[orbit_index(L, n)] += 1;
             seen.insert(L);
           }
           if (BigInt(seen.size()) != grassmannian_count(2 * n, n, q)) return expect(false, "count mismatch");
           for (unsigned k = 0; k <= n; ++k)
             if (tally[k] != orbit_count(n, k, q)) return expect(false, "orbit tally mismatch");
         }
         return expect(true, "(q,n) in {(2,1),(2,2),(2,3),(3,1),(3,2)}");
       }},
      {"atlas_cover",
       [] {
         for (std::size_t n = 1; n <= 3; ++n)
           for (const auto& L : enumerate({FieldSpec::make(2), 2 * n, n}))
             if (!first_chart(L, n)) return expect(false, "uncovered subspace " + L.str());
         return expect(true, "q=2, n <= 3");
       }},
      {"moebius_measure_preservation",
       [o] {
         Rng rng(o.seed + 3);
         const FieldSpec f = FieldSpec::make(2);
         const std::size_t n = 2;
         std::vector<MatrixFq> all_t;
         for (std::uint32_t code = 0; code < 16; ++code) {
           MatrixFq t(f, n, n);
           for (std::size_t i = 0; i < 4; ++i) t(i / 2, i % 2) = code >> i & 1;
           all_t.push_back(t);
         }
         for (int trial = 0; trial < 200; ++trial) {
           const MatrixFq g = random_invertible(f, 2 * n, rng);
           std::set<std::vector<Elem>> image;
           std::size_t domain = 0;
           for (const auto& t : all_t) {
             if (!is_invertible(g.block(0, 0, n, n) + t * g.block(n, 0, n, n))) continue;
             ++domain;
             image.insert(moebius_action(t, g).data());
           }
           if (image.size() != domain) return expect(false, "map not injective");
         }
         return expect(true, "200 random g in GL(4,F_2)");
       }},
      {"chart_overlap_bijection",
       [] {
         const std::size_t n = 2;
         const auto all = enumerate({FieldSpec::make(2), 2 * n, n});
         for (const auto& a : finite_charts(n))
           for (const auto& b : finite_charts(n)) {
             std::set<std::vector<Elem>> from, to;
             std::size_t overlap = 0;
             for (const auto& L : all) {
               const auto ta = chart_membership(L, a, n), tb = chart_membership(L, b, n);
               if (!ta || !tb) continue;
               ++overlap;
               from.insert(ta->data());
               to.insert(tb->data());
             }
             if (from.size() != overlap || to.size() != overlap) return expect(false, "transition not bijective");
           }
         return expect(true, "all chart pairs at q=2, n=2");
       }},
  };
}

inline std::vector<Check> semiinf_suite(const Options& o) {
  auto random_element = [](const FieldSpec& f, Rng& rng) {
    const long s = static_cast<long>(rng.below(5)) - 2;
    return StableGroupElement(f, s, random_invertible(f, 2 * rng.below(4), rng));
  };
  auto random_point = [](const FieldSpec& fld, Rng& rng) {
    std::vector<std::size_t> om, xi;
    for (std::size_t i = 1; i <= 3; ++i) {
      if (rng.below(2)) om.push_back(i);
      if (rng.below(2)) xi.push_back(i);
    }
    const ChartPoint bare(fld, om, xi);
    std::vector<ChartEntry> entries;
    for (std::size_t i = 1; i <= 3; ++i)
      for (std::size_t j = 1; j <= 3; ++j)
        for (Coord r : {e(i), f(i)})
          for (Coord c : {e(j), f(j)})
            if (bare.in_v(r) && !bare.in_v(c) && rng.below(3) == 0)
              entries.push_back({r, c, static_cast<Elem>(rng.below(fld.order()))});
    return ChartPoint(fld, om, xi, entries);
  };
  return {
      {"index_additivity",
       [o] {
         Rng rng(o.seed + 4);
         for (unsigned q : {2u, 3u}) {
           const FieldSpec f = FieldSpec::make(q);
           for (int t = 0; t < 1000; ++t) {
             const StableOperator a(random_matrix(f, rng.below(6), rng.below(6), rng));
             const StableOperator b(random_matrix(f, rng.below(6), rng.below(6), rng));
             if (fredholm_index(fredholm_compose(a, b)) != fredholm_index(a) + fredholm_index(b))
               return expect(false, "index not additive");
           }
         }
         return expect(true, "1000 pairs per q in {2,3}");
       }},
      {"canonical_form_roundtrip",
       [o] {
         Rng rng(o.seed + 5);
         const FieldSpec f = FieldSpec::of_order(o.q);
         for (int t = 0; t < 300; ++t) {
           const StableOperator a(random_matrix(f, rng.below(7), rng.below(7), rng));
           const CanonicalForm cf = fredholm_canonical_form(a);
           if (!(fredholm_compose(fredholm_compose(cf.g1, cf.jform), cf.g2) == a) || cf.beta != a.kernel_dim() ||
               cf.alpha != a.cokernel_dim())
             return expect(false, "canonical form does not recompose");
         }
         return expect(true, "300 random operators");
       }},
      {"theta_homomorphism",
       [o, random_element] {
         Rng rng(o.seed + 6);
         const FieldSpec f = FieldSpec::of_order(o.q);
         for (int t = 0; t < 500; ++t) {
           const StableGroupElement g = random_element(f, rng), h = random_element(f, rng);
           if (theta(compose(g, h)) != theta(g) + theta(h)) return expect(false, "theta not additive");
         }
         return expect(theta(StableGroupElement::J(f)) == 1, "500 random pairs, theta(J) = 1");
       }},
      {"dim_equivariance",
       [o, random_element, random_point] {
         Rng rng(o.seed + 7);
         const FieldSpec f = FieldSpec::of_order(o.q);
         for (int t = 0; t < 500; ++t) {
           const ChartPoint p = random_point(f, rng);
           const StableGroupElement g = random_element(f, rng);
           if (relative_dimension(group_act(p, g)) != relative_dimension(p) + theta(g))
             return expect(false, "Dim(p·g) != Dim(p) + theta(g)");
         }
         return expect(true, "500 random window-bounded cases");
       }},
      {"pi_n_compatibility",
       [o, random_point] {
         Rng rng(o.seed + 8);
         const FieldSpec f = FieldSpec::of_order(o.q);
         for (int t = 0; t < 300; ++t) {
           const ChartPoint p = random_point(f, rng);
           const std::size_t n = std::max<std::size_t>(p.max_index(), 3);
           const auto coords = chart_membership(pi_n(p, n), p.chart(), n);
           if (!coords || !(*coords == dense_coords(p, n))) return expect(false, "chart coordinates of pi_n differ");
         }
         return expect(true, "300 random chart points");
       }},
      {"factor_gl0_recomposition",
       [o] {
         Rng rng(o.seed + 9);
         const FieldSpec f = FieldSpec::make(2);
         for (int t = 0; t < 200; ++t) {
           const StableGroupElement g = StableGroupElement::finite(random_invertible(f, 2 * (1 + rng.below(6)), rng));
           const Gl0Factorization z = factor_gl0(g);
           if (!(compose(compose(z.h, z.s), z.r) == g) || !z.r.is_parabolic())
             return expect(false, "h·s·r != g");
         }
         return expect(true, "200 random elements, corner <= 6");
       }},
  };
}

inline std::vector<Check> qspecial_suite(const Options&) {
  return {
      {"weights_vs_total_mass",
       [] {
         QRational s = 0;
         for (long k = 0; k <= 12; ++k) s += orbit_weight(k, 2);
         const double gap = std::abs(to_double(s - total_mass_partial(64, 2)));
         char buf[64];
         std::snprintf(buf, sizeof buf, "q=2, K=12 against J=64: gap %.3e", gap);
         return expect(gap < 1e-9, buf);
       }},
      {"alsalam_carlitz_degree",
       [] {
         for (std::int64_t q : {2, 3})
           for (long j = 0; j <= 5; ++j) {
             std::vector<QRational> x, y;
             for (long k = 0; k <= j + 2; ++k) {
               x.push_back(qpow(q, k));
               y.push_back(alsalam_carlitz2(j, k, q));
             }
             for (long order = 1; order <= j + 1; ++order) {
               std::vector<QRational> next;
               for (std::size_t i = 0; i + 1 < y.size(); ++i)
                 next.push_back((y[i + 1] - y[i]) / (x[i + static_cast<std::size_t>(order)] - x[i]));
               y = next;
             }
             for (const auto& v : y)
               if (v != 0) return expect(false, "order j+1 difference nonzero");
           }
         return expect(true, "j <= 5, q in {2,3}");
       }},
      {"phi_degenerate_cases",
       [] {
         bool ok = phi({{QRational(1), QRational(3)}, {QRational(5)}, QRational(2), QRational(7)}) == 1;
         for (long k = 0; k <= 5; ++k) ok = ok && phi({{qpow(2, 1), qpow(2, k)}, {}, qpow(2, -1), qpow(2, -1)}) == 2 - qpow(2, k);
         ok = ok && qpochhammer(QRational(1, 2), QRational(1, 2), 2) == QRational(3, 8);
         return expect(ok, "single-term and two-term series");
       }},
  };
}

inline std::vector<Check> spectral_suite(const Options&) {
  return {
      {"stochasticity",
       [] {
         for (std::int64_t q : {2, 3, 4}) {
           const TridiagonalOperator d = delta_operator(q);
           for (long k = 0; k < 30; ++k)
             if (d.down(k) + d.stay(k) + d.up(k) != 1) return expect(false, "row sum != 1");
         }
         for (std::size_t n = 1; n <= 4; ++n)
           for (std::size_t k = 0; k <= n; ++k) {
             const JumpProbabilities jp = jump_probabilities_bruteforce(n, k, FieldSpec::make(2));
             if (jp.down + jp.stay + jp.up != 1) return expect(false, "brute-force row sum != 1");
           }
         return expect(true, "infinite kernel and brute-force rows");
       }},
      {"hahn_eigen_identity",
       [] {
         for (std::int64_t q : {2, 3})
           for (long n = 1; n <= 6; ++n)
             for (long j = 0; j <= n; ++j)
               if (!all_zero(hahn_eigencheck(j, n, q))) return expect(false, "nonzero residual");
         return expect(true, "q-Hahn operator, j <= n <= 6, q in {2,3}");
       }},
      {"asc_eigen_identity",
       [] {
         for (std::int64_t q : {2, 3, 4})
           for (long j = 0; j <= 8; ++j)
             if (!all_zero(asc_eigencheck(j, q, 30))) return expect(false, "nonzero residual");
         return expect(true, "j <= 8, k < 30, q in {2,3,4}");
       }},
      {"detailed_balance",
       [] {
         for (std::int64_t q : {2, 3, 4})
           if (!detailed_balance_check(q, 30)) return expect(false, "fails");
         return expect(true, "k < 30, q in {2,3,4}");
       }},
      {"approximate_orthogonality",
       [] {
         std::vector<std::vector<double>> v(7);
         std::vector<double> w;
         for (long k = 0; k <= 60; ++k) w.push_back(to_double(orbit_weight(k, 2)));
         for (long j = 0; j <= 6; ++j)
           for (long k = 0; k <= 60; ++k) v[static_cast<std::size_t>(j)].push_back(to_double(alsalam_carlitz2(j, k, 2)));
         auto dot = [&](std::size_t a, std::size_t b) {
           double s = 0;
           for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * v[a][k] * v[b][k];
           return s;
         };
         for (std::size_t i = 0; i <= 6; ++i)
           for (std::size_t j = i + 1; j <= 6; ++j)
             if (std::abs(dot(i, j)) > 1e-8 * std::sqrt(dot(i, i) * dot(j, j))) return expect(false, "not orthogonal");
         return expect(true, "0 <= i < j <= 6, q=2");
       }},
      {"jump_convergence",
       [] {
         for (long k = 0; k <= 2; ++k) {
           double prev = 1e9;
           for (std::size_t n = 3; n <= 5; ++n) {
             const JumpProbabilities jp = jump_probabilities_bruteforce(n, static_cast<std::size_t>(k), FieldSpec::make(2));
             const JumpProbabilities lim = jump_limits(k, 2);
             const double dev = std::max({std::abs(to_double(jp.down - lim.down)), std::abs(to_double(jp.stay - lim.stay)),
                                          std::abs(to_double(jp.up - lim.up))});
             if (!(dev < prev)) return expect(false, "deviation not decreasing at k=" + std::to_string(k));
             prev = dev;
           }
           if (prev >= 0.1) return expect(false, "deviation at n=5 not below 0.1");
         }
         return expect(true, "q=2, k <= 2, n in {3,4,5}");
       }},
  };
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gf", "fqlinalg", "grassmann", "semiinf", "qspecial", "spectral"};
  return names;
}

inline std::vector<Check> suite(const std::string& name, const Options& o) {
  if (name == "gf") return detail::gf_suite(o);
  if (name == "fqlinalg") return detail::fqlinalg_suite(o);
  if (name == "grassmann") return detail::grassmann_suite(o);
  if (name == "semiinf") return detail::semiinf_suite(o);
  if (name == "qspecial") return detail::qspecial_suite(o);
  if (name == "spectral") return detail::spectral_suite(o);
  fail(errc::parameter_out_of_range, "unknown suite '" + name + "'");
}

/// Runs the named suite (or every suite for "all"), catching library errors as failures.
inline std::vector<Result> run(const std::string& name, const Options& o) {
  std::vector<std::string> names = name == "all" ? suite_names() : std::vector<std::string>{name};
  std::vector<Result> out;
  for (const auto& s : names)
    for (const Check& c : suite(s, o)) {
      const auto t0 = std::chrono::steady_clock::now();
      Result r{s, c.name, false, "", 0};
      try {
        const Outcome oc = c.run();
        r.passed = oc.passed;
        r.detail = oc.detail;
      } catch (const std::exception& ex) {
        r.detail = std::string("exception: ") + ex.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.push_back(std::move(r));
    }
  return out;
}

}  // namespace grassfq::verify
