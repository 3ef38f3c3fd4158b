#include "grassfq/gf.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

using namespace grassfq;

namespace {

errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return errc::parameter_out_of_range;
}

}  // namespace

TEST(Field, PrimeFieldModulusIsX) {
  const FieldSpec f = FieldSpec::make(2, 1);
  EXPECT_EQ(f.order(), 2u);
  EXPECT_EQ(f.modulus(), (std::vector<unsigned>{0, 1}));
  EXPECT_EQ(FieldSpec::make(5).order(), 5u);
}

TEST(Field, F4ModulusIsXSquaredPlusXPlusOne) {
  const FieldSpec f = FieldSpec::make(2, 2);
  EXPECT_EQ(f.modulus(), (std::vector<unsigned>{1, 1, 1}));
  // x * x = x + 1
  EXPECT_EQ(f.mul(2, 2), 3u);
  EXPECT_EQ(f.format(3), "x+1");
}

TEST(Field, LeastIrreducibleModuli) {
  // Brute force: the least monic f of degree e with no factor of degree <= e/2.
  EXPECT_EQ(FieldSpec::make(2, 3).modulus(), (std::vector<unsigned>{1, 1, 0, 1}));     // x^3+x+1
  EXPECT_EQ(FieldSpec::make(2, 4).modulus(), (std::vector<unsigned>{1, 1, 0, 0, 1}));  // x^4+x+1
  EXPECT_EQ(FieldSpec::make(3, 2).modulus(), (std::vector<unsigned>{1, 0, 1}));        // x^2+1
}

TEST(Field, SmallExamples) {
  const FieldSpec f2 = FieldSpec::make(2);
  EXPECT_EQ(f2.add(1, 1), 0u);
  const FieldSpec f5 = FieldSpec::make(5);
  EXPECT_EQ(f5.inv(2), 3u);
  EXPECT_EQ((FieldElement(f5, 2) * FieldElement(f5, 3)).value(), 1u);
}

TEST(Field, Elements) {
  auto values = [](const FieldSpec& f) {
    std::vector<Elem> v;
    for (const auto& e : elements(f)) v.push_back(e.value());
    return v;
  };
  EXPECT_EQ(values(FieldSpec::make(2)), (std::vector<Elem>{0, 1}));
  EXPECT_EQ(values(FieldSpec::make(3)), (std::vector<Elem>{0, 1, 2}));
  const FieldSpec f4 = FieldSpec::make(2, 2);
  std::vector<std::string> names;
  for (const auto& e : elements(f4)) names.push_back(e.str());
  EXPECT_EQ(names, (std::vector<std::string>{"0", "1", "x", "x+1"}));
}

TEST(Field, Errors) {
  EXPECT_EQ(code_of([] { FieldSpec::make(4); }), errc::non_prime);
  EXPECT_EQ(code_of([] { FieldSpec::make(1); }), errc::non_prime);
  EXPECT_EQ(code_of([] { FieldSpec::make(2, 0); }), errc::degree_out_of_range);
  EXPECT_EQ(code_of([] { FieldSpec::make(2, 5); }), errc::degree_out_of_range);
  EXPECT_EQ(code_of([] { FieldSpec::make(257, 2); }), errc::degree_out_of_range);
  EXPECT_EQ(code_of([] { FieldSpec::of_order(6); }), errc::non_prime);
  const FieldSpec f3 = FieldSpec::make(3);
  EXPECT_EQ(code_of([&] { f3.inv(0); }), errc::division_by_zero);
  EXPECT_EQ(code_of([&] { (void)(FieldElement(f3, 1) + FieldElement(FieldSpec::make(5), 1)); }), errc::spec_mismatch);
}

TEST(Field, OfOrder) {
  EXPECT_EQ(FieldSpec::of_order(9).characteristic(), 3u);
  EXPECT_EQ(FieldSpec::of_order(9).degree(), 2u);
  EXPECT_EQ(FieldSpec::of_order(65521).order(), 65521u);
  EXPECT_EQ(code_of([] { FieldSpec::of_order(65536); }), errc::degree_out_of_range);
}

class FieldAxioms : public ::testing::TestWithParam<unsigned> {};

TEST_P(FieldAxioms, Exhaustive) {
  const FieldSpec f = FieldSpec::of_order(GetParam());
  const Elem q = f.order();
  for (Elem a = 0; a < q; ++a) {
    EXPECT_EQ(f.add(a, f.neg(a)), 0u);
    if (a != 0) {
      EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      EXPECT_EQ(f.pow(a, q - 1), 1u);
    }
    for (Elem b = 0; b < q; ++b) {
      ASSERT_EQ(f.add(a, b), f.add(b, a));
      ASSERT_EQ(f.mul(a, b), f.mul(b, a));
      for (Elem c = 0; c < q; ++c) {
        ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(UpTo16, FieldAxioms, ::testing::Values(2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u));

TEST(Field, LargeExtensionWithoutTables) {
  // 3^4 = 81 uses tables, 13^4 = 28561 does not; both must satisfy a^{q-1} = 1.
  for (unsigned p : {3u, 13u}) {
    const FieldSpec f = FieldSpec::make(p, 4);
    for (Elem a = 1; a < f.order(); a += 97) {
      ASSERT_EQ(f.pow(a, f.order() - 1), 1u);
      ASSERT_EQ(f.mul(a, f.inv(a)), 1u);
    }
  }
}
