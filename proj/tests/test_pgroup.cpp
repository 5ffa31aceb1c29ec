#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace skewbrace;

namespace {

GroupElement el(const GroupSpec& g, std::vector<i64> c) { return GroupElement(g, std::move(c)); }

}  // namespace

TEST(ParseSpec, Examples) {
  GroupSpec a = parse_spec("3:[2,1]");
  EXPECT_EQ(a.prime(), 3);
  EXPECT_EQ(a.exponents(), (std::vector<int>{2, 1}));
  EXPECT_EQ(parse_spec("3:[1,2]").exponents(), (std::vector<int>{2, 1}));
  EXPECT_EQ(parse_spec(" 3 : [ 1 , 2 ] "), a);
  EXPECT_THROW(parse_spec("4:[1]"), ParseError);
  EXPECT_THROW(parse_spec("3:[0]"), ParseError);
  EXPECT_THROW(parse_spec("3:[]"), ParseError);
  EXPECT_THROW(parse_spec("3[1]"), ParseError);
  EXPECT_THROW(parse_spec("x:[1]"), ParseError);
  EXPECT_EQ(a.to_string(), "3:[2,1]");
}

TEST(ParseSpec, OrderLimit) {
  EXPECT_NO_THROW(GroupSpec(2, {62}));
  EXPECT_THROW(GroupSpec(2, {63}), BoundExceeded);
}

TEST(Element, Arithmetic) {
  GroupSpec g = parse_spec("3:[2,1]");
  EXPECT_EQ(el(g, {8, 2}) + el(g, {1, 1}), el(g, {0, 0}));
  EXPECT_EQ(neg(el(g, {3, 1})), el(g, {6, 2}));
  EXPECT_EQ(smul(3, el(g, {1, 0})), el(g, {3, 0}));
  EXPECT_EQ(el(g, {10, -1}), el(g, {1, 2}));
  EXPECT_EQ(parse_element("(8,2)", g), el(g, {8, 2}));
  EXPECT_EQ(el(g, {8, 2}).literal(), "(8,2)");
  EXPECT_THROW(parse_element("(1)", g), ParseError);
}

TEST(Element, MixedSpecsRejected) {
  GroupSpec g = parse_spec("3:[2,1]");
  GroupSpec h = parse_spec("3:[2]");
  EXPECT_THROW(el(g, {1, 0}) + GroupElement::basis(h, 0), SpecMismatch);
}

TEST(Element, Order) {
  GroupSpec g = parse_spec("3:[2,1]");
  EXPECT_EQ(element_order(el(g, {0, 0})), 1u);
  EXPECT_EQ(element_order(el(g, {3, 0})), 3u);
  EXPECT_EQ(element_order(el(g, {1, 2})), 9u);
}

TEST(Element, OrderAgreesWithRepeatedAddition) {
  for (const auto& g : oracle::specs_up_to(729, {2, 3, 5, 7})) {
    for (u64 i = 0; i < g.order(); ++i) {
      GroupElement a = g.element_at(i);
      u64 n = element_order(a);
      ASSERT_EQ(n, oracle::order_by_addition(a)) << g.to_string() << " " << a.literal();
      ASSERT_TRUE(smul(static_cast<i64>(n), a).is_zero());
      if (n > 1) {
        ASSERT_FALSE(smul(static_cast<i64>(n) / g.prime(), a).is_zero());
      }
    }
  }
}

TEST(Element, IndexRoundTripAndLexOrder) {
  GroupSpec g = parse_spec("2:[3,2,1]");
  for (u64 i = 0; i < g.order(); ++i) {
    EXPECT_EQ(g.index_of(g.element_at(i)), i);
    if (i) {
      EXPECT_LT(g.element_at(i - 1), g.element_at(i));
    }
  }
}

TEST(Omega, Examples) {
  GroupSpec g = parse_spec("3:[2,1]");
  EXPECT_EQ(omega_set(g, 0).size(), 1u);
  Subgroup o1 = omega_set(g, 1);
  EXPECT_EQ(o1.size(), 9u);
  for (const auto& a : o1.elements()) EXPECT_EQ(a[0] % 3, 0);
  EXPECT_EQ(omega_set(g, 2).size(), 27u);
}

TEST(Omega, SizeFormula) {
  for (const auto& g : oracle::specs_up_to(729, {2, 3, 5})) {
    for (int i = 0; i <= g.log_exponent() + 1; ++i) {
      i64 e = 0;
      for (int x : g.exponents()) e += std::min(x, i);
      Subgroup o = omega_set(g, i);
      ASSERT_EQ(o.size(), static_cast<u64>(arith::ipow(g.prime(), e))) << g.to_string() << " i=" << i;
      u64 bound = static_cast<u64>(arith::ipow(g.prime(), i));
      for (const auto& a : o.elements()) ASSERT_LE(oracle::order_by_addition(a), bound);
    }
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank_abelian(parse_spec("3:[2,1]")), 2u);
  EXPECT_FALSE(is_small_rank(parse_spec("3:[2,1]")));
  EXPECT_EQ(rank_abelian(parse_spec("3:[3]")), 1u);
  EXPECT_TRUE(is_small_rank(parse_spec("3:[3]")));
  EXPECT_EQ(rank_abelian(parse_spec("2:[1,1]")), 2u);
  EXPECT_FALSE(is_small_rank(parse_spec("2:[1,1]")));
}

TEST(Rank, EqualsLogOmega1) {
  for (const auto& g : oracle::specs_up_to(729, {2, 3, 5})) {
    auto lg = arith::log_exact(omega_set(g, 1).size(), g.prime());
    ASSERT_TRUE(lg);
    EXPECT_EQ(static_cast<std::size_t>(*lg), rank_abelian(g));
  }
}

TEST(Span, Examples) {
  GroupSpec g = parse_spec("3:[2,1]");
  EXPECT_EQ(span(g, {}).size(), 1u);
  Subgroup s = span(g, {el(g, {3, 0})});
  EXPECT_EQ(s.elements(), (std::vector<GroupElement>{el(g, {0, 0}), el(g, {3, 0}), el(g, {6, 0})}));
  EXPECT_EQ(span(g, {el(g, {1, 0}), el(g, {0, 1})}).size(), 27u);
}

TEST(Span, MatchesClosureOracle) {
  std::mt19937_64 rng(7);
  for (const auto& g : oracle::specs_up_to(243, {2, 3})) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<GroupElement> gens;
      int k = static_cast<int>(rng() % 3);
      for (int j = 0; j < k; ++j) gens.push_back(g.element_at(rng() % g.order()));
      Subgroup s = span(g, std::span<const GroupElement>(gens));
      ASSERT_EQ(s.indices(), oracle::closure(g, gens)) << g.to_string();
      for (u64 a : s.indices())
        for (u64 b : s.indices()) ASSERT_TRUE(s.contains(g.element_at(a) + g.element_at(b)));
    }
  }
}

TEST(AllSubgroups, CountsKnownValues) {
  // Subgroup counts of Z/2 x Z/2, Z/4 x Z/2, (Z/2)^3, (Z/2)^4, (Z/3)^2.
  EXPECT_EQ(all_subgroups(parse_spec("2:[1,1]")).size(), 5u);
  EXPECT_EQ(all_subgroups(parse_spec("2:[2,1]")).size(), 8u);
  EXPECT_EQ(all_subgroups(parse_spec("2:[1,1,1]")).size(), 16u);
  EXPECT_EQ(all_subgroups(parse_spec("2:[1,1,1,1]")).size(), 67u);
  EXPECT_EQ(all_subgroups(parse_spec("3:[1,1]")).size(), 6u);
}

TEST(AllSubgroups, EverySubgroupIsClosed) {
  for (const auto& g : oracle::specs_up_to(32, {2, 3})) {
    auto subs = all_subgroups(g);
    std::set<std::vector<u64>> seen;
    for (const auto& s : subs) {
      ASSERT_TRUE(seen.insert(s.indices()).second);
      ASSERT_EQ(s.indices(), oracle::closure(g, s.elements()));
    }
  }
}

TEST(Histogram, Examples) {
  EXPECT_EQ(order_histogram(parse_spec("3:[2]")), (OrderHistogram{{1, 1}, {3, 2}, {9, 6}}));
  EXPECT_EQ(order_histogram(parse_spec("2:[1,1]")), (OrderHistogram{{1, 1}, {2, 3}}));
  EXPECT_EQ(order_histogram(parse_spec("3:[2,2]")), (OrderHistogram{{1, 1}, {3, 8}, {9, 72}}));
  EXPECT_EQ(format_histogram(order_histogram(parse_spec("3:[2,2]"))), "1:1,3:8,9:72");
}

TEST(Histogram, MatchesRepeatedAddition) {
  for (const auto& g : oracle::specs_up_to(729, {2, 3, 5, 7})) {
    OrderHistogram h = order_histogram(g);
    ASSERT_EQ(h, oracle::histogram_by_addition(g)) << g.to_string();
    u64 total = 0;
    for (auto [o, c] : h) total += c;
    EXPECT_EQ(total, g.order());
    EXPECT_EQ(h.at(1), 1u);
  }
}

TEST(Invariants, Examples) {
  EXPECT_EQ(abelian_invariants_from_histogram({{1, 1}, {3, 2}, {9, 6}}), (std::vector<int>{2}));
  EXPECT_EQ(abelian_invariants_from_histogram({{1, 1}, {2, 3}}), (std::vector<int>{1, 1}));
  EXPECT_EQ(abelian_invariants_from_histogram({{1, 1}, {3, 8}, {9, 18}}), (std::vector<int>{2, 1}));
  EXPECT_THROW(abelian_invariants_from_histogram({{1, 1}, {3, 3}}), ValidationError);
  EXPECT_THROW(abelian_invariants_from_histogram({{1, 2}, {3, 2}}), ValidationError);
}

TEST(Invariants, BruteForceOverOrder27) {
  // Oracle: the unique abelian group of order 27 whose histogram matches.
  OrderHistogram target{{1, 1}, {3, 8}, {9, 18}};
  std::vector<std::vector<int>> matches;
  for (const auto& g : oracle::specs_of_log_order(3, 3))
    if (oracle::histogram_by_addition(g) == target) matches.push_back(g.exponents());
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(abelian_invariants_from_histogram(target), matches[0]);
}

TEST(Invariants, RoundTripUpTo729) {
  for (const auto& g : oracle::specs_up_to(729, {2, 3, 5, 7}))
    ASSERT_EQ(abelian_invariants_from_histogram(order_histogram(g)), g.exponents()) << g.to_string();
}
