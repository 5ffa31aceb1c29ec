#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace skewbrace;

namespace {

EndoMatrix mat(const GroupSpec& g, std::vector<std::vector<i64>> rows) { return validate_endo(rows, g); }

GroupElement el(const GroupSpec& g, std::vector<i64> c) { return GroupElement(g, std::move(c)); }

/// Uniformly random valid endomorphism: entry (i,j) a random multiple of
/// p^{max(0, e_i - e_j)}.
EndoMatrix random_endo(const GroupSpec& g, std::mt19937_64& rng) {
  const std::size_t r = g.rank();
  std::vector<std::vector<i64>> rows(r, std::vector<i64>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      i64 step = arith::ipow(g.prime(), std::max(0, g.exponent(i) - g.exponent(j)));
      rows[i][j] = step * static_cast<i64>(rng() % static_cast<u64>(g.modulus(i)));
    }
  return validate_endo(rows, g);
}

bool is_bijection(const EndoMatrix& m) {
  const GroupSpec& g = m.spec();
  std::set<u64> image;
  for (u64 i = 0; i < g.order(); ++i) image.insert(g.index_of(apply(m, g.element_at(i))));
  return image.size() == g.order();
}

}  // namespace

TEST(ValidateEndo, Examples) {
  GroupSpec g = parse_spec("3:[2,1]");
  EXPECT_NO_THROW(mat(g, {{1, 3}, {0, 1}}));
  try {
    mat(g, {{1, 1}, {0, 1}});
    FAIL() << "expected divisibility error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos) << e.what();
  }
  GroupSpec c4 = parse_spec("2:[2]");
  EXPECT_EQ(mat(c4, {{6}}), mat(c4, {{2}}));
  EXPECT_EQ(mat(c4, {{6}}).literal(), "[[2]]");
  EXPECT_THROW(mat(g, {{1, 0}}), ValidationError);
}

TEST(ValidateEndo, MatrixLiteral) {
  EXPECT_EQ(parse_matrix("[[1,3],[0,1]]"), (std::vector<std::vector<i64>>{{1, 3}, {0, 1}}));
  EXPECT_EQ(parse_matrix(" [ [ -1 ] ] "), (std::vector<std::vector<i64>>{{-1}}));
  EXPECT_THROW(parse_matrix("[1,2]"), ParseError);
  EXPECT_THROW(parse_matrix("[[1,2],[3]"), ParseError);
}

TEST(Apply, Examples) {
  GroupSpec g = parse_spec("3:[2,1]");
  for (u64 i = 0; i < g.order(); ++i)
    EXPECT_EQ(apply(EndoMatrix::identity(g), g.element_at(i)), g.element_at(i));
  GroupSpec c4 = parse_spec("2:[2]");
  EXPECT_EQ(apply(mat(c4, {{3}}), el(c4, {1})), el(c4, {3}));
  EXPECT_EQ(apply(mat(g, {{1, 3}, {0, 1}}), el(g, {1, 1})), el(g, {4, 1}));
}

TEST(Apply, Additive) {
  std::mt19937_64 rng(11);
  for (const auto& g : oracle::specs_up_to(81, {2, 3})) {
    for (int t = 0; t < 5; ++t) {
      EndoMatrix m = random_endo(g, rng);
      for (u64 a = 0; a < g.order(); ++a)
        for (u64 b = 0; b < g.order(); ++b) {
          GroupElement x = g.element_at(a), y = g.element_at(b);
          ASSERT_EQ(apply(m, x + y), apply(m, x) + apply(m, y));
        }
    }
  }
}

TEST(Compose, Examples) {
  GroupSpec c4 = parse_spec("2:[2]");
  EndoMatrix b = mat(c4, {{3}});
  EXPECT_EQ(compose(EndoMatrix::identity(c4), b), b);
  EXPECT_EQ(compose(b, b), mat(c4, {{1}}));
}

TEST(Compose, ApplyFirstThenSecond) {
  std::mt19937_64 rng(3);
  GroupSpec g = parse_spec("3:[2,1]");
  for (int t = 0; t < 50; ++t) {
    EndoMatrix a = random_endo(g, rng), b = random_endo(g, rng);
    EndoMatrix ab = compose(a, b);
    for (u64 i = 0; i < g.order(); ++i) {
      GroupElement x = g.element_at(i);
      ASSERT_EQ(apply(ab, x), apply(b, apply(a, x)));
    }
  }
}

TEST(Compose, OrderMattersOnNonCommutingPair) {
  GroupSpec g = parse_spec("2:[1,1]");
  EndoMatrix a = mat(g, {{1, 1}, {0, 1}}), b = mat(g, {{1, 0}, {1, 1}});
  GroupElement x = el(g, {1, 0});
  EXPECT_EQ(apply(compose(a, b), x), apply(b, apply(a, x)));
  EXPECT_NE(apply(compose(a, b), x), apply(compose(b, a), x));
}

TEST(RingOps, Examples) {
  GroupSpec c4 = parse_spec("2:[2]");
  EndoMatrix delta = endo_sub(mat(c4, {{3}}), EndoMatrix::identity(c4));
  EXPECT_EQ(delta, mat(c4, {{2}}));
  EXPECT_EQ(endo_power(mat(c4, {{2}}), 2), EndoMatrix::zero(c4));
  EXPECT_EQ(endo_power(mat(c4, {{3}}), 0), EndoMatrix::identity(c4));
  EXPECT_EQ(endo_scale(2, mat(c4, {{3}})), mat(c4, {{2}}));
  EXPECT_EQ(endo_add(mat(c4, {{3}}), mat(c4, {{3}})), mat(c4, {{2}}));
}

TEST(RingOps, PointwiseOracle) {
  std::mt19937_64 rng(5);
  GroupSpec g = parse_spec("2:[3,1]");
  for (int t = 0; t < 30; ++t) {
    EndoMatrix a = random_endo(g, rng), b = random_endo(g, rng);
    i64 s = static_cast<i64>(rng() % 17) - 8;
    for (u64 i = 0; i < g.order(); ++i) {
      GroupElement x = g.element_at(i);
      ASSERT_EQ(apply(endo_add(a, b), x), apply(a, x) + apply(b, x));
      ASSERT_EQ(apply(endo_sub(a, b), x), apply(a, x) - apply(b, x));
      ASSERT_EQ(apply(endo_scale(s, a), x), smul(s, apply(a, x)));
      ASSERT_EQ(apply(endo_power(a, 3), x), apply(a, apply(a, apply(a, x))));
    }
  }
}

TEST(RingOps, HockeyStick) {
  // sum_{i<p} (1 + d)^i == sum_{j<p} C(p, j+1) d^j, both sides built by matrix arithmetic.
  std::mt19937_64 rng(13);
  GroupSpec g = parse_spec("3:[2,2]");
  const i64 p = 3;
  for (int t = 0; t < 100; ++t) {
    EndoMatrix d = random_endo(g, rng);
    EndoMatrix one_plus = endo_add(EndoMatrix::identity(g), d);
    EndoMatrix lhs = EndoMatrix::zero(g), rhs = EndoMatrix::zero(g);
    for (i64 i = 0; i < p; ++i) lhs = endo_add(lhs, endo_power(one_plus, static_cast<u64>(i)));
    for (i64 j = 0; j < p; ++j) rhs = endo_add(rhs, endo_scale(arith::binomial(p, j + 1), endo_power(d, j)));
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(Automorphism, Examples) {
  GroupSpec c4 = parse_spec("2:[2]");
  EXPECT_TRUE(is_automorphism(mat(c4, {{3}})));
  EXPECT_FALSE(is_automorphism(mat(c4, {{2}})));
  EXPECT_THROW(to_automorphism(mat(c4, {{2}})), ValidationError);
  GroupSpec g = parse_spec("3:[2,1]");
  EndoMatrix m = mat(g, {{1, 3}, {1, 1}});
  EXPECT_TRUE(is_automorphism(m));
  EXPECT_TRUE(is_bijection(m));
}

TEST(Automorphism, CriterionMatchesBijectivity) {
  std::mt19937_64 rng(17);
  for (const auto& g : oracle::specs_up_to(81, {2, 3})) {
    for (int t = 0; t < 40; ++t) {
      EndoMatrix m = random_endo(g, rng);
      ASSERT_EQ(is_automorphism(m), is_bijection(m)) << g.to_string() << " " << m.literal();
    }
  }
}

TEST(Automorphism, InverseIsExact) {
  std::mt19937_64 rng(19);
  for (const auto& g : oracle::specs_up_to(81, {2, 3})) {
    int found = 0;
    for (int t = 0; t < 200 && found < 10; ++t) {
      EndoMatrix m = random_endo(g, rng);
      if (!is_automorphism(m)) continue;
      ++found;
      Automorphism a = to_automorphism(m);
      EXPECT_TRUE(compose(a.matrix(), a.inverse_matrix()).is_identity());
      EXPECT_TRUE(compose(a.inverse_matrix(), a.matrix()).is_identity());
      for (u64 i = 0; i < g.order(); ++i) {
        GroupElement x = g.element_at(i);
        ASSERT_EQ(apply(a.inverse(), apply(a, x)), x);
      }
    }
  }
}

TEST(Automorphism, DeepExponentsLift) {
  // Several Newton steps are needed for e = 20.
  GroupSpec g(3, {20, 7});
  EndoMatrix m = mat(g, {{2, 2 * arith::ipow(3, 13)}, {5, 4}});
  Automorphism a = to_automorphism(m);
  EXPECT_TRUE(compose(a.matrix(), a.inverse_matrix()).is_identity());
}
