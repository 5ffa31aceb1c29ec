#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace skewbrace;

namespace {

BraceFile parse(const std::string& text) {
  std::istringstream in(text);
  return read_brace(in);
}

}  // namespace

TEST(BraceIo, KernelHomCanonicalForm) {
  ExampleBrace ex = build_example_brace(3, 2);
  std::string text = brace_to_string(ex.brace.gamma());
  EXPECT_EQ(text,
            "brace-v1\n"
            "group 3:[2,2]\n"
            "gamma kernelhom\n"
            "c (1,1) mod 3^1\n"
            "A [[0,8],[1,8]]\n");
  BraceFile f = parse(text);
  EXPECT_EQ(f.spec, ex.ring.spec());
  EXPECT_EQ(brace_to_string(f.gamma), text);
}

TEST(BraceIo, TableRoundTripOnEnumeratedBraces) {
  for (const char* s : {"2:[2]", "2:[1,1]", "2:[2,1]", "3:[2]"}) {
    for (const auto& n : enumerate_regular_subgroups(parse_spec(s))) {
      Brace b = subgroup_to_gamma(n);
      std::string text = brace_to_string(b.gamma());
      BraceFile f = parse(text);
      EXPECT_EQ(brace_to_string(f.gamma), text);
      for (u64 i = 0; i < b.order(); ++i) ASSERT_EQ(f.gamma.at_index(i), b.gamma().at_index(i));
    }
  }
}

TEST(BraceIo, CommentsBlanksOrderAndReduction) {
  std::string text =
      "# Z/4 with gamma(odd) = -1\n"
      "brace-v1\n"
      "\n"
      "group 2:[2]   # cyclic of order 4\n"
      "gamma table\n"
      "(3) [[-1]]\n"
      "(0) [[1]]\n"
      "(2) [[5]]\n"
      "(1) [[3]]\n";
  BraceFile f = parse(text);
  EXPECT_EQ(brace_to_string(f.gamma),
            "brace-v1\ngroup 2:[2]\ngamma table\n(0) [[1]]\n(1) [[3]]\n(2) [[1]]\n(3) [[3]]\n");
  EXPECT_TRUE(validate_gamma(f.spec, f.gamma).passed());
}

TEST(BraceIo, TrivialGammaFile) {
  BraceFile f = parse("brace-v1\ngroup 3:[2]\ngamma kernelhom\nc (0) mod 3^0\nA [[1]]\n");
  Brace b = Brace::create(f.spec, f.gamma);
  EXPECT_EQ(order_histogram_circle(b), order_histogram(f.spec));
}

TEST(BraceIo, CorruptedTableFailsValidation) {
  ExampleBrace ex = build_example_brace(2, 2);
  GammaFunction table = GammaFunction::table(ex.ring.spec(), std::vector<Automorphism>{
                                                                 ex.brace.gamma().at_index(0),
                                                                 ex.brace.gamma().at_index(1),
                                                                 ex.brace.gamma().at_index(2),
                                                                 ex.brace.gamma().at_index(3),
                                                             });
  std::string text = brace_to_string(table);
  ASSERT_NE(text.find("(3) [[3]]"), std::string::npos);
  text.replace(text.find("(3) [[3]]"), 9, "(3) [[1]]");
  BraceFile f = parse(text);
  GammaValidation v = validate_gamma(f.spec, f.gamma);
  EXPECT_FALSE(v.passed());
  EXPECT_TRUE(v.witness);
}

TEST(BraceIo, MalformedInputs) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("brace-v2\ngroup 2:[1]\ngamma table\n(0) [[1]]\n(1) [[1]]\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 4:[1]\ngamma table\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 2:[1]\ngamma fancy\n"), ParseError);
  // Missing row, duplicate row, bad matrix, non-invertible matrix.
  EXPECT_THROW(parse("brace-v1\ngroup 2:[1]\ngamma table\n(0) [[1]]\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 2:[1]\ngamma table\n(0) [[1]]\n(0) [[1]]\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 2:[1]\ngamma table\n(0) [[1]]\n(1) [1]\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 2:[1]\ngamma table\n(0) [[1]]\n(1) [[2]]\n"), ParseError);
  // Kernel-hom: wrong modulus base, wrong length, A not of order p^m.
  EXPECT_THROW(parse("brace-v1\ngroup 2:[2]\ngamma kernelhom\nc (1) mod 3^1\nA [[3]]\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 2:[2]\ngamma kernelhom\nc (1,1) mod 2^1\nA [[3]]\n"), ParseError);
  EXPECT_THROW(parse("brace-v1\ngroup 2:[2]\ngamma kernelhom\nc (1) mod 2^0\nA [[3]]\n"), ParseError);
}

TEST(BraceIo, ErrorsNameTheLine) {
  try {
    parse("brace-v1\ngroup 2:[1]\ngamma table\n(0) [[1]]\n\n(1) [[2]]\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos) << e.what();
  }
}

TEST(BraceIo, TableRejectedAboveBound) {
  EXPECT_THROW(parse("brace-v1\ngroup 2:[13]\ngamma table\n"), BoundExceeded);
}
