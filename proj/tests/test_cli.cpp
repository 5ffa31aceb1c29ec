#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  CliRun r;
  FILE* f = popen((std::string(SKEWBRACE_CLI) + " " + args + " 2>&1").c_str(), "r");
  if (!f) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), got);
  int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const CliRun& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

int tsv_rows(const CliRun& r) {
  std::istringstream in(r.out);
  std::string line;
  int n = -1;  // header
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("skewbrace-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, GroupInfo) {
  CliRun a = run("--format tsv group info 3:[2,1]");
  EXPECT_EQ(a.code, 0);
  EXPECT_TRUE(has(a, "3:[2,1]\t27\t9\t2\tno\t")) << a.out;
  CliRun b = run("--format tsv group info 3:[3]");
  EXPECT_EQ(b.code, 0);
  EXPECT_TRUE(has(b, "\t1\tyes\t")) << b.out;
  EXPECT_EQ(run("group info 4:[1]").code, 2);
  EXPECT_EQ(run("group info 3:[0]").code, 2);
  CliRun n = run("--format tsv group info 3:[1,2]");
  EXPECT_EQ(n.code, 0);
  EXPECT_TRUE(has(n, "3:[2,1]\t27\t")) << n.out;
}

TEST_F(Cli, Enumerate) {
  EXPECT_EQ(tsv_rows(run("--format tsv enumerate 2:[2]")), 2);
  CliRun k = run("--format tsv enumerate 2:[1,1]");
  EXPECT_EQ(tsv_rows(k), 4);
  std::size_t c4 = 0;
  for (std::size_t pos = 0; (pos = k.out.find("1:1,2:1,4:2", pos)) != std::string::npos; ++pos) ++c4;
  EXPECT_EQ(c4, 3u);
  CliRun big = run("enumerate 3:[1,1,1,1]");
  EXPECT_EQ(big.code, 3);
  EXPECT_EQ(run("--max-aut 20000 --format tsv enumerate 3:[1,1,1]").code, 0);
  EXPECT_EQ(run("enumerate").code, 2);
}

TEST_F(Cli, Examples) {
  CliRun a = run("example --p 3 --k 2");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_TRUE(has(a, "result: PASS"));
  CliRun b = run("--format tsv example --p 2 --k 2");
  EXPECT_EQ(b.code, 0) << b.out;
  EXPECT_TRUE(has(b, "clause1_non_abelian\tpaper-gap\tcircle group abelian"));
  CliRun c = run("--format tsv example --p 3 --k 1");
  EXPECT_EQ(c.code, 0) << c.out;
  EXPECT_TRUE(has(c, "\tnote\t")) << c.out;
  EXPECT_EQ(run("example --p 4 --k 2").code, 2);
  EXPECT_EQ(run("example --p 3 --k 0").code, 2);
}

TEST_F(Cli, VerifyEmittedExample) {
  std::string file = (dir / "e.txt").string();
  ASSERT_EQ(run("example --p 3 --k 2 --emit " + file).code, 0);
  CliRun v = run("--format tsv verify " + file);
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(has(v, "additive_histogram\tinfo\t1:1,3:8,9:72"));
  EXPECT_TRUE(has(v, "circle_histogram\tinfo\t1:1,3:62,9:18"));
}

TEST_F(Cli, VerifyCorruptedTable) {
  ASSERT_EQ(run("enumerate 2:[2] --emit-dir " + dir.string()).code, 0);
  fs::path file = dir / "brace-0002.txt";
  std::stringstream text;
  text << std::ifstream(file).rdbuf();
  std::string s = text.str();
  std::size_t at = s.find("(3) [[3]]");
  ASSERT_NE(at, std::string::npos) << s;
  s.replace(at, 9, "(3) [[1]]");
  std::ofstream(file) << s;
  CliRun v = run("--format tsv verify " + file.string());
  EXPECT_EQ(v.code, 1) << v.out;
  EXPECT_TRUE(has(v, "gamma_validation\tfail")) << v.out;
  EXPECT_TRUE(has(v, "witness h=")) << v.out;
}

TEST_F(Cli, VerifyTrivialAndMalformed) {
  fs::path file = dir / "t.txt";
  std::ofstream(file) << "brace-v1\ngroup 3:[2]\ngamma kernelhom\nc (0) mod 3^0\nA [[1]]\n";
  CliRun v = run("--format tsv verify " + file.string());
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(has(v, "additive_histogram\tinfo\t1:1,3:2,9:6"));
  EXPECT_TRUE(has(v, "circle_histogram\tinfo\t1:1,3:2,9:6"));
  std::ofstream(file) << "brace-v1\ngroup 3:[2]\ngamma nonsense\n";
  EXPECT_EQ(run("verify " + file.string()).code, 2);
  EXPECT_EQ(run("verify " + (dir / "missing.txt").string()).code, 2);
}

TEST_F(Cli, SameSeedSameOutput) {
  CliRun a = run("--format tsv --seed 1 example --p 5 --k 2");
  CliRun b = run("--format tsv --seed 1 example --p 5 --k 2");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}
