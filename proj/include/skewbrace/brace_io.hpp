#pragma once

// brace-v1 text format.
//
//   brace-v1
//   group p:[e1,...,er]
//   gamma table                      | gamma kernelhom
//   (coords) [[matrix]]   x |G|      | c (c1,...,cr) mod p^m
//                                    | A [[matrix]]
//
// Blank lines and '#' comments are skipped. Table rows may come in any order
// but must cover every element exactly once. The writer emits canonical
// element order and reduced entries, so write(read(write(x))) == write(x).
// Reading does not validate the functional equation; see validate_gamma.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "skewbrace/gamma.hpp"

namespace skewbrace {

struct BraceFile {
  GroupSpec spec;
  GammaFunction gamma;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) out.emplace_back(no, line);
  }
  return out;
}

inline ParseError line_error(std::size_t no, const std::string& msg) {
  return ParseError("line " + std::to_string(no) + ": " + msg);
}

inline std::string after_keyword(const std::pair<std::size_t, std::string>& line, const std::string& kw) {
  const std::string& s = line.second;
  if (s.size() <= kw.size() || s.compare(0, kw.size(), kw) != 0 || (s[kw.size()] != ' ' && s[kw.size()] != '\t'))
    throw line_error(line.first, "expected '" + kw + " ...', got '" + s + "'");
  return trim(s.substr(kw.size()));
}

template <class F>
auto at_line(std::size_t no, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw line_error(no, e.what());
  } catch (const ValidationError& e) {
    throw line_error(no, e.what());
  }
}

}  // namespace detail

inline BraceFile read_brace(std::istream& in) {
  auto lines = detail::content_lines(in);
  if (lines.empty() || lines[0].second != "brace-v1") throw ParseError("missing 'brace-v1' header");
  if (lines.size() < 3) throw ParseError("truncated brace file");
  GroupSpec g = detail::at_line(lines[1].first, [&] { return parse_spec(detail::after_keyword(lines[1], "group")); });
  std::string kind = detail::after_keyword(lines[2], "gamma");

  if (kind == "table") {
    if (g.order() > kTableBound)
      throw BoundExceeded("table encoding is limited to groups of order <= 4096; use kernelhom");
    const u64 n = g.order();
    if (lines.size() != 3 + n)
      throw ParseError("gamma table has " + std::to_string(lines.size() - 3) + " rows, expected " +
                       std::to_string(n));
    std::vector<std::optional<Automorphism>> vals(n);
    for (u64 k = 0; k < n; ++k) {
      const auto& [no, s] = lines[3 + k];
      detail::at_line(no, [&] {
        auto close = s.find(')');
        if (s.empty() || s[0] != '(' || close == std::string::npos)
          throw ParseError("expected '(coords) [[matrix]]'");
        GroupElement x = parse_element(s.substr(0, close + 1), g);
        u64 i = g.index_of(x);
        if (vals[i]) throw ParseError("duplicate row for element " + x.literal());
        EndoMatrix m = validate_endo(parse_matrix(detail::trim(s.substr(close + 1))), g);
        if (!is_automorphism(m)) throw ValidationError("matrix for " + x.literal() + " is not invertible");
        vals[i] = to_automorphism(m);
        return 0;
      });
    }
    std::vector<Automorphism> out;
    out.reserve(n);
    for (auto& v : vals) out.push_back(std::move(*v));
    return {g, GammaFunction::table(g, out)};
  }

  if (kind == "kernelhom") {
    if (lines.size() != 5) throw ParseError("gamma kernelhom expects exactly two lines: 'c ...' and 'A ...'");
    std::vector<i64> coeffs;
    int m = 0;
    detail::at_line(lines[3].first, [&] {
      std::string rest = detail::after_keyword(lines[3], "c");
      auto mod = rest.find(" mod ");
      if (mod == std::string::npos) throw ParseError("expected 'c (c1,...,cr) mod p^m'");
      std::string lit = detail::trim(rest.substr(0, mod));
      if (lit.size() < 2 || lit.front() != '(' || lit.back() != ')')
        throw ParseError("coefficients must look like (c1,...,cr)");
      coeffs = detail::parse_int_list(std::string_view(lit).substr(1, lit.size() - 2), "coefficients");
      if (coeffs.size() != g.rank()) throw ParseError("coefficient vector has wrong length");
      std::string pm = detail::trim(rest.substr(mod + 5));
      auto caret = pm.find('^');
      if (caret == std::string::npos) throw ParseError("modulus must be written p^m");
      if (detail::parse_int(pm.substr(0, caret), "modulus") != g.prime())
        throw ParseError("modulus base must be the group prime " + std::to_string(g.prime()));
      m = static_cast<int>(detail::parse_int(pm.substr(caret + 1), "modulus exponent"));
      return 0;
    });
    EndoMatrix a = detail::at_line(lines[4].first, [&] {
      EndoMatrix mat = validate_endo(parse_matrix(detail::after_keyword(lines[4], "A")), g);
      if (!is_automorphism(mat)) throw ValidationError("A is not invertible");
      return mat;
    });
    GammaFunction gamma = detail::at_line(lines[3].first, [&] {
      return GammaFunction::kernel_hom(g, std::move(coeffs), m, to_automorphism(a));
    });
    return {g, std::move(gamma)};
  }
  throw detail::line_error(lines[2].first, "unknown gamma encoding '" + kind + "'");
}

inline BraceFile read_brace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_brace(in);
}

inline void write_brace(std::ostream& out, const GammaFunction& gamma) {
  const GroupSpec& g = gamma.spec();
  out << "brace-v1\n";
  out << "group " << g.to_string() << "\n";
  if (gamma.encoding() == GammaFunction::Encoding::table) {
    out << "gamma table\n";
    for (u64 i = 0; i < g.order(); ++i)
      out << g.element_at(i).literal() << ' ' << gamma.at_index(i).matrix().literal() << "\n";
    return;
  }
  out << "gamma kernelhom\n";
  const i64 q = gamma.functional_modulus();
  out << "c (";
  for (std::size_t i = 0; i < gamma.coeffs().size(); ++i) {
    if (i) out << ',';
    out << arith::mod(gamma.coeffs()[i], q);
  }
  out << ") mod " << g.prime() << '^' << gamma.mod_exp() << "\n";
  out << "A " << gamma.generator().matrix().literal() << "\n";
}

inline std::string brace_to_string(const GammaFunction& gamma) {
  std::ostringstream os;
  write_brace(os, gamma);
  return os.str();
}

inline void write_brace_file(const std::string& path, const GammaFunction& gamma) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_brace(out, gamma);
}

}  // namespace skewbrace
