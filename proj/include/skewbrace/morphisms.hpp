#pragma once

// Endomorphisms of a finite abelian p-group as integer matrices.
//
// Entry m(i,j) is the coefficient of the map from factor j into factor i, so
// (M a)_i = sum_j m(i,j) a_j mod p^{e_i}. A matrix is a well-defined
// endomorphism iff p^{max(0, e_i - e_j)} divides m(i,j); entries reduced mod
// p^{e_i} are then a canonical representation, and matrix equality is
// equality of maps.
//
// Composition follows the right-action convention: x^{AB} = (x^A)^B, i.e.
// apply(compose(A, B), x) == apply(B, apply(A, x)).

#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewbrace/pgroup.hpp"

namespace skewbrace {

class EndoMatrix {
 public:
  /// Entries must already be reduced and satisfy the divisibility constraint;
  /// use validate_endo for untrusted input.
  static EndoMatrix trusted(GroupSpec spec, std::vector<i64> entries) {
    return EndoMatrix(std::move(spec), std::move(entries));
  }

  static EndoMatrix identity(const GroupSpec& g) {
    std::vector<i64> m(g.rank() * g.rank(), 0);
    for (std::size_t i = 0; i < g.rank(); ++i) m[i * g.rank() + i] = 1;
    return EndoMatrix(g, std::move(m));
  }
  static EndoMatrix zero(const GroupSpec& g) {
    return EndoMatrix(g, std::vector<i64>(g.rank() * g.rank(), 0));
  }

  const GroupSpec& spec() const { return spec_; }
  std::size_t dim() const { return spec_.rank(); }
  i64 at(std::size_t i, std::size_t j) const { return m_[i * dim() + j]; }
  const std::vector<i64>& entries() const { return m_; }
  bool is_identity() const { return *this == identity(spec_); }

  std::string literal() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dim(); ++i) {
      if (i) s += ',';
      s += '[';
      for (std::size_t j = 0; j < dim(); ++j) {
        if (j) s += ',';
        s += std::to_string(at(i, j));
      }
      s += ']';
    }
    return s + ']';
  }

  friend bool operator==(const EndoMatrix& a, const EndoMatrix& b) {
    return a.m_ == b.m_ && a.spec_ == b.spec_;
  }
  friend std::strong_ordering operator<=>(const EndoMatrix& a, const EndoMatrix& b) {
    return a.m_ <=> b.m_;
  }

 private:
  EndoMatrix(GroupSpec spec, std::vector<i64> m) : spec_(std::move(spec)), m_(std::move(m)) {}

  GroupSpec spec_;
  std::vector<i64> m_;
};

/// Reduces and validates a raw integer matrix as an endomorphism of g.
inline EndoMatrix validate_endo(const std::vector<std::vector<i64>>& rows, const GroupSpec& g) {
  const std::size_t r = g.rank();
  if (rows.size() != r)
    throw ValidationError("matrix has " + std::to_string(rows.size()) + " rows, expected " +
                          std::to_string(r));
  std::vector<i64> m(r * r);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != r)
      throw ValidationError("matrix row " + std::to_string(i + 1) + " has wrong length");
    for (std::size_t j = 0; j < r; ++j) {
      i64 v = arith::mod(rows[i][j], g.modulus(i));
      int gap = g.exponent(i) - g.exponent(j);
      if (gap > 0 && v % arith::ipow(g.prime(), gap) != 0)
        throw ValidationError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") = " + std::to_string(rows[i][j]) + " must be divisible by " +
                              std::to_string(arith::ipow(g.prime(), gap)));
      m[i * r + j] = v;
    }
  }
  return EndoMatrix::trusted(g, std::move(m));
}

inline GroupElement apply(const EndoMatrix& m, const GroupElement& a) {
  require_same(m.spec(), a.spec());
  const GroupSpec& g = m.spec();
  std::vector<i64> out(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < g.rank(); ++j) s += static_cast<__int128>(m.at(i, j)) * a[j];
    out[i] = static_cast<i64>(s % g.modulus(i));
  }
  return GroupElement(g, std::move(out));
}

/// The map x -> apply(b, apply(a, x)); as matrices this is the product b*a.
inline EndoMatrix compose(const EndoMatrix& a, const EndoMatrix& b) {
  require_same(a.spec(), b.spec());
  const GroupSpec& g = a.spec();
  const std::size_t r = g.rank();
  std::vector<i64> m(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      __int128 s = 0;
      for (std::size_t k = 0; k < r; ++k) s += static_cast<__int128>(b.at(i, k)) * a.at(k, j);
      m[i * r + j] = static_cast<i64>(s % g.modulus(i));
    }
  return EndoMatrix::trusted(g, std::move(m));
}

inline EndoMatrix endo_add(const EndoMatrix& a, const EndoMatrix& b) {
  require_same(a.spec(), b.spec());
  const GroupSpec& g = a.spec();
  std::vector<i64> m(a.entries().size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = (a.entries()[k] + b.entries()[k]) % g.modulus(k / g.rank());
  return EndoMatrix::trusted(g, std::move(m));
}

inline EndoMatrix endo_scale(i64 n, const EndoMatrix& a) {
  const GroupSpec& g = a.spec();
  std::vector<i64> m(a.entries().size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    i64 mod = g.modulus(k / g.rank());
    m[k] = arith::mulmod(arith::mod(n, mod), a.entries()[k], mod);
  }
  return EndoMatrix::trusted(g, std::move(m));
}

inline EndoMatrix endo_sub(const EndoMatrix& a, const EndoMatrix& b) {
  return endo_add(a, endo_scale(-1, b));
}

inline EndoMatrix endo_power(const EndoMatrix& a, u64 n) {
  EndoMatrix result = EndoMatrix::identity(a.spec());
  EndoMatrix base = a;
  while (n > 0) {
    if (n & 1) result = compose(result, base);
    base = compose(base, base);
    n >>= 1;
  }
  return result;
}

namespace detail {

/// Gauss-Jordan over F_p; returns the inverse of (m mod p) or empty if singular.
inline std::vector<i64> inverse_mod_p(const EndoMatrix& m) {
  const i64 p = m.spec().prime();
  const std::size_t r = m.dim();
  std::vector<i64> a(r * 2 * r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) a[i * 2 * r + j] = m.at(i, j) % p;
    a[i * 2 * r + r + i] = 1;
  }
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && a[piv * 2 * r + col] == 0) ++piv;
    if (piv == r) return {};
    for (std::size_t j = 0; j < 2 * r; ++j) std::swap(a[col * 2 * r + j], a[piv * 2 * r + j]);
    i64 inv = arith::inverse_mod_prime(a[col * 2 * r + col], p);
    for (std::size_t j = 0; j < 2 * r; ++j) a[col * 2 * r + j] = a[col * 2 * r + j] * inv % p;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || a[i * 2 * r + col] == 0) continue;
      i64 f = a[i * 2 * r + col];
      for (std::size_t j = 0; j < 2 * r; ++j)
        a[i * 2 * r + j] = arith::mod(a[i * 2 * r + j] - f * a[col * 2 * r + j], p);
    }
  }
  std::vector<i64> out(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) out[i * r + j] = a[i * 2 * r + r + j];
  return out;
}

}  // namespace detail

/// Invertibility of the induced map on G/pG.
inline bool is_automorphism(const EndoMatrix& m) { return !detail::inverse_mod_p(m).empty(); }

/// An endomorphism certified invertible, with its inverse.
class Automorphism {
 public:
  const EndoMatrix& matrix() const { return fwd_; }
  const EndoMatrix& inverse_matrix() const { return inv_; }
  const GroupSpec& spec() const { return fwd_.spec(); }
  Automorphism inverse() const { return Automorphism(inv_, fwd_); }
  bool is_identity() const { return fwd_.is_identity(); }

  static Automorphism identity(const GroupSpec& g) {
    return Automorphism(EndoMatrix::identity(g), EndoMatrix::identity(g));
  }
  /// Caller guarantees compose(fwd, inv) is the identity.
  static Automorphism trusted(EndoMatrix fwd, EndoMatrix inv) {
    return Automorphism(std::move(fwd), std::move(inv));
  }

  friend bool operator==(const Automorphism& a, const Automorphism& b) { return a.fwd_ == b.fwd_; }
  friend std::strong_ordering operator<=>(const Automorphism& a, const Automorphism& b) {
    return a.fwd_ <=> b.fwd_;
  }

 private:
  Automorphism(EndoMatrix fwd, EndoMatrix inv) : fwd_(std::move(fwd)), inv_(std::move(inv)) {}

  EndoMatrix fwd_;
  EndoMatrix inv_;
};

/// Newton lift X <- X(2 - MX) from the inverse mod p; the error I - MX squares
/// each step, so ceil(log2 max e_i) steps reach p^{e_1} G = 0.
inline Automorphism to_automorphism(const EndoMatrix& m) {
  auto x0 = detail::inverse_mod_p(m);
  if (x0.empty()) throw ValidationError("matrix " + m.literal() + " is not an automorphism");
  const GroupSpec& g = m.spec();
  EndoMatrix x = EndoMatrix::trusted(g, std::move(x0));
  EndoMatrix two = endo_scale(2, EndoMatrix::identity(g));
  for (int reach = 1; reach < g.log_exponent(); reach *= 2) {
    // matrix product X * (2 - M X) is compose(2 - compose(X, M), X)
    EndoMatrix mx = compose(x, m);
    x = compose(endo_sub(two, mx), x);
  }
  if (!compose(x, m).is_identity() || !compose(m, x).is_identity())
    throw InvariantError("inverse lift failed for " + m.literal());
  return Automorphism::trusted(m, std::move(x));
}

inline GroupElement apply(const Automorphism& a, const GroupElement& x) { return apply(a.matrix(), x); }

inline Automorphism compose(const Automorphism& a, const Automorphism& b) {
  return Automorphism::trusted(compose(a.matrix(), b.matrix()),
                               compose(b.inverse_matrix(), a.inverse_matrix()));
}

inline Automorphism aut_power(const Automorphism& a, u64 n) {
  return Automorphism::trusted(endo_power(a.matrix(), n), endo_power(a.inverse_matrix(), n));
}

/// Parses `[[m11,...,m1r],...,[mr1,...,mrr]]` into raw rows.
inline std::vector<std::vector<i64>> parse_matrix(std::string_view text) {
  std::string s = detail::strip_spaces(text);
  if (s.size() < 4 || s.substr(0, 2) != "[[" || s.substr(s.size() - 2) != "]]")
    throw ParseError("matrix literal must look like [[...],...,[...]], got '" + std::string(text) + "'");
  std::string_view body(s);
  body = body.substr(1, body.size() - 2);  // [..],[..]
  std::vector<std::vector<i64>> rows;
  std::size_t pos = 0;
  while (pos < body.size()) {
    if (body[pos] != '[') throw ParseError("malformed matrix literal '" + s + "'");
    std::size_t close = body.find(']', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated matrix row in '" + s + "'");
    rows.push_back(detail::parse_int_list(body.substr(pos + 1, close - pos - 1), "matrix literal"));
    pos = close + 1;
    if (pos < body.size()) {
      if (body[pos] != ',') throw ParseError("malformed matrix literal '" + s + "'");
      ++pos;
    }
  }
  return rows;
}

}  // namespace skewbrace
