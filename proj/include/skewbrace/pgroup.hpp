#pragma once

// Finite abelian p-groups Z/p^e1 x ... x Z/p^er and their elements.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewbrace/arith.hpp"
#include "skewbrace/error.hpp"

namespace skewbrace {

using arith::i64;
using arith::u64;

/// Largest group order for which element sets are materialized.
inline constexpr u64 kMaterializeBound = u64{1} << 24;

class GroupElement;

/// A finite abelian p-group given by its cyclic decomposition. Cheap to copy;
/// copies share one immutable description.
class GroupSpec {
 public:
  GroupSpec(i64 p, std::vector<int> exponents) {
    if (!arith::is_prime(p))
      throw ValidationError("group spec: " + std::to_string(p) + " is not prime");
    if (exponents.empty()) throw ValidationError("group spec: empty exponent list");
    for (int e : exponents)
      if (e < 1) throw ValidationError("group spec: exponent " + std::to_string(e) + " < 1");
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    auto d = std::make_shared<Data>();
    d->p = p;
    int total = std::accumulate(exponents.begin(), exponents.end(), 0);
    auto order = arith::checked_pow(p, total);
    if (!order) throw BoundExceeded("group spec: order exceeds 2^62");
    d->order = static_cast<u64>(*order);
    d->log_order = total;
    d->exponents = std::move(exponents);
    std::size_t r = d->exponents.size();
    d->moduli.resize(r);
    d->strides.resize(r);
    for (std::size_t i = 0; i < r; ++i) d->moduli[i] = arith::ipow(p, d->exponents[i]);
    u64 stride = 1;
    for (std::size_t i = r; i-- > 0;) {
      d->strides[i] = stride;
      stride *= static_cast<u64>(d->moduli[i]);
    }
    d_ = std::move(d);
  }

  i64 prime() const { return d_->p; }
  const std::vector<int>& exponents() const { return d_->exponents; }
  std::size_t rank() const { return d_->exponents.size(); }
  int exponent(std::size_t i) const { return d_->exponents[i]; }
  /// p^{e_i}, the order of the i-th cyclic factor.
  i64 modulus(std::size_t i) const { return d_->moduli[i]; }
  u64 order() const { return d_->order; }
  int log_order() const { return d_->log_order; }
  /// log_p of the exponent of the group.
  int log_exponent() const { return d_->exponents.front(); }
  bool materializable() const { return order() <= kMaterializeBound; }

  /// Position of an element in the canonical (lexicographic) enumeration.
  u64 index_of(const GroupElement& a) const;
  GroupElement element_at(u64 index) const;
  u64 stride(std::size_t i) const { return d_->strides[i]; }

  std::string to_string() const {
    std::string s = std::to_string(prime()) + ":[";
    for (std::size_t i = 0; i < rank(); ++i) {
      if (i) s += ',';
      s += std::to_string(exponent(i));
    }
    return s + ']';
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->exponents == b.d_->exponents);
  }

 private:
  struct Data {
    i64 p = 0;
    std::vector<int> exponents;
    std::vector<i64> moduli;
    std::vector<u64> strides;
    u64 order = 1;
    int log_order = 0;
  };
  std::shared_ptr<const Data> d_;
};

inline void require_same(const GroupSpec& a, const GroupSpec& b) {
  if (!(a == b))
    throw SpecMismatch("operands belong to different groups: " + a.to_string() + " vs " +
                       b.to_string());
}

/// A residue tuple, always reduced modulo the factor orders.
class GroupElement {
 public:
  GroupElement(GroupSpec spec, std::vector<i64> coords)
      : spec_(std::move(spec)), coords_(std::move(coords)) {
    if (coords_.size() != spec_.rank())
      throw ValidationError("element " + literal() + " has wrong length for " +
                            spec_.to_string());
    for (std::size_t i = 0; i < coords_.size(); ++i)
      coords_[i] = arith::mod(coords_[i], spec_.modulus(i));
  }

  static GroupElement zero(const GroupSpec& spec) {
    return GroupElement(spec, std::vector<i64>(spec.rank(), 0));
  }
  /// The i-th standard generator (0,..,1,..,0).
  static GroupElement basis(const GroupSpec& spec, std::size_t i) {
    std::vector<i64> c(spec.rank(), 0);
    c.at(i) = 1;
    return GroupElement(spec, std::move(c));
  }

  const GroupSpec& spec() const { return spec_; }
  std::span<const i64> coords() const { return coords_; }
  i64 operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }
  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](i64 c) { return c == 0; });
  }

  std::string literal() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(coords_[i]);
    }
    return s + ')';
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.coords_ == b.coords_ && a.spec_ == b.spec_;
  }
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  GroupSpec spec_;
  std::vector<i64> coords_;
};

inline u64 GroupSpec::index_of(const GroupElement& a) const {
  require_same(*this, a.spec());
  u64 idx = 0;
  for (std::size_t i = 0; i < rank(); ++i) idx += static_cast<u64>(a[i]) * stride(i);
  return idx;
}

inline GroupElement GroupSpec::element_at(u64 index) const {
  if (index >= order()) throw ValidationError("element index out of range");
  std::vector<i64> c(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    c[i] = static_cast<i64>(index / stride(i));
    index %= stride(i);
  }
  return GroupElement(*this, std::move(c));
}

inline GroupElement add(const GroupElement& a, const GroupElement& b) {
  require_same(a.spec(), b.spec());
  std::vector<i64> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return GroupElement(a.spec(), std::move(c));
}

inline GroupElement neg(const GroupElement& a) {
  std::vector<i64> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a[i];
  return GroupElement(a.spec(), std::move(c));
}

inline GroupElement sub(const GroupElement& a, const GroupElement& b) {
  require_same(a.spec(), b.spec());
  std::vector<i64> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return GroupElement(a.spec(), std::move(c));
}

inline GroupElement smul(i64 n, const GroupElement& a) {
  std::vector<i64> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = arith::mulmod(arith::mod(n, a.spec().modulus(i)), a[i], a.spec().modulus(i));
  return GroupElement(a.spec(), std::move(c));
}

inline GroupElement operator+(const GroupElement& a, const GroupElement& b) { return add(a, b); }
inline GroupElement operator-(const GroupElement& a, const GroupElement& b) { return sub(a, b); }
inline GroupElement operator-(const GroupElement& a) { return neg(a); }

/// log_p of the additive order: max_i (e_i - v_p(a_i)), with v_p(0) = e_i.
inline int element_log_order(const GroupElement& a) {
  const GroupSpec& g = a.spec();
  int best = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int e = g.exponent(i);
    int v = a[i] == 0 ? e : std::min(e, arith::valuation(a[i], g.prime()));
    best = std::max(best, e - v);
  }
  return best;
}

inline u64 element_order(const GroupElement& a) {
  return static_cast<u64>(arith::ipow(a.spec().prime(), element_log_order(a)));
}

// ---------------------------------------------------------------------------
// Subgroups

/// A materialized subgroup: its generators and its members in canonical order.
class Subgroup {
 public:
  Subgroup(GroupSpec spec, std::vector<GroupElement> generators, std::vector<u64> indices)
      : spec_(std::move(spec)), generators_(std::move(generators)), indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  }

  const GroupSpec& spec() const { return spec_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  /// Canonical indices of the members, sorted.
  const std::vector<u64>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    out.reserve(indices_.size());
    for (u64 i : indices_) out.push_back(spec_.element_at(i));
    return out;
  }
  bool contains_index(u64 idx) const {
    return std::binary_search(indices_.begin(), indices_.end(), idx);
  }
  bool contains(const GroupElement& a) const { return contains_index(spec_.index_of(a)); }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.spec_ == b.spec_ && a.indices_ == b.indices_;
  }

 private:
  GroupSpec spec_;
  std::vector<GroupElement> generators_;
  std::vector<u64> indices_;
};

inline void require_materializable(const GroupSpec& g, const char* what) {
  if (!g.materializable())
    throw BoundExceeded(std::string(what) + ": group " + g.to_string() + " has more than 2^24 elements");
}

/// {a : element_order(a) divides p^i}.
inline Subgroup omega_set(const GroupSpec& g, int i) {
  std::vector<GroupElement> gens;
  std::vector<i64> steps(g.rank());
  u64 count = 1;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    int shift = std::max(0, g.exponent(j) - i);
    steps[j] = arith::ipow(g.prime(), shift);
    count *= static_cast<u64>(g.modulus(j) / steps[j]);
    if (steps[j] < g.modulus(j)) gens.push_back(smul(steps[j], GroupElement::basis(g, j)));
  }
  if (count > kMaterializeBound) throw BoundExceeded("omega_set: too many elements");
  std::vector<u64> idx;
  idx.reserve(count);
  std::vector<i64> c(g.rank(), 0);
  for (u64 n = 0; n < count; ++n) {
    u64 v = 0;
    for (std::size_t j = 0; j < g.rank(); ++j) v += static_cast<u64>(c[j]) * g.stride(j);
    idx.push_back(v);
    for (std::size_t j = g.rank(); j-- > 0;) {
      c[j] += steps[j];
      if (c[j] < g.modulus(j)) break;
      c[j] = 0;
    }
  }
  return Subgroup(g, std::move(gens), std::move(idx));
}

inline std::size_t rank_abelian(const GroupSpec& g) { return g.rank(); }

inline bool is_small_rank(const GroupSpec& g) {
  return static_cast<i64>(rank_abelian(g)) < g.prime() - 1;
}

namespace detail {

inline u64 add_index(const GroupSpec& g, u64 a, u64 b) {
  u64 out = 0;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    u64 m = static_cast<u64>(g.modulus(i));
    u64 s = g.stride(i);
    u64 x = (a / s) % m, y = (b / s) % m;
    out += ((x + y) % m) * s;
  }
  return out;
}

}  // namespace detail

/// Smallest subgroup containing gens.
inline Subgroup span(const GroupSpec& g, std::span<const GroupElement> gens) {
  require_materializable(g, "span");
  std::vector<u64> members{0};
  std::vector<char> seen(g.order(), 0);
  seen[0] = 1;
  for (const GroupElement& x : gens) {
    require_same(g, x.spec());
    u64 xi = g.index_of(x);
    if (seen[xi]) continue;
    // Adjoin multiples of x to every member until the coset repeats.
    std::vector<u64> layer = members;
    for (;;) {
      std::vector<u64> next;
      next.reserve(layer.size());
      bool fresh = false;
      for (u64 m : layer) {
        u64 s = detail::add_index(g, m, xi);
        next.push_back(s);
        if (!seen[s]) fresh = true;
      }
      if (!fresh) break;
      for (u64 s : next) {
        seen[s] = 1;
        members.push_back(s);
      }
      layer = std::move(next);
    }
  }
  return Subgroup(g, std::vector<GroupElement>(gens.begin(), gens.end()), std::move(members));
}

inline Subgroup span(const GroupSpec& g, std::initializer_list<GroupElement> gens) {
  return span(g, std::span<const GroupElement>(gens.begin(), gens.size()));
}

/// Every subgroup of g, ordered by size then by member list.
inline std::vector<Subgroup> all_subgroups(const GroupSpec& g, std::size_t max_count = 100000) {
  if (g.order() > 4096) throw BoundExceeded("all_subgroups: group order above 4096");
  std::set<std::vector<u64>> seen;
  std::vector<Subgroup> out;
  out.push_back(span(g, std::span<const GroupElement>{}));
  seen.insert(out.back().indices());
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::vector<GroupElement> base = out[k].generators();
    for (u64 idx = 0; idx < g.order(); ++idx) {
      if (out[k].contains_index(idx)) continue;
      auto gens = base;
      gens.push_back(g.element_at(idx));
      Subgroup s = span(g, gens);
      if (seen.insert(s.indices()).second) {
        out.push_back(std::move(s));
        if (out.size() > max_count) throw BoundExceeded("all_subgroups: too many subgroups");
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.indices() < b.indices();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Order statistics

/// element order -> number of elements of exactly that order.
using OrderHistogram = std::map<u64, u64>;

/// Closed form: |Omega_i| = p^{sum_j min(e_j, i)}.
inline OrderHistogram order_histogram(const GroupSpec& g) {
  require_materializable(g, "order_histogram");
  OrderHistogram h;
  u64 prev = 0;
  for (int i = 0; i <= g.log_exponent(); ++i) {
    int s = 0;
    for (int e : g.exponents()) s += std::min(e, i);
    u64 omega = static_cast<u64>(arith::ipow(g.prime(), s));
    h[static_cast<u64>(arith::ipow(g.prime(), i))] = omega - prev;
    prev = omega;
  }
  return h;
}

/// Exponents of the unique abelian p-group with histogram h (empty for the
/// trivial group).
inline std::vector<int> abelian_invariants_from_histogram(const OrderHistogram& h) {
  auto fail = [](const std::string& why) {
    return ValidationError("histogram not realizable by an abelian p-group: " + why);
  };
  if (h.empty() || h.begin()->first != 1 || h.begin()->second != 1)
    throw fail("count at order 1 must be exactly 1");
  if (h.size() == 1) return {};
  u64 q = std::next(h.begin())->first;
  u64 p = 2;
  while (q % p != 0) ++p;
  int top = 0;
  for (const auto& [order, count] : h) {
    auto e = arith::log_exact(order, p);
    if (!e) throw fail("order " + std::to_string(order) + " is not a power of " + std::to_string(p));
    top = std::max(top, *e);
  }
  // d_i = #{j : e_j >= i} = log_p |Omega_i| - log_p |Omega_{i-1}|.
  std::vector<int> d;
  u64 omega = 1;
  int prev_log = 0;
  for (int i = 1; i <= top; ++i) {
    auto it = h.find(static_cast<u64>(arith::ipow(static_cast<i64>(p), i)));
    omega += it == h.end() ? 0 : it->second;
    auto lg = arith::log_exact(omega, p);
    if (!lg) throw fail("|Omega_" + std::to_string(i) + "| is not a power of p");
    int di = *lg - prev_log;
    if (di <= 0 || (!d.empty() && di > d.back())) throw fail("layer sizes not non-increasing");
    d.push_back(di);
    prev_log = *lg;
  }
  std::vector<int> exps;
  for (int j = 0; j < d.front(); ++j) {
    int e = 0;
    for (int di : d)
      if (di > j) ++e;
    exps.push_back(e);
  }
  if (order_histogram(GroupSpec(static_cast<i64>(p), exps)) != h) throw fail("counts inconsistent");
  return exps;
}

inline std::string format_histogram(const OrderHistogram& h) {
  std::string s;
  for (const auto& [order, count] : h) {
    if (!s.empty()) s += ',';
    s += std::to_string(order) + ':' + std::to_string(count);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Text forms

namespace detail {

inline std::string strip_spaces(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  return s;
}

inline i64 parse_int(std::string_view s, std::string_view context) {
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("bad integer '" + std::string(s) + "' in " + std::string(context));
  return v;
}

/// Splits "a,b,c" (no brackets) into integers; "" gives an empty list.
inline std::vector<i64> parse_int_list(std::string_view s, std::string_view context) {
  std::vector<i64> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = s.find(',', start);
    out.push_back(parse_int(s.substr(start, comma - start), context));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Parses `p:[e1,...,er]`.
inline GroupSpec parse_spec(std::string_view text) {
  std::string s = detail::strip_spaces(text);
  auto colon = s.find(':');
  if (colon == std::string::npos || s.size() < colon + 3 || s[colon + 1] != '[' || s.back() != ']')
    throw ParseError("group spec must look like p:[e1,...,er], got '" + std::string(text) + "'");
  i64 p = detail::parse_int(std::string_view(s).substr(0, colon), "group spec");
  auto list = detail::parse_int_list(std::string_view(s).substr(colon + 2, s.size() - colon - 3),
                                     "group spec");
  if (list.empty()) throw ParseError("group spec has no exponents");
  std::vector<int> exps;
  for (i64 e : list) {
    if (e > 62) throw BoundExceeded("group spec: exponent too large");
    exps.push_back(static_cast<int>(e));
  }
  try {
    return GroupSpec(p, std::move(exps));
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

/// Parses `(a1,...,ar)`; coordinates are reduced.
inline GroupElement parse_element(std::string_view text, const GroupSpec& g) {
  std::string s = detail::strip_spaces(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw ParseError("element literal must look like (a1,...,ar), got '" + std::string(text) + "'");
  auto c = detail::parse_int_list(std::string_view(s).substr(1, s.size() - 2), "element literal");
  if (c.size() != g.rank())
    throw ParseError("element literal " + s + " has wrong length for " + g.to_string());
  return GroupElement(g, std::move(c));
}

}  // namespace skewbrace
