#pragma once

// The holomorph Hol(G) = Aut(G) x| G acting on G by x -> x^phi + t, and its
// regular subgroups, which correspond one-to-one with gamma functions on G:
// N = { nu(g) = (gamma(g), g) }.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skewbrace/brace.hpp"
#include "skewbrace/gamma.hpp"
#include "skewbrace/parallel.hpp"

namespace skewbrace {

/// The permutation x -> apply(phi, x) + t of G.
class HolElement {
 public:
  HolElement(Automorphism phi, GroupElement t) : phi_(std::move(phi)), t_(std::move(t)) {
    require_same(phi_.spec(), t_.spec());
  }

  static HolElement identity(const GroupSpec& g) {
    return HolElement(Automorphism::identity(g), GroupElement::zero(g));
  }
  /// Right translation x -> x + g.
  static HolElement rho(const GroupElement& g) { return HolElement(Automorphism::identity(g.spec()), g); }

  const Automorphism& automorphism() const { return phi_; }
  const GroupElement& translation() const { return t_; }
  const GroupSpec& spec() const { return t_.spec(); }

  friend bool operator==(const HolElement& a, const HolElement& b) {
    return a.phi_ == b.phi_ && a.t_ == b.t_;
  }

 private:
  Automorphism phi_;
  GroupElement t_;
};

inline GroupElement hol_apply(const HolElement& a, const GroupElement& x) {
  return apply(a.automorphism(), x) + a.translation();
}

/// (phi, g)(psi, h) = (phi psi, g^psi + h): first a, then b.
inline HolElement hol_compose(const HolElement& a, const HolElement& b) {
  require_same(a.spec(), b.spec());
  return HolElement(compose(a.automorphism(), b.automorphism()),
                    apply(b.automorphism(), a.translation()) + b.translation());
}

inline HolElement hol_inverse(const HolElement& a) {
  Automorphism inv = a.automorphism().inverse();
  return HolElement(inv, neg(apply(inv, a.translation())));
}

/// nu(g) = gamma(g) rho(g); hol_apply(nu_of(b, g), h) == h o g.
inline HolElement nu_of(const Brace& b, const GroupElement& g) {
  require_same(b.spec(), g.spec());
  return HolElement(b.gamma_of(g), g);
}

/// Isomorphism-type proxy for a regular subgroup N, i.e. for (G, o).
struct Fingerprint {
  OrderHistogram histogram;
  bool abelian = false;
  u64 center_order = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// A regular subgroup of Hol(G), stored by the automorphism component of its
/// unique element over each translation (canonical element order).
class RegularSubgroup {
 public:
  RegularSubgroup(GroupSpec g, std::shared_ptr<const std::vector<Automorphism>> pool,
                  std::vector<std::uint32_t> ids)
      : spec_(std::move(g)), pool_(std::move(pool)), ids_(std::move(ids)) {}

  const GroupSpec& spec() const { return spec_; }
  u64 size() const { return ids_.size(); }
  /// The element n with hol_apply(n, 0) = element_at(translation).
  HolElement element(u64 translation) const {
    return HolElement((*pool_)[ids_[translation]], spec_.element_at(translation));
  }
  std::vector<HolElement> elements() const {
    std::vector<HolElement> out;
    for (u64 t = 0; t < size(); ++t) out.push_back(element(t));
    return out;
  }
  const Automorphism& automorphism_over(u64 translation) const { return (*pool_)[ids_[translation]]; }
  const std::shared_ptr<const std::vector<Automorphism>>& pool() const { return pool_; }
  const std::vector<std::uint32_t>& ids() const { return ids_; }

  /// Lexicographic on the automorphism matrices in translation order.
  friend bool operator<(const RegularSubgroup& a, const RegularSubgroup& b) {
    for (u64 t = 0; t < std::min(a.size(), b.size()); ++t) {
      auto c = a.automorphism_over(t) <=> b.automorphism_over(t);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
  friend bool operator==(const RegularSubgroup& a, const RegularSubgroup& b) {
    if (!(a.spec_ == b.spec_) || a.size() != b.size()) return false;
    for (u64 t = 0; t < a.size(); ++t)
      if (!(a.automorphism_over(t) == b.automorphism_over(t))) return false;
    return true;
  }

 private:
  GroupSpec spec_;
  std::shared_ptr<const std::vector<Automorphism>> pool_;
  std::vector<std::uint32_t> ids_;
};

/// Checks regularity (one element over each translation) and closure.
inline RegularSubgroup make_regular_subgroup(const GroupSpec& g, const std::vector<HolElement>& elems) {
  require_materializable(g, "make_regular_subgroup");
  if (elems.size() != g.order())
    throw ValidationError("not regular: " + std::to_string(elems.size()) + " elements for |G| = " +
                          std::to_string(g.order()));
  std::vector<std::optional<std::size_t>> over(g.order());
  for (std::size_t k = 0; k < elems.size(); ++k) {
    require_same(g, elems[k].spec());
    u64 t = g.index_of(hol_apply(elems[k], GroupElement::zero(g)));
    if (over[t]) throw ValidationError("not regular: two elements send 0 to " + g.element_at(t).literal());
    over[t] = k;
  }
  for (const auto& a : elems)
    for (const auto& b : elems) {
      HolElement c = hol_compose(a, b);
      const HolElement& d = elems[*over[g.index_of(c.translation())]];
      if (!(c == d)) throw ValidationError("not closed under composition");
    }
  auto pool = std::make_shared<std::vector<Automorphism>>();
  std::vector<std::uint32_t> ids(g.order());
  for (u64 t = 0; t < g.order(); ++t) {
    ids[t] = static_cast<std::uint32_t>(pool->size());
    pool->push_back(elems[*over[t]].automorphism());
  }
  return RegularSubgroup(g, std::move(pool), std::move(ids));
}

inline RegularSubgroup gamma_to_subgroup(const Brace& b) {
  require_materializable(b.spec(), "gamma_to_subgroup");
  const GammaFunction& gamma = b.gamma();
  std::vector<std::uint32_t> ids(b.order());
  for (u64 t = 0; t < b.order(); ++t) ids[t] = gamma.value_id(t);
  return RegularSubgroup(b.spec(), gamma.shared_pool(), std::move(ids));
}

/// gamma(g) is the automorphism part of the element of N over g. The
/// subgroup's closure was established when it was built.
inline Brace subgroup_to_gamma(const RegularSubgroup& n, unsigned workers = 1) {
  return Brace::trusted(n.spec(), GammaFunction::table(n.spec(), n.pool(), n.ids()), workers);
}

inline Fingerprint fingerprint(const Brace& b) {
  Fingerprint f;
  f.histogram = order_histogram_circle(b);
  const u64 n = b.order();
  f.center_order = 0;
  for (u64 x = 0; x < n; ++x) {
    bool central = true;
    for (u64 y = 0; y < n && central; ++y) central = b.circle_index(x, y) == b.circle_index(y, x);
    if (central) ++f.center_order;
  }
  f.abelian = f.center_order == n;
  return f;
}

inline Fingerprint fingerprint(const RegularSubgroup& n) { return fingerprint(subgroup_to_gamma(n)); }

// ---------------------------------------------------------------------------
// Aut(G) and Hol(G) by enumeration

/// |Aut(G)| from the exponents alone, saturating at 2^64 - 1. With
/// e_1 <= ... <= e_r, d_k = max{l : e_l = e_k} and c_k = min{l : e_l = e_k}:
/// prod_k (p^{d_k} - p^{k-1}) * prod_j p^{e_j (r - d_j)} * prod_i p^{(e_i - 1)(r - c_i + 1)}.
inline u64 automorphism_count(const GroupSpec& g) {
  const std::size_t r = g.rank();
  std::vector<int> e(g.exponents().rbegin(), g.exponents().rend());
  const unsigned __int128 cap = ~u64{0};
  unsigned __int128 total = 1;
  auto mul = [&](unsigned __int128 x) { total = std::min(cap, total * std::min(cap, x)); };
  auto pw = [&](long k) {
    unsigned __int128 v = 1;
    for (long i = 0; i < k && v < cap; ++i) v *= static_cast<u64>(g.prime());
    return std::min(cap, v);
  };
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t d = k, c = k;
    while (d + 1 < r && e[d + 1] == e[k]) ++d;
    while (c > 0 && e[c - 1] == e[k]) --c;
    // 1-based: d_k = d + 1, c_k = c + 1.
    mul(pw(static_cast<long>(d + 1)) - pw(static_cast<long>(k)));
    mul(pw(static_cast<long>(e[k]) * static_cast<long>(r - d - 1)));
    mul(pw(static_cast<long>(e[k] - 1) * static_cast<long>(r - c)));
  }
  return static_cast<u64>(total);
}

/// All automorphisms of g in lexicographic matrix order, or nullopt when
/// |Aut(G)| exceeds `cutoff`.
inline std::optional<std::vector<Automorphism>> automorphisms(const GroupSpec& g,
                                                              std::optional<u64> cutoff = std::nullopt) {
  if (cutoff && automorphism_count(g) > *cutoff) return std::nullopt;
  const std::size_t r = g.rank();
  std::vector<i64> step(r * r), limit(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      step[i * r + j] = arith::ipow(g.prime(), std::max(0, g.exponent(i) - g.exponent(j)));
      limit[i * r + j] = g.modulus(i);
    }
  std::vector<Automorphism> out;
  std::vector<i64> m(r * r, 0);
  for (;;) {
    EndoMatrix e = EndoMatrix::trusted(g, m);
    if (is_automorphism(e)) {
      out.push_back(to_automorphism(e));
    }
    std::size_t k = r * r;
    while (k-- > 0) {
      m[k] += step[k];
      if (m[k] < limit[k]) break;
      m[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

/// Enumeration limits: any group up to `free_order`, or up to `max_order`
/// when |Aut(G)| <= `max_aut`.
struct EnumerationBounds {
  u64 free_order = 16;
  u64 max_order = 81;
  u64 max_aut = 10000;
};

namespace detail {

using Perm = std::vector<std::uint16_t>;

/// Depth-first search for regular subgroups over permutations of the element
/// indices. Each partial subgroup is extended by an element over the smallest
/// translation it does not yet reach; since a regular subgroup has exactly one
/// element over each translation, every subgroup is reached along exactly one
/// path and no duplicate elimination is needed.
/// Elements of a candidate subgroup are pairs (automorphism id, translation).
/// Automorphisms are compared and looked up through their basis images.
class RegularSearch {
 public:
  RegularSearch(u64 n, const std::vector<std::uint32_t>& add, const std::vector<Perm>& auts,
                const std::vector<std::uint16_t>& basis, const std::vector<std::uint16_t>& table)
      : n_(n), add_(add), auts_(auts), basis_(basis), table_(table), slot_(n, -1), scratch_(basis.size()) {
    for (std::uint32_t a = 0; a < auts_.size(); ++a) {
      Perm key(basis_.size());
      for (std::size_t i = 0; i < basis_.size(); ++i) key[i] = auts_[a][basis_[i]];
      by_key_.emplace(std::move(key), a);
    }
    identity_ = lookup_key(basis_);
    elems_.push_back(0);
    slot_[0] = static_cast<std::int64_t>(identity_);
  }

  /// Full composition table, row-major by the first factor, for pools below
  /// `kTableLimit`; 0xffff marks products outside the pool.
  static constexpr std::size_t kTableLimit = 4096;
  static std::vector<std::uint16_t> composition_table(const std::vector<Perm>& auts,
                                                      const std::vector<std::uint16_t>& basis) {
    const std::size_t m = auts.size();
    if (m > kTableLimit) return {};
    std::unordered_map<Perm, std::uint32_t, KeyHash> index;
    for (std::uint32_t a = 0; a < m; ++a) {
      Perm key(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) key[i] = auts[a][basis[i]];
      index.emplace(std::move(key), a);
    }
    std::vector<std::uint16_t> table(m * m);
    Perm key(basis.size());
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t i = 0; i < basis.size(); ++i) key[i] = auts[b][auts[a][basis[i]]];
        auto it = index.find(key);
        table[a * m + b] = it == index.end() ? 0xffff : static_cast<std::uint16_t>(it->second);
      }
    return table;
  }

  /// Runs the subtree below each root candidate in [begin, end) with stride.
  template <class Sink>
  void run(std::size_t begin, std::size_t stride, Sink& found) {
    for (std::size_t a = begin; a < auts_.size(); a += stride) {
      if (extend(static_cast<std::uint32_t>(a), 1)) {
        dfs(found);
        retract();
      }
    }
  }

 private:
  struct KeyHash {
    std::size_t operator()(const Perm& k) const {
      std::size_t h = 0xcbf29ce484222325ull;
      for (auto v : k) h = (h ^ v) * 0x100000001b3ull;
      return h;
    }
  };

  static constexpr std::uint32_t kMissing = 0xffffffffu;

  std::uint32_t lookup_key(const Perm& key) const {
    auto it = by_key_.find(key);
    return it == by_key_.end() ? kMissing : it->second;
  }

  /// Id of "apply a, then b", or kMissing outside the pool.
  std::uint32_t compose_ids(std::uint32_t a, std::uint32_t b) {
    if (!table_.empty()) {
      std::uint16_t c = table_[static_cast<std::size_t>(a) * auts_.size() + b];
      return c == 0xffff ? kMissing : c;
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) scratch_[i] = auts_[b][auts_[a][basis_[i]]];
    return lookup_key(scratch_);
  }

  template <class Sink>
  void dfs(Sink& found) {
    if (elems_.size() == n_) {
      found(record());
      return;
    }
    u64 t = 0;
    while (slot_[t] >= 0) ++t;
    for (std::uint32_t a = 0; a < auts_.size(); ++a) {
      if (extend(a, t)) {
        dfs(found);
        retract();
      }
    }
  }

  /// Closes <S, (a, t)>; on a clash restores S and returns false.
  bool extend(std::uint32_t aut, u64 t) {
    std::size_t old = elems_.size();
    marks_.push_back(old);
    gens_.emplace_back(aut, static_cast<std::uint32_t>(t));
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      std::size_t first_gen = i < old ? gens_.size() - 1 : 0;
      for (std::size_t k = first_gen; k < gens_.size(); ++k) {
        const std::uint32_t e = elems_[i];
        const auto [gb, gt] = gens_[k];
        const std::uint32_t ea = static_cast<std::uint32_t>(slot_[e]);
        // (ea, e)(gb, gt) = (ea gb, gb(e) + gt)
        const std::uint32_t pt = add_[static_cast<u64>(auts_[gb][e]) * n_ + gt];
        const std::uint32_t pa = compose_ids(ea, gb);
        if (pa == kMissing) {
          retract();
          return false;
        }
        std::int64_t s = slot_[pt];
        if (s < 0) {
          slot_[pt] = pa;
          elems_.push_back(pt);
        } else if (static_cast<std::uint32_t>(s) != pa) {
          retract();
          return false;
        }
      }
    }
    return true;
  }

  void retract() {
    std::size_t old = marks_.back();
    marks_.pop_back();
    gens_.pop_back();
    for (std::size_t i = old; i < elems_.size(); ++i) slot_[elems_[i]] = -1;
    elems_.resize(old);
  }

  std::vector<std::uint32_t> record() const {
    std::vector<std::uint32_t> ids(n_);
    for (u64 t = 0; t < n_; ++t) ids[t] = static_cast<std::uint32_t>(slot_[t]);
    return ids;
  }

  u64 n_;
  const std::vector<std::uint32_t>& add_;
  const std::vector<Perm>& auts_;
  const std::vector<std::uint16_t>& basis_;
  const std::vector<std::uint16_t>& table_;
  std::unordered_map<Perm, std::uint32_t, KeyHash> by_key_;
  std::uint32_t identity_ = kMissing;
  std::vector<std::int64_t> slot_;
  std::vector<std::uint32_t> elems_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gens_;
  std::vector<std::size_t> marks_;
  Perm scratch_;
};

inline Perm as_perm(const Automorphism& a) {
  const GroupSpec& g = a.spec();
  Perm p(g.order());
  for (u64 x = 0; x < g.order(); ++x) p[x] = static_cast<std::uint16_t>(g.index_of(apply(a, g.element_at(x))));
  return p;
}

inline bool has_p_power_order(const Perm& p, u64 prime) {
  Perm cur = p;
  u64 order = 1;
  auto is_id = [](const Perm& q) {
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] != i) return false;
    return true;
  };
  while (!is_id(cur)) {
    Perm next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] = p[cur[i]];
    cur = std::move(next);
    ++order;
  }
  return arith::log_exact(order, prime).has_value();
}

}  // namespace detail

namespace detail {

/// Everything the search needs, shared across workers.
struct SearchSetup {
  std::shared_ptr<const std::vector<Automorphism>> pool;
  std::vector<Perm> perms;
  std::vector<std::uint32_t> add;
  std::vector<std::uint16_t> basis;
  std::vector<std::uint16_t> table;
};

inline SearchSetup prepare_search(const GroupSpec& g, const EnumerationBounds& bounds) {
  const u64 n = g.order();
  if (n > bounds.max_order || n > 65535)
    throw BoundExceeded("enumeration bound: |G| = " + std::to_string(n) + " exceeds " +
                        std::to_string(bounds.max_order));
  std::optional<u64> cutoff;
  if (n > bounds.free_order) cutoff = bounds.max_aut;
  auto all = automorphisms(g, cutoff);
  if (!all)
    throw BoundExceeded("enumeration bound: |G| = " + std::to_string(n) + " > " +
                        std::to_string(bounds.free_order) + " requires |Aut(G)| <= " +
                        std::to_string(bounds.max_aut));

  SearchSetup st;
  // gamma(G) is a p-group, so only automorphisms of p-power order occur.
  auto pool = std::make_shared<std::vector<Automorphism>>();
  for (const auto& a : *all) {
    Perm p = as_perm(a);
    if (has_p_power_order(p, static_cast<u64>(g.prime()))) {
      pool->push_back(a);
      st.perms.push_back(std::move(p));
    }
  }
  st.pool = pool;
  st.add.resize(n * n);
  for (u64 a = 0; a < n; ++a)
    for (u64 b = 0; b < n; ++b) st.add[a * n + b] = static_cast<std::uint32_t>(add_index(g, a, b));
  for (std::size_t i = 0; i < g.rank(); ++i)
    st.basis.push_back(static_cast<std::uint16_t>(g.index_of(GroupElement::basis(g, i))));
  st.table = RegularSearch::composition_table(st.perms, st.basis);
  return st;
}

}  // namespace detail

/// Every regular subgroup of Hol(G), sorted canonically. Throws BoundExceeded
/// outside `bounds`.
inline std::vector<RegularSubgroup> enumerate_regular_subgroups(const GroupSpec& g, const CheckOptions& opt = {},
                                                                const EnumerationBounds& bounds = {}) {
  const u64 n = g.order();
  detail::SearchSetup st = detail::prepare_search(g, bounds);
  std::vector<std::vector<std::uint32_t>> found;
  if (n == 1) {
    found.push_back({0});
  } else {
    unsigned workers = std::max(1u, opt.workers);
    std::vector<std::vector<std::vector<std::uint32_t>>> parts(workers);
    detail::parallel_chunks(workers, workers, [&](u64 b, u64 e, unsigned) {
      for (u64 w = b; w < e; ++w) {
        detail::RegularSearch search(n, st.add, st.perms, st.basis, st.table);
        auto sink = [&](std::vector<std::uint32_t> ids) { parts[w].push_back(std::move(ids)); };
        search.run(w, workers, sink);
      }
    });
    for (auto& part : parts)
      for (auto& ids : part) found.push_back(std::move(ids));
  }
  std::vector<RegularSubgroup> out;
  out.reserve(found.size());
  for (auto& ids : found) out.emplace_back(g, st.pool, std::move(ids));
  std::sort(out.begin(), out.end());
  return out;
}

/// Streams every regular subgroup of Hol(G) to `fn` in search order, without
/// storing them. Returns the number visited.
template <class Fn>
u64 visit_regular_subgroups(const GroupSpec& g, Fn&& fn, const EnumerationBounds& bounds = {}) {
  const u64 n = g.order();
  detail::SearchSetup st = detail::prepare_search(g, bounds);
  u64 count = 0;
  auto sink = [&](std::vector<std::uint32_t> ids) {
    ++count;
    fn(RegularSubgroup(g, st.pool, std::move(ids)));
  };
  if (n == 1) {
    sink({0});
  } else {
    detail::RegularSearch search(n, st.add, st.perms, st.basis, st.table);
    search.run(0, 1, sink);
  }
  return count;
}

/// All elements of Hol(G) = Aut(G) x| G.
inline std::vector<HolElement> hol_elements(const GroupSpec& g) {
  auto auts = automorphisms(g);
  std::vector<HolElement> out;
  for (const auto& a : *auts)
    for (u64 t = 0; t < g.order(); ++t) out.emplace_back(a, g.element_at(t));
  return out;
}

/// Independent oracle: filters |G|-subsets of Hol(G) for regularity and
/// closure, using only object-level holomorph arithmetic. |Hol(G)| <= 32.
inline std::vector<RegularSubgroup> enumerate_regular_subgroups_naive(const GroupSpec& g) {
  auto hol = hol_elements(g);
  if (hol.size() > 32) throw BoundExceeded("naive oracle: |Hol(G)| above 32");
  const u64 n = g.order();
  std::vector<u64> trans(hol.size());
  for (std::size_t k = 0; k < hol.size(); ++k) trans[k] = g.index_of(hol[k].translation());

  std::vector<RegularSubgroup> out;
  std::vector<std::size_t> chosen;
  std::vector<char> used(n, 0);
  auto closed = [&]() {
    for (std::size_t a : chosen)
      for (std::size_t b : chosen) {
        HolElement c = hol_compose(hol[a], hol[b]);
        bool member = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t k) { return hol[k] == c; });
        if (!member) return false;
      }
    return true;
  };
  // Subsets are generated in index order; a subset with two elements over one
  // translation can never be regular, so such branches are cut.
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (chosen.size() == n) {
      if (closed()) {
        std::vector<HolElement> elems;
        for (std::size_t c : chosen) elems.push_back(hol[c]);
        out.push_back(make_regular_subgroup(g, elems));
      }
      return;
    }
    if (k == hol.size() || hol.size() - k < n - chosen.size()) return;
    if (!used[trans[k]]) {
      used[trans[k]] = 1;
      chosen.push_back(k);
      self(self, k + 1);
      chosen.pop_back();
      used[trans[k]] = 0;
    }
    self(self, k + 1);
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace skewbrace
