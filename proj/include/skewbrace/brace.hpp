#pragma once

// Braces (G, +, o) on finite abelian p-groups, h o g = h^{gamma(g)} + g, and the
// checkable statements relating the additive and circle groups.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "skewbrace/gamma.hpp"
#include "skewbrace/parallel.hpp"
#include "skewbrace/pgroup.hpp"

namespace skewbrace {

/// Cayley tables are built for groups up to this order.
inline constexpr u64 kTableOrderBound = 1024;
/// rank_general backtracks over groups up to this order.
inline constexpr u64 kRankSearchBound = u64{1} << 12;

namespace detail {

/// Index-level addition data of one group, shared by every brace on it.
struct AdditiveTables {
  u64 n = 0;
  std::vector<std::uint32_t> add, neg;
  /// h = prev[h] + e_j with j = last[h] the lowest-stride nonzero coordinate.
  std::vector<std::uint32_t> prev;
  std::vector<std::uint8_t> last;
};

inline std::shared_ptr<const AdditiveTables> additive_tables(const GroupSpec& g) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const AdditiveTables>> cache;
  const std::string key = g.to_string();
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto t = std::make_shared<AdditiveTables>();
  const u64 n = g.order();
  const std::size_t r = g.rank();
  t->n = n;
  t->add.resize(n * n);
  t->neg.resize(n);
  for (u64 h = 0; h < n; ++h)
    for (u64 k = 0; k < n; ++k) {
      u64 s = add_index(g, h, k);
      t->add[h * n + k] = static_cast<std::uint32_t>(s);
      if (s == 0) t->neg[h] = static_cast<std::uint32_t>(k);
    }
  t->prev.resize(n);
  t->last.resize(n);
  for (u64 h = 1; h < n; ++h) {
    std::size_t j = r;
    while (j-- > 0)
      if ((h / g.stride(j)) % static_cast<u64>(g.modulus(j)) != 0) break;
    t->last[h] = static_cast<std::uint8_t>(j);
    t->prev[h] = static_cast<std::uint32_t>(h - g.stride(j));
  }
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() >= 64) cache.clear();
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace detail

class Brace {
 public:
  /// Validates gamma (see validate_gamma) and throws ValidationError with the
  /// failing pair if it is not a gamma function.
  static Brace create(const GroupSpec& g, GammaFunction gamma, const CheckOptions& opt = {}) {
    GammaValidation v = validate_gamma(g, gamma, opt);
    if (!v.passed()) {
      std::string msg = "not a gamma function: " + v.reason;
      if (v.witness) msg += " at h = " + v.witness->first.literal() + ", g = " + v.witness->second.literal();
      if (v.premise_witness) msg += " at x = " + v.premise_witness->literal();
      throw ValidationError(msg);
    }
    return Brace(g, std::move(gamma), opt.workers);
  }

  /// For gamma functions already known to be valid (e.g. read off a regular
  /// subgroup whose closure was checked).
  static Brace trusted(const GroupSpec& g, GammaFunction gamma, unsigned workers = 1) {
    require_same(g, gamma.spec());
    return Brace(g, std::move(gamma), workers);
  }

  static Brace trivial(const GroupSpec& g) { return Brace(g, GammaFunction::trivial(g), 1); }

  const GroupSpec& spec() const { return spec_; }
  const GammaFunction& gamma() const { return gamma_; }
  u64 order() const { return spec_.order(); }
  i64 prime() const { return spec_.prime(); }
  const Automorphism& gamma_of(const GroupElement& g) const { return gamma_(g); }
  bool has_tables() const { return tables_ != nullptr; }

  // Index-level operations on canonical element positions.
  u64 add_index(u64 a, u64 b) const {
    return tables_ ? tables_->additive->add[a * tables_->n + b] : detail::add_index(spec_, a, b);
  }
  u64 neg_index(u64 a) const {
    return tables_ ? tables_->additive->neg[a] : spec_.index_of(neg(spec_.element_at(a)));
  }
  u64 sub_index(u64 a, u64 b) const { return add_index(a, neg_index(b)); }
  u64 circle_index(u64 a, u64 g) const {
    return tables_ ? tables_->circ[a * tables_->n + g] : detail::circle_index_slow(gamma_, a, g);
  }
  u64 circle_inverse_index(u64 g) const {
    return tables_ ? tables_->circ_inv[g] : spec_.index_of(inverse_slow(spec_.element_at(g)));
  }
  /// gamma(g) applied to x.
  u64 gamma_apply_index(u64 g, u64 x) const { return sub_index(circle_index(x, g), g); }

 private:
  struct Tables {
    u64 n = 0;
    std::shared_ptr<const detail::AdditiveTables> additive;
    std::vector<std::uint32_t> circ, circ_inv;
  };

  Brace(GroupSpec g, GammaFunction gamma, unsigned workers)
      : spec_(std::move(g)), gamma_(std::move(gamma)) {
    if (spec_.order() <= kTableOrderBound) tables_ = build_tables(workers);
  }

  GroupElement inverse_slow(const GroupElement& g) const {
    return apply(gamma_(g).inverse(), neg(g));
  }

  std::shared_ptr<const Tables> build_tables(unsigned workers) const {
    auto t = std::make_shared<Tables>();
    const u64 n = spec_.order();
    const std::size_t r = spec_.rank();
    t->additive = detail::additive_tables(spec_);
    const detail::AdditiveTables& at = *t->additive;
    t->n = n;
    t->circ.resize(n * n);
    t->circ_inv.resize(n);
    detail::parallel_chunks(n, workers, [&](u64 b, u64 e, unsigned) {
      std::vector<std::uint32_t> img(n), basis_img(r);
      for (u64 g = b; g < e; ++g) {
        const EndoMatrix& m = gamma_.at_index(g).matrix();
        for (std::size_t j = 0; j < r; ++j) {
          u64 idx = 0;
          for (std::size_t i = 0; i < r; ++i) idx += static_cast<u64>(m.at(i, j)) * spec_.stride(i);
          basis_img[j] = static_cast<std::uint32_t>(idx);
        }
        img[0] = 0;
        for (u64 h = 1; h < n; ++h) img[h] = at.add[img[at.prev[h]] * n + basis_img[at.last[h]]];
        for (u64 h = 0; h < n; ++h) {
          std::uint32_t c = at.add[img[h] * n + g];
          t->circ[h * n + g] = c;
          if (c == 0) t->circ_inv[g] = static_cast<std::uint32_t>(h);
        }
      }
    });
    return t;
  }

  GroupSpec spec_;
  GammaFunction gamma_;
  std::shared_ptr<const Tables> tables_;
};

// ---------------------------------------------------------------------------
// Circle operation

inline GroupElement circle(const Brace& b, const GroupElement& a, const GroupElement& g) {
  require_same(b.spec(), a.spec());
  require_same(b.spec(), g.spec());
  return apply(b.gamma_of(g), a) + g;
}

/// x with x o g = g o x = 0, i.e. gamma(g)^{-1} applied to -g.
inline GroupElement circle_inverse(const Brace& b, const GroupElement& g) {
  require_same(b.spec(), g.spec());
  return apply(b.gamma_of(g).inverse(), neg(g));
}

/// g o g o ... o g (n factors); n = 0 gives 0.
inline GroupElement circle_power_iter(const Brace& b, const GroupElement& g, u64 n) {
  GroupElement x = GroupElement::zero(b.spec());
  for (u64 k = 0; k < n; ++k) x = circle(b, x, g);
  return x;
}

/// g^{o p} = g^{p + C(p,2) d + ... + C(p,p-1) d^{p-2}} + g^{d^{p-1}}, d = gamma(g) - 1.
inline GroupElement circle_power_formula(const Brace& b, const GroupElement& g) {
  const GroupSpec& spec = b.spec();
  const i64 p = spec.prime();
  EndoMatrix delta = endo_sub(b.gamma_of(g).matrix(), EndoMatrix::identity(spec));
  EndoMatrix sum = endo_scale(p, EndoMatrix::identity(spec));
  EndoMatrix power = EndoMatrix::identity(spec);
  for (i64 j = 1; j <= p - 2; ++j) {
    power = compose(power, delta);
    sum = endo_add(sum, endo_scale(arith::binomial(p, j + 1), power));
  }
  EndoMatrix top = endo_power(delta, static_cast<u64>(p - 1));
  return apply(sum, g) + apply(top, g);
}

namespace detail {

inline u64 circle_power_index(const Brace& b, u64 g, u64 n) {
  u64 x = 0;
  for (u64 k = 0; k < n; ++k) x = b.circle_index(x, g);
  return x;
}

/// log_p of the circle order, by repeated p-th powering.
inline int circle_log_order_index(const Brace& b, u64 g) {
  int k = 0;
  const u64 p = static_cast<u64>(b.prime());
  while (g != 0) {
    g = circle_power_index(b, g, p);
    ++k;
  }
  return k;
}

inline std::vector<int> circle_log_orders(const Brace& b, unsigned workers) {
  require_materializable(b.spec(), "circle orders");
  return parallel_map<int>(b.order(), workers, [&](u64 g) { return circle_log_order_index(b, g); });
}

inline std::vector<int> additive_log_orders(const GroupSpec& g) {
  std::vector<int> out(g.order());
  for (u64 i = 0; i < g.order(); ++i) out[i] = element_log_order(g.element_at(i));
  return out;
}

}  // namespace detail

struct PowerFormulaReport {
  bool exhaustive = false;
  u64 checked = 0;
  std::optional<GroupElement> witness;

  bool holds() const { return !witness; }
};

/// circle_power_formula(g) == circle_power_iter(g, p) for every g when
/// |G| <= 3^6, else for opt.samples random g.
inline PowerFormulaReport check_power_formula(const Brace& b, const CheckOptions& opt = {}) {
  PowerFormulaReport rep;
  const GroupSpec& g = b.spec();
  const u64 n = g.order();
  rep.exhaustive = n <= 729;
  std::vector<u64> idx;
  if (!rep.exhaustive) {
    std::mt19937_64 rng(opt.seed ^ 0x2545f4914f6cdd1dULL);
    for (u64 k = 0; k < opt.samples; ++k) idx.push_back(detail::uniform_index(rng, n));
  }
  const u64 total = rep.exhaustive ? n : idx.size();
  const u64 p = static_cast<u64>(b.prime());
  auto at = [&](u64 k) { return rep.exhaustive ? k : idx[k]; };
  auto bad = detail::find_first_failure(total, opt.workers, [&](u64 k) {
    u64 x = at(k);
    return g.index_of(circle_power_formula(b, g.element_at(x))) == detail::circle_power_index(b, x, p);
  });
  rep.checked = total;
  if (bad) rep.witness = g.element_at(at(*bad));
  return rep;
}

inline u64 circle_order(const Brace& b, const GroupElement& g) {
  return static_cast<u64>(arith::ipow(b.prime(), detail::circle_log_order_index(b, b.spec().index_of(g))));
}

/// The set (not assumed a subgroup) of elements whose circle order divides p^i.
inline std::vector<GroupElement> omega_circle(const Brace& b, int i, const CheckOptions& opt = {}) {
  auto logs = detail::circle_log_orders(b, opt.workers);
  std::vector<GroupElement> out;
  for (u64 g = 0; g < logs.size(); ++g)
    if (logs[g] <= i) out.push_back(b.spec().element_at(g));
  return out;
}

inline OrderHistogram order_histogram_circle(const Brace& b, const CheckOptions& opt = {}) {
  OrderHistogram h;
  for (int k : detail::circle_log_orders(b, opt.workers)) ++h[static_cast<u64>(arith::ipow(b.prime(), k))];
  return h;
}

// ---------------------------------------------------------------------------
// Omega containment

struct OmegaContainmentReport {
  struct Level {
    int i = 0;
    u64 additive_size = 0;
    u64 circle_size = 0;
    bool contained = true;
    /// Element of Omega_i(G,+) outside Omega_i(G,o).
    std::optional<GroupElement> witness;
  };
  /// rank(G,+) <= p - 1, where containment is a theorem.
  bool guaranteed = false;
  std::vector<Level> levels;

  bool all_contained() const {
    return std::all_of(levels.begin(), levels.end(), [](const Level& l) { return l.contained; });
  }
};

inline OmegaContainmentReport check_omega_containment(const Brace& b, const CheckOptions& opt = {}) {
  OmegaContainmentReport rep;
  rep.guaranteed = static_cast<i64>(rank_abelian(b.spec())) <= b.prime() - 1;
  auto circ = detail::circle_log_orders(b, opt.workers);
  auto add = detail::additive_log_orders(b.spec());
  int top = std::max(*std::max_element(circ.begin(), circ.end()), b.spec().log_exponent());
  for (int i = 1; i <= top; ++i) {
    OmegaContainmentReport::Level lvl;
    lvl.i = i;
    for (u64 g = 0; g < circ.size(); ++g) {
      if (add[g] <= i) ++lvl.additive_size;
      if (circ[g] <= i) ++lvl.circle_size;
      if (add[g] <= i && circ[g] > i && lvl.contained) {
        lvl.contained = false;
        lvl.witness = b.spec().element_at(g);
      }
    }
    rep.levels.push_back(std::move(lvl));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rank of a general finite p-group

/// Maximum r such that the group on {0..n-1} (operation op, identity e) has a
/// subgroup of exponent p and order p^r. Backtracks over exponent-p subgroups,
/// growing S to S<x> for order-p elements x normalizing S; every exponent-p
/// group has such a chain of index-p steps, and visited subgroups are memoized.
template <class Op>
std::size_t rank_general(u64 n, i64 p, u64 e, Op op) {
  if (n > kRankSearchBound) throw BoundExceeded("rank_general: group order above 2^12");
  const u64 up = static_cast<u64>(p);
  auto power = [&](u64 x, u64 k) {
    u64 r = e;
    for (u64 i = 0; i < k; ++i) r = op(r, x);
    return r;
  };
  std::vector<u64> order_p;
  for (u64 x = 0; x < n; ++x)
    if (x != e && power(x, up) == e) order_p.push_back(x);
  std::size_t ceiling = 0;
  for (u64 c = order_p.size() + 1; c >= up; c /= up) ++ceiling;

  const std::size_t words = (n + 63) / 64;
  std::set<std::vector<std::uint64_t>> seen;
  std::size_t best = 0;

  struct Node {
    std::vector<u64> elems;
    std::vector<u64> gens;
    std::size_t log;
  };
  std::vector<Node> stack{{{e}, {}, 0}};
  while (!stack.empty() && best < ceiling) {
    Node s = std::move(stack.back());
    stack.pop_back();
    best = std::max(best, s.log);
    std::vector<char> in(n, 0);
    for (u64 x : s.elems) in[x] = 1;
    for (u64 x : order_p) {
      if (in[x]) continue;
      u64 xinv = power(x, up - 1);
      bool normalizes = std::all_of(s.gens.begin(), s.gens.end(),
                                    [&](u64 g) { return in[op(op(xinv, g), x)]; });
      if (!normalizes) continue;
      std::vector<u64> t = s.elems;
      bool exponent_p = true;
      u64 xj = e;
      for (u64 j = 1; j < up && exponent_p; ++j) {
        xj = op(xj, x);
        for (u64 y : s.elems) {
          u64 z = op(y, xj);
          if (power(z, up) != e) {
            exponent_p = false;
            break;
          }
          t.push_back(z);
        }
      }
      if (!exponent_p) continue;
      std::vector<std::uint64_t> key(words, 0);
      for (u64 z : t) key[z / 64] |= std::uint64_t{1} << (z % 64);
      if (!seen.insert(std::move(key)).second) continue;
      auto gens = s.gens;
      gens.push_back(x);
      stack.push_back({std::move(t), std::move(gens), s.log + 1});
    }
  }
  return best;
}

/// Rank of the circle group (G, o).
inline std::size_t rank_general(const Brace& b) {
  return rank_general(b.order(), b.prime(), 0, [&](u64 x, u64 y) { return b.circle_index(x, y); });
}

// ---------------------------------------------------------------------------
// Small-rank theorem

struct SmallRankReport {
  std::size_t additive_rank = 0;
  std::size_t circle_rank = 0;
  bool additive_small = false;
  bool circle_small = false;
  /// Small rank can only mean rank 0 when p = 2, so nothing is asserted.
  bool vacuous = false;
  OrderHistogram additive_histogram;
  OrderHistogram circle_histogram;
  bool histograms_equal = false;
  /// Histogram equality is asserted only when both ranks are small.
  bool histogram_asserted = false;

  bool iff_holds() const { return additive_small == circle_small; }
  bool ok() const { return iff_holds() && (!histogram_asserted || histograms_equal); }
};

inline SmallRankReport check_theorem_small_rank(const Brace& b, const CheckOptions& opt = {}) {
  SmallRankReport rep;
  const i64 p = b.prime();
  rep.additive_rank = rank_abelian(b.spec());
  rep.circle_rank = rank_general(b);
  rep.additive_small = static_cast<i64>(rep.additive_rank) < p - 1;
  rep.circle_small = static_cast<i64>(rep.circle_rank) < p - 1;
  rep.vacuous = p == 2;
  rep.additive_histogram = order_histogram(b.spec());
  rep.circle_histogram = order_histogram_circle(b, opt);
  rep.histograms_equal = rep.additive_histogram == rep.circle_histogram;
  rep.histogram_asserted = rep.additive_small && rep.circle_small && !rep.vacuous;
  return rep;
}

// ---------------------------------------------------------------------------
// Sub-brace criterion: any two of (1) H <= (G,+), (2) (H,o) <= (G,o),
// (3) H is gamma(H)-invariant imply the third.

struct SubBraceReport {
  bool additive_subgroup = false;
  bool circle_subgroup = false;
  bool gamma_invariant = false;

  int count() const { return additive_subgroup + circle_subgroup + gamma_invariant; }
  bool implication_holds() const { return count() != 2; }
};

inline SubBraceReport subbrace_check(const Brace& b, std::span<const u64> subset) {
  SubBraceReport rep;
  std::vector<u64> h(subset.begin(), subset.end());
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  auto in = [&](u64 x) { return std::binary_search(h.begin(), h.end(), x); };
  auto closed = [&](auto op) {
    if (!in(0)) return false;
    for (u64 x : h)
      for (u64 y : h)
        if (!in(op(x, y))) return false;
    return true;
  };
  rep.additive_subgroup = closed([&](u64 x, u64 y) { return b.add_index(x, y); });
  rep.circle_subgroup = closed([&](u64 x, u64 y) { return b.circle_index(x, y); });
  rep.gamma_invariant = true;
  for (u64 g : h) {
    for (u64 x : h)
      if (!in(b.gamma_apply_index(g, x))) {
        rep.gamma_invariant = false;
        break;
      }
    if (!rep.gamma_invariant) break;
  }
  return rep;
}

inline SubBraceReport subbrace_check(const Brace& b, const Subgroup& h) {
  require_same(b.spec(), h.spec());
  return subbrace_check(b, std::span<const u64>(h.indices()));
}

// ---------------------------------------------------------------------------
// Brace axiom and its role-swapped form

struct AxiomReport {
  bool exhaustive = false;
  u64 triples_checked = 0;
  std::optional<std::tuple<GroupElement, GroupElement, GroupElement>> witness;

  bool holds() const { return !witness; }
};

namespace detail {

template <class Pred>
AxiomReport sweep_triples(const Brace& b, const CheckOptions& opt, Pred holds) {
  AxiomReport rep;
  const u64 n = b.order();
  rep.exhaustive = n <= 256;  // n^3 <= 2^24
  std::vector<std::tuple<u64, u64, u64>> sample;
  u64 total;
  if (rep.exhaustive) {
    total = n * n * n;
  } else {
    std::mt19937_64 rng(opt.seed ^ 0x5851f42d4c957f2dULL);
    sample.reserve(opt.triple_samples);
    for (u64 k = 0; k < opt.triple_samples; ++k) {
      u64 a = uniform_index(rng, n), c = uniform_index(rng, n), d = uniform_index(rng, n);
      sample.emplace_back(a, c, d);
    }
    total = sample.size();
  }
  auto triple = [&](u64 i) {
    return rep.exhaustive ? std::make_tuple(i / (n * n), (i / n) % n, i % n) : sample[i];
  };
  auto bad = find_first_failure(total, opt.workers, [&](u64 i) {
    auto [x, y, z] = triple(i);
    return holds(x, y, z);
  });
  rep.triples_checked = total;
  if (bad) {
    auto [x, y, z] = triple(*bad);
    const GroupSpec& g = b.spec();
    rep.witness = std::make_tuple(g.element_at(x), g.element_at(y), g.element_at(z));
  }
  return rep;
}

}  // namespace detail

/// ((a + b) o c) - c == ((a o c) - c) + ((b o c) - c); exhaustive when
/// |G|^3 <= 2^24, else opt.triple_samples random triples.
inline AxiomReport check_brace_axiom(const Brace& b, const CheckOptions& opt = {}) {
  return detail::sweep_triples(b, opt, [&](u64 x, u64 y, u64 z) {
    u64 lhs = b.sub_index(b.circle_index(b.add_index(x, y), z), z);
    u64 rhs = b.add_index(b.sub_index(b.circle_index(x, z), z), b.sub_index(b.circle_index(y, z), z));
    return lhs == rhs;
  });
}

/// The brace axiom with the roles of + and o exchanged:
/// ((a o b) + c) o c' == ((a + c) o c') o ((b + c) o c'), c' the circle inverse.
inline AxiomReport check_biskew(const Brace& b, const CheckOptions& opt = {}) {
  return detail::sweep_triples(b, opt, [&](u64 x, u64 y, u64 z) {
    u64 zi = b.circle_inverse_index(z);
    u64 lhs = b.circle_index(b.add_index(b.circle_index(x, y), z), zi);
    u64 rhs = b.circle_index(b.circle_index(b.add_index(x, z), zi), b.circle_index(b.add_index(y, z), zi));
    return lhs == rhs;
  });
}

inline bool is_biskew(const Brace& b, const CheckOptions& opt = {}) { return check_biskew(b, opt).holds(); }

}  // namespace skewbrace
