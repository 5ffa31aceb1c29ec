#pragma once

// Truncations E / p^k E of E = Z_p[omega], omega a primitive p-th root of
// unity, with the brace whose gamma function has kernel I / p^k E and sends
// the ring identity to multiplication by omega. The additive group has rank
// p - 1; outside the ideal, elements of additive order p^k get circle order p.
//
// Basis {1, omega, ..., omega^{p-2}}; multiplication by omega is the companion
// matrix of x^{p-1} + ... + x + 1. Because (omega - 1)^{p-1} = p * unit, the
// ideal power I^{k(p-1)} equals p^k E, which is what makes the quotient the
// group p:[k,...,k]; that identity is checked rather than assumed.

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "skewbrace/brace.hpp"
#include "skewbrace/gamma.hpp"

namespace skewbrace {

class TruncatedCyclotomicRing {
 public:
  i64 prime() const { return p_; }
  int level() const { return k_; }
  const GroupSpec& spec() const { return spec_; }
  /// Multiplication by omega.
  const Automorphism& omega() const { return omega_; }
  /// The ring identity u = (1, 0, ..., 0).
  const GroupElement& unit() const { return unit_; }
  /// Coefficient-sum functional G -> Z/p, the reduction E -> E/I.
  const std::vector<i64>& coefficient_sum() const { return csum_; }
  /// U with (omega - 1)^{p-1} = p U.
  const EndoMatrix& unit_factor() const { return unit_factor_; }

  i64 reduce_mod_ideal(const GroupElement& g) const {
    i64 s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s = (s + g[i]) % p_;
    return s;
  }
  bool in_ideal(const GroupElement& g) const { return reduce_mod_ideal(g) == 0; }
  /// |H| = |G| / p.
  u64 ideal_order() const { return spec_.order() / static_cast<u64>(p_); }

  friend TruncatedCyclotomicRing build_ring(i64 p, int k);

 private:
  TruncatedCyclotomicRing(i64 p, int k, GroupSpec spec, Automorphism omega, GroupElement unit,
                          std::vector<i64> csum, EndoMatrix unit_factor)
      : p_(p), k_(k), spec_(std::move(spec)), omega_(std::move(omega)), unit_(std::move(unit)),
        csum_(std::move(csum)), unit_factor_(std::move(unit_factor)) {}

  i64 p_;
  int k_;
  GroupSpec spec_;
  Automorphism omega_;
  GroupElement unit_;
  std::vector<i64> csum_;
  EndoMatrix unit_factor_;
};

namespace detail {

using IntMatrix = std::vector<std::vector<__int128>>;

inline IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t r = a.size();
  IntMatrix c(r, std::vector<__int128>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t j = 0; j < r; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Companion matrix of 1 + x + ... + x^{p-1} over Z, acting on coefficient
/// columns: omega * omega^j = omega^{j+1}, omega * omega^{p-2} = -(1 + ... + omega^{p-2}).
inline IntMatrix companion_over_z(i64 p) {
  const std::size_t r = static_cast<std::size_t>(p - 1);
  IntMatrix m(r, std::vector<__int128>(r, 0));
  for (std::size_t j = 0; j + 1 < r; ++j) m[j + 1][j] = 1;
  for (std::size_t i = 0; i < r; ++i) m[i][r - 1] = -1;
  return m;
}

}  // namespace detail

/// Builds E / p^k E and verifies omega^p = 1, Phi_p(omega) = 0 and
/// (omega - 1)^{p-1} = p U with U invertible; failures raise InvariantError.
inline TruncatedCyclotomicRing build_ring(i64 p, int k) {
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  if (k < 1) throw ValidationError("truncation level must be at least 1");
  auto bound = arith::checked_pow(p, static_cast<i64>(k) * (p - 1));
  if (!bound) throw BoundExceeded("p^{k(p-1)} exceeds 2^62");
  GroupSpec g(p, std::vector<int>(static_cast<std::size_t>(p - 1), k));
  const std::size_t r = g.rank();
  const i64 q = g.modulus(0);

  auto reduce = [&](const detail::IntMatrix& m) {
    std::vector<std::vector<i64>> rows(r, std::vector<i64>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) rows[i][j] = static_cast<i64>(((m[i][j] % q) + q) % q);
    return validate_endo(rows, g);
  };

  detail::IntMatrix c = detail::companion_over_z(p);
  EndoMatrix w = reduce(c);
  if (!endo_power(w, static_cast<u64>(p)).is_identity())
    throw InvariantError("omega^p != 1 in E/p^kE");
  EndoMatrix phi = EndoMatrix::zero(g);
  for (i64 i = 0; i < p; ++i) phi = endo_add(phi, endo_power(w, static_cast<u64>(i)));
  if (!(phi == EndoMatrix::zero(g))) throw InvariantError("Phi_p(omega) != 0 in E/p^kE");

  detail::IntMatrix d = c;
  for (std::size_t i = 0; i < r; ++i) d[i][i] -= 1;
  detail::IntMatrix dp = d;
  for (i64 i = 1; i < p - 1; ++i) dp = detail::int_mul(dp, d);
  for (auto& row : dp)
    for (auto& x : row) {
      if (x % p != 0) throw InvariantError("(omega - 1)^{p-1} is not divisible by p");
      x /= p;
    }
  EndoMatrix u = reduce(dp);
  if (!is_automorphism(u)) throw InvariantError("(omega - 1)^{p-1} / p is not a unit");
  EndoMatrix delta = endo_sub(w, EndoMatrix::identity(g));
  if (!(endo_power(delta, static_cast<u64>(p - 1)) == endo_scale(p, u)))
    throw InvariantError("(omega - 1)^{p-1} != p U in End(G)");

  std::vector<i64> csum(r, 1);
  // H = ker(csum) is omega-invariant: every column of omega sums to 1 mod p.
  for (std::size_t j = 0; j < r; ++j) {
    i64 s = 0;
    for (std::size_t i = 0; i < r; ++i) s += w.at(i, j);
    if (arith::mod(s, p) != 1) throw InvariantError("ideal is not omega-invariant");
  }
  return TruncatedCyclotomicRing(p, k, g, to_automorphism(w), GroupElement::basis(g, 0), std::move(csum),
                                 std::move(u));
}

/// The ring together with its brace, gamma(g) = omega^{c(g)}, c the
/// coefficient sum mod p.
struct ExampleBrace {
  TruncatedCyclotomicRing ring;
  Brace brace;
};

inline ExampleBrace build_example_brace(const TruncatedCyclotomicRing& ring, const CheckOptions& opt = {}) {
  GammaFunction gamma = gamma_from_kernel_hom(ring.spec(), ring.coefficient_sum(), 1, ring.omega(), opt);
  return ExampleBrace{ring, Brace::create(ring.spec(), std::move(gamma), opt)};
}

inline ExampleBrace build_example_brace(i64 p, int k, const CheckOptions& opt = {}) {
  return build_example_brace(build_ring(p, k), opt);
}

/// Element sweeps are exhaustive up to this group order, sampled above.
inline constexpr u64 kExampleExhaustiveBound = 729;

namespace detail {

/// Indices of the elements to sweep: all of G, or opt.samples random elements
/// satisfying `want` (rejection sampling).
template <class Want>
std::vector<u64> example_sweep(const ExampleBrace& ex, const CheckOptions& opt, std::uint64_t salt, Want want,
                               bool& exhaustive) {
  const GroupSpec& g = ex.ring.spec();
  std::vector<u64> idx;
  exhaustive = g.order() <= kExampleExhaustiveBound;
  if (exhaustive) {
    for (u64 i = 0; i < g.order(); ++i)
      if (want(g.element_at(i))) idx.push_back(i);
    return idx;
  }
  std::mt19937_64 rng(opt.seed ^ salt);
  while (idx.size() < opt.samples) {
    u64 i = uniform_index(rng, g.order());
    if (want(g.element_at(i))) idx.push_back(i);
  }
  return idx;
}

}  // namespace detail

struct SweepReport {
  bool exhaustive = false;
  u64 checked = 0;
  std::optional<GroupElement> witness;

  bool passed() const { return !witness; }
};

/// Every element outside the ideal has circle order p.
inline SweepReport fact1_check(const ExampleBrace& ex, const CheckOptions& opt = {}) {
  SweepReport rep;
  auto idx = detail::example_sweep(ex, opt, 0x1f, [&](const GroupElement& g) { return !ex.ring.in_ideal(g); },
                                   rep.exhaustive);
  rep.checked = idx.size();
  auto bad = detail::find_first_failure(idx.size(), opt.workers, [&](u64 k) {
    return detail::circle_log_order_index(ex.brace, idx[k]) == 1;
  });
  if (bad) rep.witness = ex.ring.spec().element_at(idx[*bad]);
  return rep;
}

struct PropositionReport {
  /// (1) (G, o) is non-abelian, with a non-commuting pair (u, h), h in H.
  bool non_abelian = false;
  std::optional<std::pair<GroupElement, GroupElement>> non_commuting;
  /// k(p-1) <= 2: every group of order p or p^2 is abelian, so clause (1) cannot hold.
  bool clause1_unattainable = false;
  /// (2) additive and circle orders agree on H.
  SweepReport inside;
  /// (3) outside H: additive order p^k, circle order p.
  SweepReport outside;
  bool ideal_maximal = false;
  /// k = 1: the order-p^k claim in (3) degenerates to order p.
  bool degenerate_k = false;

  bool ok() const {
    return (non_abelian || clause1_unattainable) && inside.passed() && outside.passed() && ideal_maximal;
  }
};

inline PropositionReport verify_proposition_examples(const ExampleBrace& ex, const CheckOptions& opt = {}) {
  PropositionReport rep;
  const auto& ring = ex.ring;
  const Brace& b = ex.brace;
  const GroupSpec& g = ring.spec();
  rep.clause1_unattainable = ring.spec().log_order() <= 2;
  rep.degenerate_k = ring.level() == 1;

  // omega h != h for some h in H gives u^{-1} o h o u = omega h != h.
  u64 u = g.index_of(ring.unit());
  std::mt19937_64 rng(opt.seed ^ 0x2e);
  u64 tries = g.order() <= kExampleExhaustiveBound ? g.order() : opt.samples;
  for (u64 k = 0; k < tries && !rep.non_commuting; ++k) {
    u64 h = g.order() <= kExampleExhaustiveBound ? k : detail::uniform_index(rng, g.order());
    if (!ring.in_ideal(g.element_at(h))) continue;
    if (b.circle_index(u, h) != b.circle_index(h, u))
      rep.non_commuting = std::make_pair(ring.unit(), g.element_at(h));
  }
  if (!rep.non_commuting && g.order() <= kExampleExhaustiveBound) {
    for (u64 x = 0; x < g.order() && !rep.non_commuting; ++x)
      for (u64 y = 0; y < g.order(); ++y)
        if (b.circle_index(x, y) != b.circle_index(y, x)) {
          rep.non_commuting = std::make_pair(g.element_at(x), g.element_at(y));
          break;
        }
  }
  rep.non_abelian = rep.non_commuting.has_value();

  auto idx_in = detail::example_sweep(ex, opt, 0x3a, [&](const GroupElement& x) { return ring.in_ideal(x); },
                                      rep.inside.exhaustive);
  rep.inside.checked = idx_in.size();
  if (auto bad = detail::find_first_failure(idx_in.size(), opt.workers, [&](u64 k) {
        return element_log_order(g.element_at(idx_in[k])) == detail::circle_log_order_index(b, idx_in[k]);
      }))
    rep.inside.witness = g.element_at(idx_in[*bad]);

  auto idx_out = detail::example_sweep(ex, opt, 0x4b, [&](const GroupElement& x) { return !ring.in_ideal(x); },
                                       rep.outside.exhaustive);
  rep.outside.checked = idx_out.size();
  if (auto bad = detail::find_first_failure(idx_out.size(), opt.workers, [&](u64 k) {
        return element_log_order(g.element_at(idx_out[k])) == ring.level() &&
               detail::circle_log_order_index(b, idx_out[k]) == 1;
      }))
    rep.outside.witness = g.element_at(idx_out[*bad]);

  rep.ideal_maximal = ring.ideal_order() * static_cast<u64>(ring.prime()) == g.order() &&
                      !ring.in_ideal(ring.unit());
  return rep;
}

/// u^{-1} o h o u == omega h for h in H (exhaustive when |H| <= 3^5).
inline SweepReport conjugation_identity_check(const ExampleBrace& ex, const CheckOptions& opt = {}) {
  SweepReport rep;
  const auto& ring = ex.ring;
  const Brace& b = ex.brace;
  const GroupSpec& g = ring.spec();
  auto idx = detail::example_sweep(ex, opt, 0x5c, [&](const GroupElement& x) { return ring.in_ideal(x); },
                                   rep.exhaustive);
  rep.checked = idx.size();
  u64 u = g.index_of(ring.unit());
  u64 uinv = b.circle_inverse_index(u);
  auto bad = detail::find_first_failure(idx.size(), opt.workers, [&](u64 k) {
    u64 lhs = b.circle_index(b.circle_index(uinv, idx[k]), u);
    return lhs == g.index_of(apply(ring.omega(), g.element_at(idx[k])));
  });
  if (bad) rep.witness = g.element_at(idx[*bad]);
  return rep;
}

/// h1 o h2 == h1 + h2 on the ideal; exhaustive over H x H when |H| <= 3^5,
/// else opt.samples random pairs. The witness is h1 (h2 in `partner`).
struct CoincideReport {
  SweepReport sweep;
  std::optional<GroupElement> partner;
  bool passed() const { return sweep.passed(); }
};

inline CoincideReport operations_coincide_on_ideal(const ExampleBrace& ex, const CheckOptions& opt = {}) {
  CoincideReport rep;
  const auto& ring = ex.ring;
  const Brace& b = ex.brace;
  const GroupSpec& g = ring.spec();
  bool exhaustive = false;
  auto hs = detail::example_sweep(ex, opt, 0x6d, [&](const GroupElement& x) { return ring.in_ideal(x); },
                                  exhaustive);
  std::vector<std::pair<u64, u64>> pairs;
  if (exhaustive) {
    for (u64 x : hs)
      for (u64 y : hs) pairs.emplace_back(x, y);
  } else {
    std::mt19937_64 rng(opt.seed ^ 0x7e);
    for (u64 k = 0; k < hs.size(); ++k) pairs.emplace_back(hs[k], hs[detail::uniform_index(rng, hs.size())]);
  }
  rep.sweep.exhaustive = exhaustive;
  rep.sweep.checked = pairs.size();
  auto bad = detail::find_first_failure(pairs.size(), opt.workers, [&](u64 k) {
    return b.circle_index(pairs[k].first, pairs[k].second) == b.add_index(pairs[k].first, pairs[k].second);
  });
  if (bad) {
    rep.sweep.witness = g.element_at(pairs[*bad].first);
    rep.partner = g.element_at(pairs[*bad].second);
  }
  return rep;
}

}  // namespace skewbrace
