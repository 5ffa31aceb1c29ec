#pragma once

// Gamma functions G -> Aut(G): maps satisfying
//     gamma(h^{gamma(g)} + g) = gamma(h) gamma(g)   for all h, g.
// Each one defines the circle operation h o g = h^{gamma(g)} + g.

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "skewbrace/morphisms.hpp"
#include "skewbrace/parallel.hpp"

namespace skewbrace {

/// Exhaustive pair checks run up to this group order.
inline constexpr u64 kExhaustivePairBound = u64{1} << 12;
/// Table-encoded gamma functions are accepted up to this group order.
inline constexpr u64 kTableBound = u64{1} << 12;
/// Largest p^m for a kernel-hom target Z/p^m (powers of A are cached).
inline constexpr i64 kKernelHomModulusBound = i64{1} << 16;

class GammaFunction {
 public:
  enum class Encoding { table, kernel_hom };

  /// Explicit values gamma(g) for every g in canonical element order. `pool`
  /// holds the distinct automorphisms, `ids` indexes into it.
  static GammaFunction table(GroupSpec g, std::shared_ptr<const std::vector<Automorphism>> pool,
                             std::vector<std::uint32_t> ids) {
    if (g.order() > kTableBound)
      throw BoundExceeded("table-encoded gamma rejected for |G| = " + std::to_string(g.order()) +
                          " > 2^12; use the kernel-hom encoding");
    if (ids.size() != g.order()) throw ValidationError("gamma table must list every element");
    for (const auto& a : *pool) require_same(g, a.spec());
    for (auto id : ids)
      if (id >= pool->size()) throw ValidationError("gamma table id out of range");
    auto impl = std::make_shared<Impl>(g);
    impl->encoding = Encoding::table;
    impl->pool = std::move(pool);
    impl->ids = std::move(ids);
    return GammaFunction(std::move(impl));
  }

  static GammaFunction table(const GroupSpec& g, const std::vector<Automorphism>& values) {
    std::map<std::vector<i64>, std::uint32_t> seen;
    auto pool = std::make_shared<std::vector<Automorphism>>();
    std::vector<std::uint32_t> ids;
    ids.reserve(values.size());
    for (const auto& a : values) {
      auto [it, fresh] = seen.try_emplace(a.matrix().entries(), static_cast<std::uint32_t>(pool->size()));
      if (fresh) pool->push_back(a);
      ids.push_back(it->second);
    }
    return table(g, std::move(pool), std::move(ids));
  }

  /// gamma(g) = A^{c(g)} with c: G -> Z/p^m given by coefficients. Checks the
  /// structure (c is a homomorphism, A^{p^m} = id) but not the commutator
  /// premise; see gamma_from_kernel_hom.
  static GammaFunction kernel_hom(GroupSpec g, std::vector<i64> coeffs, int mod_exp, Automorphism a) {
    require_same(g, a.spec());
    if (coeffs.size() != g.rank()) throw ValidationError("functional has wrong number of coefficients");
    if (mod_exp < 0) throw ValidationError("negative modulus exponent");
    auto modulus = arith::checked_pow(g.prime(), mod_exp);
    if (!modulus || *modulus > kKernelHomModulusBound)
      throw BoundExceeded("kernel-hom modulus p^m above 2^16");
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      coeffs[i] = arith::mod(coeffs[i], *modulus);
      int gap = mod_exp - g.exponent(i);
      if (gap > 0 && coeffs[i] % arith::ipow(g.prime(), gap) != 0)
        throw ValidationError("coefficient " + std::to_string(i + 1) +
                              " does not define a homomorphism to Z/p^" + std::to_string(mod_exp));
    }
    auto impl = std::make_shared<Impl>(g);
    impl->encoding = Encoding::kernel_hom;
    impl->coeffs = std::move(coeffs);
    impl->mod_exp = mod_exp;
    impl->modulus = *modulus;
    auto pool = std::make_shared<std::vector<Automorphism>>();
    pool->reserve(static_cast<std::size_t>(*modulus));
    pool->push_back(Automorphism::identity(g));
    for (i64 k = 1; k < *modulus; ++k) pool->push_back(compose(pool->back(), a));
    if (!compose(pool->back(), a).is_identity())
      throw ValidationError("A^{p^m} is not the identity for A = " + a.matrix().literal());
    impl->pool = std::move(pool);
    return GammaFunction(std::move(impl));
  }

  static GammaFunction trivial(const GroupSpec& g) {
    return kernel_hom(g, std::vector<i64>(g.rank(), 0), 0, Automorphism::identity(g));
  }

  Encoding encoding() const { return impl_->encoding; }
  const GroupSpec& spec() const { return impl_->spec; }

  /// Position of gamma(g) in pool().
  std::uint32_t value_id(u64 index) const {
    if (impl_->encoding == Encoding::table) return impl_->ids[index];
    return static_cast<std::uint32_t>(functional_index(index));
  }
  const Automorphism& at_index(u64 index) const { return (*impl_->pool)[value_id(index)]; }
  const Automorphism& operator()(const GroupElement& g) const {
    return at_index(impl_->spec.index_of(g));
  }
  /// Distinct values (table) or the powers A^0..A^{p^m - 1} (kernel-hom).
  const std::vector<Automorphism>& pool() const { return *impl_->pool; }
  const std::shared_ptr<const std::vector<Automorphism>>& shared_pool() const { return impl_->pool; }

  // Kernel-hom accessors.
  const std::vector<i64>& coeffs() const { return impl_->coeffs; }
  int mod_exp() const { return impl_->mod_exp; }
  i64 functional_modulus() const { return impl_->modulus; }
  const Automorphism& generator() const {
    return impl_->pool->size() > 1 ? (*impl_->pool)[1] : (*impl_->pool)[0];
  }
  i64 functional(const GroupElement& g) const { return functional_index(impl_->spec.index_of(g)); }

 private:
  struct Impl {
    explicit Impl(GroupSpec g) : spec(std::move(g)) {}
    GroupSpec spec;
    Encoding encoding = Encoding::table;
    std::shared_ptr<const std::vector<Automorphism>> pool;
    std::vector<std::uint32_t> ids;
    std::vector<i64> coeffs;
    int mod_exp = 0;
    i64 modulus = 1;
  };

  explicit GammaFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  i64 functional_index(u64 index) const {
    const GroupSpec& g = impl_->spec;
    __int128 s = 0;
    for (std::size_t i = 0; i < g.rank(); ++i) {
      u64 coord = (index / g.stride(i)) % static_cast<u64>(g.modulus(i));
      s += static_cast<__int128>(impl_->coeffs[i]) * static_cast<__int128>(coord);
    }
    return static_cast<i64>(s % impl_->modulus);
  }

  std::shared_ptr<const Impl> impl_;
};

namespace detail {

inline u64 circle_index_slow(const GammaFunction& gamma, u64 h, u64 g) {
  const GroupSpec& spec = gamma.spec();
  GroupElement ge = spec.element_at(g);
  return spec.index_of(apply(gamma.at_index(g), spec.element_at(h)) + ge);
}

/// Uniform index in [0, n).
inline u64 uniform_index(std::mt19937_64& rng, u64 n) {
  return std::uniform_int_distribution<u64>(0, n - 1)(rng);
}

}  // namespace detail

struct GammaValidation {
  enum class Mode { exhaustive_pass, structural_sampled_pass, fail };
  Mode mode = Mode::fail;
  u64 pairs_checked = 0;
  /// Failing pair (h, g) of the functional equation.
  std::optional<std::pair<GroupElement, GroupElement>> witness;
  /// Element x with A x - x outside ker c (kernel-hom premise).
  std::optional<GroupElement> premise_witness;
  std::string reason;

  bool passed() const { return mode != Mode::fail; }
};

inline const char* to_string(GammaValidation::Mode m) {
  switch (m) {
    case GammaValidation::Mode::exhaustive_pass: return "exhaustive-pass";
    case GammaValidation::Mode::structural_sampled_pass: return "structural+sampled-pass";
    case GammaValidation::Mode::fail: return "fail";
  }
  return "?";
}

namespace detail {

/// First x among `candidates` with c(Ax - x) != 0.
inline std::optional<GroupElement> kernel_hom_premise_failure(const GammaFunction& gamma,
                                                              const std::vector<u64>& candidates,
                                                              unsigned workers) {
  const GroupSpec& g = gamma.spec();
  const Automorphism& a = gamma.generator();
  auto bad = find_first_failure(candidates.size(), workers, [&](u64 k) {
    GroupElement x = g.element_at(candidates[k]);
    return gamma.functional(apply(a, x) - x) == 0;
  });
  if (!bad) return std::nullopt;
  return g.element_at(candidates[*bad]);
}

inline std::vector<u64> premise_candidates(const GroupSpec& g, const CheckOptions& opt) {
  std::vector<u64> idx;
  if (g.order() <= kExhaustivePairBound) {
    for (u64 i = 0; i < g.order(); ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t i = 0; i < g.rank(); ++i) idx.push_back(g.index_of(GroupElement::basis(g, i)));
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  for (u64 k = 0; k < opt.samples; ++k) idx.push_back(uniform_index(rng, g.order()));
  return idx;
}

}  // namespace detail

/// Checks the functional equation: all |G|^2 pairs when |G| <= 2^12; above
/// that (kernel-hom only) the structural premise on generators plus at least
/// opt.samples random pairs.
inline GammaValidation validate_gamma(const GroupSpec& g, const GammaFunction& gamma,
                                      const CheckOptions& opt = {}) {
  require_same(g, gamma.spec());
  GammaValidation report;
  const u64 n = g.order();
  const auto& pool = gamma.pool();

  // Products of pool values, keyed by id pair; computed lazily per worker.
  auto holds = [&](u64 h, u64 gi, std::map<std::pair<std::uint32_t, std::uint32_t>, EndoMatrix>& cache) {
    u64 hg = detail::circle_index_slow(gamma, h, gi);
    auto key = std::make_pair(gamma.value_id(h), gamma.value_id(gi));
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, compose(pool[key.first].matrix(), pool[key.second].matrix())).first;
    return pool[gamma.value_id(hg)].matrix() == it->second;
  };

  std::vector<std::pair<u64, u64>> sampled;
  u64 total;
  bool exhaustive = n <= kExhaustivePairBound;
  if (exhaustive) {
    total = n * n;
  } else {
    if (gamma.encoding() != GammaFunction::Encoding::kernel_hom) {
      report.reason = "table encoding above 2^12 elements";
      return report;
    }
    if (auto x = detail::kernel_hom_premise_failure(gamma, detail::premise_candidates(g, opt), opt.workers)) {
      report.premise_witness = *x;
      report.reason = "commutator premise fails: A x - x not in ker c";
      return report;
    }
    std::mt19937_64 rng(opt.seed);
    for (u64 k = 0; k < opt.samples; ++k) {
      u64 a = detail::uniform_index(rng, n);
      u64 b = detail::uniform_index(rng, n);
      sampled.emplace_back(a, b);
    }
    total = sampled.size();
  }

  std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, EndoMatrix>> caches(std::max(1u, opt.workers));
  std::atomic<std::uint64_t> best{total};
  detail::parallel_chunks(total, opt.workers, [&](u64 b, u64 e, unsigned w) {
    auto& cache = caches[w];
    for (u64 i = b; i < e; ++i) {
      if (i >= best.load(std::memory_order_relaxed)) return;
      u64 h = exhaustive ? i / n : sampled[i].first;
      u64 gi = exhaustive ? i % n : sampled[i].second;
      if (!holds(h, gi, cache)) {
        std::uint64_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });
  report.pairs_checked = total;
  if (best.load() < total) {
    u64 i = best.load();
    u64 h = exhaustive ? i / n : sampled[i].first;
    u64 gi = exhaustive ? i % n : sampled[i].second;
    report.witness = std::make_pair(g.element_at(h), g.element_at(gi));
    report.reason = "functional equation fails";
    return report;
  }
  report.mode = exhaustive ? GammaValidation::Mode::exhaustive_pass
                           : GammaValidation::Mode::structural_sampled_pass;
  return report;
}

/// Kernel-hom gamma with the premise [G, gamma(G)] in ker gamma checked:
/// c(Ax - x) = 0 for every x (exhaustive up to 2^12 elements, otherwise on the
/// standard generators plus random elements; the map x -> Ax - x is linear,
/// so the generator check already decides it).
inline GammaFunction gamma_from_kernel_hom(const GroupSpec& g, std::vector<i64> coeffs, int mod_exp,
                                           const Automorphism& a, const CheckOptions& opt = {}) {
  GammaFunction gamma = GammaFunction::kernel_hom(g, std::move(coeffs), mod_exp, a);
  if (auto x = detail::kernel_hom_premise_failure(gamma, detail::premise_candidates(g, opt), opt.workers))
    throw ValidationError("kernel-hom premise fails at x = " + x->literal() +
                          ": A x - x is not in the kernel of c");
  return gamma;
}

}  // namespace skewbrace
