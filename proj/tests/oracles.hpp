#pragma once

// Brute-force reference computations used only by the tests. They work from
// definitions (repeated addition, closure by search) and never call the
// closed forms they are compared against.

#include <set>
#include <vector>

#include "skewbrace/skewbrace.hpp"

namespace oracle {

using namespace skewbrace;

inline void partitions(int n, int largest, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(n, largest); k >= 1; --k) {
    cur.push_back(k);
    partitions(n - k, k, cur, out);
    cur.pop_back();
  }
}

/// Every abelian p-group spec of order p^n.
inline std::vector<GroupSpec> specs_of_log_order(i64 p, int n) {
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(n, n, cur, parts);
  std::vector<GroupSpec> out;
  for (auto& e : parts) out.emplace_back(p, e);
  return out;
}

/// Every spec with order <= bound over the given primes.
inline std::vector<GroupSpec> specs_up_to(u64 bound, std::initializer_list<i64> primes) {
  std::vector<GroupSpec> out;
  for (i64 p : primes)
    for (int n = 1; static_cast<u64>(arith::ipow(p, n)) <= bound; ++n)
      for (auto& g : specs_of_log_order(p, n)) out.push_back(g);
  return out;
}

/// Least n >= 1 with n * a = 0, by repeated addition.
inline u64 order_by_addition(const GroupElement& a) {
  GroupElement x = a;
  u64 n = 1;
  while (!x.is_zero()) {
    x = x + a;
    ++n;
  }
  return n;
}

inline OrderHistogram histogram_by_addition(const GroupSpec& g) {
  OrderHistogram h;
  for (u64 i = 0; i < g.order(); ++i) ++h[order_by_addition(g.element_at(i))];
  return h;
}

/// Closure of gens under + by breadth-first search, as sorted indices.
inline std::vector<u64> closure(const GroupSpec& g, const std::vector<GroupElement>& gens) {
  std::set<u64> seen{0};
  std::vector<u64> frontier{0};
  while (!frontier.empty()) {
    std::vector<u64> next;
    for (u64 x : frontier)
      for (const auto& s : gens) {
        u64 y = g.index_of(g.element_at(x) + s);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Order of g in (G, o), by repeated circle multiplication with objects.
inline u64 circle_order_by_iteration(const Brace& b, const GroupElement& g) {
  GroupElement x = g;
  u64 n = 1;
  while (!x.is_zero()) {
    x = circle(b, x, g);
    ++n;
  }
  return n;
}

/// max log_p |S| over subgroups S of exponent p, reached by adjoining one
/// order-p element at a time to every subgroup found so far. Tiny groups only.
template <class Op>
std::size_t rank_by_subsets(u64 n, u64 p, Op op) {
  std::vector<u64> order_p;
  for (u64 x = 1; x < n; ++x) {
    u64 y = x;
    u64 k = 1;
    while (y != 0) {
      y = op(y, x);
      ++k;
    }
    if (k == p) order_p.push_back(x);
  }
  auto gen = [&](const std::vector<u64>& gens) {
    std::set<u64> s{0};
    std::vector<u64> frontier{0};
    while (!frontier.empty()) {
      std::vector<u64> next;
      for (u64 x : frontier)
        for (u64 t : gens) {
          u64 y = op(x, t);
          if (s.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return s;
  };
  auto exponent_p = [&](const std::set<u64>& s) {
    for (u64 x : s) {
      u64 y = 0;
      for (u64 k = 0; k < p; ++k) y = op(y, x);
      if (y != 0) return false;
    }
    return true;
  };
  std::size_t best = 0;
  std::set<std::set<u64>> visited;
  std::vector<std::set<u64>> stack{{0}};
  visited.insert({0});
  while (!stack.empty()) {
    std::set<u64> s = stack.back();
    stack.pop_back();
    std::size_t r = 0;
    for (u64 m = s.size(); m > 1; m /= p) ++r;
    best = std::max(best, r);
    for (u64 x : order_p) {
      if (s.count(x)) continue;
      std::vector<u64> gens(s.begin(), s.end());
      gens.push_back(x);
      std::set<u64> t = gen(gens);
      if (!exponent_p(t)) continue;
      if (visited.insert(t).second) stack.push_back(std::move(t));
    }
  }
  return best;
}

}  // namespace oracle
