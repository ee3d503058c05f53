#pragma once

// Independent reference computations for the tests. Nothing here uses the
// subgroup echelon code, the GF(p) solver or the module machinery; groups are
// touched only through multiply/inverse or through explicit matrix models.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "pnoninner/pc.hpp"

namespace oracle {

using pnoninner::Element;
using pnoninner::PcPresentation;

// 3x3 upper unitriangular matrices over Z/p, stored as (a, b, c) for
// [[1,a,c],[0,1,b],[0,0,1]].
struct Heis {
  long long a, b, c;
};

inline Heis heis_mul(const Heis& x, const Heis& y, int p) {
  return {(x.a + y.a) % p, (x.b + y.b) % p, (x.c + y.c + x.a * y.b) % p};
}

inline Heis heis_pow(const Heis& x, int k, int p) {
  Heis r{0, 0, 0};
  for (int i = 0; i < k; ++i) r = heis_mul(r, x, p);
  return r;
}

// x = g1 -> E12, y = g2 -> E23, c = g3 -> E13, so [x, y] = c with
// [a, b] = a^-1 b^-1 a b. Normal form x^e1 y^e2 c^e3.
inline Heis heis_of(const Element& e, int p) {
  Heis r = heis_pow({1, 0, 0}, e[0], p);
  r = heis_mul(r, heis_pow({0, 1, 0}, e[1], p), p);
  return heis_mul(r, heis_pow({0, 0, 1}, e[2], p), p);
}

inline bool operator==(const Heis& x, const Heis& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }

// (v, t) in (Z/p)^(n-1) x| Z/p with g_1 = (0, 1) acting by v -> v J where J
// is the shift v_i -> v_i + v_(i-1). This realises [g_i, g_1] = g_(i+1) for
// the maximal-class family (C_p^(n-1) extended by a unipotent Jordan block).
struct Affine {
  std::vector<long long> v;
  long long t;
};

inline std::vector<long long> shift_action(std::vector<long long> v, long long t, int p) {
  // v^(g_1^t): conjugation by g_1 sends g_i to g_i g_(i+1).
  for (long long s = 0; s < t; ++s)
    for (std::size_t i = v.size(); i-- > 1;) v[i] = (v[i] + v[i - 1]) % p;
  return v;
}

// Multiplication with (v, t)(w, u) = (v^(g_1^u) + w, t + u), reading
// elements as g_1^t v in the product g_1^t * prod g_i^(v_i).
inline Affine affine_mul(const Affine& x, const Affine& y, int p) {
  auto v = shift_action(x.v, y.t, p);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + y.v[i]) % p;
  return {v, (x.t + y.t) % p};
}

inline Affine affine_of(const Element& e, int p) {
  Affine r{std::vector<long long>(static_cast<std::size_t>(e.size() - 1), 0), e[0] % p};
  for (int i = 1; i < e.size(); ++i) r.v[static_cast<std::size_t>(i - 1)] = e[i];
  return r;
}

inline bool operator==(const Affine& x, const Affine& y) { return x.v == y.v && x.t == y.t; }

// Subgroup generated by gens, by closure under multiplication.
inline std::set<Element> closure(const PcPresentation& g, const std::vector<Element>& gens) {
  std::set<Element> out{g.identity()};
  std::vector<Element> frontier{g.identity()};
  while (!frontier.empty()) {
    const Element h = frontier.back();
    frontier.pop_back();
    for (const auto& s : gens) {
      const Element n = g.multiply(h, s);
      if (out.insert(n).second) frontier.push_back(n);
    }
  }
  return out;
}

inline std::set<Element> center_brute(const PcPresentation& g) {
  const auto all = pnoninner::enumerate(g);
  std::set<Element> out;
  for (const auto& z : all)
    if (std::all_of(all.begin(), all.end(), [&](const Element& x) { return g.multiply(z, x) == g.multiply(x, z); }))
      out.insert(z);
  return out;
}

inline std::set<Element> centralizer_brute(const PcPresentation& g, const std::vector<Element>& s) {
  std::set<Element> out;
  for (const auto& z : pnoninner::enumerate(g))
    if (std::all_of(s.begin(), s.end(), [&](const Element& x) { return g.multiply(z, x) == g.multiply(x, z); }))
      out.insert(z);
  return out;
}

// Commutator subgroup [A, B] as the closure of all commutators.
inline std::set<Element> commutator_brute(const PcPresentation& g, const std::set<Element>& a,
                                          const std::set<Element>& b) {
  std::set<Element> gens;
  for (const auto& x : a)
    for (const auto& y : b) gens.insert(g.commutator(x, y));
  return closure(g, {gens.begin(), gens.end()});
}

// Z^1 and B^1 of Q = G/N on A <= Z(N) counted by brute force. Q is handled
// through coset representatives: cosets are sets xN, the action of xN on A is
// conjugation by x. Every map from the generating cosets to A is extended
// along the Cayley graph of Q and kept if it obeys d(qh) = d(q)^h d(h) on all
// pairs.
struct CocycleCount {
  std::uint64_t z1 = 0;
  std::uint64_t b1 = 0;
};

inline CocycleCount count_cocycles(const PcPresentation& g, const std::set<Element>& n, const std::set<Element>& a,
                                   const std::vector<Element>& q_gens) {
  // Coset of x: the least element of xN.
  auto coset = [&](const Element& x) {
    Element best = g.multiply(x, *n.begin());
    for (const auto& m : n) best = std::min(best, g.multiply(x, m));
    return best;
  };
  std::map<Element, Element> rep;  // coset label -> representative
  for (const auto& x : closure(g, [&] {
         auto v = q_gens;
         v.insert(v.end(), n.begin(), n.end());
         return v;
       }()))
    rep.emplace(coset(x), x);
  std::vector<Element> labels;
  for (const auto& [k, v] : rep) labels.push_back(k);
  const std::vector<Element> a_list(a.begin(), a.end());
  const std::size_t k = q_gens.size();

  std::set<std::vector<Element>> z1;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    std::map<Element, Element> d;
    d[coset(g.identity())] = g.identity();
    std::vector<Element> frontier{coset(g.identity())};
    bool ok = true;
    while (!frontier.empty() && ok) {
      const Element q = frontier.back();
      frontier.pop_back();
      for (std::size_t j = 0; j < k && ok; ++j) {
        const Element h = q_gens[j];
        const Element qh = coset(g.multiply(rep.at(q), h));
        const Element val = g.multiply(g.conjugate(d.at(q), h), a_list[idx[j]]);
        auto [it, fresh] = d.emplace(qh, val);
        if (fresh) frontier.push_back(qh);
        else if (it->second != val) ok = false;
      }
    }
    if (ok) {
      for (const auto& q : labels)
        for (const auto& h : labels) {
          const Element qh = coset(g.multiply(rep.at(q), rep.at(h)));
          if (d.at(qh) != g.multiply(g.conjugate(d.at(q), rep.at(h)), d.at(h))) ok = false;
        }
    }
    if (ok) {
      std::vector<Element> key;
      for (const auto& q : labels) key.push_back(d.at(q));
      z1.insert(key);
    }
    std::size_t j = 0;
    while (j < k && ++idx[j] == a_list.size()) idx[j++] = 0;
    if (j == k) break;
  }
  std::set<std::vector<Element>> b1;
  for (const auto& m : a_list) {
    std::vector<Element> key;
    for (const auto& q : labels) key.push_back(g.multiply(g.inverse(m), g.conjugate(m, rep.at(q))));
    b1.insert(key);
  }
  return {z1.size(), b1.size()};
}

// Mixed-radix index of an element (every relative order is p).
inline std::size_t index_of(const Element& e, int p) {
  std::size_t k = 0;
  for (int i = e.size(); i-- > 0;) k = k * static_cast<std::size_t>(p) + static_cast<std::size_t>(e[i]);
  return k;
}

// One representative per conjugacy class, by orbit closure under the generators.
inline std::vector<Element> class_reps(const PcPresentation& g) {
  const auto all = pnoninner::enumerate(g);
  std::vector<char> seen(all.size(), 0);
  std::vector<Element> reps;
  for (const auto& x : all) {
    if (seen[index_of(x, g.prime())]) continue;
    reps.push_back(x);
    std::vector<Element> stack{x};
    seen[index_of(x, g.prime())] = 1;
    while (!stack.empty()) {
      const Element y = stack.back();
      stack.pop_back();
      for (int i = 0; i < g.size(); ++i) {
        const Element z = g.conjugate(y, g.generator(i));
        if (!seen[index_of(z, g.prime())]) {
          seen[index_of(z, g.prime())] = 1;
          stack.push_back(z);
        }
      }
    }
  }
  return reps;
}

// Least element of each coset xZ(G) among xs.
inline std::vector<Element> mod_center(const PcPresentation& g, const std::vector<Element>& xs) {
  const auto z = center_brute(g);
  std::set<Element> out;
  for (const auto& x : xs) {
    Element best = x;
    for (const auto& c : z) best = std::min(best, g.multiply(x, c));
    out.insert(best);
  }
  return {out.begin(), out.end()};
}

}  // namespace oracle
