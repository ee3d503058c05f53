#pragma once

// Structural invariants: centers, central series, Frattini and agemo
// subgroups, omega, rank, class, and the U x V decomposition of groups with
// |gamma_2| = exp = p.

#include <optional>
#include <vector>

#include "pnoninner/subgroup.hpp"

namespace pnoninner {

Subgroup center(const PcPresentation& g);
Subgroup center(const Subgroup& h);

// [Z_0 = 1, Z_1, ..., Z_c = G]
std::vector<Subgroup> upper_central_series(const PcPresentation& g);
// [gamma_1 = G, gamma_2, ..., gamma_{c+1} = 1]
std::vector<Subgroup> lower_central_series(const PcPresentation& g);

// Z_i(G) and gamma_i(G) for any i >= 0 (resp. i >= 1); the series are
// extended by G (resp. 1) past the class.
Subgroup upper_central(const PcPresentation& g, int i);
Subgroup lower_central(const PcPresentation& g, int i);

// Subgroup generated by the p^k-th powers of elements of h (k >= 0).
Subgroup agemo(const Subgroup& h, int k = 1);
Subgroup agemo(const PcPresentation& g, int k = 1);
Subgroup frattini(const Subgroup& h);
Subgroup frattini(const PcPresentation& g);
// G^p gamma_k(G), k >= 2.
Subgroup agemo_gamma(const PcPresentation& g, int k);

// Elements of order dividing p of an abelian subgroup; PreconditionError if
// a is nonabelian.
Subgroup omega1(const Subgroup& a);
// Subgroup generated by the elements of order dividing p (any h).
Subgroup omega1_generated(const Subgroup& h);

// Minimal number of generators d(H) = log_p [H : Phi(H)].
int rank(const Subgroup& h);
int rank(const PcPresentation& g);
// d(H/K) for K normal in H.
int rank_mod(const Subgroup& h, const Subgroup& k);

int nilpotency_class(const PcPresentation& g);
int coclass(const PcPresentation& g);
long long exponent(const PcPresentation& g);
long long exponent(const Subgroup& h);

bool is_powerful(const PcPresentation& g);
bool is_extra_special(const PcPresentation& g);

// Generators of G at the positions that survive in G/Phi(G).
std::vector<Element> minimal_generators(const PcPresentation& g);
// Preimages of the hyperplanes of G/Phi(G), ordered by the normalized
// defining functional (first nonzero coordinate 1, lexicographic).
std::vector<Subgroup> maximal_subgroups(const PcPresentation& g);

// Instance of: if N <= L[N, G] then N <= L. Both subgroups must be normal.
bool lemma24_check(const Subgroup& n, const Subgroup& l);

// Pairs x_i, y_i with [x_i, y_i] = c spanning G modulo Z(G), for groups of
// class 2 with |gamma_2(G)| = p.
struct SymplecticBasis {
  std::vector<Element> x;
  std::vector<Element> y;
  Element c;
};
SymplecticBasis symplectic_basis(const PcPresentation& g);

struct UVDecomposition {
  Subgroup u;
  Subgroup v;
};
// G = U x V with U central elementary abelian and V extra-special, for
// |gamma_2(G)| = exp(G) = p. Returns nullopt when that precondition fails.
std::optional<UVDecomposition> decompose_uv(const PcPresentation& g);

}  // namespace pnoninner
