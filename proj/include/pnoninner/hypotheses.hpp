#pragma once

// Structural condition reports: the Hypothesis A/B items, the reduction
// predicates that already grant a non-inner automorphism of order p, and a
// few standalone equivalence checks used by the property tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnoninner/subgroup.hpp"

namespace pnoninner {

enum class Regularity { Regular, Irregular, Unknown };

struct RegularityResult {
  Regularity verdict = Regularity::Unknown;
  std::string reason;
  std::uint64_t pairs_checked = 0;
};

// Sufficient conditions first (class < p, |G| <= p^p, exponent p, gamma_2
// cyclic), then |Omega_1(G)| |G^p| = |G|, then a pair search bounded by
// budget. Unknown when neither side is established.
RegularityResult regularity(const PcPresentation& g, std::uint64_t budget = 4000);

struct Evidence {
  std::string name;
  long long value;
};

struct HypothesisEntry {
  std::string id;
  std::string statement;
  std::optional<bool> holds;  // nullopt: undetermined
  std::vector<Evidence> evidence;
};

enum class HypothesisLevel { A, B };

struct HypothesisReport {
  HypothesisLevel level = HypothesisLevel::A;
  std::vector<HypothesisEntry> entries;
  // Conjunction of the A.* items (and B.ii at level B).
  std::optional<bool> satisfied;
  // Some reduction predicate R.* or D2.* fires.
  bool reduction_fires = false;

  const HypothesisEntry* find(const std::string& id) const;
};

// Ids: A.i .. A.viii with sub-items A.vii.1-3 and A.viii.1a, A.viii.1b,
// A.viii.2, A.viii.3; reduction predicates R.i .. R.v, R.vii, R.viii (there
// is no R.vi); the two-generator predicate D2 with atoms D2.a, D2.b, D2.c;
// at level B also B.i, B.ii and L.cyclic (Omega_1(Z_2) <= Z(G^p gamma_3)).
HypothesisReport hypothesis_report(const PcPresentation& g, HypothesisLevel level = HypothesisLevel::A);

// [x, y^p] = 1, [x, y]^p = 1, [x^p, y] = 1.
struct MannTriple {
  bool x_yp, comm_p, xp_y;
  bool agree() const { return x_yp == comm_p && comm_p == xp_y; }
};
MannTriple mann_triple(const PcPresentation& g, const Element& x, const Element& y);

// For t: t in C_G(G^p), t^p in Z(G), [g, t]^p = 1 for all g.
struct Cor32Triple {
  bool centralizes_agemo, power_central, commutators_of_order_p;
  bool agree() const { return centralizes_agemo == power_central && power_central == commutators_of_order_p; }
};
Cor32Triple cor32_triple(const PcPresentation& g, const Element& t);

// If C_G(Z(N)) = N (N proper, nontrivial, normal) then Z(G) < Z(N) = C_G(N).
// Returns false only when the premise holds and the conclusion fails.
bool lemma36_check(const Subgroup& n);

std::string to_string(Regularity r);

}  // namespace pnoninner
