#pragma once

// Explicit derivation constructions on extra-special quotients, commutator
// homomorphisms into central sections, and the subgroup congruence checks.

#include <optional>
#include <string>
#include <vector>

#include "pnoninner/cohomology.hpp"
#include "pnoninner/structure.hpp"

namespace pnoninner {

// A word in abstract letters 0..k-1 (exponent +-1 per entry), evaluated
// through an assignment of letters to elements of Q.
struct FreeLetter {
  int letter = 0;
  int exp = 1;
};
using FreeWord = std::vector<FreeLetter>;

FreeWord free_commutator(const FreeWord& a, const FreeWord& b);
FreeWord free_left_normed(const std::vector<FreeWord>& args);
FreeWord free_power(const FreeWord& a, int k);

// Value of the derivation of the free group determined by letter -> images
// (acting through letter -> at) on w.
gfp::Vector evaluate_free(const GModule& m, const std::vector<Element>& at,
                          const std::vector<gfp::Vector>& images, const FreeWord& w);

struct Lemma22Result {
  Derivation delta;
  SymplecticBasis basis;
  gfp::Vector z0;
  // delta on x_i and y_i, in basis order.
  std::vector<gfp::Vector> x_values;
  std::vector<gfp::Vector> y_values;
};

// m.group() must be extra-special of exponent p with M^G = [M, G] of order p
// and d(M) >= d(G).
Lemma22Result lemma22_derivation(const GModule& m);
// Same with a prescribed symplectic basis of m.group().
Lemma22Result lemma22_derivation(const GModule& m, const SymplecticBasis& basis);

enum class QuotientKind { ExtraSpecial, UtimesV };

struct Theorem25Result {
  Subgroup n;
  QuotientMap quotient;
  QuotientKind kind;
  UVDecomposition uv;  // in quotient.target()
};

// Throws PreconditionError for powerful G.
Theorem25Result theorem25_quotient(const PcPresentation& g);

// The left-normed commutator of args with the module element inserted at
// position slot (0 <= slot <= args.size()).
struct CommutatorTemplate {
  std::vector<Element> args;
  int slot = 0;
  int weight() const { return static_cast<int>(args.size()) + 1; }
};

Element apply_template(const PcPresentation& g, const CommutatorTemplate& t, const Element& a);

// A GF(p)-linear map between elementary abelian subgroups of the same group,
// in the coordinates of their canonical igs. Row k of matrix is the image of
// the k-th domain generator.
struct LinearMap {
  Subgroup domain;
  Subgroup codomain;
  gfp::Matrix matrix;
  std::vector<gfp::Vector> kernel() const;
};

// a -> t(a) on the elementary abelian subgroup a_sub. The codomain is the
// subgroup generated by the images; throws Error if it is not elementary
// abelian or if additivity fails on sampled pairs.
LinearMap build_commutator_hom(const CommutatorTemplate& t, const Subgroup& a_sub, int samples = 16);

enum class TauVariant { Tau, Tau1, Tau2, Tau3, Mu };

std::string to_string(TauVariant v);

struct TauResult {
  TauVariant variant;
  Element x, y;
  Subgroup n;       // P3 for tau, tau1, tau2; K for tau3; trivial for mu
  Subgroup domain;  // a, b range over this subgroup
  // Values of the components, one row per basis vector of domain^2 (a part
  // first), each row the concatenated codomain coordinates.
  gfp::Matrix matrix;
  std::vector<Subgroup> codomains;
  std::vector<gfp::Vector> kernel;  // vectors in domain^2 coordinates
  std::optional<GModule> module;    // Q = G/n acting on domain
  std::vector<Derivation> derivations;  // one per kernel basis vector
};

// Throws PreconditionError naming the failed structural requirement.
TauResult tau_maps(const PcPresentation& g, TauVariant variant);

// Subgroups K with Z_4(G) G^p gamma_4(G) <= K <= G^p gamma_3(G), K normal,
// G/K of maximal class and order p^4.
std::vector<Subgroup> tau3_k_candidates(const PcPresentation& g);

enum class Lemma45Clause { I, II, III, IV, V };

struct Lemma45Setting {
  const GModule* module;   // built by build_module(N, A)
  Element x, y, z, w;      // elements of Q = G/N
};

// Closed-form right-hand side, computed by collection in G.
Element lemma45_eval(const Lemma45Setting& s, const Derivation& d, Lemma45Clause which);
// The left-hand side evaluated directly from the derivation.
Element lemma45_direct(const Lemma45Setting& s, const Derivation& d, Lemma45Clause which);

struct Theorem53Result {
  bool clause_i = false;
  bool clause_ii = false;
  bool holds() const { return clause_i && clause_ii; }
};

Theorem53Result theorem53_check(const PcPresentation& g, const Subgroup& n, const Subgroup& m, int r, int l);

struct Theorem42Result {
  std::optional<Automorphism> automorphism;
  std::vector<std::string> log;
  std::string failure;  // empty when an automorphism was produced
  std::optional<Subgroup> n;
};

Theorem42Result theorem42_pipeline(const PcPresentation& g);

}  // namespace pnoninner
