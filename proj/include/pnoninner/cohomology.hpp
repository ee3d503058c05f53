#pragma once

// Elementary abelian modules for a pc-presented group Q, derivations
// (1-cocycles) and their lifts to automorphisms.
//
// A module is a row space GF(p)^dim on which each generator of Q acts on the
// right by an invertible matrix. A derivation is given by the images of the
// generators of Q and obeys d(gh) = d(g) h + d(h).

#include <optional>
#include <string>
#include <vector>

#include "pnoninner/gfp.hpp"
#include "pnoninner/subgroup.hpp"

namespace pnoninner {

// The data behind a module built from an elementary abelian section
// A <= Z(N) of a group G, with Q = G/N.
struct ModuleEmbedding {
  PcPresentation group;
  QuotientMap quotient;
  Subgroup carrier;
};

class GModule {
 public:
  // A module given directly by one matrix per generator of q. Throws
  // InvalidArgument unless the matrices are invertible and satisfy every
  // relator of q.
  GModule(PcPresentation q, int dim, std::vector<gfp::Matrix> action);

  const PcPresentation& group() const { return q_; }
  int dim() const { return dim_; }
  int prime() const { return q_.prime(); }
  const gfp::Matrix& action(int gen) const { return action_[static_cast<std::size_t>(gen)]; }
  const gfp::Matrix& inverse_action(int gen) const { return inverse_[static_cast<std::size_t>(gen)]; }
  // Matrix of an arbitrary element of Q.
  gfp::Matrix action_of(const Element& q) const;
  gfp::Vector act(const gfp::Vector& m, const Element& q) const;

  bool embedded() const { return embedding_.has_value(); }
  const ModuleEmbedding& embedding() const;
  // Conversion between A and coordinate vectors (embedded modules only).
  gfp::Vector coordinates(const Element& a) const;
  Element element_of(const gfp::Vector& v) const;

 private:
  friend GModule build_module(const Subgroup& n, const Subgroup& a);

  PcPresentation q_;
  int dim_;
  std::vector<gfp::Matrix> action_;
  std::vector<gfp::Matrix> inverse_;
  std::optional<ModuleEmbedding> embedding_;
};

// Q = G/N acting on A by conjugation. Checks, in order: N normal, A <= N,
// A central in N, A normal in G, A elementary abelian.
GModule build_module(const Subgroup& n, const Subgroup& a);

// Relator words of a pc presentation: g_i^p w^-1 and [g_j, g_i] w^-1.
std::vector<Word> pc_relators(const PcPresentation& q);

// Subspaces are returned as reduced row echelon bases.
std::vector<gfp::Vector> fixed_points(const GModule& m);
std::vector<gfp::Vector> commutator_submodule(const GModule& m);

struct Derivation {
  std::vector<gfp::Vector> images;  // one per generator of Q

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

Derivation zero_derivation(const GModule& m);
Derivation add(const GModule& m, const Derivation& a, const Derivation& b);
Derivation scale(const GModule& m, const Derivation& a, int s);
bool is_zero(const Derivation& d);
// Flattened image vector (generator-major) and back.
gfp::Vector flatten(const Derivation& d);
Derivation unflatten(const GModule& m, const gfp::Vector& v);

// Value on a word, scanning d(uv) = d(u) v + d(v), d(t^-1) = -d(t) t^-1.
gfp::Vector evaluate_word(const GModule& m, const Derivation& d, const Word& w);
// Value on an element of Q via its normal-form word.
gfp::Vector evaluate(const GModule& m, const Derivation& d, const Element& q);

// Basis of Z^1(Q, M) in reduced echelon form of the flattened images.
std::vector<Derivation> derivation_space(const GModule& m);
// Basis of B^1(Q, M) (principal derivations g -> m g - m).
std::vector<Derivation> principal_space(const GModule& m);
Derivation principal_derivation(const GModule& m, const gfp::Vector& v);

// The derivation with prescribed values on a list of elements of Q, if one
// exists; the least such derivation in the echelon coordinates of Z^1.
std::optional<Derivation> solve_derivation(const GModule& m, const std::vector<Element>& at,
                                           const std::vector<gfp::Vector>& values);

// Checks d(gh) = d(g) h + d(h) for every pair in Q.
bool satisfies_cocycle_law(const GModule& m, const Derivation& d);

class Automorphism {
 public:
  // images[i] is the image of generator i.
  Automorphism(PcPresentation g, std::vector<Element> images);
  static Automorphism identity(const PcPresentation& g);
  static Automorphism conjugation(const PcPresentation& g, const Element& u);

  const PcPresentation& group() const { return g_; }
  const std::vector<Element>& images() const { return images_; }
  Element apply(const Element& x) const;

  // Relators preserved and image of order |G|.
  bool is_automorphism() const;
  bool is_identity() const;
  bool fixes(const Subgroup& h) const;
  // Smallest k >= 1 with this^k = 1; throws Error if it exceeds limit.
  long long order(long long limit = 1 << 20) const;

  friend bool operator==(const Automorphism& a, const Automorphism& b) { return a.images_ == b.images_; }

 private:
  PcPresentation g_;
  std::vector<Element> images_;
};

// x -> (x^a)^b
Automorphism compose(const Automorphism& a, const Automorphism& b);
Automorphism power(const Automorphism& a, long long k);

// g -> g a(d(gN)) for a module built by build_module. Throws Error if the
// result is not an automorphism.
Automorphism lift_to_automorphism(const GModule& m, const Derivation& d);

struct InnerCheck {
  std::optional<Element> witness;
  // Name of the last space searched ("Z(N)", "C_G(N)" or "G") and the number
  // of candidates examined in total.
  std::string space;
  std::uint64_t examined = 0;
  bool exhausted = false;
};

// Searches for u with x^alpha = u^-1 x u. With n given, the search visits
// Z(N), then the rest of C_G(N), then (if search_all) the rest of G.
// An automorphism fixing N pointwise can only be conjugation by an element
// of C_G(N), so the search may stop there when search_all is false.
InnerCheck is_inner(const Automorphism& alpha, const std::optional<Subgroup>& n = std::nullopt,
                    bool search_all = true);

struct Cor34Row {
  int i;
  std::uint64_t lhs;  // |Z^1(G/N, A cap Z_i(G))|
  std::uint64_t rhs;  // |A* cap Z_{i+1}(G)| / |Z(G)|
  bool equal;
};

struct Cor34Report {
  bool applicable = false;
  std::string reason;
  std::uint64_t centralizer_order = 0;  // |C_G(N)|
  std::uint64_t center_order = 0;       // |Z(N)|
  std::vector<Cor34Row> rows;
  bool holds() const;
};

// A = Omega_1(Z(N)), A* = {a in Z(N) : a^p in Z(G)}. Needs C_G(N) = Z(N) and
// every order-p lift from Z^1(G/N, A) inner.
Cor34Report cor34_check(const PcPresentation& g, const Subgroup& n);

}  // namespace pnoninner
