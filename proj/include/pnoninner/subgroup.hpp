#pragma once

// Subgroups of a pc-presented group, stored as canonical induced generating
// sequences, and quotients by normal subgroups.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnoninner/pc.hpp"

namespace pnoninner {

class Subgroup {
 public:
  // The trivial subgroup of g.
  explicit Subgroup(const PcPresentation& g);

  static Subgroup trivial(const PcPresentation& g) { return Subgroup(g); }
  static Subgroup whole(const PcPresentation& g);
  static Subgroup generated(const PcPresentation& g, std::span<const Element> gens);
  // Normal closure of gens under conjugation by g's generators.
  static Subgroup normal_closure(const PcPresentation& g, std::span<const Element> gens);
  // Normal closure of gens inside the subgroup h (gens must lie in h).
  static Subgroup normal_closure_in(const Subgroup& h, std::span<const Element> gens);

  const PcPresentation& parent() const { return g_; }
  // Canonical igs: strictly increasing leading positions, leading exponent 1,
  // and zero exponents at the leading positions of the other entries.
  const std::vector<Element>& igs() const { return igs_; }
  int log_order() const { return static_cast<int>(igs_.size()); }
  std::uint64_t order() const;
  bool is_trivial() const { return igs_.empty(); }
  std::vector<int> leading_positions() const;

  bool contains(const Element& x) const;
  bool contains(const Subgroup& other) const;
  // Exponents (e_1, ..., e_k) with x = h_1^e_1 ... h_k^e_k, 0 <= e_i < p,
  // or nullopt if x is not in the subgroup.
  std::optional<std::vector<int>> coordinates(const Element& x) const;
  Element element_at(const std::vector<int>& coords) const;
  // Multiplies x on the right by igs powers until every leading position of
  // this subgroup is zero: the canonical representative of the coset xH.
  Element reduce(const Element& x) const;

  // Elements h_1^e_1 ... h_k^e_k in lexicographic order of (e_1, ..., e_k).
  void for_each(const std::function<void(const Element&)>& fn) const;
  std::vector<Element> elements() const;

  std::string to_string() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.igs_ == b.igs_; }

 private:
  Subgroup(const PcPresentation& g, std::vector<Element> igs);
  void build_power_cache();

  PcPresentation g_;
  std::vector<Element> igs_;
  // powers_[k][e] = igs_[k]^e for 0 <= e < p
  std::vector<std::vector<Element>> powers_;
};

Subgroup join(const Subgroup& a, const Subgroup& b);
Subgroup intersection(const Subgroup& a, const Subgroup& b);
// [A, B] for subgroups A, B normal in the parent group.
Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b);
bool is_normal(const Subgroup& h);
// True if conjugation by every element of x maps h onto itself.
bool is_normalized_by(const Subgroup& h, const Subgroup& x);
bool is_abelian(const Subgroup& h);

// Elements of x commuting with every element of s.
Subgroup centralizer(const Subgroup& x, std::span<const Element> s);
Subgroup centralizer(const Subgroup& x, const Subgroup& s);
Subgroup centralizer(const PcPresentation& g, const Subgroup& s);

class QuotientMap {
 public:
  // Throws PreconditionError if kernel is not normal.
  explicit QuotientMap(const Subgroup& kernel);

  const PcPresentation& source() const { return kernel_.parent(); }
  const Subgroup& kernel() const { return kernel_; }
  const PcPresentation& target() const { return target_; }
  // Source positions that survive, in order; target generator k is the image
  // of source generator kept()[k].
  const std::vector<int>& kept() const { return kept_; }

  Element project(const Element& x) const;
  // Coset representative with zeros at the kernel's leading positions.
  Element section(const Element& q) const;
  Subgroup image(const Subgroup& h) const;
  Subgroup preimage(const Subgroup& h) const;

 private:
  Subgroup kernel_;
  std::vector<int> kept_;
  std::vector<int> target_index_;  // source position -> target position or -1
  PcPresentation target_;
};

}  // namespace pnoninner
