#pragma once

// Power-commutator presentations of finite p-groups and collection.
//
// A presentation has generators g_0, ..., g_{n-1} (0-based here, 1-based in
// files and on the command line) with relations
//
//   g_i^p      = power_relation(i)        (a normal word in g_{i+1}, ...)
//   [g_j, g_i] = comm_relation(j, i)      (j > i, a normal word in g_{j+1}, ...)
//
// using [a, b] = a^-1 b^-1 a b. The second index condition means the pc
// sequence refines a central series, which makes collection from the left
// terminate. Every element is carried in normal form g_0^e_0 ... g_{n-1}^e_{n-1}
// with 0 <= e_i < p.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pnoninner {

inline constexpr int kMaxGenerators = 16;

class Element {
 public:
  Element() = default;
  explicit Element(int size) : size_(static_cast<std::uint8_t>(size)) {}
  Element(int size, const std::vector<int>& exps);

  int size() const noexcept { return size_; }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  void set(int i, int e) { exps_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e); }

  bool is_identity() const noexcept;
  // Index of the first nonzero exponent, or size() for the identity.
  int depth() const noexcept;
  std::vector<int> exponents() const;
  std::string to_string() const;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;

 private:
  friend class PcPresentation;
  std::uint8_t size_ = 0;
  std::array<std::uint8_t, kMaxGenerators> exps_{};
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

// A generator letter g_gen^exp with exp possibly negative.
struct Letter {
  int gen = 0;
  int exp = 1;
};
using Word = std::vector<Letter>;

class PcPresentation {
 public:
  // power[i] and comm[j][i] (for j > i) are the relation right-hand sides;
  // comm must be an n x n table whose entries with j <= i are ignored.
  PcPresentation(int p, int n, std::vector<Element> power, std::vector<std::vector<Element>> comm);

  // Trivial relations everywhere: elementary abelian of rank n.
  static PcPresentation elementary_abelian(int p, int n);

  int prime() const noexcept;
  int size() const noexcept;
  std::uint64_t order() const noexcept;

  const Element& power_relation(int i) const;
  const Element& comm_relation(int j, int i) const;

  Element identity() const;
  Element generator(int i) const;
  Element element(const std::vector<int>& exps) const;
  bool is_valid(const Element& e) const noexcept;

  Element collect(std::span<const Letter> word) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, long long k) const;
  // [a, b] = a^-1 b^-1 a b
  Element commutator(const Element& a, const Element& b) const;
  // a^b = b^-1 a b
  Element conjugate(const Element& a, const Element& b) const;
  // [a1, a2, ..., ak] = [[a1, a2], ..., ak]; requires k >= 2.
  Element left_normed(std::span<const Element> args) const;
  long long element_order(const Element& a) const;

  // Normal-form word of an element.
  Word word_of(const Element& a) const;

  friend bool operator==(const PcPresentation& a, const PcPresentation& b);

 private:
  struct Data;
  using Exps = std::array<std::uint8_t, kMaxGenerators>;

  void check_element(const Element& e) const;
  void mul_gen_pow(Exps& v, int k, int e) const;
  void mul_exps(Exps& v, const Exps& w) const;
  void add_at(Exps& v, int k, int e) const;
  Exps conjugate_tail(const Exps& t, int k) const;

  std::shared_ptr<const Data> d_;
};

// Element bound for enumeration-based operations. Defaults to 10^6 and can be
// overridden with the PNONINNER_ENUM_BOUND environment variable.
std::uint64_t enumeration_bound();

// Throws BoundExceeded if count > bound.
void require_enumerable(std::uint64_t count, const char* what, std::uint64_t bound = enumeration_bound());

// Calls fn for every element of G in lexicographic exponent order.
void for_each_element(const PcPresentation& g, const std::function<void(const Element&)>& fn);
std::vector<Element> enumerate(const PcPresentation& g);

enum class ConsistencyMode { Automatic, Exhaustive, Sampled };

// Largest order checked by full triple enumeration.
inline constexpr std::uint64_t kExhaustiveConsistencyLimit = 729;

struct ConsistencyOptions {
  ConsistencyMode mode = ConsistencyMode::Automatic;
  std::uint64_t random_triples = 100000;
  std::uint64_t seed = 0x5eed;
};

// Associativity, identity and inverse laws. Automatic mode enumerates all
// triples when |G| <= kExhaustiveConsistencyLimit and otherwise checks all
// generator triples, power overlaps and random triples.
bool is_consistent(const PcPresentation& g, const ConsistencyOptions& options = {});

// Right-multiplication table over the lexicographic enumeration; index of an
// element is its exponent vector read as a base-p number.
class CayleyTable {
 public:
  explicit CayleyTable(const PcPresentation& g);

  std::size_t order() const noexcept { return order_; }
  std::uint32_t index_of(const Element& e) const;
  const Element& element(std::uint32_t i) const { return elements_[i]; }
  std::uint32_t product(std::uint32_t a, std::uint32_t b) const { return table_[a * order_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverses_[a]; }

 private:
  int p_;
  int n_;
  std::size_t order_;
  std::vector<Element> elements_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverses_;
};

}  // namespace pnoninner
