#pragma once

// Finding and certifying non-inner automorphisms of order p that fix a given
// normal subgroup pointwise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnoninner/cohomology.hpp"
#include "pnoninner/errors.hpp"

namespace pnoninner {

enum class FixKind { Frattini, AgemoGamma3, AgemoGamma4, Explicit };

std::string to_string(FixKind k);
// "frattini", "agemo-gamma3", "agemo-gamma4", "explicit".
FixKind parse_fix_kind(const std::string& s);

Subgroup resolve_fix(const PcPresentation& g, FixKind kind, const std::vector<Element>& igs = {});

struct Fingerprint {
  int prime = 0;
  int generators = 0;
  std::uint64_t order = 0;
  int nilpotency_class = 0;
  int coclass = 0;
  std::string digest;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const PcPresentation& g);

struct InnerTranscript {
  std::string space;  // "C_G(F)" or "G"
  std::uint64_t space_size = 0;
  std::uint64_t examined = 0;
  bool exhausted = false;
};

struct Certificate {
  Fingerprint group;
  std::vector<Element> images;
  int claimed_order = 0;
  FixKind fix = FixKind::Frattini;
  std::vector<Element> fix_igs;
  InnerTranscript inner;
  std::string strategy;
};

class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, std::uint64_t examined) : Error(what), examined_(examined) {}
  std::uint64_t examined() const noexcept { return examined_; }

 private:
  std::uint64_t examined_;
};

struct SearchOptions {
  // Run the inner check over all of G when |G| is at most this.
  std::uint64_t full_inner_bound = 243;
  std::uint64_t brute_force_bound = 729;
};

// Throws InvalidArgument for abelian G and SearchExhausted when every
// strategy fails.
Certificate find_noninner(const PcPresentation& g, FixKind fix, const SearchOptions& options = {},
                          const std::vector<Element>& explicit_igs = {});

struct BruteForceResult {
  std::optional<Automorphism> found;
  std::uint64_t examined = 0;
  std::string stratum;  // last stratum searched
  bool complete = true;  // false when a node cap cut the last stratum short
};

// Derivation lifts from Z^1(G/N, Omega_1(Z(N))), then generator maps
// x -> x t fixing N pointwise with t in N, then with t in G. Throws
// BoundExceeded if |G| > bound.
BruteForceResult brute_force_noninner(const PcPresentation& g, const Subgroup& n, std::uint64_t bound = 729);

struct VerifyResult {
  bool ok = false;
  std::string reason;
};

VerifyResult verify_certificate(const PcPresentation& g, const Certificate& cert);

// The certificate for a given automorphism, with a fresh inner check.
Certificate make_certificate(const PcPresentation& g, const Automorphism& alpha, FixKind fix,
                             const Subgroup& fixed, const std::string& strategy, const SearchOptions& options = {});

// JSON with sorted keys (byte-stable).
std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);

}  // namespace pnoninner
