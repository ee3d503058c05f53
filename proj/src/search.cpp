#include "pnoninner/search.hpp"

#include <functional>
#include <unordered_map>

#include "pnoninner/catalog.hpp"
#include "pnoninner/constructions.hpp"
#include "pnoninner/hypotheses.hpp"
#include "pnoninner/structure.hpp"

namespace pnoninner {

std::string to_string(FixKind k) {
  switch (k) {
    case FixKind::Frattini: return "frattini";
    case FixKind::AgemoGamma3: return "agemo-gamma3";
    case FixKind::AgemoGamma4: return "agemo-gamma4";
    case FixKind::Explicit: return "explicit";
  }
  return "?";
}

FixKind parse_fix_kind(const std::string& s) {
  if (s == "frattini") return FixKind::Frattini;
  if (s == "agemo-gamma3") return FixKind::AgemoGamma3;
  if (s == "agemo-gamma4") return FixKind::AgemoGamma4;
  if (s == "explicit") return FixKind::Explicit;
  throw InvalidArgument("unknown fixed subgroup '" + s + "'");
}

Subgroup resolve_fix(const PcPresentation& g, FixKind kind, const std::vector<Element>& igs) {
  switch (kind) {
    case FixKind::Frattini: return frattini(g);
    case FixKind::AgemoGamma3: return agemo_gamma(g, 3);
    case FixKind::AgemoGamma4: return agemo_gamma(g, 4);
    case FixKind::Explicit: {
      for (const auto& e : igs)
        if (!g.is_valid(e)) throw InvalidArgument("explicit fixed subgroup: invalid element " + e.to_string());
      Subgroup s = Subgroup::generated(g, igs);
      if (!is_normal(s)) throw InvalidArgument("explicit fixed subgroup is not normal");
      return s;
    }
  }
  throw InvalidArgument("unknown fixed subgroup kind");
}

Fingerprint fingerprint(const PcPresentation& g) {
  return Fingerprint{g.prime(), g.size(), g.order(), nilpotency_class(g), coclass(g), catalog::digest(g)};
}

namespace {

bool has_order_p(const Automorphism& a) {
  return !a.is_identity() && power(a, a.group().prime()).is_identity();
}

// A derivation of Q = G/N into Omega_1(Z(N)) whose lift is not inner, if
// Z^1 is not exhausted by the derivations g -> [g, u].
std::optional<Automorphism> derivation_lift(const Subgroup& n) {
  const PcPresentation& g = n.parent();
  if (n.log_order() == g.size() || !is_normal(n)) return std::nullopt;
  const Subgroup a = omega1(center(n));
  if (a.is_trivial()) return std::nullopt;
  const GModule m = build_module(n, a);
  const auto z1 = derivation_space(m);
  if (z1.empty()) return std::nullopt;

  const QuotientMap qa(a);
  const Subgroup u_sub = intersection(centralizer(g, n), qa.preimage(center(qa.target())));
  const QuotientMap& q = m.embedding().quotient;
  std::vector<gfp::Vector> inner;
  for (const auto& u : u_sub.igs()) {
    Derivation d;
    for (int i = 0; i < q.target().size(); ++i)
      d.images.push_back(m.coordinates(g.commutator(q.section(q.target().generator(i)), u)));
    inner.push_back(flatten(d));
  }
  const int len = static_cast<int>(flatten(z1[0]).size());
  const auto span = gfp::row_space_basis(inner, len, g.prime());
  for (const auto& d : z1) {
    if (gfp::coordinates(span, flatten(d), g.prime())) continue;
    return lift_to_automorphism(m, d);
  }
  return std::nullopt;
}

// The homomorphism on <gens> with the given images, found by walking the
// Cayley graph; nullopt unless well defined, injective and equal to the
// identity on <gens> cap fixed.
std::optional<std::unordered_map<Element, Element, ElementHash>> extend_partial(const PcPresentation& g,
                                                                               const std::vector<Element>& gens,
                                                                               const std::vector<Element>& images,
                                                                               const Subgroup& fixed) {
  std::unordered_map<Element, Element, ElementHash> phi;
  std::vector<Element> frontier{g.identity()};
  phi.emplace(g.identity(), g.identity());
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const Element h = frontier[head];
    const Element ph = phi.at(h);
    for (std::size_t k = 0; k < images.size(); ++k) {
      const Element nh = g.multiply(h, gens[k]);
      const Element np = g.multiply(ph, images[k]);
      auto [it, inserted] = phi.emplace(nh, np);
      if (inserted) {
        if (fixed.contains(nh) && nh != np) return std::nullopt;
        frontier.push_back(nh);
      } else if (it->second != np) {
        return std::nullopt;
      }
    }
  }
  std::unordered_map<Element, bool, ElementHash> seen;
  for (const auto& [k, v] : phi)
    if (!seen.emplace(v, true).second) return std::nullopt;
  return phi;
}

}  // namespace

Certificate make_certificate(const PcPresentation& g, const Automorphism& alpha, FixKind fix,
                             const Subgroup& fixed, const std::string& strategy, const SearchOptions& options) {
  const bool full = g.order() <= options.full_inner_bound;
  const InnerCheck ic = is_inner(alpha, fixed, full);
  if (ic.witness) throw Error("make_certificate: automorphism is conjugation by " + ic.witness->to_string());
  Certificate c;
  c.group = fingerprint(g);
  c.images = alpha.images();
  c.claimed_order = g.prime();
  c.fix = fix;
  c.fix_igs = fixed.igs();
  c.inner.space = full ? "G" : "C_G(F)";
  c.inner.space_size = full ? g.order() : centralizer(g, fixed).order();
  c.inner.examined = ic.examined;
  c.inner.exhausted = ic.exhausted;
  c.strategy = strategy;
  return c;
}

Certificate find_noninner(const PcPresentation& g, FixKind fix, const SearchOptions& options,
                          const std::vector<Element>& explicit_igs) {
  const Subgroup whole = Subgroup::whole(g);
  if (is_abelian(whole)) throw InvalidArgument("find_noninner: G is abelian");
  const Subgroup f = resolve_fix(g, fix, explicit_igs);
  const bool full = g.order() <= options.full_inner_bound;
  std::uint64_t tried = 0;

  auto accept = [&](const Automorphism& a) {
    ++tried;
    return a.is_automorphism() && has_order_p(a) && a.fixes(f) && !is_inner(a, f, full).witness;
  };

  const HypothesisReport rep = hypothesis_report(g, HypothesisLevel::A);
  std::string fired;
  for (const auto& e : rep.entries)
    if ((e.id.rfind("R.", 0) == 0 || e.id == "D2") && e.holds.value_or(false)) fired += (fired.empty() ? "" : ",") + e.id;

  std::vector<std::pair<std::string, Subgroup>> ns{{"Phi(G)", frattini(g)}, {"G^p gamma_3(G)", agemo_gamma(g, 3)}};
  const auto maxes = maximal_subgroups(g);
  for (std::size_t k = 0; k < maxes.size(); ++k) ns.push_back({"maximal subgroup " + std::to_string(k + 1), maxes[k]});
  ns.push_back({"F", f});

  auto derivation_search = [&]() -> std::optional<Certificate> {
    for (const auto& [name, n] : ns) {
      if (!n.contains(f)) continue;
      auto a = derivation_lift(n);
      if (a && accept(*a)) {
        const std::string tag = (fired.empty() ? std::string() : "reduction " + fired + "; ") +
                                "derivation G/N -> Omega_1(Z(N)), N = " + name;
        return make_certificate(g, *a, fix, f, tag, options);
      }
    }
    return std::nullopt;
  };

  const bool gate_fails = rep.satisfied != std::optional<bool>(true);
  if (gate_fails)
    if (auto c = derivation_search()) return *c;

  if (rank(center(g)) == 1) {
    const Theorem42Result t = theorem42_pipeline(g);
    if (t.automorphism && accept(*t.automorphism))
      return make_certificate(g, *t.automorphism, fix, f, "cyclic center: U x V quotient derivation", options);
  }

  if (rank(g) == 2) {
    for (auto v : {TauVariant::Tau, TauVariant::Tau1, TauVariant::Tau2, TauVariant::Tau3}) {
      try {
        const TauResult r = tau_maps(g, v);
        for (const auto& d : r.derivations) {
          const Automorphism a = lift_to_automorphism(*r.module, d);
          if (accept(a)) return make_certificate(g, a, fix, f, "kernel of " + to_string(v), options);
        }
      } catch (const Error&) {
      }
    }
  }

  if (!gate_fails)
    if (auto c = derivation_search()) return *c;

  if (g.order() <= options.brute_force_bound) {
    const BruteForceResult b = brute_force_noninner(g, f, options.brute_force_bound);
    tried += b.examined;
    if (b.found) return make_certificate(g, *b.found, fix, f, "brute force over " + b.stratum, options);
  }
  throw SearchExhausted("no non-inner automorphism of order p fixing " + to_string(fix) + " was found", tried);
}

BruteForceResult brute_force_noninner(const PcPresentation& g, const Subgroup& n, std::uint64_t bound) {
  if (g.order() > bound) throw BoundExceeded("brute_force_noninner: |G| exceeds the bound");
  if (is_abelian(Subgroup::whole(g))) throw InvalidArgument("brute_force_noninner: G is abelian");
  if (!is_normal(n)) throw PreconditionError("brute_force_noninner: N is not normal");
  BruteForceResult out;
  const int p = g.prime();
  auto good = [&](const Automorphism& a) {
    return a.is_automorphism() && has_order_p(a) && a.fixes(n) && !is_inner(a, n, true).witness;
  };

  out.stratum = "derivations";
  if (n.log_order() < g.size()) {
    const Subgroup a = omega1(center(n));
    const GModule m = build_module(n, a);
    const auto z1 = derivation_space(m);
    bool done = false;
    gfp::for_each_vector(static_cast<int>(z1.size()), p, [&](const gfp::Vector& c) {
      if (done || gfp::is_zero(c)) return;
      Derivation d = zero_derivation(m);
      for (std::size_t k = 0; k < z1.size(); ++k) d = add(m, d, scale(m, z1[k], c[k]));
      ++out.examined;
      const Automorphism alpha = lift_to_automorphism(m, d);
      if (good(alpha)) {
        out.found = alpha;
        done = true;
      }
    });
    if (done) return out;
  } else {
    ++out.examined;
  }

  // Generator images x^alpha = x t with t in N, then with t anywhere in G;
  // depth-first, pruning partial maps that are not injective homomorphisms
  // fixing N.
  const auto gens = minimal_generators(g);
  const auto n_elems = n.elements();
  const auto g_elems = enumerate(g);
  constexpr std::uint64_t node_cap = 2000000;
  auto scan = [&](const std::vector<Element>& pool, const char* name) {
    out.stratum = name;
    std::vector<Element> images;
    std::uint64_t nodes = 0;
    std::function<bool()> descend = [&]() {
      const std::size_t k = images.size();
      for (const auto& t : pool) {
        if (++nodes > node_cap) {
          out.complete = false;
          return false;
        }
        images.push_back(g.multiply(gens[k], t));
        const auto phi = extend_partial(g, gens, images, n);
        if (phi) {
          if (images.size() == gens.size()) {
            ++out.examined;
            std::vector<Element> pc_images;
            for (int i = 0; i < g.size(); ++i) pc_images.push_back(phi->at(g.generator(i)));
            const Automorphism a(g, pc_images);
            if (good(a)) {
              out.found = a;
              return true;
            }
          } else if (descend()) {
            return true;
          }
        }
        images.pop_back();
        if (!out.complete) return false;
      }
      return false;
    };
    return descend();
  };
  if (scan(n_elems, "maps g -> gN")) return out;
  out.complete = true;
  scan(g_elems, "all generator images");
  return out;
}

VerifyResult verify_certificate(const PcPresentation& g, const Certificate& cert) {
  auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
  if (!(fingerprint(g) == cert.group)) return fail("fingerprint mismatch");
  if (static_cast<int>(cert.images.size()) != g.size()) return fail("wrong number of generator images");
  for (const auto& e : cert.images)
    if (!g.is_valid(e)) return fail("malformed generator image " + e.to_string());
  const Automorphism alpha(g, cert.images);
  if (!alpha.is_automorphism()) return fail("not an automorphism");
  if (cert.claimed_order != g.prime()) return fail("order: claimed order is not p");
  if (!has_order_p(alpha)) return fail("order: the automorphism does not have order p");
  Subgroup f = Subgroup::trivial(g);
  try {
    f = resolve_fix(g, cert.fix, cert.fix_igs);
  } catch (const Error& e) {
    return fail(std::string("fixed subgroup: ") + e.what());
  }
  if (cert.fix != FixKind::Explicit && !cert.fix_igs.empty() && cert.fix_igs != f.igs())
    return fail("fixed subgroup does not match the recorded generators");
  if (!alpha.fixes(f)) return fail("does not fix " + to_string(cert.fix) + " pointwise");
  const InnerCheck ic = is_inner(alpha, f, cert.inner.space == "G");
  if (ic.witness) return fail("inner witness found: " + ic.witness->to_string());
  if (!ic.exhausted) return fail("inner search not exhausted");
  return VerifyResult{true, ""};
}

}  // namespace pnoninner
