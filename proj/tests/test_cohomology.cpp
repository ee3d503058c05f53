#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pnoninner/catalog.hpp"
#include "pnoninner/cohomology.hpp"
#include "pnoninner/constructions.hpp"
#include "pnoninner/errors.hpp"
#include "pnoninner/structure.hpp"

using namespace pnoninner;
namespace cat = pnoninner::catalog;

namespace {

Subgroup gen(const PcPresentation& g, std::vector<Element> e) { return Subgroup::generated(g, e); }

std::set<Element> as_set(const Subgroup& s) {
  const auto e = s.elements();
  return {e.begin(), e.end()};
}

std::uint64_t ipow(int p, std::size_t k) {
  std::uint64_t r = 1;
  while (k--) r *= static_cast<std::uint64_t>(p);
  return r;
}

// Synthetic module over E(p) with x acting by [[1,0],[p-1,1]], y and c trivially.
GModule lemma22_module(int p) {
  const auto q = cat::extraspecial(p, 1);
  gfp::Matrix x = gfp::Matrix::identity(2, p);
  x(1, 0) = p - 1;
  return GModule(q, 2, {x, gfp::Matrix::identity(2, p), gfp::Matrix::identity(2, p)});
}

struct Triple {
  const char* name;
  PcPresentation g;
  Subgroup n;
  Subgroup a;
};

std::vector<Triple> oracle_triples() {
  std::vector<Triple> out;
  auto add = [&](const char* name, const PcPresentation& g, const Subgroup& n) {
    out.push_back({name, g, n, omega1(center(n))});
  };
  const auto e3 = cat::extraspecial(3, 1);
  add("E(3), N = Phi", e3, frattini(e3));
  const auto e5 = cat::extraspecial(5, 1);
  add("E(5), N = <c>", e5, frattini(e5));
  const auto w3 = cat::maximal_class_p4(3);
  add("W(3), N = Phi", w3, frattini(w3));
  add("W(3), N = <g4>", w3, gen(w3, {w3.generator(3)}));
  add("W(3), N = <g2,g3,g4>", w3, gen(w3, {w3.generator(1), w3.generator(2), w3.generator(3)}));
  const auto w5 = cat::maximal_class_p4(5);
  add("W(5), N = Phi", w5, frattini(w5));
  const auto e3c3 = cat::direct_product(e3, cat::cyclic(3, 1));
  add("E(3) x C3, N = Z", e3c3, center(e3c3));
  const auto m3 = cat::metacyclic_p3(3);
  add("M(3), N = Phi", m3, frattini(m3));
  const auto a3 = cat::elementary_abelian(3, 3);
  add("C3^3, N = <g3>", a3, gen(a3, {a3.generator(2)}));
  return out;
}

std::vector<Element> quotient_generators(const GModule& m) {
  const auto& q = m.embedding().quotient;
  std::vector<Element> out;
  for (int i = 0; i < q.target().size(); ++i) out.push_back(q.section(q.target().generator(i)));
  return out;
}

// d(gh) = d(g)^h d(h) checked in G on representatives, without module matrices.
bool cocycle_in_group(const GModule& m, const Derivation& d) {
  const auto& emb = m.embedding();
  const auto& g = emb.group;
  const auto qs = enumerate(emb.quotient.target());
  for (const auto& a : qs)
    for (const auto& b : qs) {
      const Element ga = emb.quotient.section(a), gb = emb.quotient.section(b);
      const Element lhs = m.element_of(evaluate(m, d, emb.quotient.project(g.multiply(ga, gb))));
      const Element rhs = g.multiply(g.conjugate(m.element_of(evaluate(m, d, a)), gb), m.element_of(evaluate(m, d, b)));
      if (lhs != rhs) return false;
    }
  return true;
}

std::vector<Derivation> all_combinations(const GModule& m, const std::vector<Derivation>& basis) {
  std::vector<Derivation> out;
  gfp::for_each_vector(static_cast<int>(basis.size()), m.prime(), [&](const gfp::Vector& c) {
    Derivation d = zero_derivation(m);
    for (std::size_t k = 0; k < basis.size(); ++k) d = add(m, d, scale(m, basis[k], c[k]));
    out.push_back(d);
  });
  return out;
}

}  // namespace

TEST_CASE("build_module examples") {
  const auto e5 = cat::extraspecial(5, 1);
  const auto c = frattini(e5);
  const GModule m = build_module(c, c);
  CHECK(m.group().order() == 25);
  CHECK(m.dim() == 1);
  for (int i = 0; i < m.group().size(); ++i) CHECK(m.action(i) == gfp::Matrix::identity(1, 5));

  const auto w5 = cat::maximal_class_p4(5);
  const GModule mw = build_module(frattini(w5), omega1(center(frattini(w5))));
  REQUIRE(mw.dim() == 2);
  const gfp::Matrix x = mw.action(0);
  CHECK_FALSE(x == gfp::Matrix::identity(2, 5));
  CHECK((x - gfp::Matrix::identity(2, 5)) * (x - gfp::Matrix::identity(2, 5)) == gfp::Matrix(2, 2, 5));
  // g3 -> g3 g4 under conjugation by g1, g4 fixed.
  CHECK(x.row(0) == gfp::Vector{1, 1});
  CHECK(x.row(1) == gfp::Vector{0, 1});
  CHECK(mw.action(1) == gfp::Matrix::identity(2, 5));
}

TEST_CASE("build_module central carrier acts trivially") {
  const auto w5 = cat::maximal_class_p4(5);
  const GModule m = build_module(frattini(w5), center(w5));
  for (int i = 0; i < m.group().size(); ++i) CHECK(m.action(i) == gfp::Matrix::identity(m.dim(), 5));
}

TEST_CASE("build_module preconditions") {
  const auto w5 = cat::maximal_class_p4(5);
  CHECK_THROWS_AS(build_module(gen(w5, {w5.generator(1)}), Subgroup::trivial(w5)), PreconditionError);
  CHECK_THROWS_AS(build_module(frattini(w5), gen(w5, {w5.generator(1)})), PreconditionError);
  const auto c9 = cat::cyclic(3, 2);
  CHECK_THROWS_AS(build_module(Subgroup::whole(c9), Subgroup::whole(c9)), PreconditionError);
}

TEST_CASE("build_module actions match conjugation") {
  for (const auto& t : oracle_triples()) {
    const GModule m = build_module(t.n, t.a);
    const auto& q = m.embedding().quotient;
    for (const auto& qe : enumerate(q.target()))
      for (const auto& a : t.a.elements()) {
        const Element conj = t.g.conjugate(a, q.section(qe));
        CHECK(m.element_of(m.act(m.coordinates(a), qe)) == conj);
      }
  }
}

TEST_CASE("fixed points and commutator submodule examples") {
  const auto q = cat::elementary_abelian(5, 2);
  const GModule trivial(q, 3, {gfp::Matrix::identity(3, 5), gfp::Matrix::identity(3, 5)});
  CHECK(fixed_points(trivial).size() == 3);
  CHECK(commutator_submodule(trivial).empty());

  const GModule m = lemma22_module(5);
  const auto fixed = fixed_points(m);
  const auto comm = commutator_submodule(m);
  REQUIRE(fixed.size() == 1);
  CHECK(fixed == comm);
  CHECK(fixed[0] == gfp::Vector{1, 0});

  const int p = 5;
  const auto c5 = cat::cyclic(p, 1);
  gfp::Matrix perm(p, p, p);
  for (int i = 0; i < p; ++i) perm(i, (i + 1) % p) = 1;
  const GModule regular(c5, p, {perm});
  REQUIRE(fixed_points(regular).size() == 1);
  CHECK(fixed_points(regular)[0] == gfp::Vector(p, 1));
}

TEST_CASE("synthetic modules must satisfy the relators") {
  const auto q = cat::cyclic(5, 1);
  gfp::Matrix x = gfp::Matrix::identity(1, 5);
  x(0, 0) = 2;  // 2^5 = 2 mod 5, not 1
  CHECK_THROWS_AS(GModule(q, 1, {x}), InvalidArgument);
}

TEST_CASE("derivation_space examples") {
  const auto a3 = cat::elementary_abelian(5, 3);
  const auto c = gen(a3, {a3.generator(2)});
  const GModule m = build_module(c, c);
  CHECK(derivation_space(m).size() == 2);
  CHECK(oracle::count_cocycles(a3, as_set(c), as_set(c), {a3.generator(0), a3.generator(1)}).z1 == 25);

  const auto e5 = cat::extraspecial(5, 1);
  const GModule zero = build_module(frattini(e5), Subgroup::trivial(e5));
  CHECK(zero.dim() == 0);
  CHECK(derivation_space(zero).empty());

  const GModule me = build_module(frattini(e5), frattini(e5));
  CHECK(ipow(5, derivation_space(me).size()) == 25);
  CHECK(oracle::count_cocycles(e5, as_set(frattini(e5)), as_set(frattini(e5)), {e5.generator(0), e5.generator(1)}).z1 ==
        25);
}

TEST_CASE("principal_space examples") {
  const auto q = cat::elementary_abelian(5, 2);
  const GModule trivial(q, 2, {gfp::Matrix::identity(2, 5), gfp::Matrix::identity(2, 5)});
  CHECK(principal_space(trivial).empty());
  CHECK(principal_space(lemma22_module(5)).size() == 1);
  for (const auto& t : oracle_triples()) {
    const GModule m = build_module(t.n, t.a);
    CHECK(principal_space(m).size() == static_cast<std::size_t>(m.dim()) - fixed_points(m).size());
  }
}

TEST_CASE("solver matches brute-force cocycle counts") {
  int checked = 0;
  for (const auto& t : oracle_triples()) {
    const GModule m = build_module(t.n, t.a);
    if (m.group().order() > 27 || t.a.order() > 27) continue;
    INFO(t.name);
    const auto brute = oracle::count_cocycles(t.g, as_set(t.n), as_set(t.a), quotient_generators(m));
    CHECK(ipow(t.g.prime(), derivation_space(m).size()) == brute.z1);
    CHECK(ipow(t.g.prime(), principal_space(m).size()) == brute.b1);
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("every solver derivation is a cocycle") {
  for (const auto& t : oracle_triples()) {
    const GModule m = build_module(t.n, t.a);
    INFO(t.name);
    for (const auto& d : derivation_space(m)) {
      CHECK(satisfies_cocycle_law(m, d));
      CHECK(cocycle_in_group(m, d));
    }
    for (const auto& b : principal_space(m)) {
      const auto basis = derivation_space(m);
      std::vector<gfp::Vector> rows;
      for (const auto& d : basis) rows.push_back(flatten(d));
      CHECK(gfp::coordinates(rows, flatten(b), m.prime()).has_value());
    }
  }
}

TEST_CASE("lift_to_automorphism examples") {
  const auto e5 = cat::extraspecial(5, 1);
  const auto c = frattini(e5);
  const GModule m = build_module(c, c);
  CHECK(lift_to_automorphism(m, zero_derivation(m)).is_identity());

  Derivation d{{gfp::Vector{0}, gfp::Vector{1}}};
  const Automorphism alpha = lift_to_automorphism(m, d);
  CHECK(alpha.apply(e5.generator(0)) == e5.generator(0));
  CHECK(alpha.apply(e5.generator(1)) == e5.element({0, 1, 1}));
  const InnerCheck ic = is_inner(alpha);
  REQUIRE(ic.witness);
  // conjugation by x^4 sends y to y [y, x^4] = y c
  CHECK(QuotientMap(center(e5)).project(*ic.witness) == QuotientMap(center(e5)).project(e5.element({4, 0, 0})));

  CHECK(alpha.order() == 5);
  Automorphism acc = Automorphism::identity(e5);
  for (int k = 1; k <= 5; ++k) {
    acc = compose(acc, alpha);
    CHECK(acc.is_identity() == (k == 5));
  }
}

TEST_CASE("lifts fix N and move g inside A") {
  for (const auto& t : oracle_triples()) {
    const GModule m = build_module(t.n, t.a);
    for (const auto& d : derivation_space(m)) {
      const Automorphism alpha = lift_to_automorphism(m, d);
      CHECK(alpha.is_automorphism());
      CHECK(alpha.fixes(t.n));
      for (const auto& x : enumerate(t.g)) CHECK(t.a.contains(t.g.multiply(t.g.inverse(x), alpha.apply(x))));
    }
  }
}

TEST_CASE("lift is a homomorphism from Z^1") {
  std::mt19937 rng(99);
  for (const auto& t : oracle_triples()) {
    const GModule m = build_module(t.n, t.a);
    const auto basis = derivation_space(m);
    if (basis.empty()) continue;
    std::uniform_int_distribution<int> coef(0, m.prime() - 1);
    auto random_derivation = [&]() {
      Derivation d = zero_derivation(m);
      for (const auto& b : basis) d = add(m, d, scale(m, b, coef(rng)));
      return d;
    };
    for (int k = 0; k < 12; ++k) {
      const Derivation d1 = random_derivation(), d2 = random_derivation();
      CHECK(lift_to_automorphism(m, add(m, d1, d2)) ==
            compose(lift_to_automorphism(m, d1), lift_to_automorphism(m, d2)));
      const long long order = is_zero(d1) ? 1 : m.prime();
      CHECK(lift_to_automorphism(m, d1).order() == order);
    }
  }
}

TEST_CASE("lifts of B^1 are the conjugations by Z(N)") {
  for (auto [g, n] : {std::pair{cat::extraspecial(3, 1), frattini(cat::extraspecial(3, 1))},
                      std::pair{cat::extraspecial(5, 1), frattini(cat::extraspecial(5, 1))},
                      std::pair{cat::maximal_class_p4(5), frattini(cat::maximal_class_p4(5))}}) {
    const Subgroup zn = center(n);
    REQUIRE(omega1(zn) == zn);
    const GModule m = build_module(n, zn);
    std::set<std::vector<Element>> lifted, conj;
    for (const auto& b : all_combinations(m, principal_space(m))) lifted.insert(lift_to_automorphism(m, b).images());
    for (const auto& u : zn.elements()) conj.insert(Automorphism::conjugation(g, u).images());
    CHECK(lifted == conj);
  }
}

TEST_CASE("is_inner examples") {
  const auto w5 = cat::maximal_class_p4(5);
  const InnerCheck id = is_inner(Automorphism::identity(w5));
  REQUIRE(id.witness);
  CHECK(id.witness->is_identity());

  const InnerCheck c = is_inner(Automorphism::conjugation(w5, w5.generator(0)));
  REQUIRE(c.witness);
  CHECK(center(w5).contains(w5.multiply(w5.inverse(w5.generator(0)), *c.witness)));

  const auto t = theorem42_pipeline(cat::maximal_class(5, 5));
  REQUIRE(t.automorphism);
  const InnerCheck none = is_inner(*t.automorphism);
  CHECK_FALSE(none.witness);
  CHECK(none.exhausted);
  CHECK(none.examined == 3125);
}

TEST_CASE("is_inner agrees with a direct scan") {
  const auto g = cat::maximal_class_p4(3);
  const auto all = enumerate(g);
  const GModule m = build_module(frattini(g), omega1(center(frattini(g))));
  for (const auto& d : all_combinations(m, derivation_space(m))) {
    const Automorphism alpha = lift_to_automorphism(m, d);
    bool inner = false;
    for (const auto& u : all) inner = inner || Automorphism::conjugation(g, u) == alpha;
    CHECK(is_inner(alpha).witness.has_value() == inner);
    CHECK(is_inner(alpha, frattini(g), false).witness.has_value() == inner);
  }
}

TEST_CASE("cor34_check examples") {
  const auto e5 = cat::extraspecial(5, 1);
  const auto r = cor34_check(e5, frattini(e5));
  CHECK_FALSE(r.applicable);
  CHECK(r.centralizer_order == 125);

  // N = G: the quotient is trivial, every row compares 1 with 1.
  const auto w5 = cat::maximal_class_p4(5);
  const auto whole = cor34_check(w5, Subgroup::whole(w5));
  REQUIRE(whole.applicable);
  CHECK(whole.holds());
  for (const auto& row : whole.rows) {
    CHECK(row.lhs == 1);
    CHECK(row.rhs == 1);
  }

  // The automorphism hypothesis fails on W(5) with N = Phi: reported, not fatal.
  const auto rw = cor34_check(w5, frattini(w5));
  CHECK_FALSE(rw.applicable);
  CHECK_FALSE(rw.reason.empty());
}
