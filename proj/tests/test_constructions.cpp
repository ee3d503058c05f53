#include <random>

#include "doctest.h"
#include "pnoninner/catalog.hpp"
#include "pnoninner/constructions.hpp"
#include "pnoninner/errors.hpp"

using namespace pnoninner;
namespace cat = pnoninner::catalog;

namespace {

// x_i -> e_(2i-1) -> e_0 style module: generator k of Q (k < 2n) adds
// coefficient s times e_0 to e_(k+1); c acts trivially.
GModule unipotent_module(const PcPresentation& q, int s) {
  const int p = q.prime();
  const int dim = q.size();
  std::vector<gfp::Matrix> act;
  for (int k = 0; k < q.size(); ++k) {
    gfp::Matrix m = gfp::Matrix::identity(dim, p);
    if (k + 1 < dim) m(k + 1, 0) = s;
    act.push_back(m);
  }
  return GModule(q, dim, act);
}

GModule lemma22_module(int p) {
  gfp::Matrix x = gfp::Matrix::identity(2, p);
  x(1, 0) = p - 1;
  return GModule(cat::extraspecial(p, 1), 2, {x, gfp::Matrix::identity(2, p), gfp::Matrix::identity(2, p)});
}

std::vector<Derivation> random_derivations(const GModule& m, int count, std::mt19937& rng) {
  const auto basis = derivation_space(m);
  std::uniform_int_distribution<int> coef(0, m.prime() - 1);
  std::vector<Derivation> out;
  for (int k = 0; k < count; ++k) {
    Derivation d = zero_derivation(m);
    for (const auto& b : basis) d = add(m, d, scale(m, b, coef(rng)));
    out.push_back(d);
  }
  return out;
}

}  // namespace

TEST_CASE("free words") {
  const FreeWord x{{0, 1}}, y{{1, 1}};
  const FreeWord c = free_commutator(x, y);
  REQUIRE(c.size() == 4);
  CHECK(c[0].letter == 0);
  CHECK(c[0].exp == -1);
  CHECK(c[3].letter == 1);
  CHECK(free_power(x, 3).size() == 3);
  CHECK(free_left_normed({y, x, x}).size() == free_commutator(free_commutator(y, x), x).size());
}

TEST_CASE("lemma22_derivation on E(5)") {
  const GModule m = lemma22_module(5);
  const Lemma22Result r = lemma22_derivation(m);
  REQUIRE(r.delta.images.size() == 3);
  CHECK(r.delta.images[0] == gfp::Vector{0, 0});
  CHECK(r.delta.images[1] == gfp::Vector{0, 1});
  CHECK(r.delta.images[2] == gfp::Vector{1, 0});
  CHECK(r.z0 == gfp::Vector{1, 0});
  CHECK(satisfies_cocycle_law(m, r.delta));
}

TEST_CASE("lemma22_derivation on E(3)") {
  const GModule m = lemma22_module(3);
  const Lemma22Result r = lemma22_derivation(m);
  CHECK_FALSE(gfp::is_zero(r.delta.images[2]));
  CHECK(r.delta.images[2] == r.z0);
  CHECK(satisfies_cocycle_law(m, r.delta));
}

TEST_CASE("lemma22_derivation on extraspecial(5,2)") {
  const auto q = cat::extraspecial(5, 2);
  const GModule m = unipotent_module(q, 1);
  const Lemma22Result r = lemma22_derivation(m);
  const std::vector<gfp::Vector> golden{{0, 0, 1, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}};
  CHECK(r.delta.images == golden);
  CHECK_FALSE(gfp::is_zero(evaluate(m, r.delta, q.generator(4))));
  CHECK(satisfies_cocycle_law(m, r.delta));
  // the relator checks of the construction
  for (const auto& w : pc_relators(q)) CHECK(gfp::is_zero(evaluate_word(m, r.delta, w)));
}

TEST_CASE("lemma22_derivation preconditions") {
  const auto q = cat::extraspecial(5, 1);
  const GModule small(q, 1, {gfp::Matrix::identity(1, 5), gfp::Matrix::identity(1, 5), gfp::Matrix::identity(1, 5)});
  CHECK_THROWS_AS(lemma22_derivation(small), PreconditionError);

  // M^G = [M, G] of order p but d(M) = 3 < d(G) = 4
  const auto q2 = cat::extraspecial(5, 2);
  std::vector<gfp::Matrix> act;
  for (int k = 0; k < 5; ++k) {
    gfp::Matrix m = gfp::Matrix::identity(3, 5);
    if (k < 2) m(k + 1, 0) = 1;
    act.push_back(m);
  }
  CHECK_THROWS_AS(lemma22_derivation(GModule(q2, 3, act)), PreconditionError);

  const auto w = cat::maximal_class_p4(5);
  CHECK_THROWS_AS(lemma22_derivation(build_module(frattini(w), center(w))), PreconditionError);
}

TEST_CASE("theorem25_quotient examples") {
  const auto w5 = cat::maximal_class_p4(5);
  const Theorem25Result r = theorem25_quotient(w5);
  CHECK(r.n == Subgroup::generated(w5, std::vector<Element>{w5.generator(3)}));
  CHECK(frattini(w5).order() == r.n.order() * 5);
  CHECK(r.quotient.target().order() == 125);
  CHECK(r.kind == QuotientKind::ExtraSpecial);
  CHECK(is_extra_special(r.quotient.target()));

  const auto e5 = cat::extraspecial(5, 1);
  const Theorem25Result re = theorem25_quotient(e5);
  CHECK(re.n.is_trivial());
  CHECK(agemo_gamma(e5, 3).is_trivial());

  CHECK_THROWS_AS(theorem25_quotient(cat::cyclic(5, 2)), PreconditionError);
  CHECK_THROWS_AS(theorem25_quotient(cat::metacyclic_p3(5)), PreconditionError);
}

TEST_CASE("theorem25_quotient invariants on the catalog") {
  for (const auto& e : cat::bundled_catalog()) {
    if (is_powerful(e.group)) continue;
    INFO(e.name);
    const Theorem25Result r = theorem25_quotient(e.group);
    const auto& t = r.quotient.target();
    CHECK(is_normal(r.n));
    CHECK(r.n.contains(agemo_gamma(e.group, 3)));
    CHECK(frattini(e.group).contains(r.n));
    CHECK(frattini(e.group).order() == r.n.order() * static_cast<std::uint64_t>(e.group.prime()));
    CHECK(exponent(t) == t.prime());
    CHECK(lower_central(t, 2).order() == static_cast<std::uint64_t>(t.prime()));
    CHECK(decompose_uv(t).has_value());
  }
}

TEST_CASE("build_commutator_hom examples") {
  const auto w5 = cat::maximal_class_p4(5);
  const LinearMap central = build_commutator_hom({{w5.generator(0)}, 0}, center(w5));
  CHECK(central.matrix.is_zero());
  CHECK(central.kernel().size() == static_cast<std::size_t>(center(w5).log_order()));

  // a -> [a, g1] on <g3, g4>: g3 -> g4, g4 -> 1
  const Subgroup g34 = frattini(w5);
  const LinearMap m = build_commutator_hom({{w5.generator(0)}, 0}, g34);
  CHECK(m.kernel().size() == 1);
  for (const auto& v : m.kernel()) CHECK(center(w5).contains(g34.element_at(v)));
}

TEST_CASE("mu kernel is Omega_1(Z(G))") {
  for (const auto& g : {cat::maximal_class_p4(5), cat::maximal_class(5, 5), cat::maximal_class_p4(3)}) {
    const TauResult r = tau_maps(g, TauVariant::Mu);
    const Subgroup z1 = omega1(center(g));
    CHECK(r.kernel.size() == static_cast<std::size_t>(z1.log_order()));
    for (const auto& v : r.kernel) CHECK(z1.contains(r.domain.element_at(v)));
  }
}

TEST_CASE("sigma kernel is the centralizer of U in Omega_1(Z_2)") {
  const auto g = cat::maximal_class(5, 5);
  const Theorem25Result t = theorem25_quotient(g);
  const Subgroup u = t.quotient.preimage(t.uv.u);
  const Subgroup om = omega1_generated(upper_central(g, 2));
  REQUIRE(om.log_order() > 0);
  std::vector<gfp::Vector> rows(static_cast<std::size_t>(om.log_order()));
  for (const auto& x : u.igs()) {
    const LinearMap m = build_commutator_hom({{x}, 1}, om);
    for (int r = 0; r < om.log_order(); ++r) {
      const auto row = m.matrix.row(r);
      rows[static_cast<std::size_t>(r)].insert(rows[static_cast<std::size_t>(r)].end(), row.begin(), row.end());
    }
  }
  std::vector<gfp::Vector> kernel;
  if (rows[0].empty()) {
    for (int r = 0; r < om.log_order(); ++r) kernel.push_back(gfp::unit_vector(om.log_order(), r));
  } else {
    kernel = gfp::left_nullspace(gfp::Matrix::from_rows(rows, static_cast<int>(rows[0].size()), 5));
  }
  const Subgroup m = centralizer(om, u);
  CHECK(kernel.size() == static_cast<std::size_t>(m.log_order()));
  for (const auto& v : kernel) CHECK(m.contains(om.element_at(v)));
}

TEST_CASE("tau maps with a trivial domain") {
  const TauResult r = tau_maps(cat::extraspecial(5, 1), TauVariant::Tau);
  CHECK(r.domain.is_trivial());
  CHECK(r.kernel.empty());
}

TEST_CASE("tau1 kernel bound") {
  for (const auto& g : {cat::maximal_class_p4(5), cat::maximal_class(5, 5), cat::maximal_class_p4(7)}) {
    const TauResult r = tau_maps(g, TauVariant::Tau1);
    CHECK(static_cast<int>(r.kernel.size()) >= 2 * r.domain.log_order() - 2);
  }
}

TEST_CASE("tau kernel derivations lift to automorphisms") {
  for (const auto& g : {cat::maximal_class_p4(5), cat::maximal_class(5, 5), cat::maximal_class_p4(3)}) {
    for (auto v : {TauVariant::Tau, TauVariant::Tau1, TauVariant::Tau2}) {
      const TauResult r = tau_maps(g, v);
      REQUIRE(r.module);
      CHECK(r.derivations.size() == r.kernel.size());
      for (const auto& d : r.derivations) {
        CHECK(satisfies_cocycle_law(*r.module, d));
        for (const auto& w : pc_relators(r.module->group())) CHECK(gfp::is_zero(evaluate_word(*r.module, d, w)));
        const Automorphism a = lift_to_automorphism(*r.module, d);
        CHECK(a.is_automorphism());
        CHECK(a.fixes(r.n));
      }
    }
  }
}

TEST_CASE("tau3 needs a valid K") {
  const auto g = cat::maximal_class(5, 5);
  CHECK(tau3_k_candidates(g).empty());
  CHECK_THROWS_AS(tau_maps(g, TauVariant::Tau3), PreconditionError);
}

TEST_CASE("lemma45 with the zero derivation") {
  const auto g = cat::maximal_class_p4(5);
  const GModule m = build_module(frattini(g), omega1(center(frattini(g))));
  const auto& q = m.group();
  const Lemma45Setting s{&m, q.generator(0), q.generator(1), q.generator(0), q.generator(1)};
  for (auto c : {Lemma45Clause::I, Lemma45Clause::II, Lemma45Clause::III, Lemma45Clause::IV})
    CHECK(lemma45_eval(s, zero_derivation(m), c).is_identity());
}

TEST_CASE("lemma45 clause (iv) on W(5)") {
  const auto g = cat::maximal_class_p4(5);
  const GModule m = build_module(frattini(g), omega1(center(frattini(g))));
  const auto& q = m.group();
  std::mt19937 rng(4);
  for (const auto& d : random_derivations(m, 30, rng)) {
    for (const auto& x : enumerate(q)) {
      const Lemma45Setting s{&m, x, q.generator(1), q.generator(0), q.generator(1)};
      CHECK(lemma45_eval(s, d, Lemma45Clause::IV).is_identity());
      CHECK(lemma45_direct(s, d, Lemma45Clause::IV).is_identity());
    }
  }
}

TEST_CASE("lemma45 closed forms equal direct evaluation") {
  struct Case {
    const char* name;
    PcPresentation g;
    Subgroup n;
  };
  const auto w5 = cat::maximal_class_p4(5);
  const auto w7 = cat::maximal_class_p4(7);
  const auto mc = cat::maximal_class(5, 5);
  const auto e5 = cat::extraspecial(5, 1);
  const auto ec = cat::direct_product(e5, cat::cyclic(5, 1));
  const std::vector<Case> cases{{"W(5) Phi", w5, frattini(w5)},
                                {"W(5) gamma_3", w5, lower_central(w5, 3)},
                                {"W(7) Phi", w7, frattini(w7)},
                                {"maximal_class(5,5) Phi", mc, frattini(mc)},
                                {"maximal_class(5,5) gamma_3", mc, lower_central(mc, 3)},
                                {"E(5) Phi", e5, frattini(e5)},
                                {"E(5) x C5 Phi", ec, frattini(ec)}};
  std::mt19937 rng(45);
  for (const auto& c : cases) {
    INFO(c.name);
    const GModule m = build_module(c.n, omega1(center(c.n)));
    const auto qs = enumerate(m.group());
    std::uniform_int_distribution<std::size_t> pick(0, qs.size() - 1);
    for (int k = 0; k < 4; ++k) {
      const Lemma45Setting s{&m, qs[pick(rng)], qs[pick(rng)], qs[pick(rng)], qs[pick(rng)]};
      for (const auto& d : random_derivations(m, 50, rng)) {
        for (auto clause : {Lemma45Clause::I, Lemma45Clause::II, Lemma45Clause::IV})
          CHECK(lemma45_eval(s, d, clause) == lemma45_direct(s, d, clause));
        bool iii_applies = true;
        try {
          const Element v = lemma45_eval(s, d, Lemma45Clause::III);
          CHECK(v == lemma45_direct(s, d, Lemma45Clause::III));
        } catch (const PreconditionError&) {
          iii_applies = false;
        }
        (void)iii_applies;
      }
    }
  }
}

TEST_CASE("lemma45 clause (v) at p = 3") {
  const auto g = cat::maximal_class_p4(3);
  const GModule m = build_module(lower_central(g, 3), lower_central(g, 3));
  const auto qs = enumerate(m.group());
  std::mt19937 rng(3);
  int checked = 0;
  for (const auto& d : random_derivations(m, 40, rng))
    for (const auto& x : qs) {
      const Lemma45Setting s{&m, x, qs[1], qs[2], qs[3]};
      try {
        CHECK(lemma45_eval(s, d, Lemma45Clause::V) == lemma45_direct(s, d, Lemma45Clause::V));
        ++checked;
      } catch (const PreconditionError&) {
      }
    }
  CHECK(checked > 0);
  const GModule m5 = build_module(frattini(cat::maximal_class_p4(5)), center(cat::maximal_class_p4(5)));
  const Lemma45Setting s5{&m5, m5.group().generator(0), m5.group().generator(1), m5.group().generator(0),
                          m5.group().generator(0)};
  CHECK_THROWS_AS(lemma45_eval(s5, zero_derivation(m5), Lemma45Clause::V), PreconditionError);
}

TEST_CASE("lemma45 rejects M outside Z_4") {
  const auto g = cat::maximal_class(5, 6);
  const GModule m = build_module(Subgroup::generated(g, std::vector<Element>{g.generator(1), g.generator(2),
                                                                             g.generator(3), g.generator(4),
                                                                             g.generator(5)}),
                                 Subgroup::generated(g, std::vector<Element>{g.generator(1), g.generator(2),
                                                                             g.generator(3), g.generator(4),
                                                                             g.generator(5)}));
  const Lemma45Setting s{&m, m.group().generator(0), m.group().generator(0), m.group().generator(0),
                         m.group().generator(0)};
  CHECK_THROWS_AS(lemma45_eval(s, zero_derivation(m), Lemma45Clause::I), PreconditionError);
}

TEST_CASE("theorem53 examples") {
  const auto w5 = cat::maximal_class_p4(5);
  const Subgroup g = Subgroup::whole(w5);
  CHECK(theorem53_check(w5, g, lower_central(w5, 3), 0, 0).holds());
  CHECK(theorem53_check(w5, g, lower_central(w5, 3), 1, 0).holds());
  for (int l = 0; l <= 2; ++l) CHECK(theorem53_check(w5, g, lower_central(w5, 2), 1, l).holds());
  const auto ec = cat::direct_product(cat::extraspecial(5, 1), cat::cyclic(5, 1));
  for (int l = 0; l <= 2; ++l) CHECK(theorem53_check(ec, Subgroup::whole(ec), Subgroup::whole(ec), 1, l).holds());
  CHECK_THROWS_AS(theorem53_check(w5, Subgroup::generated(w5, std::vector<Element>{w5.generator(1)}), g, 1, 0),
                  PreconditionError);
}

TEST_CASE("theorem42_pipeline examples") {
  const Theorem42Result ab = theorem42_pipeline(cat::elementary_abelian(5, 2));
  CHECK_FALSE(ab.automorphism);
  CHECK_FALSE(ab.failure.empty());

  const Theorem42Result nc = theorem42_pipeline(cat::direct_product(cat::extraspecial(5, 1), cat::cyclic(5, 1)));
  CHECK_FALSE(nc.automorphism);
  CHECK(nc.failure.find("cyclic") != std::string::npos);

  const auto g = cat::maximal_class(5, 5);
  const Theorem42Result r = theorem42_pipeline(g);
  REQUIRE(r.automorphism);
  CHECK(r.failure.empty());
  const Automorphism& a = *r.automorphism;
  CHECK(a.is_automorphism());
  CHECK(a.order() == 5);
  CHECK(a.fixes(agemo_gamma(g, 3)));
  CHECK_FALSE(a.fixes(frattini(g)));
  CHECK_FALSE(is_inner(a).witness);

  const Theorem42Result w = theorem42_pipeline(cat::maximal_class_p4(5));
  CHECK_FALSE(w.automorphism);
  CHECK_FALSE(w.failure.empty());
}
