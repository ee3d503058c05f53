#include "pnoninner/hypotheses.hpp"

#include "pnoninner/errors.hpp"
#include "pnoninner/structure.hpp"

namespace pnoninner {

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "regular";
    case Regularity::Irregular: return "irregular";
    case Regularity::Unknown: return "undetermined";
  }
  return "?";
}

RegularityResult regularity(const PcPresentation& g, std::uint64_t budget) {
  const int p = g.prime();
  RegularityResult out;
  auto verdict = [&out](Regularity r, std::string why) {
    out.verdict = r;
    out.reason = std::move(why);
    return out;
  };
  if (nilpotency_class(g) < p) return verdict(Regularity::Regular, "class < p");
  if (g.size() <= p) return verdict(Regularity::Regular, "|G| <= p^p");
  if (rank(lower_central(g, 2)) <= 1) return verdict(Regularity::Regular, "gamma_2(G) cyclic");
  if (g.order() > enumeration_bound()) return verdict(Regularity::Unknown, "too large to enumerate");
  if (exponent(g) == p) return verdict(Regularity::Regular, "exponent p");
  if (omega1_generated(Subgroup::whole(g)).log_order() + agemo(g).log_order() != g.size())
    return verdict(Regularity::Irregular, "|Omega_1(G)| != |G : G^p|");

  const auto elems = enumerate(g);
  const std::uint64_t n = elems.size();
  for (std::uint64_t i = 1; i < n; ++i) {
    for (std::uint64_t j = 1; j < n; ++j) {
      if (i == j) continue;
      if (out.pairs_checked >= budget) return verdict(Regularity::Unknown, "pair search budget exhausted");
      ++out.pairs_checked;
      const Element &x = elems[i], &y = elems[j];
      const Element c = g.commutator(x, y);
      if (c.is_identity()) continue;
      const std::vector<Element> xy{x, y};
      const Subgroup h = Subgroup::generated(g, xy);
      const Subgroup d = Subgroup::normal_closure_in(h, std::span<const Element>(&c, 1));
      const Element lhs = g.multiply(g.inverse(g.multiply(g.power(x, p), g.power(y, p))),
                                     g.power(g.multiply(x, y), p));
      if (!agemo(d).contains(lhs)) {
        out.reason = "(xy)^p not in x^p y^p gamma_2(<x,y>)^p for x = " + x.to_string() + ", y = " + y.to_string();
        out.verdict = Regularity::Irregular;
        return out;
      }
    }
  }
  return verdict(Regularity::Regular, "all pairs checked");
}

const HypothesisEntry* HypothesisReport::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

namespace {

long long log_order(const Subgroup& h) { return h.log_order(); }

Subgroup centralizer_in_g(const Subgroup& s) { return centralizer(s.parent(), s); }

bool strictly_contains(const Subgroup& big, const Subgroup& small) {
  return big.contains(small) && big.log_order() > small.log_order();
}

std::optional<bool> all_of(std::initializer_list<std::optional<bool>> xs) {
  bool unknown = false;
  for (const auto& x : xs) {
    if (x.has_value() && !*x) return false;
    if (!x.has_value()) unknown = true;
  }
  if (unknown) return std::nullopt;
  return true;
}

}  // namespace

HypothesisReport hypothesis_report(const PcPresentation& g, HypothesisLevel level) {
  const Subgroup whole = Subgroup::whole(g);
  if (is_abelian(whole)) throw InvalidArgument("hypothesis_report: G is abelian");

  HypothesisReport rep;
  rep.level = level;
  auto add = [&rep](std::string id, std::string statement, std::optional<bool> holds, std::vector<Evidence> ev) {
    rep.entries.push_back(HypothesisEntry{std::move(id), std::move(statement), holds, std::move(ev)});
    return holds;
  };

  const int cls = nilpotency_class(g);
  const int d = rank(g);
  const Subgroup z = center(g);
  const Subgroup z2 = upper_central(g, 2);
  const Subgroup z3 = upper_central(g, 3);
  const Subgroup phi = frattini(g);
  const Subgroup zphi = center(phi);
  const Subgroup c_zphi = centralizer_in_g(zphi);
  const Subgroup c_phi = centralizer_in_g(phi);
  const Subgroup p3 = agemo_gamma(g, 3);
  const Subgroup zp3 = center(p3);
  const Subgroup c_p3 = centralizer_in_g(p3);
  const Subgroup om_z2 = omega1_generated(z2);
  const Subgroup om_z = omega1(z);
  const QuotientMap qz(z);
  const Subgroup z2star = qz.preimage(omega1(qz.image(z2)));
  const bool gz_powerful = is_powerful(qz.target());
  const RegularityResult reg = regularity(g);
  const auto maxes = maximal_subgroups(g);
  const long long dz = rank(z), dz2z = rank_mod(z2, z), dom_z2 = rank(om_z2), dom_z = rank(om_z);
  const long long binom_d2 = static_cast<long long>(d) * (d - 1) / 2;

  // Hypothesis A
  const auto a1 = add("A.i", "class(G) >= 4", cls >= 4, {{"class", cls}});
  const auto a2 = add("A.ii", "G/Z(G) is not powerful", !gz_powerful, {{"G/Z powerful", gz_powerful}});
  const bool a3_eq = c_zphi == phi;
  const bool a3_strict = strictly_contains(zphi, z);
  const bool a3_c = zphi == c_phi;
  const auto a3 = add("A.iii", "C_G(Z(Phi)) = Phi and Z(G) < Z(Phi) = C_G(Phi)", a3_eq && a3_strict && a3_c,
                      {{"log|C_G(Z(Phi))|", log_order(c_zphi)},
                       {"log|Phi|", log_order(phi)},
                       {"log|Z(G)|", log_order(z)},
                       {"log|Z(Phi)|", log_order(zphi)},
                       {"log|C_G(Phi)|", log_order(c_phi)}});
  std::optional<bool> a4;
  if (reg.verdict != Regularity::Unknown) a4 = reg.verdict == Regularity::Irregular;
  add("A.iv", "G is not regular; " + to_string(reg.verdict) + ": " + reg.reason, a4, {{"pairs checked", static_cast<long long>(reg.pairs_checked)}});
  bool a5 = true;
  bool any_zm_central = false;
  long long bad_max = -1;
  for (std::size_t k = 0; k < maxes.size(); ++k) {
    const Subgroup zm = center(maxes[k]);
    const bool ok = centralizer_in_g(zm) == maxes[k] && strictly_contains(zm, z) && zm == centralizer_in_g(maxes[k]);
    if (z.contains(zm)) any_zm_central = true;
    if (!ok && a5) {
      a5 = false;
      bad_max = static_cast<long long>(k);
    }
  }
  add("A.v", "C_G(Z(M)) = M and Z(G) < Z(M) = C_G(M) for every maximal M", a5,
      {{"maximal subgroups", static_cast<long long>(maxes.size())}, {"first failing index", bad_max}});
  const bool a6 = z2star.contains(om_z2) && zphi.contains(z2star);
  add("A.vi", "Omega_1(Z_2) <= Z_2* <= Z(Phi)", a6,
      {{"log|Omega_1(Z_2)|", log_order(om_z2)}, {"log|Z_2*|", log_order(z2star)}, {"log|Z(Phi)|", log_order(zphi)}});
  const Subgroup zphi_z3 = intersection(zphi, z3);
  const long long dzphi_z3 = rank_mod(zphi_z3, z);
  const bool v1 = dz2z == dz * d;
  const bool v2 = dom_z2 >= dz * d;
  const bool v3 = dzphi_z3 >= dom_z2 * d - dom_z * binom_d2;
  add("A.vii.1", "d(Z_2/Z) = d(Z) d(G)", v1, {{"d(Z_2/Z)", dz2z}, {"d(Z)", dz}, {"d(G)", d}});
  add("A.vii.2", "d(Omega_1(Z_2)) >= d(Z) d(G)", v2, {{"d(Omega_1(Z_2))", dom_z2}, {"d(Z) d(G)", dz * d}});
  add("A.vii.3", "d((Z(Phi) cap Z_3)/Z) >= d(Omega_1(Z_2)) d(G) - d(Omega_1(Z)) binom(d(G), 2)", v3,
      {{"d((Z(Phi) cap Z_3)/Z)", dzphi_z3}, {"bound", dom_z2 * d - dom_z * binom_d2}});
  const auto a7 = add("A.vii", "all of A.vii.1-3", v1 && v2 && v3, {});
  const bool w1a = strictly_contains(zp3, zphi);
  const bool w1b = zp3 == c_p3;
  const Subgroup zp3_z3 = intersection(zp3, z3);
  const long long dzp3_z3 = rank_mod(zp3_z3, z);
  const long long dom_zp3_z3 = rank(omega1(zp3_z3));
  const bool w2 = dzp3_z3 >= 2 * dom_z2;
  const bool w3 = dom_zp3_z3 >= 2 * dom_z2;
  add("A.viii.1a", "Z(Phi) < Z(G^p gamma_3)", w1a,
      {{"log|Z(Phi)|", log_order(zphi)}, {"log|Z(G^p gamma_3)|", log_order(zp3)}});
  add("A.viii.1b", "Z(G^p gamma_3) = C_G(G^p gamma_3)", w1b, {{"log|C_G(G^p gamma_3)|", log_order(c_p3)}});
  add("A.viii.2", "d((Z(G^p gamma_3) cap Z_3)/Z) >= 2 d(Omega_1(Z_2))", w2,
      {{"d((Z(G^p gamma_3) cap Z_3)/Z)", dzp3_z3}, {"2 d(Omega_1(Z_2))", 2 * dom_z2}});
  add("A.viii.3", "d(Omega_1(Z(G^p gamma_3) cap Z_3)) >= 2 d(Omega_1(Z_2))", w3,
      {{"d(Omega_1(Z(G^p gamma_3) cap Z_3))", dom_zp3_z3}});
  const auto a8 = add("A.viii", "d(G) >= 3 or all of A.viii.1a-3", d >= 3 || (w1a && w1b && w2 && w3), {{"d(G)", d}});
  std::optional<bool> sat = all_of({a1, a2, a3, a4, a5, a6, a7, a8});

  // Reduction predicates: each one grants a non-inner automorphism of order p.
  std::vector<std::optional<bool>> fires;
  fires.push_back(add("R.i", "class(G) is 2 or 3", cls == 2 || cls == 3, {{"class", cls}}));
  fires.push_back(add("R.ii", "G/Z(G) is powerful", gz_powerful, {}));
  fires.push_back(add("R.iii", "C_G(Z(Phi)) != Phi", !a3_eq, {{"log|C_G(Z(Phi))|", log_order(c_zphi)}}));
  std::optional<bool> r4;
  if (reg.verdict != Regularity::Unknown) r4 = reg.verdict == Regularity::Regular;
  fires.push_back(add("R.iv", "G is regular", r4, {}));
  fires.push_back(add("R.v", "Z(M) <= Z(G) for some maximal M", any_zm_central, {}));
  fires.push_back(add("R.vii", "d(Z_2/Z) != d(Z) d(G)", !v1, {{"d(Z_2/Z)", dz2z}, {"d(Z) d(G)", dz * d}}));
  fires.push_back(add("R.viii", "d(Omega_1(Z_2)) < d(Z) d(G)", !v2, {{"d(Omega_1(Z_2))", dom_z2}}));
  const bool d2a = w1a, d2b = w1b;
  const bool d2c = dzp3_z3 < 2 * dom_z2;
  add("D2.a", "Z(Phi) < Z(G^p gamma_3)", d2a, {});
  add("D2.b", "Z(G^p gamma_3) = C_G(G^p gamma_3)", d2b, {});
  add("D2.c", "d((Z(G^p gamma_3) cap Z_3)/Z) < 2 d(Omega_1(Z_2))", d2c, {});
  fires.push_back(add("D2", "d(G) = 2 and (not (D2.a and D2.b) or D2.c)", d == 2 && (!(d2a && d2b) || d2c), {{"d(G)", d}}));
  for (const auto& f : fires)
    if (f.value_or(false)) rep.reduction_fires = true;

  if (level == HypothesisLevel::B) {
    add("B.i", "Hypothesis A holds", sat, {});
    const bool cyclic = dz == 1;
    const Subgroup cz3 = intersection(c_p3, z3);
    const bool eq = !zphi.contains(cz3);
    const auto b2 = add("B.ii", "Z(G) is not cyclic or C_G(G^p gamma_3) cap Z_3 is not contained in Z(Phi)",
                        !cyclic || eq, {{"d(Z)", dz}, {"log|C_G(G^p gamma_3) cap Z_3|", log_order(cz3)}});
    add("L.cyclic", "Omega_1(Z_2) <= Z(G^p gamma_3)", zp3.contains(om_z2), {{"Z(G) cyclic", cyclic}});
    sat = all_of({sat, b2});
  }
  rep.satisfied = sat;
  return rep;
}

MannTriple mann_triple(const PcPresentation& g, const Element& x, const Element& y) {
  const int p = g.prime();
  return MannTriple{g.commutator(x, g.power(y, p)).is_identity(), g.power(g.commutator(x, y), p).is_identity(),
                    g.commutator(g.power(x, p), y).is_identity()};
}

Cor32Triple cor32_triple(const PcPresentation& g, const Element& t) {
  const int p = g.prime();
  const Subgroup gp = agemo(g);
  bool cent = true;
  for (const auto& h : gp.igs()) cent = cent && g.commutator(t, h).is_identity();
  const bool pc = center(g).contains(g.power(t, p));
  bool comm = true;
  for_each_element(g, [&](const Element& x) {
    if (comm && !g.power(g.commutator(x, t), p).is_identity()) comm = false;
  });
  return Cor32Triple{cent, pc, comm};
}

bool lemma36_check(const Subgroup& n) {
  const PcPresentation& g = n.parent();
  if (n.is_trivial() || n.log_order() == g.size() || !is_normal(n)) return true;
  const Subgroup zn = center(n);
  if (!(centralizer(g, zn) == n)) return true;
  return strictly_contains(zn, center(g)) && zn == centralizer(g, n);
}

}  // namespace pnoninner
