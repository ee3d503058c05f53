#include "pnoninner/structure.hpp"

#include "pnoninner/errors.hpp"
#include "pnoninner/gfp.hpp"

namespace pnoninner {

Subgroup center(const Subgroup& h) { return centralizer(h, h); }

Subgroup center(const PcPresentation& g) { return center(Subgroup::whole(g)); }

std::vector<Subgroup> upper_central_series(const PcPresentation& g) {
  std::vector<Subgroup> series{Subgroup::trivial(g)};
  while (series.back().log_order() < g.size()) {
    const QuotientMap q(series.back());
    Subgroup next = q.preimage(center(q.target()));
    if (next == series.back()) throw Error("upper central series stalled; presentation is not nilpotent");
    series.push_back(std::move(next));
  }
  return series;
}

std::vector<Subgroup> lower_central_series(const PcPresentation& g) {
  std::vector<Subgroup> series{Subgroup::whole(g)};
  std::vector<Element> gens;
  for (int i = 0; i < g.size(); ++i) gens.push_back(g.generator(i));
  while (!series.back().is_trivial()) {
    std::vector<Element> comms;
    for (const auto& a : series.back().igs())
      for (const auto& b : gens) comms.push_back(g.commutator(a, b));
    Subgroup next = Subgroup::normal_closure(g, comms);
    if (next == series.back()) throw Error("lower central series stalled; presentation is not nilpotent");
    series.push_back(std::move(next));
  }
  return series;
}

Subgroup upper_central(const PcPresentation& g, int i) {
  if (i < 0) throw InvalidArgument("upper_central: negative index");
  const auto s = upper_central_series(g);
  return s[static_cast<std::size_t>(std::min<int>(i, static_cast<int>(s.size()) - 1))];
}

Subgroup lower_central(const PcPresentation& g, int i) {
  if (i < 1) throw InvalidArgument("lower_central: index must be at least 1");
  const auto s = lower_central_series(g);
  return s[static_cast<std::size_t>(std::min<int>(i - 1, static_cast<int>(s.size()) - 1))];
}

Subgroup agemo(const Subgroup& h, int k) {
  if (k < 0) throw InvalidArgument("agemo: negative exponent");
  const PcPresentation& g = h.parent();
  long long q = 1;
  for (int i = 0; i < k; ++i) q *= g.prime();
  std::vector<Element> gens;
  if (is_abelian(h)) {
    for (const auto& x : h.igs()) gens.push_back(g.power(x, q));
    return Subgroup::generated(g, gens);
  }
  require_enumerable(h.order(), "agemo");
  Subgroup current = Subgroup::trivial(g);
  h.for_each([&](const Element& x) {
    const Element y = g.power(x, q);
    if (current.contains(y)) return;
    gens.push_back(y);
    current = Subgroup::generated(g, gens);
  });
  return current;
}

Subgroup agemo(const PcPresentation& g, int k) { return agemo(Subgroup::whole(g), k); }

Subgroup frattini(const Subgroup& h) {
  const PcPresentation& g = h.parent();
  const auto& igs = h.igs();
  std::vector<Element> gens;
  for (std::size_t i = 0; i < igs.size(); ++i) {
    gens.push_back(g.power(igs[i], g.prime()));
    for (std::size_t j = i + 1; j < igs.size(); ++j) gens.push_back(g.commutator(igs[i], igs[j]));
  }
  return Subgroup::normal_closure_in(h, gens);
}

Subgroup frattini(const PcPresentation& g) { return frattini(Subgroup::whole(g)); }

Subgroup agemo_gamma(const PcPresentation& g, int k) {
  if (k < 2) throw InvalidArgument("agemo_gamma: k must be at least 2");
  return join(agemo(g), lower_central(g, k));
}

namespace {

Subgroup order_p_elements(const Subgroup& h) {
  const PcPresentation& g = h.parent();
  require_enumerable(h.order(), "omega1");
  std::vector<Element> gens;
  Subgroup current = Subgroup::trivial(g);
  h.for_each([&](const Element& x) {
    if (current.contains(x) || !g.power(x, g.prime()).is_identity()) return;
    gens.push_back(x);
    current = Subgroup::generated(g, gens);
  });
  return current;
}

}  // namespace

Subgroup omega1(const Subgroup& a) {
  if (!is_abelian(a)) throw PreconditionError("omega1: subgroup " + a.to_string() + " is nonabelian");
  return order_p_elements(a);
}

Subgroup omega1_generated(const Subgroup& h) { return order_p_elements(h); }

int rank(const Subgroup& h) { return h.log_order() - frattini(h).log_order(); }

int rank(const PcPresentation& g) { return rank(Subgroup::whole(g)); }

int rank_mod(const Subgroup& h, const Subgroup& k) { return h.log_order() - join(frattini(h), k).log_order(); }

int nilpotency_class(const PcPresentation& g) { return static_cast<int>(lower_central_series(g).size()) - 1; }

int coclass(const PcPresentation& g) { return g.size() - nilpotency_class(g); }

long long exponent(const Subgroup& h) {
  require_enumerable(h.order(), "exponent");
  const PcPresentation& g = h.parent();
  long long e = 1;
  h.for_each([&](const Element& x) { e = std::max(e, g.element_order(x)); });
  return e;
}

long long exponent(const PcPresentation& g) { return exponent(Subgroup::whole(g)); }

bool is_powerful(const PcPresentation& g) { return agemo(g).contains(lower_central(g, 2)); }

bool is_extra_special(const PcPresentation& g) {
  const Subgroup z = center(g);
  return z.log_order() == 1 && z == lower_central(g, 2) && z == frattini(g);
}

std::vector<Element> minimal_generators(const PcPresentation& g) {
  const QuotientMap q(frattini(g));
  std::vector<Element> out;
  for (int i : q.kept()) out.push_back(g.generator(i));
  return out;
}

std::vector<Subgroup> maximal_subgroups(const PcPresentation& g) {
  const QuotientMap q(frattini(g));
  const int d = q.target().size();
  const int p = g.prime();
  std::vector<Subgroup> out;
  gfp::for_each_vector(d, p, [&](const gfp::Vector& f) {
    int lead = 0;
    while (lead < d && f[static_cast<std::size_t>(lead)] == 0) ++lead;
    if (lead == d || f[static_cast<std::size_t>(lead)] != 1) return;
    gfp::Matrix m(1, d, p);
    m.set_row(0, f);
    std::vector<Element> gens;
    for (const auto& v : gfp::nullspace(m)) gens.push_back(Element(d, v));
    out.push_back(q.preimage(Subgroup::generated(q.target(), gens)));
  });
  return out;
}

bool lemma24_check(const Subgroup& n, const Subgroup& l) {
  if (!is_normal(n)) throw PreconditionError("lemma24_check: N is not normal");
  if (!is_normal(l)) throw PreconditionError("lemma24_check: L is not normal");
  const Subgroup lng = join(l, commutator_subgroup(n, Subgroup::whole(n.parent())));
  if (!lng.contains(n)) return true;
  return l.contains(n);
}

SymplecticBasis symplectic_basis(const PcPresentation& g) {
  const Subgroup gamma2 = lower_central(g, 2);
  const Subgroup z = center(g);
  if (gamma2.log_order() != 1 || !z.contains(gamma2))
    throw PreconditionError("symplectic_basis: needs class 2 with |gamma_2(G)| = p");
  const int p = g.prime();
  const Element c = gamma2.igs()[0];
  const int lead = c.depth();
  const QuotientMap q(z);
  const int m = q.target().size();

  auto lift = [&](const gfp::Vector& v) { return q.section(Element(m, v)); };
  gfp::Matrix w(m, m, p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      w(i, j) = g.commutator(lift(gfp::unit_vector(m, i)), lift(gfp::unit_vector(m, j)))[lead];
  auto form = [&](const gfp::Vector& u, const gfp::Vector& v) {
    const gfp::Vector uw = gfp::mul(u, w);
    long long s = 0;
    for (int k = 0; k < m; ++k) s += static_cast<long long>(uw[static_cast<std::size_t>(k)]) * v[static_cast<std::size_t>(k)];
    return gfp::reduce(s, p);
  };

  std::vector<gfp::Vector> rest;
  for (int i = 0; i < m; ++i) rest.push_back(gfp::unit_vector(m, i));
  SymplecticBasis out{{}, {}, c};
  while (!rest.empty()) {
    const gfp::Vector e = rest.front();
    std::size_t fi = 1;
    while (fi < rest.size() && form(e, rest[fi]) == 0) ++fi;
    if (fi == rest.size()) throw Error("symplectic_basis: commutator form is degenerate modulo the center");
    const gfp::Vector f = gfp::scale(rest[fi], gfp::inverse_mod(form(e, rest[fi]), p), p);
    std::vector<gfp::Vector> next;
    for (std::size_t k = 1; k < rest.size(); ++k) {
      if (k == fi) continue;
      const gfp::Vector& v = rest[k];
      gfp::Vector r = gfp::sub(v, gfp::scale(e, form(v, f), p), p);
      r = gfp::add(r, gfp::scale(f, form(v, e), p), p);
      next.push_back(r);
    }
    out.x.push_back(lift(e));
    out.y.push_back(lift(f));
    rest = std::move(next);
  }
  return out;
}

std::optional<UVDecomposition> decompose_uv(const PcPresentation& g) {
  const Subgroup gamma2 = lower_central(g, 2);
  if (gamma2.log_order() != 1 || exponent(g) != g.prime()) return std::nullopt;
  const SymplecticBasis sb = symplectic_basis(g);
  std::vector<Element> vgens;
  for (std::size_t i = 0; i < sb.x.size(); ++i) {
    vgens.push_back(sb.x[i]);
    vgens.push_back(sb.y[i]);
  }
  Subgroup v = Subgroup::generated(g, vgens);
  std::vector<Element> ugens;
  Subgroup covered = gamma2;
  const Subgroup z = center(g);
  for (const auto& zg : z.igs()) {
    if (covered.contains(zg)) continue;
    ugens.push_back(zg);
    covered = join(covered, Subgroup::generated(g, std::span<const Element>(&zg, 1)));
  }
  Subgroup u = Subgroup::generated(g, ugens);
  if (u.log_order() + v.log_order() != g.size() || !intersection(u, v).is_trivial())
    throw Error("decompose_uv: U and V do not split G");
  return UVDecomposition{std::move(u), std::move(v)};
}

}  // namespace pnoninner
