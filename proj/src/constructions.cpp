#include "pnoninner/constructions.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "pnoninner/errors.hpp"

namespace pnoninner {

namespace {

FreeWord inverse_word(const FreeWord& w) {
  FreeWord out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->letter, -it->exp});
  return out;
}

FreeWord concat(std::initializer_list<const FreeWord*> parts) {
  FreeWord out;
  for (const auto* w : parts) out.insert(out.end(), w->begin(), w->end());
  return out;
}

FreeWord letter(int k) { return {{k, 1}}; }

bool lex_less(const gfp::Vector& a, const gfp::Vector& b) { return a < b; }

std::vector<gfp::Vector> span_elements(const std::vector<gfp::Vector>& basis, int dim, int p) {
  std::vector<gfp::Vector> out;
  gfp::for_each_vector(static_cast<int>(basis.size()), p, [&](const gfp::Vector& c) {
    gfp::Vector v = gfp::zero_vector(dim);
    for (std::size_t k = 0; k < basis.size(); ++k) v = gfp::add(v, gfp::scale(basis[k], c[k], p), p);
    out.push_back(std::move(v));
  });
  return out;
}

bool in_span(const std::vector<gfp::Vector>& basis, const gfp::Vector& v, int p) {
  return gfp::coordinates(basis, v, p).has_value();
}

// a (I - A), i.e. (a^-1)^g a written additively.
gfp::Vector minus_commutator(const GModule& m, const gfp::Vector& a, const Element& g) {
  return gfp::sub(a, m.act(a, g), m.prime());
}

}  // namespace

FreeWord free_commutator(const FreeWord& a, const FreeWord& b) {
  const FreeWord ai = inverse_word(a);
  const FreeWord bi = inverse_word(b);
  return concat({&ai, &bi, &a, &b});
}

FreeWord free_left_normed(const std::vector<FreeWord>& args) {
  if (args.empty()) return {};
  FreeWord out = args[0];
  for (std::size_t k = 1; k < args.size(); ++k) out = free_commutator(out, args[k]);
  return out;
}

FreeWord free_power(const FreeWord& a, int k) {
  FreeWord out;
  const FreeWord base = k >= 0 ? a : inverse_word(a);
  for (int i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

gfp::Vector evaluate_free(const GModule& m, const std::vector<Element>& at,
                          const std::vector<gfp::Vector>& images, const FreeWord& w) {
  const int p = m.prime();
  std::vector<gfp::Matrix> act, inv;
  for (const auto& q : at) {
    act.push_back(m.action_of(q));
    inv.push_back(*gfp::inverse(act.back()));
  }
  gfp::Vector acc = gfp::zero_vector(m.dim());
  for (const auto& l : w) {
    const auto k = static_cast<std::size_t>(l.letter);
    if (k >= at.size()) throw InvalidArgument("evaluate_free: letter out of range");
    if (l.exp == 1) {
      acc = gfp::add(gfp::mul(acc, act[k]), images[k], p);
    } else if (l.exp == -1) {
      acc = gfp::sub(gfp::mul(acc, inv[k]), gfp::mul(images[k], inv[k]), p);
    } else {
      throw InvalidArgument("evaluate_free: exponents must be +-1");
    }
  }
  return acc;
}

Lemma22Result lemma22_derivation(const GModule& m) {
  const PcPresentation& q = m.group();
  if (!is_extra_special(q)) throw PreconditionError("lemma22_derivation: G is not extra-special");
  return lemma22_derivation(m, symplectic_basis(q));
}

Lemma22Result lemma22_derivation(const GModule& m, const SymplecticBasis& basis) {
  const PcPresentation& q = m.group();
  const int p = q.prime();
  const int dim = m.dim();
  if (!is_extra_special(q)) throw PreconditionError("lemma22_derivation: G is not extra-special");
  if (exponent(q) != p) throw PreconditionError("lemma22_derivation: G does not have exponent p");
  const auto fixed = fixed_points(m);
  const auto comm = commutator_submodule(m);
  if (fixed.size() != 1) throw PreconditionError("lemma22_derivation: |M^G| != p");
  if (comm != fixed) throw PreconditionError("lemma22_derivation: M^G != [M, G]");
  const int n = static_cast<int>(basis.x.size());
  if (dim < 2 * n) throw PreconditionError("lemma22_derivation: d(M) < d(G)");

  Lemma22Result out;
  out.basis = basis;
  out.z0 = fixed[0];
  for (int i = 0; i < n; ++i) {
    std::vector<Element> others;
    for (int j = 0; j < n; ++j)
      if (j != i) {
        others.push_back(basis.x[static_cast<std::size_t>(j)]);
        others.push_back(basis.y[static_cast<std::size_t>(j)]);
      }
    gfp::Matrix sigma(dim, dim * static_cast<int>(others.size()), p);
    for (std::size_t k = 0; k < others.size(); ++k) {
      const gfp::Matrix d = gfp::Matrix::identity(dim, p) - m.action_of(others[k]);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) sigma(r, static_cast<int>(k) * dim + c) = d(r, c);
    }
    std::optional<gfp::Vector> best;
    for (const auto& v : span_elements(gfp::left_nullspace(sigma), dim, p))
      if (!in_span(fixed, v, p) && (!best || lex_less(v, *best))) best = v;
    if (!best) throw Error("lemma22_derivation: no kernel element outside M^G");

    const Element& xi = basis.x[static_cast<std::size_t>(i)];
    const Element& yi = basis.y[static_cast<std::size_t>(i)];
    const gfp::Vector ux = minus_commutator(m, *best, xi);
    gfp::Vector dx = gfp::zero_vector(dim), dy = gfp::zero_vector(dim);
    if (!gfp::is_zero(ux)) {
      const auto s = gfp::coordinates(fixed, ux, p);
      dy = gfp::scale(*best, gfp::inverse_mod((*s)[0], p), p);
    } else {
      const gfp::Vector uy = gfp::sub(m.act(*best, yi), *best, p);
      if (gfp::is_zero(uy)) throw Error("lemma22_derivation: chosen element is fixed by x_i and y_i");
      const auto s = gfp::coordinates(fixed, uy, p);
      dx = gfp::scale(*best, gfp::inverse_mod((*s)[0], p), p);
    }
    out.x_values.push_back(dx);
    out.y_values.push_back(dy);
  }

  // letters: x_1..x_n, y_1..y_n, c
  std::vector<Element> at;
  std::vector<gfp::Vector> images;
  for (int i = 0; i < n; ++i) {
    at.push_back(basis.x[static_cast<std::size_t>(i)]);
    images.push_back(out.x_values[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < n; ++i) {
    at.push_back(basis.y[static_cast<std::size_t>(i)]);
    images.push_back(out.y_values[static_cast<std::size_t>(i)]);
  }
  at.push_back(basis.c);
  images.push_back(out.z0);
  const int c = 2 * n;
  std::vector<FreeWord> relators;
  for (int a = 0; a <= c; ++a) relators.push_back(free_power(letter(a), p));
  for (int a = 0; a < c; ++a) {
    relators.push_back(free_commutator(letter(a), letter(c)));
    for (int b = a + 1; b < c; ++b) {
      FreeWord r = free_commutator(letter(a), letter(b));
      if (b == a + n) r.push_back({c, -1});
      relators.push_back(std::move(r));
    }
  }
  for (const auto& r : relators)
    if (!gfp::is_zero(evaluate_free(m, at, images, r)))
      throw Error("lemma22_derivation: a defining relator does not vanish");

  auto d = solve_derivation(m, at, images);
  if (!d) throw Error("lemma22_derivation: values do not extend to a derivation");
  out.delta = std::move(*d);
  return out;
}

Theorem25Result theorem25_quotient(const PcPresentation& g) {
  if (is_powerful(g)) throw PreconditionError("theorem25_quotient: G is powerful");
  const Subgroup phi = frattini(g);
  const Subgroup p3 = agemo_gamma(g, 3);
  const QuotientMap q3(p3);
  const Subgroup phi_bar = q3.image(phi);
  std::vector<Element> rest(phi_bar.igs().begin() + 1, phi_bar.igs().end());
  Subgroup n = q3.preimage(Subgroup::generated(q3.target(), rest));
  if (!is_normal(n) || n.log_order() + 1 != phi.log_order())
    throw Error("theorem25_quotient: N is not a normal subgroup of index p in Phi(G)");
  QuotientMap qn(n);
  const PcPresentation& t = qn.target();
  if (exponent(t) != g.prime()) throw Error("theorem25_quotient: G/N does not have exponent p");
  if (lower_central(t, 2).log_order() != 1) throw Error("theorem25_quotient: |gamma_2(G/N)| != p");
  auto uv = decompose_uv(t);
  if (!uv) throw Error("theorem25_quotient: G/N does not decompose");
  const QuotientKind kind = uv->u.is_trivial() ? QuotientKind::ExtraSpecial : QuotientKind::UtimesV;
  return Theorem25Result{std::move(n), std::move(qn), kind, std::move(*uv)};
}

}  // namespace pnoninner

namespace pnoninner {

Element apply_template(const PcPresentation& g, const CommutatorTemplate& t, const Element& a) {
  if (t.slot < 0 || t.slot > static_cast<int>(t.args.size()))
    throw InvalidArgument("apply_template: slot out of range");
  if (t.weight() < 2) throw InvalidArgument("apply_template: weight must be at least 2");
  std::vector<Element> seq = t.args;
  seq.insert(seq.begin() + t.slot, a);
  for (const auto& e : seq)
    if (!g.is_valid(e)) throw InvalidArgument("apply_template: invalid element " + e.to_string());
  return g.left_normed(seq);
}

std::vector<gfp::Vector> LinearMap::kernel() const { return gfp::left_nullspace(matrix); }

namespace {

void require_elementary_abelian(const Subgroup& h, const std::string& what) {
  if (!is_abelian(h)) throw PreconditionError(what + " is not abelian");
  const auto& g = h.parent();
  for (const auto& x : h.igs())
    if (!g.power(x, g.prime()).is_identity()) throw PreconditionError(what + " does not have exponent p");
}

using Component = std::function<Element(const Element& a, const Element& b)>;

struct MultiMap {
  std::vector<Subgroup> codomains;
  gfp::Matrix matrix;
};

// Rows: a-part basis vectors then b-part basis vectors.
MultiMap assemble(const Subgroup& domain, const std::vector<Component>& comps, int samples) {
  const PcPresentation& g = domain.parent();
  const int p = g.prime();
  const int k = domain.log_order();
  const Element one = g.identity();
  std::vector<std::vector<Element>> values(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (const auto& h : domain.igs()) values[c].push_back(comps[c](h, one));
    for (const auto& h : domain.igs()) values[c].push_back(comps[c](one, h));
  }
  MultiMap out;
  int cols = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    out.codomains.push_back(Subgroup::generated(g, values[c]));
    require_elementary_abelian(out.codomains.back(), "image of a component");
    cols += out.codomains.back().log_order();
  }
  out.matrix = gfp::Matrix(2 * k, cols, p);
  int offset = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int r = 0; r < 2 * k; ++r) {
      const auto v = *out.codomains[c].coordinates(values[c][static_cast<std::size_t>(r)]);
      for (std::size_t j = 0; j < v.size(); ++j) out.matrix(r, offset + static_cast<int>(j)) = v[j];
    }
    offset += out.codomains[c].log_order();
  }

  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> coef(0, p - 1);
  for (int s = 0; s < samples && k > 0; ++s) {
    gfp::Vector u(static_cast<std::size_t>(2 * k));
    for (auto& e : u) e = coef(rng);
    const gfp::Vector ua(u.begin(), u.begin() + k), ub(u.begin() + k, u.end());
    const Element a = domain.element_at(ua), b = domain.element_at(ub);
    const gfp::Vector expect = gfp::mul(u, out.matrix);
    int off = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto got = out.codomains[c].coordinates(comps[c](a, b));
      const int len = out.codomains[c].log_order();
      if (!got || !std::equal(got->begin(), got->end(), expect.begin() + off))
        throw Error("commutator map is not additive on a sampled pair");
      off += len;
    }
  }
  return out;
}

}  // namespace

LinearMap build_commutator_hom(const CommutatorTemplate& t, const Subgroup& a_sub, int samples) {
  require_elementary_abelian(a_sub, "module subgroup");
  const PcPresentation& g = a_sub.parent();
  const Component comp = [&](const Element& a, const Element&) { return apply_template(g, t, a); };
  MultiMap mm = assemble(a_sub, {comp}, samples);
  const int k = a_sub.log_order();
  gfp::Matrix top(k, mm.matrix.cols(), g.prime());
  for (int r = 0; r < k; ++r) top.set_row(r, mm.matrix.row(r));
  return LinearMap{a_sub, mm.codomains[0], top};
}

}  // namespace pnoninner

namespace pnoninner {

std::string to_string(TauVariant v) {
  switch (v) {
    case TauVariant::Tau: return "tau";
    case TauVariant::Tau1: return "tau1";
    case TauVariant::Tau2: return "tau2";
    case TauVariant::Tau3: return "tau3";
    case TauVariant::Mu: return "mu";
  }
  return "?";
}

std::vector<Subgroup> tau3_k_candidates(const PcPresentation& g) {
  const Subgroup p3 = agemo_gamma(g, 3);
  const Subgroup low = join(upper_central(g, 4), agemo_gamma(g, 4));
  std::vector<Subgroup> out;
  if (!p3.contains(low) || g.size() < 4) return out;
  const Subgroup f = join(frattini(p3), low);
  const QuotientMap q(f);
  const Subgroup v = q.image(p3);
  const int k = v.log_order();
  const int p = g.prime();
  gfp::for_each_vector(k, p, [&](const gfp::Vector& fn) {
    int lead = 0;
    while (lead < k && fn[static_cast<std::size_t>(lead)] == 0) ++lead;
    if (lead == k || fn[static_cast<std::size_t>(lead)] != 1) return;
    gfp::Matrix m(1, k, p);
    m.set_row(0, fn);
    std::vector<Element> gens;
    for (const auto& c : gfp::nullspace(m)) gens.push_back(v.element_at(c));
    Subgroup cand = q.preimage(Subgroup::generated(q.target(), gens));
    if (cand.log_order() != g.size() - 4 || !is_normal(cand)) return;
    if (nilpotency_class(QuotientMap(cand).target()) != 3) return;
    out.push_back(std::move(cand));
  });
  return out;
}

namespace {

struct TauPair {
  Element x, y;
};

// Lexicographically first pair of lifts of a basis of G/Phi(G) whose images
// in G/K satisfy x^p, y^p, [y,x,y], [y,x,x,y], [y,x,x,x].
std::optional<TauPair> tau3_generators(const PcPresentation& g, const Subgroup& k) {
  const auto gens = minimal_generators(g);
  const int p = g.prime();
  auto lift = [&](const gfp::Vector& v) {
    Element e = g.identity();
    for (std::size_t i = 0; i < gens.size(); ++i) e = g.multiply(e, g.power(gens[i], v[i]));
    return e;
  };
  std::optional<TauPair> found;
  gfp::for_each_vector(4, p, [&](const gfp::Vector& v) {
    if (found) return;
    const gfp::Vector u{v[0], v[1]}, w{v[2], v[3]};
    if (gfp::reduce(static_cast<long long>(u[0]) * w[1] - static_cast<long long>(u[1]) * w[0], p) == 0) return;
    const Element x = lift(u), y = lift(w);
    const Element yx = g.commutator(y, x);
    const Element yxx = g.commutator(yx, x);
    const bool ok = k.contains(g.power(x, p)) && k.contains(g.power(y, p)) && k.contains(g.commutator(yx, y)) &&
                    k.contains(g.commutator(yxx, y)) && k.contains(g.commutator(yxx, x));
    if (ok) found = TauPair{x, y};
  });
  return found;
}

}  // namespace

TauResult tau_maps(const PcPresentation& g, TauVariant variant) {
  const int p = g.prime();
  if (is_abelian(Subgroup::whole(g))) throw PreconditionError("tau_maps: G is abelian");
  if (rank(g) != 2) throw PreconditionError("tau_maps: d(G) != 2");
  const Subgroup p3 = agemo_gamma(g, 3);
  const auto mg = minimal_generators(g);

  TauResult out{variant, mg[0], mg[1], p3, Subgroup::trivial(g), {}, {}, {}, std::nullopt, {}};
  if (variant != TauVariant::Mu) {
    const QuotientMap q3(p3);
    if (q3.target().size() != 3 || !is_extra_special(q3.target()))
      throw PreconditionError("tau_maps: G/G^p gamma_3(G) is not extra-special of order p^3");
  }
  const Subgroup zp3 = center(p3);
  switch (variant) {
    case TauVariant::Tau:
    case TauVariant::Tau1:
      out.domain = omega1(intersection(zp3, upper_central(g, 3)));
      break;
    case TauVariant::Tau2:
      out.domain = omega1(intersection(zp3, upper_central(g, 4)));
      break;
    case TauVariant::Tau3: {
      const auto ks = tau3_k_candidates(g);
      if (ks.empty()) throw PreconditionError("tau_maps: no K with Z_4(G) <= K <= G^p gamma_3(G) and G/K of maximal class p^4");
      out.n = ks[0];
      const auto pair = tau3_generators(g, out.n);
      if (!pair) throw PreconditionError("tau_maps: no generating pair satisfies the relators of G/K");
      out.x = pair->x;
      out.y = pair->y;
      out.domain = omega1_generated(upper_central(g, 4));
      break;
    }
    case TauVariant::Mu:
      out.n = Subgroup::trivial(g);
      out.domain = omega1_generated(upper_central(g, 2));
      break;
  }
  require_elementary_abelian(out.domain, "domain module");

  const Element x = out.x, y = out.y;
  auto c = [&g](std::initializer_list<Element> args) {
    return g.left_normed(std::vector<Element>(args));
  };
  auto mul = [&g](std::initializer_list<Element> fs) {
    Element acc = g.identity();
    for (const auto& f : fs) acc = g.multiply(acc, f);
    return acc;
  };
  std::vector<Component> comps;
  switch (variant) {
    case TauVariant::Tau:
    case TauVariant::Tau1:
      comps.push_back([=](const Element& a, const Element& b) {
        return mul({c({b, x, x}), c({y, a, x}), c({y, x, a})});
      });
      comps.push_back([=](const Element& a, const Element& b) {
        return mul({c({b, x, y}), c({y, a, y}), c({y, x, b})});
      });
      if (variant == TauVariant::Tau) {
        comps.push_back([=](const Element& a, const Element&) { return c({a, x, x}); });
        comps.push_back([=](const Element&, const Element& b) { return c({b, y, y}); });
      }
      break;
    case TauVariant::Tau2:
      comps.push_back([=](const Element& a, const Element& b) {
        return mul({c({b, x, x}), c({y, a, x}), c({y, x, b, x}), c({y, x, a, x}), c({y, x, a})});
      });
      comps.push_back([=](const Element& a, const Element& b) {
        return mul({c({b, x, y}), c({y, a, y}), c({y, x, b, y}), c({y, x, a, y}), c({y, x, b})});
      });
      break;
    case TauVariant::Tau3: {
      auto nu = [=](const Element& a, const Element& b) {
        return mul({c({b, x, x}), c({y, a, x}), c({y, x, b, x}), c({y, x, a, x}), c({y, x, a})});
      };
      comps.push_back([=](const Element& a, const Element& b) {
        return mul({c({b, x, y}), c({y, a, y}), c({y, x, b, y}), c({y, x, a, y}), c({y, x, b})});
      });
      comps.push_back([=](const Element& a, const Element& b) { return c({nu(a, b), y}); });
      comps.push_back([=](const Element& a, const Element& b) { return c({nu(a, b), x}); });
      break;
    }
    case TauVariant::Mu:
      comps.push_back([=](const Element& w, const Element&) { return c({w, y}); });
      comps.push_back([=](const Element& w, const Element&) { return c({w, x}); });
      break;
  }

  MultiMap mm = assemble(out.domain, comps, 16);
  out.codomains = std::move(mm.codomains);
  if (variant == TauVariant::Mu) {
    const int k = out.domain.log_order();
    out.matrix = gfp::Matrix(k, mm.matrix.cols(), p);
    for (int r = 0; r < k; ++r) out.matrix.set_row(r, mm.matrix.row(r));
    out.kernel = gfp::left_nullspace(out.matrix);
    return out;
  }
  out.matrix = std::move(mm.matrix);
  out.kernel = gfp::left_nullspace(out.matrix);

  out.module.emplace(build_module(out.n, out.domain));
  const GModule& m = *out.module;
  const QuotientMap& q = m.embedding().quotient;
  const std::vector<Element> at{q.project(x), q.project(y)};
  std::vector<FreeWord> relators{free_power(letter(0), p), free_power(letter(1), p)};
  const FreeWord lx = letter(0), ly = letter(1);
  relators.push_back(free_left_normed({ly, lx, ly}));
  if (variant == TauVariant::Tau3) {
    relators.push_back(free_left_normed({ly, lx, lx, ly}));
    relators.push_back(free_left_normed({ly, lx, lx, lx}));
  } else {
    relators.push_back(free_left_normed({ly, lx, lx}));
  }
  const int k = out.domain.log_order();
  for (const auto& v : out.kernel) {
    const gfp::Vector va(v.begin(), v.begin() + k), vb(v.begin() + k, v.end());
    const std::vector<gfp::Vector> images{m.coordinates(out.domain.element_at(va)),
                                          m.coordinates(out.domain.element_at(vb))};
    for (const auto& r : relators)
      if (!gfp::is_zero(evaluate_free(m, at, images, r)))
        throw Error("tau_maps: a kernel pair does not annihilate the quotient relators");
    auto d = solve_derivation(m, at, images);
    if (!d) throw Error("tau_maps: a kernel pair does not induce a derivation of the quotient");
    out.derivations.push_back(std::move(*d));
  }
  return out;
}

}  // namespace pnoninner

namespace pnoninner {

namespace {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Lemma45Data {
  const PcPresentation& g;
  const PcPresentation& q;
  Element x, y, z, w;     // lifts in G
  Element a1, a2, a3;     // delta(x'), delta(y'), delta(z') in G
};

Lemma45Data lemma45_data(const Lemma45Setting& s, const Derivation& d) {
  const GModule& m = *s.module;
  if (!m.embedded()) throw InvalidArgument("lemma45: the module must be built from a section of G");
  const auto& e = m.embedding();
  return Lemma45Data{e.group,
                     m.group(),
                     e.quotient.section(s.x),
                     e.quotient.section(s.y),
                     e.quotient.section(s.z),
                     e.quotient.section(s.w),
                     m.element_of(evaluate(m, d, s.x)),
                     m.element_of(evaluate(m, d, s.y)),
                     m.element_of(evaluate(m, d, s.z))};
}

void check_lemma45_setting(const Lemma45Setting& s, const Lemma45Data& t, Lemma45Clause which) {
  const auto& e = s.module->embedding();
  const PcPresentation& g = t.g;
  if (!upper_central(g, 4).contains(e.carrier)) throw PreconditionError("lemma45: M is not contained in Z_4(G)");
  if (which == Lemma45Clause::III) {
    const Subgroup g3 = lower_central(g, 3);
    for (const auto& a : e.carrier.igs())
      for (const auto& h : g3.igs())
        if (!g.commutator(a, h).is_identity()) throw PreconditionError("lemma45: M is not centralized by gamma_3(G)");
  }
  if (which == Lemma45Clause::IV && g.prime() < 5) throw PreconditionError("lemma45: clause (iv) needs p >= 5");
  if (which == Lemma45Clause::V) {
    if (g.prime() != 3) throw PreconditionError("lemma45: clause (v) needs p = 3");
    if (!upper_central(g, 3).contains(t.a1)) throw PreconditionError("lemma45: a_1 is not in Z_3(G)");
    if (!g.left_normed(std::vector<Element>{t.a1, t.x, t.x}).is_identity())
      throw PreconditionError("lemma45: [a_1, x, x] != 1");
  }
}

}  // namespace

Element lemma45_eval(const Lemma45Setting& s, const Derivation& d, Lemma45Clause which) {
  const Lemma45Data t = lemma45_data(s, d);
  check_lemma45_setting(s, t, which);
  const PcPresentation& g = t.g;
  const int p = g.prime();
  auto c = [&g](std::initializer_list<Element> args) { return g.left_normed(std::vector<Element>(args)); };
  auto mul = [&g](std::initializer_list<Element> fs) {
    Element acc = g.identity();
    for (const auto& f : fs) acc = g.multiply(acc, f);
    return acc;
  };
  const Element &x = t.x, &y = t.y, &z = t.z, &a1 = t.a1, &a2 = t.a2, &a3 = t.a3;
  auto clause_ii = [&] {
    return mul({c({a2, x, z}), c({y, a1, z}), c({y, x, a2, z}), c({y, x, a1, z}), c({y, x, a3}), c({y, x, z, a3})});
  };
  switch (which) {
    case Lemma45Clause::I:
      return mul({c({a2, x}), c({y, a1}), c({y, x, a2}), c({y, x, a1}), c({y, x, c({a1, y})})});
    case Lemma45Clause::II:
      return clause_ii();
    case Lemma45Clause::III:
      return c({clause_ii(), t.w});
    case Lemma45Clause::IV:
    case Lemma45Clause::V:
      return mul({g.power(a1, p), g.power(c({a1, x}), binomial(p, 2)), g.power(c({a1, x, x}), binomial(p, 3)),
                  g.power(c({a1, x, x, x}), binomial(p, 4))});
  }
  return g.identity();
}

Element lemma45_direct(const Lemma45Setting& s, const Derivation& d, Lemma45Clause which) {
  const GModule& m = *s.module;
  const Lemma45Data t = lemma45_data(s, d);
  check_lemma45_setting(s, t, which);
  const std::vector<Element> at{s.x, s.y, s.z, s.w};
  std::vector<gfp::Vector> images;
  for (const auto& q : at) images.push_back(evaluate(m, d, q));
  const FreeWord x = letter(0), y = letter(1), z = letter(2), w = letter(3);
  FreeWord word;
  switch (which) {
    case Lemma45Clause::I: word = free_commutator(y, x); break;
    case Lemma45Clause::II: word = free_left_normed({y, x, z}); break;
    case Lemma45Clause::III: word = free_left_normed({y, x, z, w}); break;
    case Lemma45Clause::IV:
    case Lemma45Clause::V: word = free_power(x, m.prime()); break;
  }
  return m.element_of(evaluate_free(m, at, images, word));
}

namespace {

Subgroup iterated_commutator(const Subgroup& a, const Subgroup& b, long long times) {
  Subgroup cur = a;
  for (long long i = 0; i < times && !cur.is_trivial(); ++i) {
    Subgroup next = commutator_subgroup(cur, b);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

bool congruent(const Subgroup& a, const Subgroup& b, const Subgroup& modulus) {
  return join(b, modulus).contains(a) && join(a, modulus).contains(b);
}

}  // namespace

Theorem53Result theorem53_check(const PcPresentation& g, const Subgroup& n, const Subgroup& m, int r, int l) {
  if (!is_normal(n)) throw PreconditionError("theorem53_check: N is not normal");
  if (!is_normal(m)) throw PreconditionError("theorem53_check: M is not normal");
  if (r < 0 || l < 0) throw InvalidArgument("theorem53_check: r and l must be non-negative");
  const int p = g.prime();
  const Subgroup whole = Subgroup::whole(g);
  const Subgroup npr = agemo(n, r);

  Subgroup mod_i = Subgroup::trivial(g), mod_ii = Subgroup::trivial(g);
  long long pk = 1;
  for (int k = 1; k <= r; ++k) {
    pk *= p;
    mod_i = join(mod_i, agemo(iterated_commutator(m, n, pk), r - k));
    mod_ii = join(mod_ii, agemo(iterated_commutator(n, whole, pk + l - 1), r - k));
  }
  Theorem53Result out;
  out.clause_i = congruent(commutator_subgroup(npr, m), agemo(commutator_subgroup(n, m), r), mod_i);
  out.clause_ii =
      congruent(iterated_commutator(npr, whole, l), agemo(iterated_commutator(n, whole, l), r), mod_ii);
  return out;
}

}  // namespace pnoninner

namespace pnoninner {

Theorem42Result theorem42_pipeline(const PcPresentation& g) {
  Theorem42Result out;
  auto fail = [&out](std::string why) {
    out.failure = std::move(why);
    return out;
  };
  const int p = g.prime();
  const Subgroup whole = Subgroup::whole(g);
  if (is_abelian(whole)) return fail("G is abelian");
  const Subgroup z = center(g);
  if (rank(z) != 1) return fail("Z(G) is not cyclic");
  if (is_powerful(g)) return fail("G is powerful");

  std::optional<Theorem25Result> t;
  try {
    t.emplace(theorem25_quotient(g));
  } catch (const Error& e) {
    return fail(e.what());
  }
  const Subgroup& n = t->n;
  out.n = n;
  out.log.push_back("N = " + n.to_string() + (t->kind == QuotientKind::ExtraSpecial ? ", G/N extra-special"
                                                                                     : ", G/N = U/N x V/N"));
  const Subgroup om = omega1_generated(upper_central(g, 2));
  if (!n.contains(om) || !center(n).contains(om)) return fail("Omega_1(Z_2(G)) is not contained in Z(N)");
  const Subgroup u = t->quotient.preimage(t->uv.u);
  const Subgroup m = centralizer(om, u);
  out.log.push_back("M = C_{Omega_1(Z_2(G))}(U) = " + m.to_string());

  std::optional<GModule> mod_v, mod_n;
  std::optional<Lemma22Result> l22;
  try {
    mod_v.emplace(build_module(u, m));
    l22.emplace(lemma22_derivation(*mod_v));
    mod_n.emplace(build_module(n, m));
  } catch (const Error& e) {
    return fail(e.what());
  }
  out.log.push_back("z0 = " + mod_v->element_of(l22->z0).to_string());

  // Inflate delta from G/U to G/N: trivial on U/N, delta on V/N.
  const QuotientMap& qn = mod_n->embedding().quotient;
  const QuotientMap& qu = mod_v->embedding().quotient;
  std::vector<Element> at;
  std::vector<gfp::Vector> values;
  for (int i = 0; i < qn.target().size(); ++i) {
    const Element gq = qn.target().generator(i);
    at.push_back(gq);
    const Element v = qu.project(qn.section(gq));
    values.push_back(evaluate(*mod_v, l22->delta, v));
  }
  auto delta = solve_derivation(*mod_n, at, values);
  if (!delta) return fail("the inflated derivation is not a derivation of G/N");

  const Automorphism alpha = lift_to_automorphism(*mod_n, *delta);
  if (alpha.order(p * p) != p) return fail("the lifted automorphism does not have order p");
  if (!alpha.fixes(agemo_gamma(g, 3))) return fail("the lifted automorphism does not fix G^p gamma_3(G)");
  const Element x1 = qu.section(l22->basis.x[0]);
  const Element y1 = qu.section(l22->basis.y[0]);
  const Element c = g.commutator(x1, y1);
  const gfp::Vector dc = evaluate(*mod_n, *delta, qn.project(c));
  if (gfp::is_zero(dc)) return fail("delta([x_1, y_1]) = 1");
  out.log.push_back("delta([x_1, y_1]) = " + mod_n->element_of(dc).to_string());
  out.automorphism = alpha;
  return out;
}

}  // namespace pnoninner
