#include "pnoninner/cohomology.hpp"

#include "pnoninner/errors.hpp"
#include "pnoninner/structure.hpp"

namespace pnoninner {

namespace {

gfp::Matrix matrix_power(const gfp::Matrix& a, int e) {
  gfp::Matrix r = gfp::Matrix::identity(a.rows(), a.modulus());
  for (int k = 0; k < e; ++k) r = r * a;
  return r;
}

}  // namespace

std::vector<Word> pc_relators(const PcPresentation& q) {
  const int n = q.size();
  const int p = q.prime();
  auto append_inverse = [](Word& w, const Element& x) {
    for (int k = x.size() - 1; k >= 0; --k)
      if (x[k] != 0) w.push_back({k, -x[k]});
  };
  std::vector<Word> out;
  for (int i = 0; i < n; ++i) {
    Word w(static_cast<std::size_t>(p), Letter{i, 1});
    append_inverse(w, q.power_relation(i));
    out.push_back(std::move(w));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Word w{{j, -1}, {i, -1}, {j, 1}, {i, 1}};
      append_inverse(w, q.comm_relation(j, i));
      out.push_back(std::move(w));
    }
  return out;
}

GModule::GModule(PcPresentation q, int dim, std::vector<gfp::Matrix> matrices)
    : q_(std::move(q)), dim_(dim), action_(std::move(matrices)) {
  if (static_cast<int>(action_.size()) != q_.size())
    throw InvalidArgument("module needs one matrix per generator of Q");
  for (const auto& a : action_) {
    if (a.rows() != dim_ || a.cols() != dim_ || a.modulus() != q_.prime())
      throw InvalidArgument("module matrix has the wrong shape or modulus");
    auto inv = gfp::inverse(a);
    if (!inv) throw InvalidArgument("module matrix is not invertible");
    inverse_.push_back(*inv);
  }
  const gfp::Matrix id = gfp::Matrix::identity(dim_, q_.prime());
  for (const auto& r : pc_relators(q_)) {
    gfp::Matrix acc = id;
    for (const auto& l : r) {
      const auto& m = l.exp > 0 ? action(l.gen) : inverse_action(l.gen);
      for (int k = 0; k < std::abs(l.exp); ++k) acc = acc * m;
    }
    if (!(acc == id)) throw InvalidArgument("module matrices do not satisfy the relators of Q");
  }
}

gfp::Matrix GModule::action_of(const Element& q) const {
  gfp::Matrix acc = gfp::Matrix::identity(dim_, prime());
  for (int i = 0; i < q.size(); ++i)
    if (q[i] != 0) acc = acc * matrix_power(action(i), q[i]);
  return acc;
}

gfp::Vector GModule::act(const gfp::Vector& m, const Element& q) const {
  gfp::Vector v = m;
  for (int i = 0; i < q.size(); ++i)
    for (int k = 0; k < q[i]; ++k) v = gfp::mul(v, action(i));
  return v;
}

const ModuleEmbedding& GModule::embedding() const {
  if (!embedding_) throw PreconditionError("module is synthetic; it has no embedding in a group");
  return *embedding_;
}

gfp::Vector GModule::coordinates(const Element& a) const {
  const auto& e = embedding();
  auto v = e.carrier.coordinates(a);
  if (!v) throw InvalidArgument("element " + a.to_string() + " is not in the module");
  return *v;
}

Element GModule::element_of(const gfp::Vector& v) const {
  return embedding().carrier.element_at(v);
}

GModule build_module(const Subgroup& n, const Subgroup& a) {
  const PcPresentation& g = n.parent();
  if (!is_normal(n)) throw PreconditionError("build_module: N is not normal in G");
  if (!n.contains(a)) throw PreconditionError("build_module: A is not contained in N");
  for (const auto& x : a.igs())
    for (const auto& y : n.igs())
      if (!g.commutator(x, y).is_identity()) throw PreconditionError("build_module: A is not central in N");
  if (!is_normal(a)) throw PreconditionError("build_module: A is not normal in G");
  for (const auto& x : a.igs())
    if (!g.power(x, g.prime()).is_identity()) throw PreconditionError("build_module: A is not elementary abelian");

  QuotientMap quotient(n);
  const PcPresentation q = quotient.target();
  const int dim = a.log_order();
  std::vector<gfp::Matrix> action;
  for (int t = 0; t < q.size(); ++t) {
    const Element s = quotient.section(q.generator(t));
    gfp::Matrix m(dim, dim, g.prime());
    for (int k = 0; k < dim; ++k) {
      const auto c = a.coordinates(g.conjugate(a.igs()[static_cast<std::size_t>(k)], s));
      for (int col = 0; col < dim; ++col) m(k, col) = (*c)[static_cast<std::size_t>(col)];
    }
    action.push_back(std::move(m));
  }
  GModule out(q, dim, std::move(action));
  out.embedding_ = ModuleEmbedding{g, std::move(quotient), a};
  return out;
}

std::vector<gfp::Vector> fixed_points(const GModule& m) {
  const int d = m.dim();
  const int p = m.prime();
  const int k = m.group().size();
  if (d == 0) return {};
  // v (A_t - I) = 0 for all t: left nullspace of [A_1 - I | ... | A_k - I].
  gfp::Matrix big(d, d * k, p);
  const gfp::Matrix id = gfp::Matrix::identity(d, p);
  for (int t = 0; t < k; ++t) {
    const gfp::Matrix diff = m.action(t) - id;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) big(r, t * d + c) = diff(r, c);
  }
  return gfp::row_space_basis(gfp::left_nullspace(big), d, p);
}

std::vector<gfp::Vector> commutator_submodule(const GModule& m) {
  const int d = m.dim();
  const int p = m.prime();
  std::vector<gfp::Vector> span;
  const gfp::Matrix id = gfp::Matrix::identity(d, p);
  for (int t = 0; t < m.group().size(); ++t) {
    const gfp::Matrix diff = m.action(t) - id;
    for (int r = 0; r < d; ++r) span.push_back(diff.row(r));
  }
  std::vector<gfp::Vector> basis = gfp::row_space_basis(span, d, p);
  while (true) {
    std::vector<gfp::Vector> more = basis;
    for (const auto& v : basis)
      for (int t = 0; t < m.group().size(); ++t) more.push_back(gfp::mul(v, m.action(t)));
    auto next = gfp::row_space_basis(more, d, p);
    if (next.size() == basis.size()) return basis;
    basis = std::move(next);
  }
}

Derivation zero_derivation(const GModule& m) {
  return Derivation{std::vector<gfp::Vector>(static_cast<std::size_t>(m.group().size()), gfp::zero_vector(m.dim()))};
}

Derivation add(const GModule& m, const Derivation& a, const Derivation& b) {
  Derivation out = a;
  for (std::size_t t = 0; t < out.images.size(); ++t) out.images[t] = gfp::add(a.images[t], b.images[t], m.prime());
  return out;
}

Derivation scale(const GModule& m, const Derivation& a, int s) {
  Derivation out = a;
  for (auto& v : out.images) v = gfp::scale(v, s, m.prime());
  return out;
}

bool is_zero(const Derivation& d) {
  for (const auto& v : d.images)
    if (!gfp::is_zero(v)) return false;
  return true;
}

gfp::Vector flatten(const Derivation& d) {
  gfp::Vector out;
  for (const auto& v : d.images) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Derivation unflatten(const GModule& m, const gfp::Vector& v) {
  const std::size_t d = static_cast<std::size_t>(m.dim());
  Derivation out;
  for (int t = 0; t < m.group().size(); ++t) {
    const auto begin = v.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(t) * d);
    out.images.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(d));
  }
  return out;
}

gfp::Vector evaluate_word(const GModule& m, const Derivation& d, const Word& w) {
  const int p = m.prime();
  gfp::Vector acc = gfp::zero_vector(m.dim());
  for (const auto& l : w) {
    const auto& img = d.images[static_cast<std::size_t>(l.gen)];
    if (l.exp > 0) {
      for (int k = 0; k < l.exp; ++k) acc = gfp::add(gfp::mul(acc, m.action(l.gen)), img, p);
    } else {
      const auto& inv = m.inverse_action(l.gen);
      const gfp::Vector step = gfp::mul(img, inv);
      for (int k = 0; k < -l.exp; ++k) acc = gfp::sub(gfp::mul(acc, inv), step, p);
    }
  }
  return acc;
}

gfp::Vector evaluate(const GModule& m, const Derivation& d, const Element& q) {
  return evaluate_word(m, d, m.group().word_of(q));
}

std::vector<Derivation> derivation_space(const GModule& m) {
  const int d = m.dim();
  const int p = m.prime();
  const int k = m.group().size();
  if (d == 0 || k == 0) return {};
  const auto relators = pc_relators(m.group());
  // Row block t of the system holds the coefficient matrix of the unknown
  // d(g_t) in each relator value.
  gfp::Matrix system(k * d, static_cast<int>(relators.size()) * d, p);
  const gfp::Matrix id = gfp::Matrix::identity(d, p);
  for (std::size_t r = 0; r < relators.size(); ++r) {
    std::vector<gfp::Matrix> coef(static_cast<std::size_t>(k), gfp::Matrix(d, d, p));
    for (const auto& l : relators[r]) {
      const bool forward = l.exp > 0;
      const gfp::Matrix& a = forward ? m.action(l.gen) : m.inverse_action(l.gen);
      for (int rep = 0; rep < std::abs(l.exp); ++rep) {
        for (auto& c : coef) c = c * a;
        auto& own = coef[static_cast<std::size_t>(l.gen)];
        own = forward ? own + id : own - a;
      }
    }
    for (int t = 0; t < k; ++t)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          system(t * d + i, static_cast<int>(r) * d + j) = coef[static_cast<std::size_t>(t)](i, j);
  }
  const auto basis = gfp::row_space_basis(gfp::left_nullspace(system), k * d, p);
  std::vector<Derivation> out;
  for (const auto& v : basis) out.push_back(unflatten(m, v));
  return out;
}

Derivation principal_derivation(const GModule& m, const gfp::Vector& v) {
  Derivation out;
  for (int t = 0; t < m.group().size(); ++t) out.images.push_back(gfp::sub(gfp::mul(v, m.action(t)), v, m.prime()));
  return out;
}

std::vector<Derivation> principal_space(const GModule& m) {
  const int d = m.dim();
  std::vector<gfp::Vector> span;
  for (int i = 0; i < d; ++i) span.push_back(flatten(principal_derivation(m, gfp::unit_vector(d, i))));
  std::vector<Derivation> out;
  for (const auto& v : gfp::row_space_basis(span, d * m.group().size(), m.prime())) out.push_back(unflatten(m, v));
  return out;
}

std::optional<Derivation> solve_derivation(const GModule& m, const std::vector<Element>& at,
                                           const std::vector<gfp::Vector>& values) {
  const int d = m.dim();
  const int p = m.prime();
  const auto basis = derivation_space(m);
  gfp::Vector target;
  for (const auto& v : values) target.insert(target.end(), v.begin(), v.end());
  if (basis.empty()) {
    if (gfp::is_zero(target)) return zero_derivation(m);
    return std::nullopt;
  }
  gfp::Matrix sys(static_cast<int>(basis.size()), static_cast<int>(at.size()) * d, p);
  for (std::size_t b = 0; b < basis.size(); ++b)
    for (std::size_t j = 0; j < at.size(); ++j) {
      const auto v = evaluate(m, basis[b], at[j]);
      for (int i = 0; i < d; ++i) sys(static_cast<int>(b), static_cast<int>(j) * d + i) = v[static_cast<std::size_t>(i)];
    }
  const auto coeffs = gfp::solve_left(sys, target);
  if (!coeffs) return std::nullopt;
  Derivation out = zero_derivation(m);
  for (std::size_t b = 0; b < basis.size(); ++b)
    out = add(m, out, scale(m, basis[b], (*coeffs)[b]));
  return out;
}

bool satisfies_cocycle_law(const GModule& m, const Derivation& d) {
  const PcPresentation& q = m.group();
  const CayleyTable table(q);
  const std::size_t n = table.order();
  std::vector<gfp::Vector> value(n);
  std::vector<gfp::Matrix> act(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    value[i] = evaluate(m, d, table.element(i));
    act[i] = m.action_of(table.element(i));
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const gfp::Vector rhs = gfp::add(gfp::mul(value[a], act[b]), value[b], m.prime());
      if (value[table.product(a, b)] != rhs) return false;
    }
  return true;
}

Automorphism::Automorphism(PcPresentation g, std::vector<Element> images)
    : g_(std::move(g)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != g_.size()) throw InvalidArgument("automorphism needs one image per generator");
  for (const auto& x : images_)
    if (!g_.is_valid(x)) throw InvalidArgument("automorphism image " + x.to_string() + " is malformed");
}

Automorphism Automorphism::identity(const PcPresentation& g) {
  std::vector<Element> images;
  for (int i = 0; i < g.size(); ++i) images.push_back(g.generator(i));
  return Automorphism(g, std::move(images));
}

Automorphism Automorphism::conjugation(const PcPresentation& g, const Element& u) {
  std::vector<Element> images;
  for (int i = 0; i < g.size(); ++i) images.push_back(g.conjugate(g.generator(i), u));
  return Automorphism(g, std::move(images));
}

Element Automorphism::apply(const Element& x) const {
  Element out = g_.identity();
  for (int i = 0; i < x.size(); ++i)
    if (x[i] != 0) out = g_.multiply(out, g_.power(images_[static_cast<std::size_t>(i)], x[i]));
  return out;
}

bool Automorphism::is_automorphism() const {
  const int n = g_.size();
  for (int i = 0; i < n; ++i) {
    const auto& a = images_[static_cast<std::size_t>(i)];
    if (g_.power(a, g_.prime()) != apply(g_.power_relation(i))) return false;
    for (int j = i + 1; j < n; ++j)
      if (g_.commutator(images_[static_cast<std::size_t>(j)], a) != apply(g_.comm_relation(j, i))) return false;
  }
  return Subgroup::generated(g_, images_).log_order() == n;
}

bool Automorphism::is_identity() const {
  for (int i = 0; i < g_.size(); ++i)
    if (images_[static_cast<std::size_t>(i)] != g_.generator(i)) return false;
  return true;
}

bool Automorphism::fixes(const Subgroup& h) const {
  for (const auto& x : h.igs())
    if (apply(x) != x) return false;
  return true;
}

long long Automorphism::order(long long limit) const {
  Automorphism a = *this;
  for (long long k = 1; k <= limit; ++k) {
    if (a.is_identity()) return k;
    a = compose(a, *this);
  }
  throw Error("automorphism order exceeds " + std::to_string(limit));
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  std::vector<Element> images;
  for (const auto& x : a.images()) images.push_back(b.apply(x));
  return Automorphism(a.group(), std::move(images));
}

Automorphism power(const Automorphism& a, long long k) {
  if (k < 0) throw InvalidArgument("automorphism power must be nonnegative");
  Automorphism result = Automorphism::identity(a.group());
  Automorphism base = a;
  while (k > 0) {
    if (k & 1) result = compose(result, base);
    base = compose(base, base);
    k >>= 1;
  }
  return result;
}

Automorphism lift_to_automorphism(const GModule& m, const Derivation& d) {
  const auto& e = m.embedding();
  const PcPresentation& g = e.group;
  std::vector<Element> images;
  for (int i = 0; i < g.size(); ++i) {
    const Element gi = g.generator(i);
    images.push_back(g.multiply(gi, m.element_of(evaluate(m, d, e.quotient.project(gi)))));
  }
  Automorphism a(g, std::move(images));
  if (!a.is_automorphism()) throw Error("lifted map is not an automorphism; module invariants are violated");
  return a;
}

InnerCheck is_inner(const Automorphism& alpha, const std::optional<Subgroup>& n, bool search_all) {
  const PcPresentation& g = alpha.group();
  const std::vector<Element> gens = minimal_generators(g);
  std::vector<Element> targets;
  for (const auto& x : gens) targets.push_back(alpha.apply(x));
  InnerCheck out;
  auto matches = [&](const Element& u) {
    ++out.examined;
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (g.conjugate(gens[k], u) != targets[k]) return false;
    return true;
  };
  // Searches the elements of `space` outside `skip`.
  auto search = [&](const Subgroup& space, const Subgroup* skip, const char* name) {
    out.space = name;
    require_enumerable(space.order(), "inner automorphism search");
    bool found = false;
    space.for_each([&](const Element& u) {
      if (found || (skip && skip->contains(u))) return;
      if (matches(u)) {
        out.witness = u;
        found = true;
      }
    });
    return found;
  };
  const Subgroup whole = Subgroup::whole(g);
  if (n) {
    const Subgroup zn = center(*n);
    if (search(zn, nullptr, "Z(N)")) return out;
    const Subgroup cn = centralizer(g, *n);
    if (search(cn, &zn, "C_G(N)")) return out;
    if (!search_all) {
      out.exhausted = true;
      return out;
    }
    if (search(whole, &cn, "G")) return out;
  } else if (search(whole, nullptr, "G")) {
    return out;
  }
  out.exhausted = true;
  return out;
}

bool Cor34Report::holds() const {
  if (!applicable) return false;
  for (const auto& r : rows)
    if (!r.equal) return false;
  return true;
}

Cor34Report cor34_check(const PcPresentation& g, const Subgroup& n) {
  Cor34Report report;
  const Subgroup zn = center(n);
  const Subgroup cn = centralizer(g, n);
  report.centralizer_order = cn.order();
  report.center_order = zn.order();
  if (!(cn == zn)) {
    report.reason = "C_G(N) != Z(N)";
    return report;
  }
  const Subgroup a = omega1(zn);
  const GModule full = build_module(n, a);
  for (const auto& b : derivation_space(full)) {
    const Automorphism alpha = lift_to_automorphism(full, b);
    if (!is_inner(alpha, n).witness) {
      report.reason = "a lift from Z^1(G/N, Omega_1(Z(N))) is not inner";
      return report;
    }
  }
  report.applicable = true;
  const Subgroup zg = center(g);
  std::vector<Element> star_gens;
  zn.for_each([&](const Element& x) {
    if (zg.contains(g.power(x, g.prime()))) star_gens.push_back(x);
  });
  const Subgroup star = Subgroup::generated(g, star_gens);
  const auto upper = upper_central_series(g);
  const auto z_at = [&](int i) { return upper[static_cast<std::size_t>(std::min<int>(i, static_cast<int>(upper.size()) - 1))]; };
  const int top = static_cast<int>(upper.size()) - 1;
  for (int i = 0; i <= top; ++i) {
    const Subgroup ai = intersection(a, z_at(i));
    const GModule mi = build_module(n, ai);
    std::uint64_t lhs = 1;
    const std::size_t dim = derivation_space(mi).size();
    for (std::size_t k = 0; k < dim; ++k) lhs *= static_cast<std::uint64_t>(g.prime());
    const std::uint64_t rhs = intersection(star, z_at(i + 1)).order() / zg.order();
    report.rows.push_back({i, lhs, rhs, lhs == rhs});
  }
  return report;
}

}  // namespace pnoninner
