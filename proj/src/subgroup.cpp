#include "pnoninner/subgroup.hpp"

#include <sstream>

#include "pnoninner/errors.hpp"
#include "pnoninner/gfp.hpp"

namespace pnoninner {

namespace {

// Incremental closure: slots indexed by depth, each with leading exponent 1.
class Closure {
 public:
  Closure(const PcPresentation& g, std::vector<Element> conjugators = {})
      : g_(g), n_(g.size()), p_(g.prime()), slots_(static_cast<std::size_t>(n_)),
        conjugators_(std::move(conjugators)) {}

  Element sift(Element x) const {
    while (true) {
      const int d = x.depth();
      if (d == n_) return x;
      const auto& powers = slots_[static_cast<std::size_t>(d)];
      if (powers.empty()) return x;
      x = g_.multiply(powers[static_cast<std::size_t>(p_ - x[d])], x);
    }
  }

  bool contains(const Element& x) const { return sift(x).is_identity(); }

  void add(const Element& x) {
    queue_.push_back(x);
    while (!queue_.empty()) {
      Element y = queue_.back();
      queue_.pop_back();
      insert(y);
    }
  }

  std::vector<Element> igs() const {
    std::vector<Element> out;
    for (const auto& s : slots_)
      if (!s.empty()) out.push_back(s[1]);
    return out;
  }

 private:
  void insert(const Element& x) {
    Element r = sift(x);
    const int d = r.depth();
    if (d == n_) return;
    if (r[d] != 1) r = g_.power(r, gfp::inverse_mod(r[d], p_));
    auto& powers = slots_[static_cast<std::size_t>(d)];
    powers.reserve(static_cast<std::size_t>(p_));
    powers.push_back(g_.identity());
    for (int e = 1; e < p_; ++e) powers.push_back(g_.multiply(powers.back(), r));
    queue_.push_back(g_.multiply(powers.back(), r));
    for (std::size_t j = 0; j < slots_.size(); ++j)
      if (static_cast<int>(j) != d && !slots_[j].empty()) queue_.push_back(g_.commutator(r, slots_[j][1]));
    for (const auto& c : conjugators_) queue_.push_back(g_.commutator(r, c));
  }

  const PcPresentation& g_;
  int n_;
  int p_;
  std::vector<std::vector<Element>> slots_;
  std::vector<Element> conjugators_;
  std::vector<Element> queue_;
};

std::vector<Element> canonical(const PcPresentation& g, std::vector<Element> igs) {
  const int p = g.prime();
  for (std::size_t k = 0; k < igs.size(); ++k)
    for (std::size_t m = k + 1; m < igs.size(); ++m) {
      const int lead = igs[m].depth();
      const int e = igs[k][lead];
      if (e != 0) igs[k] = g.multiply(igs[k], g.power(igs[m], p - e));
    }
  return igs;
}

std::vector<Element> generator_list(const PcPresentation& g) {
  std::vector<Element> gens;
  for (int i = 0; i < g.size(); ++i) gens.push_back(g.generator(i));
  return gens;
}

}  // namespace

Subgroup::Subgroup(const PcPresentation& g) : g_(g) {}

Subgroup::Subgroup(const PcPresentation& g, std::vector<Element> igs) : g_(g), igs_(std::move(igs)) {
  build_power_cache();
}

void Subgroup::build_power_cache() {
  const int p = g_.prime();
  powers_.clear();
  for (const auto& h : igs_) {
    std::vector<Element> pw{g_.identity()};
    for (int e = 1; e < p; ++e) pw.push_back(g_.multiply(pw.back(), h));
    powers_.push_back(std::move(pw));
  }
}

Subgroup Subgroup::whole(const PcPresentation& g) { return Subgroup(g, generator_list(g)); }

Subgroup Subgroup::generated(const PcPresentation& g, std::span<const Element> gens) {
  Closure c(g);
  for (const auto& x : gens) c.add(x);
  return Subgroup(g, canonical(g, c.igs()));
}

Subgroup Subgroup::normal_closure(const PcPresentation& g, std::span<const Element> gens) {
  Closure c(g, generator_list(g));
  for (const auto& x : gens) c.add(x);
  return Subgroup(g, canonical(g, c.igs()));
}

Subgroup Subgroup::normal_closure_in(const Subgroup& h, std::span<const Element> gens) {
  Closure c(h.parent(), h.igs());
  for (const auto& x : gens) c.add(x);
  return Subgroup(h.parent(), canonical(h.parent(), c.igs()));
}

std::uint64_t Subgroup::order() const {
  std::uint64_t o = 1;
  for (std::size_t i = 0; i < igs_.size(); ++i) o *= static_cast<std::uint64_t>(g_.prime());
  return o;
}

std::vector<int> Subgroup::leading_positions() const {
  std::vector<int> out;
  for (const auto& h : igs_) out.push_back(h.depth());
  return out;
}

bool Subgroup::contains(const Element& x) const {
  const int p = g_.prime();
  Element y = x;
  std::size_t k = 0;
  while (!y.is_identity()) {
    const int d = y.depth();
    while (k < igs_.size() && igs_[k].depth() < d) ++k;
    if (k == igs_.size() || igs_[k].depth() != d) return false;
    y = g_.multiply(powers_[k][static_cast<std::size_t>(p - y[d])], y);
  }
  return true;
}

std::optional<std::vector<int>> Subgroup::coordinates(const Element& x) const {
  std::vector<int> coords(igs_.size(), 0);
  Element y = x;
  for (std::size_t k = 0; k < igs_.size() && !y.is_identity(); ++k) {
    const int d = y.depth();
    const int lead = igs_[k].depth();
    if (d < lead) return std::nullopt;
    if (d > lead) continue;
    coords[k] = y[d];
    y = g_.multiply(g_.inverse(powers_[k][static_cast<std::size_t>(y[d])]), y);
  }
  if (!y.is_identity()) return std::nullopt;
  return coords;
}

Element Subgroup::element_at(const std::vector<int>& coords) const {
  Element x = g_.identity();
  for (std::size_t k = 0; k < igs_.size(); ++k)
    if (coords[k] != 0) x = g_.multiply(x, powers_[k][static_cast<std::size_t>(coords[k])]);
  return x;
}

bool Subgroup::contains(const Subgroup& other) const {
  for (const auto& h : other.igs_)
    if (!contains(h)) return false;
  return true;
}

Element Subgroup::reduce(const Element& x) const {
  const int p = g_.prime();
  Element y = x;
  for (std::size_t k = 0; k < igs_.size(); ++k) {
    const int lead = igs_[k].depth();
    if (y[lead] != 0) y = g_.multiply(y, powers_[k][static_cast<std::size_t>(p - y[lead])]);
  }
  return y;
}

void Subgroup::for_each(const std::function<void(const Element&)>& fn) const {
  const int p = g_.prime();
  std::vector<Element> prefix(igs_.size() + 1, g_.identity());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == igs_.size()) {
      fn(prefix[k]);
      return;
    }
    for (int e = 0; e < p; ++e) {
      prefix[k + 1] = g_.multiply(prefix[k], powers_[k][static_cast<std::size_t>(e)]);
      rec(k + 1);
    }
  };
  rec(0);
}

std::vector<Element> Subgroup::elements() const {
  require_enumerable(order(), "subgroup enumeration");
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(order()));
  for_each([&](const Element& e) { out.push_back(e); });
  return out;
}

std::string Subgroup::to_string() const {
  std::ostringstream out;
  out << "<";
  for (std::size_t k = 0; k < igs_.size(); ++k) out << (k ? ", " : "") << igs_[k].to_string();
  out << ">";
  return out.str();
}

Subgroup join(const Subgroup& a, const Subgroup& b) {
  std::vector<Element> gens = a.igs();
  gens.insert(gens.end(), b.igs().begin(), b.igs().end());
  return Subgroup::generated(a.parent(), gens);
}

Subgroup intersection(const Subgroup& a, const Subgroup& b) {
  if (a.contains(b)) return b;
  if (b.contains(a)) return a;
  const Subgroup& small = a.order() <= b.order() ? a : b;
  const Subgroup& large = a.order() <= b.order() ? b : a;
  require_enumerable(small.order(), "subgroup intersection");
  Closure c(a.parent());
  small.for_each([&](const Element& x) {
    if (large.contains(x) && !c.contains(x)) c.add(x);
  });
  return Subgroup::generated(a.parent(), c.igs());
}

Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b) {
  const PcPresentation& g = a.parent();
  std::vector<Element> gens;
  for (const auto& x : a.igs())
    for (const auto& y : b.igs()) gens.push_back(g.commutator(x, y));
  return Subgroup::normal_closure(g, gens);
}

bool is_normalized_by(const Subgroup& h, const Subgroup& x) {
  const PcPresentation& g = h.parent();
  for (const auto& a : h.igs())
    for (const auto& b : x.igs())
      if (!h.contains(g.conjugate(a, b))) return false;
  return true;
}

bool is_normal(const Subgroup& h) { return is_normalized_by(h, Subgroup::whole(h.parent())); }

bool is_abelian(const Subgroup& h) {
  const PcPresentation& g = h.parent();
  const auto& igs = h.igs();
  for (std::size_t i = 0; i < igs.size(); ++i)
    for (std::size_t j = i + 1; j < igs.size(); ++j)
      if (!g.commutator(igs[i], igs[j]).is_identity()) return false;
  return true;
}

namespace {

constexpr std::uint64_t kCentralizerEnumerationLimit = 100000;

// C_x(s) down the pc series: at step i the map c -> exponent of [c, s] at
// position i is a homomorphism on {c : [c, s] in G_i}.
Subgroup centralizer_of_element(const Subgroup& x, const Element& s) {
  const PcPresentation& g = x.parent();
  const int p = g.prime();
  Subgroup c = x;
  for (int i = 0; i < g.size(); ++i) {
    const auto& igs = c.igs();
    std::vector<int> vals;
    int k0 = -1;
    for (std::size_t k = 0; k < igs.size(); ++k) {
      vals.push_back(g.commutator(igs[k], s)[i]);
      if (k0 < 0 && vals.back() != 0) k0 = static_cast<int>(k);
    }
    if (k0 < 0) continue;
    const Element& h0 = igs[static_cast<std::size_t>(k0)];
    const int inv = gfp::inverse_mod(vals[static_cast<std::size_t>(k0)], p);
    std::vector<Element> gens{g.power(h0, p)};
    for (std::size_t k = 0; k < igs.size(); ++k) {
      if (static_cast<int>(k) == k0) continue;
      const int t = gfp::reduce(-static_cast<long long>(vals[k]) * inv, p);
      gens.push_back(g.multiply(igs[k], g.power(h0, t)));
    }
    c = Subgroup::normal_closure_in(c, gens);
  }
  return c;
}

}  // namespace

Subgroup centralizer(const Subgroup& x, std::span<const Element> s) {
  const PcPresentation& g = x.parent();
  if (x.order() <= kCentralizerEnumerationLimit) {
    Closure c(g);
    x.for_each([&](const Element& e) {
      if (c.contains(e)) return;
      for (const auto& t : s)
        if (!g.commutator(e, t).is_identity()) return;
      c.add(e);
    });
    return Subgroup::generated(g, c.igs());
  }
  Subgroup c = x;
  for (const auto& t : s)
    if (!t.is_identity()) c = centralizer_of_element(c, t);
  return c;
}

Subgroup centralizer(const Subgroup& x, const Subgroup& s) { return centralizer(x, std::span<const Element>(s.igs())); }

Subgroup centralizer(const PcPresentation& g, const Subgroup& s) { return centralizer(Subgroup::whole(g), s); }

namespace {

PcPresentation build_quotient(const Subgroup& kernel, const std::vector<int>& kept) {
  const PcPresentation& g = kernel.parent();
  const int m = static_cast<int>(kept.size());
  auto restrict = [&](const Element& x) {
    Element y(m);
    const Element r = kernel.reduce(x);
    for (int k = 0; k < m; ++k) y.set(k, r[kept[static_cast<std::size_t>(k)]]);
    return y;
  };
  std::vector<Element> power(static_cast<std::size_t>(m), Element(m));
  std::vector<std::vector<Element>> comm(static_cast<std::size_t>(m),
                                         std::vector<Element>(static_cast<std::size_t>(m), Element(m)));
  for (int a = 0; a < m; ++a) {
    const Element ga = g.generator(kept[static_cast<std::size_t>(a)]);
    power[static_cast<std::size_t>(a)] = restrict(g.power(ga, g.prime()));
    for (int b = a + 1; b < m; ++b) {
      const Element gb = g.generator(kept[static_cast<std::size_t>(b)]);
      comm[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = restrict(g.commutator(gb, ga));
    }
  }
  return PcPresentation(g.prime(), m, std::move(power), std::move(comm));
}

std::vector<int> complement_positions(const Subgroup& kernel) {
  std::vector<bool> lead(static_cast<std::size_t>(kernel.parent().size()), false);
  for (int l : kernel.leading_positions()) lead[static_cast<std::size_t>(l)] = true;
  std::vector<int> kept;
  for (int i = 0; i < kernel.parent().size(); ++i)
    if (!lead[static_cast<std::size_t>(i)]) kept.push_back(i);
  return kept;
}

const Subgroup& require_normal(const Subgroup& n) {
  if (!is_normal(n)) throw PreconditionError("quotient: subgroup " + n.to_string() + " is not normal");
  return n;
}

}  // namespace

QuotientMap::QuotientMap(const Subgroup& kernel)
    : kernel_(require_normal(kernel)),
      kept_(complement_positions(kernel)),
      target_index_(static_cast<std::size_t>(kernel.parent().size()), -1),
      target_(build_quotient(kernel_, kept_)) {
  for (std::size_t k = 0; k < kept_.size(); ++k) target_index_[static_cast<std::size_t>(kept_[k])] = static_cast<int>(k);
}

Element QuotientMap::project(const Element& x) const {
  const Element r = kernel_.reduce(x);
  Element y(target_.size());
  for (std::size_t k = 0; k < kept_.size(); ++k) y.set(static_cast<int>(k), r[kept_[k]]);
  return y;
}

Element QuotientMap::section(const Element& q) const {
  Element x(source().size());
  for (std::size_t k = 0; k < kept_.size(); ++k) x.set(kept_[k], q[static_cast<int>(k)]);
  return x;
}

Subgroup QuotientMap::image(const Subgroup& h) const {
  std::vector<Element> gens;
  for (const auto& x : h.igs()) gens.push_back(project(x));
  return Subgroup::generated(target_, gens);
}

Subgroup QuotientMap::preimage(const Subgroup& h) const {
  std::vector<Element> gens = kernel_.igs();
  for (const auto& q : h.igs()) gens.push_back(section(q));
  return Subgroup::generated(source(), gens);
}

}  // namespace pnoninner
