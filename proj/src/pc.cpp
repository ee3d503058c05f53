#include "pnoninner/pc.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <sstream>

#include "pnoninner/errors.hpp"

namespace pnoninner {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Element::Element(int size, const std::vector<int>& exps) : size_(static_cast<std::uint8_t>(size)) {
  if (size < 0 || size > kMaxGenerators) throw InvalidArgument("element size out of range");
  if (static_cast<int>(exps.size()) != size) throw InvalidArgument("exponent vector has wrong length");
  for (int i = 0; i < size; ++i) {
    const int e = exps[static_cast<std::size_t>(i)];
    if (e < 0 || e > 255) throw InvalidArgument("exponent out of range");
    exps_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
  }
}

bool Element::is_identity() const noexcept {
  for (int i = 0; i < size_; ++i)
    if (exps_[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

int Element::depth() const noexcept {
  for (int i = 0; i < size_; ++i)
    if (exps_[static_cast<std::size_t>(i)] != 0) return i;
  return size_;
}

std::vector<int> Element::exponents() const {
  std::vector<int> v(size_);
  for (int i = 0; i < size_; ++i) v[static_cast<std::size_t>(i)] = exps_[static_cast<std::size_t>(i)];
  return v;
}

std::string Element::to_string() const {
  std::ostringstream out;
  out << '(';
  for (int i = 0; i < size_; ++i) {
    if (i) out << ',';
    out << static_cast<int>(exps_[static_cast<std::size_t>(i)]);
  }
  out << ')';
  return out.str();
}

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (int i = 0; i < e.size(); ++i) {
    h ^= static_cast<std::uint64_t>(e[i]);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

struct PcPresentation::Data {
  int p = 0;
  int n = 0;
  std::vector<Element> power;
  std::vector<std::vector<Element>> comm;
  std::vector<std::vector<bool>> comm_trivial;
  std::vector<Exps> power_exps;
  // conj[j][k][e] = (g_j^e)^(g_k) for j > k
  std::vector<std::vector<std::vector<Exps>>> conj;
};

PcPresentation::PcPresentation(int p, int n, std::vector<Element> power,
                               std::vector<std::vector<Element>> comm) {
  if (!is_prime(p) || p < 3) throw InvalidArgument("p must be an odd prime, got " + std::to_string(p));
  if (p > 255) throw InvalidArgument("p must be below 256");
  if (n < 0 || n > kMaxGenerators) throw InvalidArgument("generator count out of range");
  if (static_cast<int>(power.size()) != n) throw InvalidArgument("power relation count must equal n");
  if (static_cast<int>(comm.size()) != n) throw InvalidArgument("commutator table must be n x n");

  auto data = std::make_shared<Data>();
  data->p = p;
  data->n = n;
  auto check_rel = [&](const Element& w, int above, const std::string& what) {
    if (w.size() != n) throw InvalidArgument(what + ": relation has wrong length");
    for (int k = 0; k < n; ++k) {
      if (w[k] >= p) throw InvalidArgument(what + ": exponent not reduced mod p");
      if (w[k] != 0 && k <= above)
        throw InvalidArgument(what + ": references g" + std::to_string(k + 1) +
                              ", only generators after g" + std::to_string(above + 1) + " are allowed");
    }
  };
  for (int i = 0; i < n; ++i) check_rel(power[static_cast<std::size_t>(i)], i, "pow " + std::to_string(i + 1));
  data->comm.assign(static_cast<std::size_t>(n), std::vector<Element>(static_cast<std::size_t>(n), Element(n)));
  data->comm_trivial.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), true));
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(comm[static_cast<std::size_t>(j)].size()) != n)
      throw InvalidArgument("commutator table must be n x n");
    for (int i = 0; i < j; ++i) {
      const Element& w = comm[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      check_rel(w, j, "comm " + std::to_string(j + 1) + " " + std::to_string(i + 1));
      data->comm[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = w;
      data->comm_trivial[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = w.is_identity();
    }
  }
  data->power = std::move(power);
  for (const auto& w : data->power) data->power_exps.push_back(w.exps_);
  data->conj.assign(static_cast<std::size_t>(n), {});
  d_ = data;

  for (int j = n - 1; j >= 0; --j) {
    auto& row = data->conj[static_cast<std::size_t>(j)];
    row.assign(static_cast<std::size_t>(j), {});
    for (int k = 0; k < j; ++k) {
      auto& pows = row[static_cast<std::size_t>(k)];
      pows.assign(static_cast<std::size_t>(p), Exps{});
      Exps base = data->comm[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].exps_;
      base[static_cast<std::size_t>(j)] = 1;
      pows[1] = base;
      for (int e = 2; e < p; ++e) {
        Exps v = pows[static_cast<std::size_t>(e - 1)];
        mul_exps(v, base);
        pows[static_cast<std::size_t>(e)] = v;
      }
    }
  }
}

PcPresentation PcPresentation::elementary_abelian(int p, int n) {
  std::vector<Element> power(static_cast<std::size_t>(n), Element(n));
  std::vector<std::vector<Element>> comm(static_cast<std::size_t>(n),
                                         std::vector<Element>(static_cast<std::size_t>(n), Element(n)));
  return PcPresentation(p, n, std::move(power), std::move(comm));
}

int PcPresentation::prime() const noexcept { return d_->p; }
int PcPresentation::size() const noexcept { return d_->n; }

std::uint64_t PcPresentation::order() const noexcept {
  std::uint64_t o = 1;
  for (int i = 0; i < d_->n; ++i) o *= static_cast<std::uint64_t>(d_->p);
  return o;
}

const Element& PcPresentation::power_relation(int i) const {
  if (i < 0 || i >= d_->n) throw InvalidArgument("generator index out of range");
  return d_->power[static_cast<std::size_t>(i)];
}

const Element& PcPresentation::comm_relation(int j, int i) const {
  if (i < 0 || j >= d_->n || i >= j) throw InvalidArgument("commutator relation needs j > i");
  return d_->comm[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
}

Element PcPresentation::identity() const { return Element(d_->n); }

Element PcPresentation::generator(int i) const {
  if (i < 0 || i >= d_->n) throw InvalidArgument("generator index out of range: " + std::to_string(i + 1));
  Element e(d_->n);
  e.set(i, 1);
  return e;
}

Element PcPresentation::element(const std::vector<int>& exps) const {
  Element e(d_->n, exps);
  check_element(e);
  return e;
}

bool PcPresentation::is_valid(const Element& e) const noexcept {
  if (e.size() != d_->n) return false;
  for (int i = 0; i < d_->n; ++i)
    if (e[i] >= d_->p) return false;
  return true;
}

void PcPresentation::check_element(const Element& e) const {
  if (!is_valid(e)) throw InvalidArgument("malformed element " + e.to_string());
}

void PcPresentation::add_at(Exps& v, int k, int e) const {
  // Precondition: v has no entries beyond k.
  const int s = v[static_cast<std::size_t>(k)] + e;
  if (s < d_->p) {
    v[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(s);
    return;
  }
  v[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(s - d_->p);
  mul_exps(v, d_->power_exps[static_cast<std::size_t>(k)]);
}

PcPresentation::Exps PcPresentation::conjugate_tail(const Exps& t, int k) const {
  Exps r{};
  for (int j = k + 1; j < d_->n; ++j) {
    const int e = t[static_cast<std::size_t>(j)];
    if (e == 0) continue;
    mul_exps(r, d_->conj[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(e)]);
  }
  return r;
}

void PcPresentation::mul_gen_pow(Exps& v, int k, int e) const {
  const int n = d_->n;
  int last = -1;
  for (int j = n - 1; j > k; --j)
    if (v[static_cast<std::size_t>(j)] != 0) {
      last = j;
      break;
    }
  if (last < 0) {
    add_at(v, k, e);
    return;
  }
  bool commutes = true;
  for (int j = k + 1; j <= last; ++j)
    if (v[static_cast<std::size_t>(j)] != 0 && !d_->comm_trivial[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) {
      commutes = false;
      break;
    }
  if (commutes && v[static_cast<std::size_t>(k)] + e < d_->p) {
    v[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(v[static_cast<std::size_t>(k)] + e);
    return;
  }
  // v = prefix * tail; v * g_k^e = prefix * g_k^e * tail^(g_k^e)
  Exps tail{};
  for (int j = k + 1; j <= last; ++j) {
    tail[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(j)] = 0;
  }
  add_at(v, k, e);
  if (!commutes)
    for (int r = 0; r < e; ++r) tail = conjugate_tail(tail, k);
  mul_exps(v, tail);
}

void PcPresentation::mul_exps(Exps& v, const Exps& w) const {
  for (int j = 0; j < d_->n; ++j) {
    const int e = w[static_cast<std::size_t>(j)];
    if (e != 0) mul_gen_pow(v, j, e);
  }
}

Element PcPresentation::collect(std::span<const Letter> word) const {
  Element result(d_->n);
  for (const Letter& l : word) {
    if (l.gen < 0 || l.gen >= d_->n)
      throw InvalidArgument("letter references generator " + std::to_string(l.gen + 1) + " of " +
                            std::to_string(d_->n));
    if (l.exp >= 0) {
      int e = l.exp;
      while (e > 0) {
        const int step = std::min(e, d_->p - 1);
        mul_gen_pow(result.exps_, l.gen, step);
        e -= step;
      }
    } else {
      const Element inv = inverse(generator(l.gen));
      for (int r = 0; r < -l.exp; ++r) mul_exps(result.exps_, inv.exps_);
    }
  }
  return result;
}

Element PcPresentation::multiply(const Element& a, const Element& b) const {
  check_element(a);
  check_element(b);
  Element r = a;
  mul_exps(r.exps_, b.exps_);
  return r;
}

Element PcPresentation::inverse(const Element& a) const {
  check_element(a);
  Element x(d_->n);
  Exps cur = a.exps_;
  for (int k = 0; k < d_->n; ++k) {
    const int m = (d_->p - cur[static_cast<std::size_t>(k)]) % d_->p;
    if (m == 0) continue;
    mul_gen_pow(x.exps_, k, m);
    mul_gen_pow(cur, k, m);
  }
  return x;
}

Element PcPresentation::power(const Element& a, long long k) const {
  check_element(a);
  Element base = k < 0 ? inverse(a) : a;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Element result(d_->n);
  while (e > 0) {
    if (e & 1ULL) mul_exps(result.exps_, base.exps_);
    e >>= 1;
    if (e > 0) {
      Element sq = base;
      mul_exps(sq.exps_, base.exps_);
      base = sq;
    }
  }
  return result;
}

Element PcPresentation::commutator(const Element& a, const Element& b) const {
  // a^-1 b^-1 a b = (b a)^-1 (a b)
  return multiply(inverse(multiply(b, a)), multiply(a, b));
}

Element PcPresentation::conjugate(const Element& a, const Element& b) const {
  return multiply(inverse(b), multiply(a, b));
}

Element PcPresentation::left_normed(std::span<const Element> args) const {
  if (args.size() < 2) throw InvalidArgument("left-normed commutator needs at least two entries");
  Element c = commutator(args[0], args[1]);
  for (std::size_t i = 2; i < args.size(); ++i) c = commutator(c, args[i]);
  return c;
}

long long PcPresentation::element_order(const Element& a) const {
  check_element(a);
  long long k = 1;
  Element x = a;
  while (!x.is_identity()) {
    mul_exps(x.exps_, a.exps_);
    ++k;
  }
  return k;
}

Word PcPresentation::word_of(const Element& a) const {
  Word w;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != 0) w.push_back({i, a[i]});
  return w;
}

bool operator==(const PcPresentation& a, const PcPresentation& b) {
  if (a.d_ == b.d_) return true;
  return a.d_->p == b.d_->p && a.d_->n == b.d_->n && a.d_->power == b.d_->power && a.d_->comm == b.d_->comm;
}

std::uint64_t enumeration_bound() {
  if (const char* env = std::getenv("PNONINNER_ENUM_BOUND")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

void require_enumerable(std::uint64_t count, const char* what, std::uint64_t bound) {
  if (count > bound)
    throw BoundExceeded(std::string(what) + ": " + std::to_string(count) + " elements exceed the enumeration bound " +
                        std::to_string(bound));
}

void for_each_element(const PcPresentation& g, const std::function<void(const Element&)>& fn) {
  require_enumerable(g.order(), "enumerate");
  const int n = g.size();
  const int p = g.prime();
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(Element(n, e));
    int i = n - 1;
    while (i >= 0 && e[static_cast<std::size_t>(i)] == p - 1) {
      e[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
    ++e[static_cast<std::size_t>(i)];
  }
}

std::vector<Element> enumerate(const PcPresentation& g) {
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(g.order()));
  for_each_element(g, [&](const Element& e) { out.push_back(e); });
  return out;
}

CayleyTable::CayleyTable(const PcPresentation& g)
    : p_(g.prime()), n_(g.size()), order_(static_cast<std::size_t>(g.order())) {
  require_enumerable(order_ * order_, "Cayley table entries", 16000000);
  elements_ = enumerate(g);
  table_.resize(order_ * order_);
  inverses_.resize(order_);
  for (std::size_t a = 0; a < order_; ++a) {
    for (std::size_t b = 0; b < order_; ++b)
      table_[a * order_ + b] = index_of(g.multiply(elements_[a], elements_[b]));
    inverses_[a] = index_of(g.inverse(elements_[a]));
  }
}

std::uint32_t CayleyTable::index_of(const Element& e) const {
  std::uint32_t idx = 0;
  for (int i = 0; i < n_; ++i) idx = idx * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(e[i]);
  return idx;
}

namespace {

bool exhaustive_consistency(const PcPresentation& g) {
  const CayleyTable t(g);
  const std::uint32_t n = static_cast<std::uint32_t>(t.order());
  for (std::uint32_t a = 0; a < n; ++a) {
    if (t.product(0, a) != a || t.product(a, 0) != a) return false;
    if (t.product(a, t.inverse(a)) != 0 || t.product(t.inverse(a), a) != 0) return false;
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint32_t ab = t.product(a, b);
      for (std::uint32_t c = 0; c < n; ++c)
        if (t.product(ab, c) != t.product(a, t.product(b, c))) return false;
    }
  return true;
}

bool associative(const PcPresentation& g, const Element& a, const Element& b, const Element& c) {
  return g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c));
}

bool sampled_consistency(const PcPresentation& g, const ConsistencyOptions& options) {
  const int n = g.size();
  const int p = g.prime();
  std::vector<Element> gens;
  std::vector<Element> near_powers;  // g_i^(p-1)
  for (int i = 0; i < n; ++i) {
    gens.push_back(g.generator(i));
    Element e = g.identity();
    e.set(i, p - 1);
    near_powers.push_back(e);
  }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i)
        if (!associative(g, gens[static_cast<std::size_t>(k)], gens[static_cast<std::size_t>(j)],
                         gens[static_cast<std::size_t>(i)]))
          return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& gi = gens[static_cast<std::size_t>(i)];
      const auto& gj = gens[static_cast<std::size_t>(j)];
      const auto& pi = near_powers[static_cast<std::size_t>(i)];
      if (!associative(g, pi, gi, gj) || !associative(g, gj, pi, gi)) return false;
    }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> dist(0, p - 1);
  auto random_element = [&] {
    Element e = g.identity();
    for (int i = 0; i < n; ++i) e.set(i, dist(rng));
    return e;
  };
  for (std::uint64_t t = 0; t < options.random_triples; ++t) {
    const Element a = random_element();
    const Element b = random_element();
    const Element c = random_element();
    if (!associative(g, a, b, c)) return false;
    if (!g.multiply(a, g.inverse(a)).is_identity() || !g.multiply(g.inverse(a), a).is_identity()) return false;
    if (g.multiply(a, g.identity()) != a || g.multiply(g.identity(), a) != a) return false;
  }
  return true;
}

}  // namespace

bool is_consistent(const PcPresentation& g, const ConsistencyOptions& options) {
  switch (options.mode) {
    case ConsistencyMode::Exhaustive:
      require_enumerable(g.order(), "exhaustive consistency check", kExhaustiveConsistencyLimit);
      return exhaustive_consistency(g);
    case ConsistencyMode::Sampled:
      return sampled_consistency(g, options);
    case ConsistencyMode::Automatic:
      break;
  }
  if (g.order() <= kExhaustiveConsistencyLimit) return exhaustive_consistency(g);
  return sampled_consistency(g, options);
}

}  // namespace pnoninner
