#include "pnoninner/catalog.hpp"

#include <cctype>
#include <cstdio>
#include <optional>
#include <sstream>

#include "pnoninner/errors.hpp"

namespace pnoninner::catalog {

namespace {

struct Builder {
  int p;
  int n;
  std::vector<Element> power;
  std::vector<std::vector<Element>> comm;

  Builder(int p_, int n_)
      : p(p_),
        n(n_),
        power(static_cast<std::size_t>(n_), Element(n_)),
        comm(static_cast<std::size_t>(n_), std::vector<Element>(static_cast<std::size_t>(n_), Element(n_))) {}

  // 1-based indices, as in the file format.
  void set_power(int i, std::initializer_list<std::pair<int, int>> word) {
    power[static_cast<std::size_t>(i - 1)] = make(word);
  }
  void set_comm(int j, int i, std::initializer_list<std::pair<int, int>> word) {
    comm[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = make(word);
  }
  Element make(std::initializer_list<std::pair<int, int>> word) const {
    Element e(n);
    for (auto [g, x] : word) e.set(g - 1, ((x % p) + p) % p);
    return e;
  }
  PcPresentation build() { return PcPresentation(p, n, power, comm); }
};

}  // namespace

PcPresentation extraspecial(int p, int n) {
  if (n < 1) throw InvalidArgument("extraspecial needs n >= 1");
  if (2 * n + 1 > kMaxGenerators) throw InvalidArgument("extraspecial: n too large");
  Builder b(p, 2 * n + 1);
  const int c = 2 * n + 1;
  // [x_i, y_i] = c  <=>  [y_i, x_i] = c^-1
  for (int i = 1; i <= n; ++i) b.set_comm(2 * i, 2 * i - 1, {{c, p - 1}});
  return b.build();
}

PcPresentation maximal_class(int p, int n) {
  if (n < 3) throw InvalidArgument("maximal_class needs n >= 3");
  if (n - 1 > p) throw InvalidArgument("maximal_class needs n - 1 <= p");
  if (n > kMaxGenerators) throw InvalidArgument("maximal_class: n too large");
  Builder b(p, n);
  for (int i = 2; i < n; ++i) b.set_comm(i, 1, {{i + 1, 1}});
  return b.build();
}

PcPresentation maximal_class_p4(int p) { return maximal_class(p, 4); }

PcPresentation cyclic(int p, int k) {
  if (k < 1 || k > kMaxGenerators) throw InvalidArgument("cyclic needs 1 <= k <= 16");
  Builder b(p, k);
  for (int i = 1; i < k; ++i) b.set_power(i, {{i + 1, 1}});
  return b.build();
}

PcPresentation elementary_abelian(int p, int k) {
  if (k < 1 || k > kMaxGenerators) throw InvalidArgument("elementary_abelian needs 1 <= k <= 16");
  return PcPresentation::elementary_abelian(p, k);
}

PcPresentation metacyclic_p3(int p) {
  // g1 = a, g2 = b, g3 = a^p; [a, b] = a^p so [b, a] = g3^-1.
  Builder b(p, 3);
  b.set_power(1, {{3, 1}});
  b.set_comm(2, 1, {{3, p - 1}});
  return b.build();
}

PcPresentation free_class4_exp_p(int p) {
  // g1 = x, g2 = y, g3 = [y,x], g4 = [y,x,x], g5 = [y,x,y],
  // g6 = [y,x,x,x], g7 = [y,x,x,y] = [y,x,y,x], g8 = [y,x,y,y].
  Builder b(p, 8);
  b.set_comm(2, 1, {{3, 1}});
  b.set_comm(3, 1, {{4, 1}});
  b.set_comm(3, 2, {{5, 1}});
  b.set_comm(4, 1, {{6, 1}});
  b.set_comm(4, 2, {{7, 1}});
  b.set_comm(5, 1, {{7, 1}});
  b.set_comm(5, 2, {{8, 1}});
  return b.build();
}

PcPresentation direct_product(const PcPresentation& a, const PcPresentation& b) {
  if (a.prime() != b.prime()) throw InvalidArgument("direct_product needs a common prime");
  const int na = a.size();
  const int nb = b.size();
  const int n = na + nb;
  if (n > kMaxGenerators) throw InvalidArgument("direct_product: too many generators");
  std::vector<Element> power(static_cast<std::size_t>(n), Element(n));
  std::vector<std::vector<Element>> comm(static_cast<std::size_t>(n),
                                         std::vector<Element>(static_cast<std::size_t>(n), Element(n)));
  auto shift = [n](const Element& w, int offset) {
    Element e(n);
    for (int k = 0; k < w.size(); ++k) e.set(k + offset, w[k]);
    return e;
  };
  for (int i = 0; i < na; ++i) {
    power[static_cast<std::size_t>(i)] = shift(a.power_relation(i), 0);
    for (int j = i + 1; j < na; ++j)
      comm[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = shift(a.comm_relation(j, i), 0);
  }
  for (int i = 0; i < nb; ++i) {
    power[static_cast<std::size_t>(na + i)] = shift(b.power_relation(i), na);
    for (int j = i + 1; j < nb; ++j)
      comm[static_cast<std::size_t>(na + j)][static_cast<std::size_t>(na + i)] = shift(b.comm_relation(j, i), na);
  }
  return PcPresentation(a.prime(), n, std::move(power), std::move(comm));
}

std::vector<std::string> family_names() {
  return {"extraspecial", "maximal_class_p4", "maximal_class", "cyclic",
          "elementary_abelian", "metacyclic_p3", "free_class4_exp_p"};
}

PcPresentation gen_family(std::string_view name, int p, int n) {
  if (name == "extraspecial") return extraspecial(p, n);
  if (name == "maximal_class_p4") return maximal_class_p4(p);
  if (name == "maximal_class") return maximal_class(p, n);
  if (name == "cyclic") return cyclic(p, n);
  if (name == "elementary_abelian") return elementary_abelian(p, n);
  if (name == "metacyclic_p3") return metacyclic_p3(p);
  if (name == "free_class4_exp_p") return free_class4_exp_p(p);
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class LineScanner {
 public:
  LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }
  [[noreturn]] void fail_at(int column, const std::string& what) const { throw ParseError(line_, column, what); }

  std::string keyword() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a keyword");
    return std::string(text_.substr(start, pos_ - start));
  }

  long long integer() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail("expected an integer");
    }
    if (pos_ - digits > 9) {
      pos_ = start;
      fail("integer too large");
    }
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

bool is_prime_number(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Reads "1" or g<k>^<e>*...; indices are 1-based and must increase.
Element parse_word(LineScanner& s, int p, int n) {
  Element w(n);
  if (s.peek('1')) {
    s.expect('1');
    return w;
  }
  int last = 0;
  while (true) {
    const int col = s.column();
    s.expect('g');
    const long long k = s.integer();
    if (k < 1 || k > n) s.fail_at(col, "generator g" + std::to_string(k) + " out of range");
    if (k <= last) s.fail("generator indices in a word must increase");
    long long e = 1;
    if (s.peek('^')) {
      s.expect('^');
      e = s.integer();
    }
    if (e < 0 || e >= p) s.fail("exponent must lie in [0, p)");
    w.set(static_cast<int>(k - 1), static_cast<int>(e));
    last = static_cast<int>(k);
    if (!s.peek('*')) break;
    s.expect('*');
  }
  return w;
}

}  // namespace

PcPresentation parse_presentation(std::string_view text, const ParseOptions& options) {
  std::optional<int> p;
  std::optional<int> n;
  std::vector<Element> power;
  std::vector<std::vector<Element>> comm;
  std::vector<bool> power_seen;
  std::vector<std::vector<bool>> comm_seen;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    LineScanner s(line, line_no);
    if (s.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string kw = s.keyword();
    {
      if (kw == "p") {
        if (p) s.fail("duplicate 'p' line");
        const long long v = s.integer();
        if (!is_prime_number(v) || v < 3) s.fail(std::to_string(v) + " is not an odd prime");
        if (v > 255) s.fail("p must be below 256");
        p = static_cast<int>(v);
      } else if (kw == "gens") {
        if (!p) s.fail("'gens' must follow the 'p' line");
        if (n) s.fail("duplicate 'gens' line");
        const long long v = s.integer();
        if (v < 0 || v > kMaxGenerators) s.fail("generator count must lie in [0, 16]");
        n = static_cast<int>(v);
        power.assign(static_cast<std::size_t>(*n), Element(*n));
        comm.assign(static_cast<std::size_t>(*n), std::vector<Element>(static_cast<std::size_t>(*n), Element(*n)));
        power_seen.assign(static_cast<std::size_t>(*n), false);
        comm_seen.assign(static_cast<std::size_t>(*n), std::vector<bool>(static_cast<std::size_t>(*n), false));
      } else if (kw == "pow") {
        if (!n) s.fail("'pow' before 'gens'");
        const long long i = s.integer();
        if (i < 1 || i > *n) s.fail("generator index out of range");
        s.expect('=');
        const Element w = parse_word(s, *p, *n);
        if (w.depth() < w.size() && w.depth() <= i - 1)
          s.fail("power relation of g" + std::to_string(i) + " may only use later generators");
        if (power_seen[static_cast<std::size_t>(i - 1)]) s.fail("duplicate power relation");
        power_seen[static_cast<std::size_t>(i - 1)] = true;
        power[static_cast<std::size_t>(i - 1)] = w;
      } else if (kw == "comm") {
        if (!n) s.fail("'comm' before 'gens'");
        const long long j = s.integer();
        const long long i = s.integer();
        if (j < 1 || j > *n || i < 1 || i > *n) s.fail("generator index out of range");
        if (j <= i) s.fail("commutator relations are written 'comm j i' with j > i");
        s.expect('=');
        const Element w = parse_word(s, *p, *n);
        if (w.depth() < w.size() && w.depth() <= j - 1)
          s.fail("commutator relation [g" + std::to_string(j) + ", g" + std::to_string(i) +
                 "] may only use generators after g" + std::to_string(j));
        if (comm_seen[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)])
          s.fail("duplicate commutator relation");
        comm_seen[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = true;
        comm[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = w;
      } else {
        s.fail("unknown directive '" + kw + "'");
      }
    }
    if (!s.at_end()) s.fail("unexpected trailing text");
    if (end == text.size()) break;
  }
  if (!p) throw ParseError(1, 1, "missing 'p' line");
  if (!n) throw ParseError(line_no, 1, "missing 'gens' line");
  PcPresentation g(*p, *n, std::move(power), std::move(comm));
  if (options.check_consistency && !is_consistent(g))
    throw InvalidArgument("presentation is inconsistent: collection is not associative");
  return g;
}

namespace {

std::string word_text(const Element& w) {
  if (w.is_identity()) return "1";
  std::string out;
  for (int k = 0; k < w.size(); ++k) {
    if (w[k] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'g' + std::to_string(k + 1);
    if (w[k] != 1) out += '^' + std::to_string(w[k]);
  }
  return out;
}

}  // namespace

std::string print_presentation(const PcPresentation& g) {
  std::ostringstream out;
  out << "p " << g.prime() << "\n";
  out << "gens " << g.size() << "\n";
  for (int i = 0; i < g.size(); ++i)
    if (!g.power_relation(i).is_identity()) out << "pow " << i + 1 << " = " << word_text(g.power_relation(i)) << "\n";
  for (int j = 0; j < g.size(); ++j)
    for (int i = 0; i < j; ++i)
      if (!g.comm_relation(j, i).is_identity())
        out << "comm " << j + 1 << " " << i + 1 << " = " << word_text(g.comm_relation(j, i)) << "\n";
  return out.str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest(const PcPresentation& g) { return fnv1a_hex(print_presentation(g)); }

std::vector<CatalogEntry> bundled_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"extraspecial_3_1", extraspecial(3, 1)});
  c.push_back({"extraspecial_5_1", extraspecial(5, 1)});
  c.push_back({"extraspecial_7_1", extraspecial(7, 1)});
  c.push_back({"extraspecial_3_2", extraspecial(3, 2)});
  c.push_back({"extraspecial_5_2", extraspecial(5, 2)});
  c.push_back({"maximal_class_p4_3", maximal_class_p4(3)});
  c.push_back({"maximal_class_p4_5", maximal_class_p4(5)});
  c.push_back({"maximal_class_p4_7", maximal_class_p4(7)});
  c.push_back({"maximal_class_5_5", maximal_class(5, 5)});
  c.push_back({"metacyclic_p3_3", metacyclic_p3(3)});
  c.push_back({"metacyclic_p3_5", metacyclic_p3(5)});
  c.push_back({"extraspecial_3_1_x_cyclic_3", direct_product(extraspecial(3, 1), cyclic(3, 1))});
  c.push_back({"extraspecial_5_1_x_cyclic_5", direct_product(extraspecial(5, 1), cyclic(5, 1))});
  c.push_back({"maximal_class_5_6", maximal_class(5, 6)});
  c.push_back({"maximal_class_7_5", maximal_class(7, 5)});
  c.push_back({"cyclic_3_2", cyclic(3, 2)});
  c.push_back({"cyclic_5_2", cyclic(5, 2)});
  c.push_back({"elementary_abelian_3_3", elementary_abelian(3, 3)});
  return c;
}

}  // namespace pnoninner::catalog
