#pragma once

// Built-in group families and the text presentation format.
//
// File format (one directive per line, '#' starts a comment):
//
//   p 5
//   gens 4
//   pow 1 = g2            # g1^p = g2
//   comm 2 1 = g3         # [g2, g1] = g3
//   comm 3 1 = g4^2*g5
//
// Words are products g<k>^<e> with strictly increasing k and 0 <= e < p
// ("^1" may be omitted), or "1". Omitted relations are trivial.

#include <string>
#include <string_view>
#include <vector>

#include "pnoninner/pc.hpp"

namespace pnoninner::catalog {

// Extra-special group of order p^(2n+1) and exponent p with pc generators
// x_1, y_1, ..., x_n, y_n, c and [x_i, y_i] = c.
PcPresentation extraspecial(int p, int n);

// C_p^(n-1) extended by a unipotent Jordan block: [g_i, g_1] = g_(i+1) for
// 2 <= i < n. Order p^n, class n-1; requires n - 1 <= p.
PcPresentation maximal_class(int p, int n);

// The maximal-class group of order p^4 with [y,x,y] = 1, class 3.
PcPresentation maximal_class_p4(int p);

PcPresentation cyclic(int p, int k);
PcPresentation elementary_abelian(int p, int k);

// <a, b | a^(p^2), b^p, [a, b] = a^p>, order p^3 and exponent p^2.
PcPresentation metacyclic_p3(int p);

// Two-generator group of class 4 on the Hall basis
// x, y, [y,x], [y,x,x], [y,x,y], [y,x,x,x], [y,x,x,y], [y,x,y,y]
// with every pc generator of order p (order p^8).
PcPresentation free_class4_exp_p(int p);

PcPresentation direct_product(const PcPresentation& a, const PcPresentation& b);

// Dispatches on a family name: extraspecial, maximal_class_p4, maximal_class,
// cyclic, elementary_abelian, metacyclic_p3, free_class4_exp_p.
PcPresentation gen_family(std::string_view name, int p, int n);
std::vector<std::string> family_names();

struct ParseOptions {
  bool check_consistency = true;
};

PcPresentation parse_presentation(std::string_view text, const ParseOptions& options = {});
std::string print_presentation(const PcPresentation& g);

// Stable 64-bit FNV-1a digest of the printed presentation, as 16 hex digits.
std::string digest(const PcPresentation& g);
std::string fnv1a_hex(std::string_view bytes);

struct CatalogEntry {
  std::string name;
  PcPresentation group;
};

// The bundled desk-scale catalog (abelian and nonabelian entries).
std::vector<CatalogEntry> bundled_catalog();

}  // namespace pnoninner::catalog
