#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "pnoninner/catalog.hpp"
#include "pnoninner/errors.hpp"
#include "pnoninner/structure.hpp"

using namespace pnoninner;
namespace cat = pnoninner::catalog;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pnoninner_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Exit status of the CLI; stdout and stderr go to out.
int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + PN_CLI + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int parse_error_line(const std::string& text) {
  try {
    cat::parse_presentation(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse the E(5) example") {
  const auto g = cat::parse_presentation("p 5\ngens 3\ncomm 2 1 = g3");
  CHECK(g.order() == 125);
  CHECK(is_extra_special(g));
  CHECK(exponent(g) == 5);
  CHECK(g.commutator(g.generator(1), g.generator(0)) == g.generator(2));
  // Same group as the built-in family up to the sign of c.
  const auto e5 = cat::extraspecial(5, 1);
  CHECK(e5.commutator(e5.generator(1), e5.generator(0)) == e5.power(e5.generator(2), -1));
}

TEST_CASE("parse the W(5) example") {
  const auto g = cat::parse_presentation("p 5\ngens 4\ncomm 2 1 = g3\ncomm 3 1 = g4");
  CHECK(g.order() == 625);
  CHECK(nilpotency_class(g) == 3);
  CHECK(cat::print_presentation(g) == cat::print_presentation(cat::maximal_class_p4(5)));
}

TEST_CASE("parse rejects p = 4") {
  try {
    cat::parse_presentation("p 4\ngens 2\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() >= 1);
    CHECK(std::string(e.what()).find("prime") != std::string::npos);
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK(parse_error_line("p 5\ngens 3\ncomm 2 1 = g7\n") == 3);
  CHECK(parse_error_line("p 5\ngens 3\nfoo 1\n") == 3);
  CHECK(parse_error_line("p 5\ngens 3\n\n\ncomm 2 1 = g3^5\n") == 5);
  CHECK(parse_error_line("p 5\ngens 3\npow 1 = g1\n") == 3);
  CHECK(parse_error_line("gens 3\n") == 1);
  CHECK(parse_error_line("p 5\ngens 3\ncomm 1 2 = g3\n") == 3);
  // g1^3 = g2 while [g2, g1] = g3: inconsistent.
  CHECK_THROWS(cat::parse_presentation("p 3\ngens 3\npow 1 = g2\ncomm 2 1 = g3\n"));
  CHECK_NOTHROW(cat::parse_presentation("p 3\ngens 3\npow 1 = g2\ncomm 2 1 = g3\n", {false}));
}

TEST_CASE("comments, blank lines and trivial words") {
  const auto g = cat::parse_presentation("# E(3)\np 3  # prime\n\ngens 3\npow 1 = 1\ncomm 2 1 = g3^1\n");
  CHECK(g.order() == 27);
  CHECK(g.power(g.generator(0), 3) == g.identity());
}

TEST_CASE("print and parse round trip on bundled files") {
  int files = 0;
  for (const auto& entry : fs::directory_iterator(PN_CATALOG_DIR)) {
    if (entry.path().extension() != ".pc") continue;
    ++files;
    const std::string text = slurp(entry.path());
    const auto g = cat::parse_presentation(text);
    const std::string printed = cat::print_presentation(g);
    CHECK(cat::print_presentation(cat::parse_presentation(printed)) == printed);
    CHECK(g.order() == cat::parse_presentation(printed).order());
  }
  CHECK(files == 18);
}

TEST_CASE("bundled files match the built-in catalog") {
  for (const auto& e : cat::bundled_catalog()) {
    const fs::path f = fs::path(PN_CATALOG_DIR) / (e.name + ".pc");
    REQUIRE_MESSAGE(fs::exists(f), e.name);
    CHECK(cat::print_presentation(cat::parse_presentation(slurp(f))) == cat::print_presentation(e.group));
  }
}

TEST_CASE("bundled files are consistent") {
  for (const auto& entry : fs::directory_iterator(PN_CATALOG_DIR)) {
    if (entry.path().extension() != ".pc") continue;
    const auto g = cat::parse_presentation(slurp(entry.path()), {false});
    const ConsistencyMode mode = g.order() <= kExhaustiveConsistencyLimit ? ConsistencyMode::Exhaustive : ConsistencyMode::Sampled;
    CHECK_MESSAGE(is_consistent(g, {mode}), entry.path().filename().string());
    // Every element is reached by multiplying generators.
    if (g.order() <= 3125) {
      std::vector<Element> gens;
      for (int i = 0; i < g.size(); ++i) gens.push_back(g.generator(i));
      CHECK(oracle::closure(g, gens).size() == g.order());
    }
  }
}

TEST_CASE("gen examples") {
  const auto e5 = cat::gen_family("extraspecial", 5, 1);
  CHECK(e5.order() == 125);
  const auto e52 = cat::gen_family("extraspecial", 5, 2);
  CHECK(e52.order() == 3125);
  CHECK(rank(e52) == 4);
  const auto w5 = cat::gen_family("maximal_class_p4", 5, 0);
  CHECK(w5.order() == 625);
  CHECK(nilpotency_class(w5) == 3);
  CHECK(cat::gen_family("cyclic", 3, 2).order() == 9);
  CHECK_THROWS_AS(cat::gen_family("extraspecial", 4, 1), InvalidArgument);
  CHECK_THROWS_AS(cat::gen_family("extraspecial", 5, 0), InvalidArgument);
  CHECK_THROWS_AS(cat::gen_family("nonsense", 5, 1), InvalidArgument);
  CHECK_THROWS_AS(cat::gen_family("maximal_class", 3, 6), InvalidArgument);
}

TEST_CASE("digests") {
  CHECK(cat::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(cat::fnv1a_hex("a") == "af63dc4c8601ec8c");
  const auto g = cat::extraspecial(3, 1);
  CHECK(cat::digest(g) == cat::fnv1a_hex(cat::print_presentation(g)));
  CHECK(cat::digest(g) != cat::digest(cat::extraspecial(5, 1)));
}

TEST_CASE("cli: gen, find, verify") {
  const fs::path d = scratch("find");
  CHECK(run("gen extraspecial --p 3 --n 1 -o \"" + (d / "e3.pc").string() + "\"", d / "gen.txt") == 0);
  REQUIRE(fs::exists(d / "e3.pc"));
  CHECK(cat::parse_presentation(slurp(d / "e3.pc")).order() == 27);

  const std::string file = "\"" + (d / "e3.pc").string() + "\"";
  const std::string cert = "\"" + (d / "cert.json").string() + "\"";
  CHECK(run("find " + file + " --fix frattini --json " + cert, d / "find.txt") == 0);
  REQUIRE(fs::exists(d / "cert.json"));
  CHECK(run("verify " + file + " " + cert, d / "verify.txt") == 0);

  auto j = nlohmann::json::parse(slurp(d / "cert.json"));
  j["automorphism"][0] = std::vector<int>{0, 0, 0};
  spit(d / "bad.json", j.dump(2));
  CHECK(run("verify " + file + " \"" + (d / "bad.json").string() + "\"", d / "bad.txt") == 1);
  CHECK(slurp(d / "bad.txt").find("not an automorphism") != std::string::npos);

  CHECK(run("hypotheses " + file + " --level B", d / "hyp.txt") == 0);
  CHECK(slurp(d / "hyp.txt").find("A.i") != std::string::npos);
  CHECK(slurp(d / "hyp.txt").find("B.ii") != std::string::npos);
}

TEST_CASE("cli: input errors exit 1") {
  const fs::path d = scratch("errors");
  spit(d / "ab.pc", "p 3\ngens 2\n");
  spit(d / "bad.pc", "p 4\ngens 2\n");
  CHECK(run("find \"" + (d / "ab.pc").string() + "\" --fix frattini", d / "o1.txt") == 1);
  CHECK(run("find \"" + (d / "bad.pc").string() + "\" --fix frattini", d / "o2.txt") == 1);
  CHECK(slurp(d / "o2.txt").find("line 1") != std::string::npos);
  CHECK(run("find \"" + (d / "missing.pc").string() + "\" --fix frattini", d / "o3.txt") == 1);
  CHECK(run("gen extraspecial --p 3 --n 1 -o \"" + (d / "e3.pc").string() + "\"", d / "o4.txt") == 0);
  CHECK(run("find \"" + (d / "e3.pc").string() + "\" --fix nonsense", d / "o5.txt") == 1);
  CHECK(run("frobnicate", d / "o6.txt") == 1);
}

TEST_CASE("cli: survey is deterministic and complete") {
  const fs::path d = scratch("survey");
  const std::string dir = std::string("\"") + PN_CATALOG_DIR + "\"";
  CHECK(run("survey " + dir + " --report \"" + (d / "a" / "r.json").string() + "\" --jobs 1", d / "a.txt") == 0);
  CHECK(run("survey " + dir + " --report \"" + (d / "b" / "r.json").string() + "\" --jobs 4", d / "b.txt") == 0);
  const std::string a = slurp(d / "a" / "r.json");
  CHECK(a == slurp(d / "b" / "r.json"));
  const auto j = nlohmann::json::parse(a);
  CHECK(j["exhausted"] == 0);
  CHECK(j["errors"] == 0);
  CHECK(j["groups"].size() == 18);
  for (const auto& row : j["groups"]) {
    if (row["status"] == "abelian") continue;
    CHECK(row["status"] == "found");
    const fs::path c = d / "a" / "certificates" / (row["certificate"].get<std::string>() + ".json");
    REQUIRE(fs::exists(c));
    CHECK(run("verify \"" + (fs::path(PN_CATALOG_DIR) / row["file"].get<std::string>()).string() + "\" \"" +
                  c.string() + "\"",
              d / "v.txt") == 0);
  }
}
