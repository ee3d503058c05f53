// pnoninner: find / verify / hypotheses / survey / gen.
//
// Exit codes: 0 success, 1 input error or failed verification, 2 search
// exhausted.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnoninner/catalog.hpp"
#include "pnoninner/hypotheses.hpp"
#include "pnoninner/search.hpp"
#include "pnoninner/structure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pnoninner;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

PcPresentation load(const std::string& path) { return catalog::parse_presentation(read_file(path)); }

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

// Phi(G) when d(G) >= 3 or class <= 3, otherwise G^p gamma_3(G).
FixKind default_fix(const PcPresentation& g) {
  return (rank(g) >= 3 || nilpotency_class(g) <= 3) ? FixKind::Frattini : FixKind::AgemoGamma3;
}

int cmd_gen(const std::string& family, int p, int n, const std::string& out) {
  const PcPresentation g = catalog::gen_family(family, p, n);
  write_file(out, catalog::print_presentation(g));
  std::cout << "wrote " << out << " (order " << g.order() << ")\n";
  return 0;
}

int cmd_find(const std::string& file, const std::string& fix, const std::string& json_out) {
  const PcPresentation g = load(file);
  const FixKind kind = parse_fix_kind(fix);
  if (kind == FixKind::Explicit) throw InvalidArgument("--fix explicit is not available on the command line");
  try {
    const Certificate c = find_noninner(g, kind);
    const std::string text = certificate_to_json(c);
    if (json_out.empty()) {
      std::cout << text;
    } else {
      write_file(json_out, text);
      std::cout << "found: " << c.strategy << "\nwrote " << json_out << "\n";
    }
    return 0;
  } catch (const SearchExhausted& e) {
    std::cerr << "exhausted after " << e.examined() << " candidates: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const std::string& file, const std::string& cert_path) {
  const PcPresentation g = load(file);
  const Certificate c = certificate_from_json(read_file(cert_path));
  const VerifyResult r = verify_certificate(g, c);
  if (!r.ok) {
    std::cout << "REJECTED: " << r.reason << "\n";
    return 1;
  }
  std::cout << "OK\n";
  return 0;
}

int cmd_hypotheses(const std::string& file, const std::string& level) {
  const PcPresentation g = load(file);
  if (level != "A" && level != "B") throw InvalidArgument("--level must be A or B");
  const HypothesisReport r = hypothesis_report(g, level == "A" ? HypothesisLevel::A : HypothesisLevel::B);
  auto mark = [](const std::optional<bool>& b) { return b ? (*b ? "yes" : "no ") : "?  "; };
  for (const auto& e : r.entries) {
    std::cout << mark(e.holds) << "  " << e.id << "  " << e.statement;
    for (const auto& ev : e.evidence) std::cout << "  [" << ev.name << "=" << ev.value << "]";
    std::cout << "\n";
  }
  std::cout << "hypothesis " << level << ": " << mark(r.satisfied) << "\n";
  std::cout << "reduction predicate fires: " << (r.reduction_fires ? "yes" : "no") << "\n";
  return 0;
}

json survey_row(const fs::path& file, const fs::path& cert_dir, bool timing) {
  const auto t0 = std::chrono::steady_clock::now();
  json row;
  row["file"] = file.filename().string();
  const PcPresentation g = load(file.string());
  const Fingerprint f = fingerprint(g);
  row["fingerprint"] = {{"prime", f.prime}, {"generators", f.generators}, {"order", f.order}, {"digest", f.digest}};
  row["class"] = f.nilpotency_class;
  row["coclass"] = f.coclass;
  row["d"] = rank(g);
  if (is_abelian(Subgroup::whole(g))) {
    row["status"] = "abelian";
  } else {
    const HypothesisReport h = hypothesis_report(g, HypothesisLevel::A);
    json profile = json::object();
    for (const auto& e : h.entries) profile[e.id] = optional_bool(e.holds);
    row["hypotheses"] = profile;
    row["hypothesis_A"] = optional_bool(h.satisfied);
    const FixKind fix = default_fix(g);
    row["fix"] = to_string(fix);
    try {
      const Certificate c = find_noninner(g, fix);
      const std::string text = certificate_to_json(c);
      const std::string digest = catalog::fnv1a_hex(text);
      write_file((cert_dir / (digest + ".json")).string(), text);
      row["status"] = verify_certificate(g, c).ok ? "found" : "unverified";
      row["strategy"] = c.strategy;
      row["certificate"] = digest;
    } catch (const SearchExhausted& e) {
      row["status"] = "exhausted";
      row["examined"] = e.examined();
    }
  }
  if (timing) row["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

int cmd_survey(const std::string& dir, const std::string& report, int jobs, bool timing) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pc") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  const fs::path cert_dir = fs::path(report).parent_path() / "certificates";
  fs::create_directories(cert_dir);

  std::vector<json> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next++) < files.size();) {
      try {
        rows[i] = survey_row(files[i], cert_dir, timing);
      } catch (const std::exception& e) {
        rows[i] = {{"file", files[i].filename().string()}, {"status", "error"}, {"error", e.what()}};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < std::max(1, jobs); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int exhausted = 0, errors = 0;
  for (const auto& r : rows) {
    exhausted += r["status"] == "exhausted";
    errors += r["status"] == "error" || r["status"] == "unverified";
  }
  json out = {{"groups", rows}, {"exhausted", exhausted}, {"errors", errors}};
  write_file(report, out.dump(2) + "\n");
  std::cout << rows.size() << " groups, " << exhausted << " exhausted, " << errors << " errors\n";
  if (errors) return 1;
  return exhausted ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-inner automorphisms of order p for finite p-groups"};
  app.require_subcommand(1);

  std::string file, fix = "frattini", json_out, cert, level = "A", dir, report, family, out;
  int jobs = 1, p = 0, n = 1;
  bool timing = false;

  auto* find = app.add_subcommand("find", "search for a certified non-inner automorphism of order p");
  find->add_option("FILE", file)->required();
  find->add_option("--fix", fix, "frattini | agemo-gamma3 | agemo-gamma4")
      ->check(CLI::IsMember({"frattini", "agemo-gamma3", "agemo-gamma4"}));
  find->add_option("--json", json_out, "write the certificate here");

  auto* verify = app.add_subcommand("verify", "check a certificate against a presentation");
  verify->add_option("FILE", file)->required();
  verify->add_option("CERT", cert)->required();

  auto* hyp = app.add_subcommand("hypotheses", "report the structural conditions");
  hyp->add_option("FILE", file)->required();
  hyp->add_option("--level", level)->check(CLI::IsMember({"A", "B"}));

  auto* survey = app.add_subcommand("survey", "run find over every .pc file in a directory");
  survey->add_option("DIR", dir)->required();
  survey->add_option("--report", report)->required();
  survey->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  survey->add_flag("--timing", timing, "record wall time per group (makes the report nondeterministic)");

  auto* gen = app.add_subcommand("gen", "write a built-in family member");
  gen->add_option("FAMILY", family)->required();
  gen->add_option("--p", p)->required();
  gen->add_option("--n", n);
  gen->add_option("-o", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*find) return cmd_find(file, fix, json_out);
    if (*verify) return cmd_verify(file, cert);
    if (*hyp) return cmd_hypotheses(file, level);
    if (*survey) return cmd_survey(dir, report, jobs, timing);
    if (*gen) return cmd_gen(family, p, n, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
