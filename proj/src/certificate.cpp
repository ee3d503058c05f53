#include "json.hpp"
#include "pnoninner/search.hpp"

namespace pnoninner {

using nlohmann::json;

namespace {

json element_json(const Element& e) { return e.exponents(); }

Element element_from(const json& j, int size) {
  const auto exps = j.get<std::vector<int>>();
  if (static_cast<int>(exps.size()) != size) throw ParseError(0, 0, "certificate: element has wrong length");
  return Element(size, exps);
}

}  // namespace

std::string certificate_to_json(const Certificate& c) {
  json j;
  j["automorphism"] = json::array();
  for (const auto& e : c.images) j["automorphism"].push_back(element_json(e));
  j["claimed_order"] = c.claimed_order;
  j["fingerprint"] = {{"prime", c.group.prime},
                      {"generators", c.group.generators},
                      {"order", c.group.order},
                      {"class", c.group.nilpotency_class},
                      {"coclass", c.group.coclass},
                      {"digest", c.group.digest}};
  j["fix"] = {{"kind", to_string(c.fix)}, {"igs", json::array()}};
  for (const auto& e : c.fix_igs) j["fix"]["igs"].push_back(element_json(e));
  j["inner_check"] = {{"space", c.inner.space},
                      {"space_size", c.inner.space_size},
                      {"examined", c.inner.examined},
                      {"exhausted", c.inner.exhausted}};
  j["strategy"] = c.strategy;
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Certificate c;
    const json& f = j.at("fingerprint");
    c.group.prime = f.at("prime").get<int>();
    c.group.generators = f.at("generators").get<int>();
    c.group.order = f.at("order").get<std::uint64_t>();
    c.group.nilpotency_class = f.at("class").get<int>();
    c.group.coclass = f.at("coclass").get<int>();
    c.group.digest = f.at("digest").get<std::string>();
    const int n = c.group.generators;
    if (n < 0 || n > kMaxGenerators) throw ParseError(0, 0, "certificate: bad generator count");
    for (const auto& e : j.at("automorphism")) c.images.push_back(element_from(e, n));
    c.claimed_order = j.at("claimed_order").get<int>();
    c.fix = parse_fix_kind(j.at("fix").at("kind").get<std::string>());
    for (const auto& e : j.at("fix").at("igs")) c.fix_igs.push_back(element_from(e, n));
    const json& ic = j.at("inner_check");
    c.inner.space = ic.at("space").get<std::string>();
    c.inner.space_size = ic.at("space_size").get<std::uint64_t>();
    c.inner.examined = ic.at("examined").get<std::uint64_t>();
    c.inner.exhausted = ic.at("exhausted").get<bool>();
    c.strategy = j.at("strategy").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("certificate: ") + e.what());
  }
}

}  // namespace pnoninner
