#include "subexp/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace subexp {

namespace {

std::vector<double> number_array(const nlohmann::json& node, const std::string& what) {
  if (!node.is_array()) throw std::invalid_argument(what + " must be an array");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number())
      throw std::invalid_argument(what + ": entry " + std::to_string(i) + " is not a number");
    out.push_back(node[i].get<double>());
  }
  return out;
}

}  // namespace

AmbiguitySet family_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("family: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("family: top level must be an object");
  if (!doc.contains("support")) throw std::invalid_argument("family: missing \"support\"");
  if (!doc.contains("laws")) throw std::invalid_argument("family: missing \"laws\"");

  Support support(number_array(doc["support"], "family: support"));

  const auto& laws_node = doc["laws"];
  if (!laws_node.is_array() || laws_node.empty())
    throw std::invalid_argument("family: laws must be a non-empty array");
  std::vector<DiscreteLaw> laws;
  laws.reserve(laws_node.size());
  for (std::size_t i = 0; i < laws_node.size(); ++i) {
    auto weights = number_array(laws_node[i], "family: law " + std::to_string(i));
    if (weights.size() != support.size())
      throw std::invalid_argument("family: law " + std::to_string(i) + " has " +
                                  std::to_string(weights.size()) + " weights, support has " +
                                  std::to_string(support.size()) + " points");
    try {
      laws.emplace_back(std::move(weights));
    } catch (const std::invalid_argument& e) {
      std::string detail = e.what();
      if (detail.rfind("law: ", 0) == 0) detail.erase(0, 5);
      throw std::invalid_argument("family: law " + std::to_string(i) + ": " + detail);
    }
  }
  return AmbiguitySet(std::move(support), std::move(laws));
}

std::string family_to_json(const AmbiguitySet& fam, int indent) {
  nlohmann::json doc;
  doc["support"] = nlohmann::json::array();
  for (double p : fam.support().points()) doc["support"].push_back(p);
  doc["laws"] = nlohmann::json::array();
  for (const auto& law : fam.laws()) {
    nlohmann::json row = nlohmann::json::array();
    for (double w : law.weights()) row.push_back(w);
    doc["laws"].push_back(std::move(row));
  }
  return doc.dump(indent) + "\n";
}

AmbiguitySet load_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return family_from_json(buf.str());
}

void save_family(const AmbiguitySet& fam, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << family_to_json(fam);
}

}  // namespace subexp
