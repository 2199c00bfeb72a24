#include "dgp/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dgp/errors.hpp"

namespace dgp {

using nlohmann::json;

namespace {

std::vector<RateTerm> parse_terms(const json& arr, const char* side) {
  if (!arr.is_array()) throw ModelError(std::string(side) + " must be an array of terms");
  std::vector<RateTerm> terms;
  for (const auto& t : arr) {
    RateTerm rt;
    rt.c = t.at("c").get<double>();
    rt.order = t.at("order").get<int>();
    rt.vexp = t.contains("vexp") ? t.at("vexp").get<int>() : 1 - rt.order;
    if (rt.order < 0) throw ModelError(std::string(side) + " term order must be >= 0");
    terms.push_back(rt);
  }
  return terms;
}

}  // namespace

BirthDeathModel model_from_json(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model JSON parse error: ") + e.what());
  }
  BirthDeathModel m;
  try {
    m.birthTerms = parse_terms(j.at("birth"), "birth");
    m.deathTerms = parse_terms(j.at("death"), "death");
    if (j.contains("scan")) {
      ScanBinding s;
      s.name = j["scan"].at("name").get<std::string>();
      for (const auto& tgt : j["scan"].at("targets")) {
        std::string side = tgt.at(0).get<std::string>();
        int idx = tgt.at(1).get<int>();
        if (side != "birth" && side != "death")
          throw ModelError("scan target side must be \"birth\" or \"death\"");
        s.targets.emplace_back(side == "birth" ? Side::Birth : Side::Death, idx);
      }
      m.scan = std::move(s);
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("model JSON schema error: ") + e.what());
  }
  validate_model(m);
  return m;
}

BirthDeathModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string model_to_json(const BirthDeathModel& model) {
  json j;
  auto dump_terms = [](const std::vector<RateTerm>& terms) {
    json arr = json::array();
    for (const RateTerm& t : terms)
      arr.push_back({{"c", t.c}, {"order", t.order}, {"vexp", t.vexp}});
    return arr;
  };
  j["birth"] = dump_terms(model.birthTerms);
  j["death"] = dump_terms(model.deathTerms);
  if (model.scan) {
    json targets = json::array();
    for (auto [side, idx] : model.scan->targets)
      targets.push_back({side == Side::Birth ? "birth" : "death", idx});
    j["scan"] = {{"name", model.scan->name}, {"targets", targets}};
  }
  return j.dump(2);
}

}  // namespace dgp
