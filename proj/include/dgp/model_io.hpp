#pragma once

#include <string>

#include "dgp/model.hpp"

namespace dgp {

// Model JSON schema:
//   { "birth": [{"c": real, "order": int, "vexp": int?}, ...],
//     "death": [...],
//     "scan": {"name": str, "targets": [["birth"|"death", termIndex], ...]}? }
// Omitted "vexp" defaults to 1-order (mass action).
BirthDeathModel model_from_json(const std::string& jsonText);
BirthDeathModel load_model(const std::string& path);
std::string model_to_json(const BirthDeathModel& model);

}  // namespace dgp
