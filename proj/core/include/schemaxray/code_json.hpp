#pragma once

#include <json.hpp>

#include "schemaxray/code_model.hpp"

namespace sx {

using Json = nlohmann::ordered_json;

// Canonical JSON form of a code model. Key order is fixed; serializing the
// same model twice yields byte-identical text.
Json code_model_to_json(const CodeModel& model);
Json code_container_to_json(const CodeContainer& container);

}  // namespace sx
