#pragma once

#include <string>

#include "usfm/opm/model.hpp"

namespace usfm::opl {

// Stable JSON form of a model; keys and enum spellings are part of the file
// format. to_json is deterministic (2-space indent, sorted keys).
std::string model_to_json(const opm::Model& m);

// Throws usfm::Error("model-json", ...) on malformed documents or dangling
// references; an accepted document always yields a validate_graph-clean model
// modulo whatever violations the serialized content itself encodes.
opm::Model model_from_json(const std::string& text);

}  // namespace usfm::opl
