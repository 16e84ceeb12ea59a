#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "usfm/opm/model.hpp"

namespace usfm::sms {

// The nine manufacturing process categories. Spellings are normative; the
// shipped catalog file must enumerate exactly these.
inline constexpr std::array<std::string_view, 9> kProcessCategories = {
    "Primary Shaping",
    "Forming",
    "Separating",
    "Joining",
    "Coating/Finishing",
    "Material Property Change",
    "Auxiliary Processes",
    "Material Handling and Storage",
    "Testing and Inspection",
};

bool is_process_category(std::string_view name);

struct ObjectSubcategory {
    std::string name;
    std::vector<std::string> attributes;
};

struct ObjectCategory {
    std::string name;  // "input_material", "equipment", "environment", ...
    std::vector<ObjectSubcategory> subcategories;
    std::vector<std::string> attributes;  // shared attribute sheet
};

struct Catalog {
    std::vector<std::string> process_categories;
    std::vector<ObjectCategory> object_categories;

    const ObjectCategory* object_category(std::string_view name) const;
};

// Loads a catalog JSON file and checks its shape invariants: the nine process
// categories verbatim, six input-material subcategories, four equipment
// subcategories, and an environment category with exactly immediate/outside.
// Throws usfm::Error("catalog", ...) on any violation.
Catalog load_catalog(const std::string& path);

// Process category assignments live beside the model, keyed by thing id.
struct Classification {
    std::map<std::uint32_t, std::string> category_of;
};

struct ClassifyNote {
    opm::ThingId process;
    std::string message;
};

// Assigns `category` to `process`. Unknown category or a non-process thing is
// an error; reassignment succeeds and returns a note recording the override.
std::optional<ClassifyNote> classify_process(const opm::Model& m, Classification& c,
                                             opm::ThingId process, const std::string& category);

// Seven-field descriptive record of a modeled production system.
struct SystemRecord {
    std::string product_type;
    std::string complexity;
    std::string system_classification;
    std::string automation_level;
    std::string production_control;
    std::string quality_control;
    std::string waste_disposal;
};

SystemRecord system_record_from_json(const std::string& text);  // Error("system-record")
std::string system_record_to_json(const SystemRecord& r);

}  // namespace usfm::sms
