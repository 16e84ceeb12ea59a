#pragma once

#include <map>
#include <string>
#include <vector>

#include "usfm/lca/inventory.hpp"

namespace usfm::lca {

// User-supplied characterization factors; no factors ship with the tool.
// CSV rows: category,category_unit,flow_name,factor. A (category, flow) pair
// may appear once; a category's unit must be consistent across its rows.
struct CharacterizationMatrix {
    std::map<std::string, std::string> category_units;
    std::map<std::string, std::map<std::string, double>> factors;  // category -> flow -> factor

    bool characterizes(const std::string& flow_name) const;
};

CharacterizationMatrix load_matrix(const std::string& path);  // Error("matrix", ...)
CharacterizationMatrix parse_matrix(const std::string& text, const std::string& origin);

enum class MissingFlowPolicy {
    Error,     // any uncharacterized flow aborts with the offending names
    WarnZero,  // uncharacterized flows contribute zero and are listed
};

struct CategoryScore {
    double value = 0.0;
    std::string unit;
};

struct ImpactScores {
    std::map<std::string, CategoryScore> by_category;  // every matrix category present
    std::vector<std::string> uncharacterized;          // sorted unique flow names
};

// score(category) = sum over flows of factor(category, flow) * amount, with
// flows accumulated in ascending (name, position) order so equal inputs give
// bit-identical results. Both directions participate; negative amounts are
// taken verbatim. A flow is uncharacterized when no category has a factor
// for it.
ImpactScores assess(const Inventory& inventory, const CharacterizationMatrix& matrix,
                    MissingFlowPolicy policy = MissingFlowPolicy::Error);

struct CrossCheck {
    std::string flow_name;        // the matched electricity flow
    double fu_electricity_kwh = 0.0;
    int parts_per_fu = 0;
    double inventory_kwh_per_part = 0.0;
    double kpi_kwh_per_part = 0.0;
    double relative_deviation = 0.0;  // |inventory - kpi| / kpi
};

// Compares the inventory's metered electricity (the last input flow in kWh
// whose name mentions electricity, i.e. the foreground measurement appended
// after any background grid rows) against the telemetry-derived figure.
CrossCheck energy_cross_check(const Inventory& inventory, double kpi_kwh_per_part,
                              int parts_per_fu);

}  // namespace usfm::lca
