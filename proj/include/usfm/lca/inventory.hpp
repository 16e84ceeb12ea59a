#pragma once

#include <span>
#include <string>
#include <vector>

#include "usfm/flow.hpp"

namespace usfm::lca {

struct Flow {
    std::string name;
    double amount = 0.0;  // negative amounts are legal and preserved
    std::string unit;
    FlowDirection direction = FlowDirection::Input;

    bool operator==(const Flow&) const = default;
};

struct FunctionalUnit {
    std::string name;
    double amount = 1.0;
    std::string unit;
    int parts_per_fu = 0;  // 0 = not stated
};

// Exchange list normalized to one functional unit. Duplicate (name,
// direction) rows are legal and kept as separate entries.
struct Inventory {
    FunctionalUnit fu;
    std::vector<Flow> flows;
};

// CSV with a functional-unit header block followed by the flow table:
//   fu_name,fu_amount,fu_unit,parts_per_fu
//   <name>,<amount>,<unit>,<parts>
//   flow_name,amount,unit,direction
//   <row>...
// Throws Error("inventory", ...) on shape or field errors.
Inventory load_inventory(const std::string& path);
Inventory parse_inventory(const std::string& text, const std::string& origin);

// Rescales batch-level flows to the functional unit: each amount is
// multiplied by fu.amount / batch_output. batch_unit must equal fu.unit
// (Error "unit-mismatch"); batch_output must be positive ("nonpositive-batch").
Inventory scale_inventory(std::span<const Flow> batch_flows, double batch_output,
                          const std::string& batch_unit, const FunctionalUnit& fu);

}  // namespace usfm::lca
