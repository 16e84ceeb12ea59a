#include "usfm/lca/inventory.hpp"

#include "usfm/error.hpp"
#include "usfm/util/csv.hpp"
#include "usfm/util/text.hpp"

namespace usfm::lca {

namespace {

const std::vector<std::string> kFuHeader = {"fu_name", "fu_amount", "fu_unit", "parts_per_fu"};
const std::vector<std::string> kFlowHeader = {"flow_name", "amount", "unit", "direction"};

}  // namespace

Inventory parse_inventory(const std::string& text, const std::string& origin) {
    const std::vector<csv::Row> rows = csv::parse(text);
    auto fail = [&origin](int line, const std::string& msg) -> Error {
        return Error("inventory", origin + " line " + std::to_string(line) + ": " + msg);
    };

    if (rows.size() < 3 || rows[0].fields != kFuHeader)
        throw Error("inventory", origin + ": expected functional-unit header '" +
                                     csv::encode_row(kFuHeader) + "' first");
    const csv::Row& fu_row = rows[1];
    if (fu_row.fields.size() != 4) throw fail(fu_row.line, "functional-unit row needs 4 fields");

    Inventory inv;
    inv.fu.name = normalize_space(fu_row.fields[0]);
    const auto fu_amount = parse_double(fu_row.fields[1]);
    if (!fu_amount || *fu_amount <= 0.0)
        throw fail(fu_row.line, "fu_amount must be a positive number");
    inv.fu.amount = *fu_amount;
    inv.fu.unit = normalize_space(fu_row.fields[2]);
    if (inv.fu.name.empty() || inv.fu.unit.empty())
        throw fail(fu_row.line, "fu_name and fu_unit must be nonempty");
    const std::string parts_text = normalize_space(fu_row.fields[3]);
    if (!parts_text.empty()) {
        const auto parts = parse_int(parts_text);
        if (!parts || *parts < 0) throw fail(fu_row.line, "parts_per_fu must be a whole number");
        inv.fu.parts_per_fu = static_cast<int>(*parts);
    }

    if (rows[2].fields != kFlowHeader)
        throw fail(rows[2].line,
                   "expected flow header '" + csv::encode_row(kFlowHeader) + "'");

    for (size_t i = 3; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        if (row.fields.size() != 4) throw fail(row.line, "flow row needs 4 fields");
        Flow f;
        f.name = normalize_space(row.fields[0]);
        const auto amount = parse_double(row.fields[1]);
        if (f.name.empty() || !amount) throw fail(row.line, "bad flow_name or amount");
        f.amount = *amount;
        f.unit = normalize_space(row.fields[2]);
        if (f.unit.empty()) throw fail(row.line, "unit must be nonempty");
        const auto direction = flow_direction_from(normalize_space(row.fields[3]));
        if (!direction) throw fail(row.line, "direction must be 'input' or 'output'");
        f.direction = *direction;
        inv.flows.push_back(std::move(f));
    }
    return inv;
}

Inventory load_inventory(const std::string& path) {
    return parse_inventory(read_text_file(path), path);
}

Inventory scale_inventory(std::span<const Flow> batch_flows, double batch_output,
                          const std::string& batch_unit, const FunctionalUnit& fu) {
    if (batch_output <= 0.0)
        throw Error("nonpositive-batch", "batch output must be positive");
    if (batch_unit != fu.unit)
        throw Error("unit-mismatch", "batch output unit '" + batch_unit +
                                         "' does not match functional unit '" + fu.unit + "'");
    Inventory out;
    out.fu = fu;
    const double factor = fu.amount / batch_output;
    out.flows.reserve(batch_flows.size());
    for (const Flow& f : batch_flows) {
        Flow scaled = f;
        scaled.amount = f.amount * factor;
        out.flows.push_back(std::move(scaled));
    }
    return out;
}

}  // namespace usfm::lca
