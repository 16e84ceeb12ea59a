#include "usfm/lca/assess.hpp"

#include <algorithm>
#include <cmath>

#include "usfm/error.hpp"
#include "usfm/util/csv.hpp"
#include "usfm/util/text.hpp"

namespace usfm::lca {

bool CharacterizationMatrix::characterizes(const std::string& flow_name) const {
    for (const auto& [category, flows] : factors)
        if (flows.count(flow_name)) return true;
    return false;
}

CharacterizationMatrix parse_matrix(const std::string& text, const std::string& origin) {
    static const std::vector<std::string> header = {"category", "category_unit", "flow_name",
                                                    "factor"};
    const std::vector<csv::Row> rows = csv::parse(text);
    if (rows.empty() || rows[0].fields != header)
        throw Error("matrix",
                    origin + ": expected header '" + csv::encode_row(header) + "'");

    CharacterizationMatrix m;
    for (size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        auto fail = [&](const std::string& msg) -> Error {
            return Error("matrix", origin + " line " + std::to_string(row.line) + ": " + msg);
        };
        if (row.fields.size() != 4) throw fail("factor row needs 4 fields");
        const std::string category = normalize_space(row.fields[0]);
        const std::string unit = normalize_space(row.fields[1]);
        const std::string flow = normalize_space(row.fields[2]);
        const auto factor = parse_double(row.fields[3]);
        if (category.empty() || unit.empty() || flow.empty() || !factor)
            throw fail("bad category, unit, flow, or factor");

        const auto [unit_it, fresh] = m.category_units.emplace(category, unit);
        if (!fresh && unit_it->second != unit)
            throw fail("category '" + category + "' switches unit from '" + unit_it->second +
                       "' to '" + unit + "'");
        if (!m.factors[category].emplace(flow, *factor).second)
            throw fail("duplicate factor for category '" + category + "', flow '" + flow + "'");
    }
    return m;
}

CharacterizationMatrix load_matrix(const std::string& path) {
    return parse_matrix(read_text_file(path), path);
}

ImpactScores assess(const Inventory& inventory, const CharacterizationMatrix& matrix,
                    MissingFlowPolicy policy) {
    ImpactScores scores;

    // fixed accumulation order: ascending (name, original position)
    std::vector<const Flow*> ordered;
    ordered.reserve(inventory.flows.size());
    for (const Flow& f : inventory.flows) ordered.push_back(&f);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Flow* a, const Flow* b) { return a->name < b->name; });

    for (const Flow* f : ordered) {
        if (matrix.characterizes(f->name)) continue;
        if (scores.uncharacterized.empty() || scores.uncharacterized.back() != f->name)
            scores.uncharacterized.push_back(f->name);
    }
    if (policy == MissingFlowPolicy::Error && !scores.uncharacterized.empty()) {
        std::string names;
        for (const std::string& n : scores.uncharacterized) {
            if (!names.empty()) names += ", ";
            names += "'" + n + "'";
        }
        throw Error("uncharacterized-flow", "no factors for " + names);
    }

    for (const auto& [category, flows] : matrix.factors) {
        CategoryScore score;
        score.unit = matrix.category_units.at(category);
        for (const Flow* f : ordered) {
            const auto it = flows.find(f->name);
            if (it != flows.end()) score.value += it->second * f->amount;
        }
        scores.by_category.emplace(category, std::move(score));
    }
    return scores;
}

CrossCheck energy_cross_check(const Inventory& inventory, double kpi_kwh_per_part,
                              int parts_per_fu) {
    if (!(kpi_kwh_per_part > 0.0))
        throw Error("bad-kpi-value", "energy per part from telemetry must be positive");
    if (parts_per_fu <= 0)
        throw Error("bad-parts-per-fu", "parts per functional unit must be positive");

    const Flow* metered = nullptr;
    for (const Flow& f : inventory.flows) {
        if (f.direction != FlowDirection::Input) continue;
        if (f.unit != "kWh") continue;
        if (!contains_ci(f.name, "electricity")) continue;
        metered = &f;  // last match wins: the foreground measurement
    }
    if (!metered)
        throw Error("no-electricity-flow", "inventory has no electricity input in kWh");

    CrossCheck c;
    c.flow_name = metered->name;
    c.fu_electricity_kwh = metered->amount;
    c.parts_per_fu = parts_per_fu;
    c.inventory_kwh_per_part = metered->amount / parts_per_fu;
    c.kpi_kwh_per_part = kpi_kwh_per_part;
    c.relative_deviation =
        std::abs(c.inventory_kwh_per_part - kpi_kwh_per_part) / kpi_kwh_per_part;
    return c;
}

}  // namespace usfm::lca
