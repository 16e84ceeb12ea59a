#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "usfm/telemetry/query.hpp"

namespace usfm::kpi {

enum class Level { Unit, Process, Line, Plant };
enum class Dimension { Economic, Environmental, Social };

std::string_view to_string(Level l);
std::string_view to_string(Dimension d);
std::optional<Level> level_from(std::string_view s);
std::optional<Dimension> dimension_from(std::string_view s);

struct KpiDef {
    std::string name;
    std::string objective;
    Level level = Level::Line;
    Dimension dimension = Dimension::Environmental;
    std::vector<std::string> metrics;
    std::string description;
};

enum class BindingKind { EnergyPerPart, MachineShare, EnergyTotal, PartCount, FlowTotal };

std::string_view to_string(BindingKind k);
std::optional<BindingKind> binding_kind_from(std::string_view s);

struct PartCountSource {
    std::string machine;
    std::string event;
    telemetry::CountRule rule = telemetry::CountRule::Transitions;
};

// How one metric name is computed from a dataset.
struct MetricBinding {
    std::string metric;
    BindingKind kind = BindingKind::EnergyTotal;
    std::vector<std::string> machines;  // energy scope; empty = all machines
    PartCountSource part_count;         // EnergyPerPart, PartCount
    std::string share_machine;          // MachineShare: whose share to report
    std::string flow_name;              // FlowTotal: manual flow to sum
};

struct DecisionRule {
    std::string metric;
    std::string comparator;  // one of > >= < <=
    double threshold = 0.0;
    std::string flag;  // label raised when the comparison holds
};

struct KpiSpec {
    std::string goal;
    std::vector<KpiDef> kpis;
    std::map<std::string, MetricBinding> bindings;
    std::vector<DecisionRule> rules;
    // Sections accepted for forward compatibility but never executed; the
    // report echoes them as skipped.
    std::vector<std::string> unexecuted_sections;
};

// JSON spec loader. Validates: nonempty goal and kpis, known enums, every
// metric referenced by a KPI or rule has a binding, comparators well-formed,
// weightless shape errors reported with Error("kpi-spec", ...).
KpiSpec load_kpi_spec(const std::string& path);
KpiSpec parse_kpi_spec(const std::string& text);

}  // namespace usfm::kpi
