#include "usfm/kpi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "usfm/error.hpp"

namespace usfm::kpi {

std::vector<RankedCandidate> rank_kpis(std::span<const Candidate> candidates) {
    if (candidates.empty()) throw Error("no-candidates", "nothing to rank");

    // reference criterion set comes from the first candidate
    std::map<std::string, double> reference;  // criterion -> weight
    for (const CriterionScore& cs : candidates[0].scores) {
        if (!reference.emplace(cs.criterion, cs.weight).second)
            throw Error("duplicate-criterion", "criterion '" + cs.criterion +
                                                   "' listed twice for candidate '" +
                                                   candidates[0].name + "'");
    }

    std::vector<RankedCandidate> ranked;
    for (const Candidate& c : candidates) {
        std::set<std::string> seen;
        double weight_sum = 0.0;
        double index = 0.0;
        for (const CriterionScore& cs : c.scores) {
            if (!seen.insert(cs.criterion).second)
                throw Error("duplicate-criterion", "criterion '" + cs.criterion +
                                                       "' listed twice for candidate '" + c.name +
                                                       "'");
            const auto it = reference.find(cs.criterion);
            if (it == reference.end())
                throw Error("missing-criterion", "candidate '" + c.name +
                                                     "' scores unknown criterion '" +
                                                     cs.criterion + "'");
            if (std::abs(it->second - cs.weight) > 1e-12)
                throw Error("weight-mismatch", "criterion '" + cs.criterion +
                                                   "' weighted differently across candidates");
            weight_sum += cs.weight;
            index += cs.weight * cs.score;
        }
        if (seen.size() != reference.size()) {
            for (const auto& [criterion, weight] : reference)
                if (!seen.count(criterion))
                    throw Error("missing-criterion", "candidate '" + c.name +
                                                         "' lacks a score for criterion '" +
                                                         criterion + "'");
        }
        if (std::abs(weight_sum - 1.0) > 1e-9)
            throw Error("weight-sum", "weights for candidate '" + c.name +
                                          "' sum to " + std::to_string(weight_sum) +
                                          ", expected 1");
        ranked.push_back(RankedCandidate{c.name, index});
    }

    std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.index != b.index) return a.index > b.index;
        return a.name < b.name;
    });
    return ranked;
}

double energy_per_part(const telemetry::Dataset& d, const std::vector<std::string>& machines,
                       const PartCountSource& parts, TimeWindow window) {
    const telemetry::EnergyResult energy = telemetry::window_energy(d, machines, window);
    const std::int64_t count =
        telemetry::count_events(d, parts.machine, parts.event, parts.rule, window);
    if (count <= 0) throw Error("zero-parts", "no parts counted in the window");
    return energy.total / static_cast<double>(count);
}

std::map<std::string, double> machine_share(const telemetry::Dataset& d, TimeWindow window) {
    const telemetry::EnergyResult energy = telemetry::window_energy(d, {}, window);
    if (energy.total <= 0.0) throw Error("zero-energy", "no energy recorded in the window");
    std::map<std::string, double> shares;
    for (const auto& [machine, kwh] : energy.per_machine)
        shares.emplace(machine, kwh / energy.total);
    return shares;
}

namespace {

bool period_in_window(const telemetry::ManualRecord& r, TimeWindow w) {
    if (w.empty()) return false;
    if (r.period_end <= r.period_start) return w.contains(r.period_start);
    const Instant lo = std::max(r.period_start, w.start);
    const Instant hi = std::min(r.period_end, w.end);
    return lo < hi;
}

}  // namespace

double flow_total(const telemetry::Dataset& d, const std::string& flow_name, TimeWindow window) {
    double total = 0.0;
    for (const telemetry::ManualRecord& r : d.manual_flows)
        if (r.flow_name == flow_name && period_in_window(r, window)) total += r.amount;
    return total;
}

std::vector<FlagResult> evaluate_flags(const std::map<std::string, MetricValue>& metrics,
                                       std::span<const DecisionRule> rules) {
    std::vector<FlagResult> out;
    for (const DecisionRule& rule : rules) {
        const auto it = metrics.find(rule.metric);
        if (it == metrics.end())
            throw Error("unknown-metric", "rule references uncomputed metric '" + rule.metric + "'");
        const double v = it->second.value;
        bool raised = false;
        if (rule.comparator == ">") raised = v > rule.threshold;
        else if (rule.comparator == ">=") raised = v >= rule.threshold;
        else if (rule.comparator == "<") raised = v < rule.threshold;
        else if (rule.comparator == "<=") raised = v <= rule.threshold;
        out.push_back(FlagResult{rule, v, raised});
    }
    return out;
}

namespace {

TimeWindow pipeline_window(const telemetry::Dataset& d) {
    if (!d.records.empty()) return telemetry::full_span(d);
    if (!d.manual_flows.empty()) {
        Instant lo = d.manual_flows.front().period_start;
        Instant hi = lo;
        for (const telemetry::ManualRecord& r : d.manual_flows) {
            lo = std::min(lo, r.period_start);
            hi = std::max(hi, std::max(r.period_end, r.period_start));
        }
        return TimeWindow{lo, Instant{hi.ms + 1}};
    }
    return TimeWindow{};
}

struct MetricComputer {
    const telemetry::Dataset& d;
    TimeWindow window;
    std::map<std::string, MetricValue> computed;
    std::vector<PipelineFinding> findings;
    std::set<std::string> attempted;

    // nullopt with a finding when the binding cannot be satisfied
    void compute(const MetricBinding& b) {
        if (!attempted.insert(b.metric).second) return;

        auto missing = [&](std::string message) {
            findings.push_back(PipelineFinding{"MISSING_DATA", b.metric, std::move(message)});
        };

        for (const std::string& machine : b.machines)
            if (!d.has_machine(machine)) {
                missing("machine '" + machine + "' has no records");
                return;
            }

        try {
            switch (b.kind) {
                case BindingKind::EnergyPerPart: {
                    if (!d.has_machine(b.part_count.machine)) {
                        missing("machine '" + b.part_count.machine + "' has no records");
                        return;
                    }
                    const double v = energy_per_part(d, b.machines, b.part_count, window);
                    computed.emplace(b.metric, MetricValue{v, "kWh/part"});
                    break;
                }
                case BindingKind::MachineShare: {
                    if (!d.has_machine(b.share_machine)) {
                        missing("machine '" + b.share_machine + "' has no records");
                        return;
                    }
                    const auto shares = machine_share(d, window);
                    computed.emplace(b.metric, MetricValue{shares.at(b.share_machine), "fraction"});
                    break;
                }
                case BindingKind::EnergyTotal: {
                    const telemetry::EnergyResult e = telemetry::window_energy(d, b.machines, window);
                    computed.emplace(b.metric, MetricValue{e.total, "kWh"});
                    break;
                }
                case BindingKind::PartCount: {
                    if (!d.has_machine(b.part_count.machine)) {
                        missing("machine '" + b.part_count.machine + "' has no records");
                        return;
                    }
                    const auto n = telemetry::count_events(d, b.part_count.machine,
                                                           b.part_count.event, b.part_count.rule,
                                                           window);
                    computed.emplace(b.metric, MetricValue{static_cast<double>(n), "parts"});
                    break;
                }
                case BindingKind::FlowTotal: {
                    std::string unit;
                    bool any = false, mixed = false;
                    for (const telemetry::ManualRecord& r : d.manual_flows) {
                        if (r.flow_name != b.flow_name) continue;
                        if (!any) unit = r.unit;
                        else if (unit != r.unit) mixed = true;
                        any = true;
                    }
                    if (!any) {
                        missing("no manual flow named '" + b.flow_name + "'");
                        return;
                    }
                    if (mixed) {
                        findings.push_back(PipelineFinding{
                            "COMPUTE_ERROR", b.metric,
                            "manual flow '" + b.flow_name + "' mixes units"});
                        return;
                    }
                    computed.emplace(b.metric, MetricValue{flow_total(d, b.flow_name, window), unit});
                    break;
                }
            }
        } catch (const Error& e) {
            findings.push_back(PipelineFinding{"COMPUTE_ERROR", b.metric, e.what()});
        }
    }
};

}  // namespace

KpiReport run_pipeline(const KpiSpec& spec, const telemetry::Dataset& d,
                       std::optional<TimeWindow> window) {
    KpiReport report;
    report.goal = spec.goal;
    report.window = window ? *window : pipeline_window(d);
    report.skipped_sections = spec.unexecuted_sections;

    MetricComputer computer{d, report.window, {}, {}, {}};

    std::vector<const KpiDef*> ordered;
    for (const KpiDef& def : spec.kpis) ordered.push_back(&def);
    std::sort(ordered.begin(), ordered.end(),
              [](const KpiDef* a, const KpiDef* b) { return a->name < b->name; });

    for (const KpiDef* def : ordered) {
        KpiResult result;
        result.kpi = def->name;
        for (const std::string& metric : def->metrics) {
            const auto binding = spec.bindings.find(metric);
            if (binding == spec.bindings.end()) continue;  // load-time validation bars this
            computer.compute(binding->second);
            const auto value = computer.computed.find(metric);
            if (value != computer.computed.end()) result.metrics.emplace(metric, value->second);
        }
        std::vector<DecisionRule> applicable;
        for (const DecisionRule& rule : spec.rules)
            if (result.metrics.count(rule.metric)) applicable.push_back(rule);
        result.flags = evaluate_flags(result.metrics, applicable);
        report.results.push_back(std::move(result));
    }

    report.findings = std::move(computer.findings);
    return report;
}

}  // namespace usfm::kpi
