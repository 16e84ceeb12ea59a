#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usfm/kpi/spec.hpp"
#include "usfm/telemetry/query.hpp"

namespace usfm::kpi {

// Weighted-index ranking. Every candidate must carry the same criterion set;
// each candidate's weights must sum to 1 within 1e-9. Result is sorted by
// descending weighted index with ascending-name tie-break.
struct CriterionScore {
    std::string criterion;
    double weight = 0.0;
    double score = 0.0;
};

struct Candidate {
    std::string name;
    std::vector<CriterionScore> scores;
};

struct RankedCandidate {
    std::string name;
    double index = 0.0;
};

std::vector<RankedCandidate> rank_kpis(std::span<const Candidate> candidates);

// Direct metric computations. Each throws usfm::Error on an unsatisfiable
// input ("zero-parts", "zero-energy", "unknown-machine").
double energy_per_part(const telemetry::Dataset& d, const std::vector<std::string>& machines,
                       const PartCountSource& parts, TimeWindow window);

// fraction of window energy per machine; values sum to 1 within 1e-12
std::map<std::string, double> machine_share(const telemetry::Dataset& d, TimeWindow window);

double flow_total(const telemetry::Dataset& d, const std::string& flow_name, TimeWindow window);

struct MetricValue {
    double value = 0.0;
    std::string unit;
};

struct FlagResult {
    DecisionRule rule;
    double value = 0.0;
    bool raised = false;
};

// evaluate decision rules against already-computed metrics; a rule naming an
// uncomputed metric throws Error("unknown-metric")
std::vector<FlagResult> evaluate_flags(const std::map<std::string, MetricValue>& metrics,
                                       std::span<const DecisionRule> rules);

struct PipelineFinding {
    std::string code;  // MISSING_DATA, COMPUTE_ERROR
    std::string metric;
    std::string message;
};

struct KpiResult {
    std::string kpi;
    std::map<std::string, MetricValue> metrics;  // only successfully computed ones
    std::vector<FlagResult> flags;
};

struct KpiReport {
    std::string goal;
    TimeWindow window{};
    std::vector<KpiResult> results;             // ordered by KPI name
    std::vector<PipelineFinding> findings;      // per-metric failures
    std::vector<std::string> skipped_sections;  // declared but never executed
};

// Pure orchestration: same spec + dataset + window always produce an
// identical report. Unresolvable bindings become findings, not aborts.
KpiReport run_pipeline(const KpiSpec& spec, const telemetry::Dataset& d,
                       std::optional<TimeWindow> window = std::nullopt);

}  // namespace usfm::kpi
