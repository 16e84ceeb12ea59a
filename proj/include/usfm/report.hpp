#pragma once

#include <optional>
#include <string>
#include <vector>

#include "usfm/kpi/engine.hpp"
#include "usfm/lca/assess.hpp"
#include "usfm/opm/model.hpp"
#include "usfm/sms/conformance.hpp"
#include "usfm/sms/taxonomy.hpp"
#include "usfm/telemetry/dataset.hpp"

namespace usfm::report {

struct InputFile {
    std::string path;
    std::string digest;  // fnv1a-64 hex of the file bytes
};

// Everything a combined report can cover; absent sections render as "no data".
struct Inputs {
    std::optional<opm::Model> model;
    std::optional<InputFile> model_file;

    std::optional<sms::SystemRecord> system_record;
    std::optional<InputFile> system_file;

    std::optional<telemetry::Dataset> dataset;
    std::vector<InputFile> dataset_files;

    std::optional<kpi::KpiSpec> kpi_spec;
    std::optional<InputFile> kpi_file;

    std::optional<lca::Inventory> inventory;
    std::optional<InputFile> inventory_file;

    std::optional<lca::CharacterizationMatrix> matrix;
    std::optional<InputFile> matrix_file;

    sms::Profile profile = sms::Profile::default_profile();
    lca::MissingFlowPolicy missing_flow_policy = lca::MissingFlowPolicy::Error;

    // Reports carry no timestamp unless one is passed in explicitly, so equal
    // inputs produce byte-identical documents.
    std::optional<std::string> stamp;
};

struct Document {
    std::string text;
    std::string json;
    bool has_errors = false;    // graph violations, conformance errors, LCA abort
    bool flags_raised = false;  // at least one decision flag fired
};

Document build_report(const Inputs& inputs);

// Shared renderers, also used by the narrower CLI subcommands.
std::string kpi_report_text(const kpi::KpiReport& report);
std::string kpi_report_json(const kpi::KpiReport& report);

}  // namespace usfm::report
