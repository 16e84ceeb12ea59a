#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "usfm/error.hpp"
#include "usfm/kpi/engine.hpp"
#include "usfm/lca/assess.hpp"
#include "usfm/lca/inventory.hpp"
#include "usfm/opl/model_json.hpp"
#include "usfm/opl/parse.hpp"
#include "usfm/opl/render.hpp"
#include "usfm/opm/validate.hpp"
#include "usfm/report.hpp"
#include "usfm/sms/conformance.hpp"
#include "usfm/telemetry/ingest.hpp"
#include "usfm/util/text.hpp"

namespace {

// Exit contract: 0 success, 1 domain findings of error severity,
// 2 usage/input errors, 3 decision flag raised under --strict-flags.
constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;
constexpr int kFlagTrip = 3;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        usfm::write_text_file(out_path, text);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// .opl sources are parsed (diagnostics to stderr, nullopt on error
// diagnostics); anything else must be a model JSON document.
std::optional<usfm::opm::Model> load_model(const std::string& path) {
    if (ends_with(path, ".opl")) {
        usfm::opl::ParseResult r = usfm::opl::parse_file(path);
        for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d) << "\n";
        if (r.has_errors()) return std::nullopt;
        return std::move(r.model);
    }
    return usfm::opl::model_from_json(usfm::read_text_file(path));
}

usfm::report::InputFile digest_of(const std::string& path) {
    return {path, usfm::fnv1a64_hex(usfm::read_text_file(path))};
}

std::optional<usfm::TimeWindow> parse_window(const std::string& arg) {
    if (arg.empty()) return std::nullopt;
    size_t sep = arg.find("..");
    if (sep == std::string::npos)
        throw usfm::Error("window", "expected START..END, got \"" + arg + "\"");
    std::optional<usfm::Instant> start = usfm::parse_instant(arg.substr(0, sep));
    std::optional<usfm::Instant> end = usfm::parse_instant(arg.substr(sep + 2));
    if (!start || !end) throw usfm::Error("window", "unparsable timestamp in \"" + arg + "\"");
    if (*end < *start) throw usfm::Error("window", "end precedes start");
    return usfm::TimeWindow{*start, *end};
}

usfm::telemetry::Dataset ingest_to_dataset(const std::vector<std::string>& paths,
                                           bool cumulative) {
    usfm::telemetry::IngestResult r =
        usfm::telemetry::ingest(paths, usfm::telemetry::IngestOptions{cumulative});
    for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d) << "\n";
    return std::move(r.dataset);
}

int run_parse(const std::string& input, const std::string& out, bool summary) {
    usfm::opl::ParseResult r = usfm::opl::parse_file(input);
    for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d) << "\n";
    if (r.has_errors()) return kDomainError;
    if (summary) {
        std::cout << r.model.name << ": " << r.model.things.size() << " things, "
                  << r.model.states.size() << " states, " << r.model.links.size() << " links\n";
    } else {
        emit(usfm::opl::model_to_json(r.model), out);
    }
    return kOk;
}

int run_validate(const std::string& input, const std::string& profile_name) {
    usfm::sms::Profile profile = usfm::sms::resolve_profile(profile_name);
    std::optional<usfm::opm::Model> m = load_model(input);
    if (!m) return kDomainError;

    bool errors = false;
    auto violations = usfm::opm::validate_graph(*m);
    for (const auto& v : violations)
        std::cout << "violation " << v.rule << " " << v.subject << " " << v.index << ": "
                  << v.message << "\n";
    if (!violations.empty()) errors = true;

    usfm::sms::ConformanceReport report = usfm::sms::check_conformance(*m, profile);
    for (const auto& f : report.findings)
        std::cout << to_string(f.severity) << " " << f.rule << " " << f.process_name << ": "
                  << f.detail << "\n";
    std::cout << report.error_count() << " error(s), " << report.warning_count()
              << " warning(s)\n";
    if (report.error_count() > 0) errors = true;
    return errors ? kDomainError : kOk;
}

int run_render(const std::string& input, const std::string& format, const std::string& out) {
    std::optional<usfm::opm::Model> m = load_model(input);
    if (!m) return kDomainError;
    if (format == "opl")
        emit(usfm::opl::render_opl(*m), out);
    else if (format == "dot")
        emit(usfm::opl::export_dot(*m), out);
    else
        emit(usfm::opl::model_to_json(*m), out);
    return kOk;
}

int run_ingest(const std::vector<std::string>& inputs, const std::string& out, bool cumulative) {
    usfm::telemetry::Dataset d = ingest_to_dataset(inputs, cumulative);
    usfm::telemetry::save_dataset(d, out);
    std::cout << "wrote " << out << ": " << d.records.size() << " machine record(s), "
              << d.manual_flows.size() << " manual flow(s), " << d.machines().size()
              << " machine(s)\n";
    return kOk;
}

int run_kpi(const std::string& spec_path, const std::vector<std::string>& data,
            const std::string& window_arg, bool cumulative, bool as_json, bool strict_flags) {
    usfm::kpi::KpiSpec spec = usfm::kpi::load_kpi_spec(spec_path);
    usfm::telemetry::Dataset dataset = ingest_to_dataset(data, cumulative);
    usfm::kpi::KpiReport report =
        usfm::kpi::run_pipeline(spec, dataset, parse_window(window_arg));
    std::cout << (as_json ? usfm::report::kpi_report_json(report)
                          : usfm::report::kpi_report_text(report));
    if (strict_flags)
        for (const auto& res : report.results)
            for (const auto& f : res.flags)
                if (f.raised) return kFlagTrip;
    return kOk;
}

int run_lca(const std::string& inventory_path, const std::string& matrix_path,
            const std::string& policy_name, bool as_json) {
    usfm::lca::Inventory inventory = usfm::lca::load_inventory(inventory_path);
    usfm::lca::CharacterizationMatrix matrix = usfm::lca::load_matrix(matrix_path);
    usfm::lca::MissingFlowPolicy policy = policy_name == "warn-zero"
                                              ? usfm::lca::MissingFlowPolicy::WarnZero
                                              : usfm::lca::MissingFlowPolicy::Error;
    usfm::lca::ImpactScores scores;
    try {
        scores = usfm::lca::assess(inventory, matrix, policy);
    } catch (const usfm::Error& e) {
        std::cerr << "usfm: " << e.what() << "\n";
        return kDomainError;
    }
    if (as_json) {
        nlohmann::ordered_json j;
        j["impacts"] = nlohmann::ordered_json::object();
        for (const auto& [cat, score] : scores.by_category)
            j["impacts"][cat] = {{"value", score.value}, {"unit", score.unit}};
        j["uncharacterized"] = scores.uncharacterized;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [cat, score] : scores.by_category)
            std::cout << cat << ": " << score.value << " " << score.unit << "\n";
        if (!scores.uncharacterized.empty()) {
            std::cout << "uncharacterized (contributed zero):";
            for (const auto& n : scores.uncharacterized) std::cout << " \"" << n << "\"";
            std::cout << "\n";
        }
    }
    return kOk;
}

struct ReportArgs {
    std::string model, system, kpi_spec, inventory, matrix, profile = "default";
    std::vector<std::string> data;
    std::string window, policy = "error", out, stamp;
    bool cumulative = false, as_json = false, strict_flags = false;
};

int run_report(const ReportArgs& a) {
    usfm::report::Inputs inputs;
    inputs.profile = usfm::sms::resolve_profile(a.profile);
    inputs.missing_flow_policy = a.policy == "warn-zero" ? usfm::lca::MissingFlowPolicy::WarnZero
                                                         : usfm::lca::MissingFlowPolicy::Error;
    if (!a.stamp.empty()) inputs.stamp = a.stamp;

    if (!a.model.empty()) {
        std::optional<usfm::opm::Model> m = load_model(a.model);
        if (!m) return kDomainError;
        inputs.model = std::move(*m);
        inputs.model_file = digest_of(a.model);
    }
    if (!a.system.empty()) {
        inputs.system_record = usfm::sms::system_record_from_json(usfm::read_text_file(a.system));
        inputs.system_file = digest_of(a.system);
    }
    if (!a.data.empty()) {
        inputs.dataset = ingest_to_dataset(a.data, a.cumulative);
        std::vector<std::string> sorted = a.data;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (const auto& p : sorted) inputs.dataset_files.push_back(digest_of(p));
    }
    if (!a.kpi_spec.empty()) {
        inputs.kpi_spec = usfm::kpi::load_kpi_spec(a.kpi_spec);
        inputs.kpi_file = digest_of(a.kpi_spec);
    }
    if (!a.inventory.empty()) {
        inputs.inventory = usfm::lca::load_inventory(a.inventory);
        inputs.inventory_file = digest_of(a.inventory);
    }
    if (!a.matrix.empty()) {
        inputs.matrix = usfm::lca::load_matrix(a.matrix);
        inputs.matrix_file = digest_of(a.matrix);
    }

    usfm::report::Document doc = usfm::report::build_report(inputs);
    emit(a.as_json ? doc.json : doc.text, a.out);
    if (doc.has_errors) return kDomainError;
    if (a.strict_flags && doc.flags_raised) return kFlagTrip;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"factory modeling toolkit: object-process models, conformance, telemetry KPIs, impact assessment"};
    app.require_subcommand(1);

    std::string in_path, out_path, format = "json", profile = "default";
    std::string spec_path, inventory_path, matrix_path, window_arg, policy = "error";
    std::vector<std::string> data_paths;
    bool summary = false, cumulative = false, as_json = false, strict_flags = false;
    ReportArgs report_args;

    CLI::App* parse_cmd = app.add_subcommand("parse", "parse an OPL document into a model");
    parse_cmd->add_option("input", in_path, "OPL file")->required();
    parse_cmd->add_option("-o,--output", out_path, "model JSON output path (default stdout)");
    parse_cmd->add_flag("--summary", summary, "print counts instead of the model");

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "check graph legality and template conformance");
    validate_cmd->add_option("input", in_path, "OPL or model JSON file")->required();
    validate_cmd->add_option("--profile", profile,
                             "severity profile: default, a name under USFM_PROFILE_DIR, or a path");

    CLI::App* render_cmd = app.add_subcommand("render", "render a model");
    render_cmd->add_option("input", in_path, "OPL or model JSON file")->required();
    render_cmd->add_option("--format", format, "opl, dot or json")
        ->check(CLI::IsMember({"opl", "dot", "json"}));
    render_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "merge telemetry and manual CSVs into a dataset container");
    ingest_cmd->add_option("inputs", data_paths, "CSV files or dataset containers")->required();
    ingest_cmd->add_option("-o,--output", out_path, "dataset output path")->required();
    ingest_cmd->add_flag("--cumulative", cumulative,
                         "machine logs carry cumulative meter readings");

    CLI::App* kpi_cmd = app.add_subcommand("kpi", "run a KPI spec against telemetry");
    kpi_cmd->add_option("--spec", spec_path, "KPI spec JSON")->required();
    kpi_cmd->add_option("data", data_paths, "dataset containers or CSVs")->required();
    kpi_cmd->add_option("--window", window_arg, "evaluation window START..END (default full span)");
    kpi_cmd->add_flag("--cumulative", cumulative, "machine logs carry cumulative meter readings");
    kpi_cmd->add_flag("--json", as_json, "machine-readable output");
    kpi_cmd->add_flag("--strict-flags", strict_flags, "exit 3 when a decision flag is raised");

    CLI::App* lca_cmd = app.add_subcommand("lca", "characterize an inventory into impact scores");
    lca_cmd->add_option("--inventory", inventory_path, "inventory CSV")->required();
    lca_cmd->add_option("--matrix", matrix_path, "characterization matrix CSV")->required();
    lca_cmd->add_option("--missing-flow", policy, "error or warn-zero")
        ->check(CLI::IsMember({"error", "warn-zero"}));
    lca_cmd->add_flag("--json", as_json, "machine-readable output");

    CLI::App* report_cmd =
        app.add_subcommand("report", "combined assessment document over any subset of inputs");
    report_cmd->add_option("--model", report_args.model, "OPL or model JSON file");
    report_cmd->add_option("--system", report_args.system, "system record JSON");
    report_cmd->add_option("--data", report_args.data, "dataset containers or CSVs");
    report_cmd->add_option("--kpi-spec", report_args.kpi_spec, "KPI spec JSON");
    report_cmd->add_option("--inventory", report_args.inventory, "inventory CSV");
    report_cmd->add_option("--matrix", report_args.matrix, "characterization matrix CSV");
    report_cmd->add_option("--profile", report_args.profile, "conformance severity profile");
    report_cmd->add_option("--missing-flow", report_args.policy, "error or warn-zero")
        ->check(CLI::IsMember({"error", "warn-zero"}));
    report_cmd->add_flag("--cumulative", report_args.cumulative,
                         "machine logs carry cumulative meter readings");
    report_cmd->add_option("--stamp", report_args.stamp,
                           "embed this generation stamp (omitted by default for determinism)");
    report_cmd->add_option("-o,--output", report_args.out, "output path (default stdout)");
    report_cmd->add_flag("--json", report_args.as_json, "machine-readable output");
    report_cmd->add_flag("--strict-flags", report_args.strict_flags,
                         "exit 3 when a decision flag is raised");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageError;
    }

    try {
        if (parse_cmd->parsed()) return run_parse(in_path, out_path, summary);
        if (validate_cmd->parsed()) return run_validate(in_path, profile);
        if (render_cmd->parsed()) return run_render(in_path, format, out_path);
        if (ingest_cmd->parsed()) return run_ingest(data_paths, out_path, cumulative);
        if (kpi_cmd->parsed())
            return run_kpi(spec_path, data_paths, window_arg, cumulative, as_json, strict_flags);
        if (lca_cmd->parsed()) return run_lca(inventory_path, matrix_path, policy, as_json);
        if (report_cmd->parsed()) return run_report(report_args);
    } catch (const usfm::Error& e) {
        std::cerr << "usfm: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}
