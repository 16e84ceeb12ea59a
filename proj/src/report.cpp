#include "usfm/report.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>
#include "usfm/error.hpp"
#include "usfm/opm/validate.hpp"

namespace usfm::report {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ordered_json file_json(const InputFile& f) {
    return ordered_json{{"path", f.path}, {"digest", f.digest}};
}

ordered_json window_json(TimeWindow w) {
    return ordered_json{{"start", format_instant(w.start)}, {"end", format_instant(w.end)}};
}

ordered_json kpi_json(const kpi::KpiReport& r) {
    ordered_json results = ordered_json::array();
    for (const auto& res : r.results) {
        ordered_json metrics = ordered_json::object();
        for (const auto& [name, mv] : res.metrics)
            metrics[name] = ordered_json{{"value", mv.value}, {"unit", mv.unit}};
        ordered_json flags = ordered_json::array();
        for (const auto& f : res.flags)
            flags.push_back(ordered_json{{"flag", f.rule.flag},
                                         {"metric", f.rule.metric},
                                         {"comparator", f.rule.comparator},
                                         {"threshold", f.rule.threshold},
                                         {"value", f.value},
                                         {"raised", f.raised}});
        results.push_back(
            ordered_json{{"kpi", res.kpi}, {"metrics", metrics}, {"flags", flags}});
    }
    ordered_json findings = ordered_json::array();
    for (const auto& f : r.findings)
        findings.push_back(
            ordered_json{{"code", f.code}, {"metric", f.metric}, {"message", f.message}});
    return ordered_json{{"goal", r.goal},
                        {"window", window_json(r.window)},
                        {"results", results},
                        {"findings", findings},
                        {"skipped_sections", r.skipped_sections}};
}

void kpi_text(std::ostringstream& out, const kpi::KpiReport& r, const std::string& indent) {
    out << indent << "goal: " << r.goal << "\n";
    out << indent << "window: " << format_instant(r.window.start) << " .. "
        << format_instant(r.window.end) << "\n";
    for (const auto& res : r.results) {
        out << indent << res.kpi << "\n";
        for (const auto& [name, mv] : res.metrics)
            out << indent << "  " << name << " = " << num(mv.value) << " " << mv.unit << "\n";
        for (const auto& f : res.flags)
            out << indent << "  flag " << f.rule.flag << (f.raised ? " RAISED" : " not raised")
                << " (" << f.rule.metric << " " << f.rule.comparator << " "
                << num(f.rule.threshold) << ", value " << num(f.value) << ")\n";
    }
    if (r.findings.empty()) {
        out << indent << "findings: none\n";
    } else {
        out << indent << "findings:\n";
        for (const auto& f : r.findings)
            out << indent << "  [" << f.code << "] " << f.metric << ": " << f.message << "\n";
    }
    if (!r.skipped_sections.empty()) {
        out << indent << "skipped sections:";
        for (const auto& s : r.skipped_sections) out << " " << s;
        out << "\n";
    }
}

void heading(std::ostringstream& out, const std::string& title) {
    out << "\n" << title << "\n" << std::string(title.size(), '-') << "\n";
}

}  // namespace

std::string kpi_report_text(const kpi::KpiReport& r) {
    std::ostringstream out;
    kpi_text(out, r, "");
    return out.str();
}

std::string kpi_report_json(const kpi::KpiReport& r) {
    return kpi_json(r).dump(2) + "\n";
}

Document build_report(const Inputs& in) {
    Document doc;
    std::ostringstream out;
    ordered_json j;
    j["report"] = "usfm";
    j["version"] = 1;
    j["stamp"] = in.stamp ? ordered_json(*in.stamp) : ordered_json(nullptr);

    out << "usfm report\n===========\n";
    if (in.stamp) out << "generated: " << *in.stamp << "\n";

    // inputs: path + content digest of everything the report was built from
    heading(out, "inputs");
    ordered_json inputs = ordered_json::object();
    auto add_input = [&](const char* label, const std::optional<InputFile>& f) {
        if (!f) return;
        inputs[label] = file_json(*f);
        out << "  " << label << ": " << f->path << " (fnv1a " << f->digest << ")\n";
    };
    add_input("model", in.model_file);
    add_input("system_record", in.system_file);
    if (!in.dataset_files.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& f : in.dataset_files) {
            arr.push_back(file_json(f));
            out << "  dataset: " << f.path << " (fnv1a " << f.digest << ")\n";
        }
        inputs["dataset"] = arr;
    }
    add_input("kpi_spec", in.kpi_file);
    add_input("inventory", in.inventory_file);
    add_input("matrix", in.matrix_file);
    if (inputs.empty()) out << "  none\n";
    j["inputs"] = inputs;

    heading(out, "model");
    if (in.model) {
        const opm::Model& m = *in.model;
        auto violations = opm::validate_graph(m);
        out << "  " << m.name << ": " << m.things.size() << " things, " << m.states.size()
            << " states, " << m.links.size() << " links\n";
        char digest[32];
        std::snprintf(digest, sizeof digest, "%016llx",
                      static_cast<unsigned long long>(opm::model_digest(m)));
        out << "  digest: " << digest << "\n";
        ordered_json vj = ordered_json::array();
        if (violations.empty()) {
            out << "  validation: clean\n";
        } else {
            out << "  validation: " << violations.size() << " violation(s)\n";
            doc.has_errors = true;
        }
        for (const auto& v : violations) {
            out << "    " << v.rule << " " << v.subject << " " << v.index << ": " << v.message
                << "\n";
            vj.push_back(ordered_json{{"rule", v.rule},
                                      {"subject", v.subject},
                                      {"index", v.index},
                                      {"message", v.message}});
        }
        j["model"] = ordered_json{{"name", m.name},
                                  {"digest", digest},
                                  {"things", m.things.size()},
                                  {"states", m.states.size()},
                                  {"links", m.links.size()},
                                  {"violations", vj}};

        sms::ConformanceReport conf = sms::check_conformance(m, in.profile);
        heading(out, "conformance");
        out << "  profile: " << in.profile.name << "\n";
        out << "  " << conf.error_count() << " error(s), " << conf.warning_count()
            << " warning(s)\n";
        ordered_json fj = ordered_json::array();
        for (const auto& f : conf.findings) {
            out << "    [" << to_string(f.severity) << "] " << f.process_name << " " << f.rule
                << ": " << f.detail << "\n";
            fj.push_back(ordered_json{{"process", f.process.value},
                                      {"process_name", f.process_name},
                                      {"rule", f.rule},
                                      {"severity", std::string(to_string(f.severity))},
                                      {"detail", f.detail}});
        }
        if (conf.error_count() > 0) doc.has_errors = true;
        j["conformance"] = ordered_json{{"profile", in.profile.name},
                                        {"errors", conf.error_count()},
                                        {"warnings", conf.warning_count()},
                                        {"findings", fj}};
    } else {
        out << "  no data\n";
        j["model"] = nullptr;
        heading(out, "conformance");
        out << "  no data\n";
        j["conformance"] = nullptr;
    }

    heading(out, "system record");
    if (in.system_record) {
        const sms::SystemRecord& r = *in.system_record;
        auto field = [&](const char* k, const std::string& v) { out << "  " << k << ": " << v << "\n"; };
        field("product type", r.product_type);
        field("complexity", r.complexity);
        field("system classification", r.system_classification);
        field("automation level", r.automation_level);
        field("production control", r.production_control);
        field("quality control", r.quality_control);
        field("waste disposal", r.waste_disposal);
        j["system_record"] = ordered_json{{"product_type", r.product_type},
                                          {"complexity", r.complexity},
                                          {"system_classification", r.system_classification},
                                          {"automation_level", r.automation_level},
                                          {"production_control", r.production_control},
                                          {"quality_control", r.quality_control},
                                          {"waste_disposal", r.waste_disposal}};
    } else {
        out << "  no data\n";
        j["system_record"] = nullptr;
    }

    std::optional<kpi::KpiReport> kpi_report;
    heading(out, "kpi");
    if (in.kpi_spec && in.dataset) {
        kpi_report = kpi::run_pipeline(*in.kpi_spec, *in.dataset);
        kpi_text(out, *kpi_report, "  ");
        for (const auto& res : kpi_report->results)
            for (const auto& f : res.flags)
                if (f.raised) doc.flags_raised = true;
        j["kpi"] = kpi_json(*kpi_report);
    } else {
        out << "  no data\n";
        j["kpi"] = nullptr;
    }

    heading(out, "lca");
    if (in.inventory && in.matrix) {
        const lca::Inventory& inv = *in.inventory;
        out << "  functional unit: " << num(inv.fu.amount) << " " << inv.fu.unit << " "
            << inv.fu.name;
        if (inv.fu.parts_per_fu > 0) out << " (" << inv.fu.parts_per_fu << " parts)";
        out << "\n";
        out << "  missing-flow policy: "
            << (in.missing_flow_policy == lca::MissingFlowPolicy::Error ? "error" : "warn-zero")
            << "\n";
        ordered_json lj = ordered_json::object();
        lj["functional_unit"] = ordered_json{{"name", inv.fu.name},
                                             {"amount", inv.fu.amount},
                                             {"unit", inv.fu.unit},
                                             {"parts_per_fu", inv.fu.parts_per_fu}};
        lj["policy"] =
            in.missing_flow_policy == lca::MissingFlowPolicy::Error ? "error" : "warn-zero";
        try {
            lca::ImpactScores scores = lca::assess(inv, *in.matrix, in.missing_flow_policy);
            ordered_json cats = ordered_json::object();
            for (const auto& [cat, score] : scores.by_category) {
                out << "  " << cat << ": " << num(score.value) << " " << score.unit << "\n";
                cats[cat] = ordered_json{{"value", score.value}, {"unit", score.unit}};
            }
            lj["impacts"] = cats;
            lj["uncharacterized"] = scores.uncharacterized;
            if (scores.uncharacterized.empty()) {
                out << "  uncharacterized flows: none\n";
            } else {
                out << "  uncharacterized flows (contributed zero):";
                for (const auto& n : scores.uncharacterized) out << " \"" << n << "\"";
                out << "\n";
            }
        } catch (const Error& e) {
            out << "  aborted: " << e.what() << "\n";
            lj["aborted"] = e.what();
            doc.has_errors = true;
        }
        j["lca"] = lj;
    } else {
        out << "  no data\n";
        j["lca"] = nullptr;
    }

    // cross-check: inventory electricity vs the telemetry-derived kWh/part
    heading(out, "energy cross-check");
    std::optional<double> kpi_epp;
    if (kpi_report)
        for (const auto& res : kpi_report->results) {
            for (const auto& [name, mv] : res.metrics)
                if (mv.unit == "kWh/part") {
                    kpi_epp = mv.value;
                    break;
                }
            if (kpi_epp) break;
        }
    if (in.inventory && kpi_epp) {
        try {
            lca::CrossCheck cc =
                lca::energy_cross_check(*in.inventory, *kpi_epp, in.inventory->fu.parts_per_fu);
            out << "  inventory flow \"" << cc.flow_name << "\": " << num(cc.fu_electricity_kwh)
                << " kWh per functional unit, " << cc.parts_per_fu << " parts\n";
            out << "  inventory " << num(cc.inventory_kwh_per_part)
                << " kWh/part vs measured " << num(cc.kpi_kwh_per_part) << " kWh/part\n";
            char pct[32];
            std::snprintf(pct, sizeof pct, "%.4f%%", cc.relative_deviation * 100.0);
            out << "  relative deviation: " << pct << "\n";
            j["cross_check"] = ordered_json{{"flow_name", cc.flow_name},
                                            {"fu_electricity_kwh", cc.fu_electricity_kwh},
                                            {"parts_per_fu", cc.parts_per_fu},
                                            {"inventory_kwh_per_part", cc.inventory_kwh_per_part},
                                            {"kpi_kwh_per_part", cc.kpi_kwh_per_part},
                                            {"relative_deviation", cc.relative_deviation}};
        } catch (const Error& e) {
            out << "  not computed: " << e.what() << "\n";
            j["cross_check"] = ordered_json{{"not_computed", e.what()}};
        }
    } else {
        out << "  no data\n";
        j["cross_check"] = nullptr;
    }

    doc.text = out.str();
    doc.json = j.dump(2) + "\n";
    return doc;
}

}  // namespace usfm::report
