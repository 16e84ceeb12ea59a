#include "usfm/telemetry/dataset.hpp"

#include <algorithm>
#include <cstdio>

#include "usfm/error.hpp"
#include "usfm/util/csv.hpp"
#include "usfm/util/text.hpp"

namespace usfm::telemetry {

std::vector<std::string> Dataset::machines() const {
    std::vector<std::string> out;
    for (const MachineRecord& r : records)
        if (out.empty() || out.back() != r.machine) out.push_back(r.machine);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Dataset::has_machine(const std::string& name) const {
    for (const MachineRecord& r : records)
        if (r.machine == name) return true;
    return false;
}

namespace {

constexpr std::string_view kMagic = "USFM-DATASET v1";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void save_dataset(const Dataset& d, const std::string& path) {
    std::string out(kMagic);
    out += '\n';
    for (const std::string& p : d.provenance) {
        out += csv::encode_row({"P", p});
        out += '\n';
    }
    for (const MachineRecord& r : d.records) {
        out += csv::encode_row(
            {"M", format_instant(r.timestamp), r.machine, r.event, format_double(r.energy_kwh)});
        out += '\n';
    }
    for (const ManualRecord& r : d.manual_flows) {
        out += csv::encode_row({"F", format_instant(r.period_start), format_instant(r.period_end),
                                r.flow_name, format_double(r.amount), r.unit,
                                std::string(to_string(r.direction)), r.source_note});
        out += '\n';
    }
    write_text_file(path, out);
}

Dataset load_dataset(const std::string& path) {
    const std::string text = read_text_file(path);
    const size_t eol = text.find('\n');
    if (text.compare(0, kMagic.size(), kMagic) != 0 ||
        normalize_space(text.substr(0, eol)) != kMagic)
        throw Error("dataset-format", path + ": missing container magic");

    Dataset d;
    const std::vector<csv::Row> rows =
        csv::parse(eol == std::string::npos ? std::string_view{} : std::string_view(text).substr(eol + 1));
    for (const csv::Row& row : rows) {
        const std::string where = path + " line " + std::to_string(row.line + 1);
        if (row.fields.empty()) continue;
        const std::string& tag = row.fields[0];
        if (tag == "P") {
            if (row.fields.size() != 2) throw Error("dataset-format", where + ": bad P record");
            d.provenance.push_back(row.fields[1]);
        } else if (tag == "M") {
            if (row.fields.size() != 5) throw Error("dataset-format", where + ": bad M record");
            MachineRecord r;
            const auto ts = parse_instant(row.fields[1]);
            const auto energy = parse_double(row.fields[4]);
            if (!ts || !energy)
                throw Error("dataset-format", where + ": bad timestamp or energy");
            r.timestamp = *ts;
            r.machine = row.fields[2];
            r.event = row.fields[3];
            r.energy_kwh = *energy;
            d.records.push_back(std::move(r));
        } else if (tag == "F") {
            if (row.fields.size() != 8) throw Error("dataset-format", where + ": bad F record");
            ManualRecord r;
            const auto start = parse_instant(row.fields[1]);
            const auto end = parse_instant(row.fields[2]);
            const auto amount = parse_double(row.fields[4]);
            const auto direction = flow_direction_from(row.fields[6]);
            if (!start || !end || !amount || !direction)
                throw Error("dataset-format", where + ": bad field in F record");
            r.period_start = *start;
            r.period_end = *end;
            r.flow_name = row.fields[3];
            r.amount = *amount;
            r.unit = row.fields[5];
            r.direction = *direction;
            r.source_note = row.fields[7];
            d.manual_flows.push_back(std::move(r));
        } else {
            throw Error("dataset-format", where + ": unknown record tag '" + tag + "'");
        }
    }
    return d;
}

}  // namespace usfm::telemetry
