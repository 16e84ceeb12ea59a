#include "usfm/telemetry/ingest.hpp"

#include <algorithm>
#include <map>

#include "usfm/error.hpp"
#include "usfm/util/csv.hpp"
#include "usfm/util/text.hpp"

namespace usfm::telemetry {

std::string format_diagnostic(const IngestDiagnostic& d) {
    std::string out = d.file;
    if (d.line > 0) out += " line " + std::to_string(d.line);
    out += ": [" + d.code + "] " + d.message;
    return out;
}

namespace {

const std::vector<std::string> kMachineHeader = {"timestamp", "machine_id", "event",
                                                 "energy_kwh"};
const std::vector<std::string> kManualHeader = {"period_start", "period_end", "flow_name",
                                                "amount",       "unit",       "direction",
                                                "source_note"};

struct PendingRecord {
    MachineRecord record;
    size_t file_index = 0;
    int line = 0;
    bool from_csv = false;
    std::string file;
};

struct Ingestor {
    const IngestOptions& options;
    std::vector<IngestDiagnostic>& diagnostics;
    std::vector<PendingRecord> pending;
    std::vector<ManualRecord> manual;
    std::vector<std::string> provenance;

    void fail_row(const std::string& file, int line, const char* code, std::string msg) {
        diagnostics.push_back(IngestDiagnostic{file, line, code, std::move(msg)});
    }

    void read_machine_csv(const std::string& path, const std::vector<csv::Row>& rows,
                          size_t file_index) {
        for (size_t i = 1; i < rows.size(); ++i) {
            const csv::Row& row = rows[i];
            if (row.fields.size() != 4) {
                fail_row(path, row.line, "BAD_FIELD",
                         "expected 4 fields, got " + std::to_string(row.fields.size()));
                continue;
            }
            const auto ts = parse_instant(row.fields[0]);
            if (!ts) {
                fail_row(path, row.line, "BAD_FIELD", "unparseable timestamp '" + row.fields[0] + "'");
                continue;
            }
            const std::string machine = normalize_space(row.fields[1]);
            const std::string event = normalize_space(row.fields[2]);
            if (machine.empty() || event.empty()) {
                fail_row(path, row.line, "BAD_FIELD", "machine_id and event must be nonempty");
                continue;
            }
            const auto energy = parse_double(row.fields[3]);
            if (!energy) {
                fail_row(path, row.line, "BAD_FIELD", "unparseable energy '" + row.fields[3] + "'");
                continue;
            }
            if (*energy < 0.0) {
                fail_row(path, row.line, "NEG_ENERGY",
                         "negative energy " + row.fields[3] + " for machine '" + machine + "'");
                continue;
            }
            pending.push_back(PendingRecord{MachineRecord{*ts, machine, event, *energy},
                                            file_index, row.line, true, path});
        }
    }

    void read_manual_csv(const std::string& path, const std::vector<csv::Row>& rows) {
        for (size_t i = 1; i < rows.size(); ++i) {
            const csv::Row& row = rows[i];
            if (row.fields.size() != 7) {
                fail_row(path, row.line, "BAD_FIELD",
                         "expected 7 fields, got " + std::to_string(row.fields.size()));
                continue;
            }
            const auto start = parse_instant(row.fields[0]);
            const auto end = parse_instant(row.fields[1]);
            if (!start || !end) {
                fail_row(path, row.line, "BAD_FIELD", "unparseable period timestamp");
                continue;
            }
            if (*end < *start) {
                fail_row(path, row.line, "BAD_PERIOD", "period_end precedes period_start");
                continue;
            }
            const std::string flow = normalize_space(row.fields[2]);
            const auto amount = parse_double(row.fields[3]);
            const std::string unit = normalize_space(row.fields[4]);
            const auto direction = flow_direction_from(normalize_space(row.fields[5]));
            if (flow.empty() || !amount || unit.empty()) {
                fail_row(path, row.line, "BAD_FIELD", "bad flow_name, amount, or unit");
                continue;
            }
            if (!direction) {
                fail_row(path, row.line, "BAD_DIRECTION",
                         "direction must be 'input' or 'output', got '" + row.fields[5] + "'");
                continue;
            }
            manual.push_back(ManualRecord{*start, *end, flow, *amount, unit, *direction,
                                          row.fields[6]});
        }
    }

    void read_container(const std::string& path, size_t file_index) {
        const Dataset loaded = load_dataset(path);
        for (const MachineRecord& r : loaded.records)
            pending.push_back(PendingRecord{r, file_index, 0, false, path});
        manual.insert(manual.end(), loaded.manual_flows.begin(), loaded.manual_flows.end());
        provenance.insert(provenance.end(), loaded.provenance.begin(), loaded.provenance.end());
    }
};

}  // namespace

IngestResult ingest(std::vector<std::string> paths, const IngestOptions& options) {
    IngestResult result;
    Ingestor ingestor{options, result.diagnostics, {}, {}, {}};

    // canonical file order makes the whole pipeline argument-order-insensitive
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());

    for (size_t i = 0; i < paths.size(); ++i) {
        const std::string& path = paths[i];
        const std::string text = read_text_file(path);
        if (text.rfind("USFM-DATASET", 0) == 0) {
            ingestor.read_container(path, i);
            continue;
        }
        const std::vector<csv::Row> rows = csv::parse(text);
        if (rows.empty()) throw Error("header-mismatch", path + ": empty file");
        if (rows[0].fields == kMachineHeader) {
            ingestor.read_machine_csv(path, rows, i);
            ingestor.provenance.push_back(path);
        } else if (rows[0].fields == kManualHeader) {
            ingestor.read_manual_csv(path, rows);
            ingestor.provenance.push_back(path);
        } else {
            throw Error("header-mismatch", path + ": unrecognized header '" +
                                               csv::encode_row(rows[0].fields) + "'");
        }
    }

    std::stable_sort(ingestor.pending.begin(), ingestor.pending.end(),
                     [](const PendingRecord& a, const PendingRecord& b) {
                         if (a.record.timestamp != b.record.timestamp)
                             return a.record.timestamp < b.record.timestamp;
                         if (a.record.machine != b.record.machine)
                             return a.record.machine < b.record.machine;
                         if (a.file_index != b.file_index) return a.file_index < b.file_index;
                         return a.line < b.line;
                     });

    // duplicate (timestamp, machine) pairs: first in canonical order wins
    std::vector<PendingRecord> deduped;
    deduped.reserve(ingestor.pending.size());
    for (PendingRecord& p : ingestor.pending) {
        if (!deduped.empty() &&
            deduped.back().record.timestamp == p.record.timestamp &&
            deduped.back().record.machine == p.record.machine) {
            result.diagnostics.push_back(IngestDiagnostic{
                p.file, p.line, "DUP_RECORD",
                "duplicate record for machine '" + p.record.machine + "' at " +
                    format_instant(p.record.timestamp)});
            continue;
        }
        deduped.push_back(std::move(p));
    }

    if (options.cumulative) {
        // meter readings to interval energies, per machine over csv records
        std::map<std::string, double> previous_reading;
        std::vector<PendingRecord> converted;
        converted.reserve(deduped.size());
        for (PendingRecord& p : deduped) {
            if (!p.from_csv) {
                converted.push_back(std::move(p));
                continue;
            }
            const double reading = p.record.energy_kwh;
            const auto it = previous_reading.find(p.record.machine);
            if (it == previous_reading.end()) {
                previous_reading.emplace(p.record.machine, reading);
                p.record.energy_kwh = 0.0;
                converted.push_back(std::move(p));
                continue;
            }
            const double diff = reading - it->second;
            it->second = reading;  // a reset still re-anchors later intervals
            if (diff < 0.0) {
                result.diagnostics.push_back(IngestDiagnostic{
                    p.file, p.line, "NONMONOTONE_METER",
                    "cumulative reading decreased for machine '" + p.record.machine + "' at " +
                        format_instant(p.record.timestamp)});
                continue;
            }
            p.record.energy_kwh = diff;
            converted.push_back(std::move(p));
        }
        deduped = std::move(converted);
    }

    result.dataset.records.reserve(deduped.size());
    for (PendingRecord& p : deduped) result.dataset.records.push_back(std::move(p.record));

    std::sort(ingestor.manual.begin(), ingestor.manual.end(),
              [](const ManualRecord& a, const ManualRecord& b) {
                  if (a.period_start != b.period_start) return a.period_start < b.period_start;
                  if (a.period_end != b.period_end) return a.period_end < b.period_end;
                  if (a.flow_name != b.flow_name) return a.flow_name < b.flow_name;
                  if (a.direction != b.direction) return a.direction < b.direction;
                  return a.source_note < b.source_note;
              });
    result.dataset.manual_flows = std::move(ingestor.manual);

    std::sort(ingestor.provenance.begin(), ingestor.provenance.end());
    ingestor.provenance.erase(std::unique(ingestor.provenance.begin(), ingestor.provenance.end()),
                              ingestor.provenance.end());
    result.dataset.provenance = std::move(ingestor.provenance);

    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                     [](const IngestDiagnostic& a, const IngestDiagnostic& b) {
                         if (a.file != b.file) return a.file < b.file;
                         return a.line < b.line;
                     });
    return result;
}

}  // namespace usfm::telemetry
