#pragma once

#include <string>
#include <vector>

#include "usfm/telemetry/dataset.hpp"

namespace usfm::telemetry {

struct IngestOptions {
    // Treat machine-log energy values as cumulative meter readings and
    // first-difference them per machine after merging.
    bool cumulative = false;
};

struct IngestDiagnostic {
    std::string file;
    int line = 0;
    std::string code;     // DUP_RECORD, NEG_ENERGY, BAD_FIELD, BAD_PERIOD, ...
    std::string message;
};

std::string format_diagnostic(const IngestDiagnostic& d);

struct IngestResult {
    Dataset dataset;
    std::vector<IngestDiagnostic> diagnostics;
};

// Ingests machine-log CSVs (header timestamp,machine_id,event,energy_kwh),
// manual CSVs (header period_start,period_end,flow_name,amount,unit,
// direction,source_note) and saved dataset containers, in any mix. The result
// is independent of argument order: files are processed in sorted-path order
// and records keep a total (timestamp, machine) order. Malformed rows are
// skipped with one diagnostic each; an unreadable file or unrecognized header
// throws usfm::Error.
IngestResult ingest(std::vector<std::string> paths, const IngestOptions& options = {});

}  // namespace usfm::telemetry
