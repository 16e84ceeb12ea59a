#pragma once

#include <string>
#include <vector>

#include "usfm/flow.hpp"
#include "usfm/util/time.hpp"

namespace usfm::telemetry {

// One machine log entry. energy_kwh is the energy drawn since the machine's
// previous record (interval convention); a file of cumulative meter readings
// is first-differenced at ingest.
struct MachineRecord {
    Instant timestamp;
    std::string machine;
    std::string event;
    double energy_kwh = 0.0;

    bool operator==(const MachineRecord&) const = default;
};

// One manually collected flow covering a period.
struct ManualRecord {
    Instant period_start;
    Instant period_end;  // half-open, must be >= start
    std::string flow_name;
    double amount = 0.0;
    std::string unit;
    FlowDirection direction = FlowDirection::Input;
    std::string source_note;

    bool operator==(const ManualRecord&) const = default;
};

struct Dataset {
    std::vector<std::string> provenance;      // sorted unique source paths
    std::vector<MachineRecord> records;       // sorted by (timestamp, machine)
    std::vector<ManualRecord> manual_flows;   // sorted by (start, end, name, direction)

    bool operator==(const Dataset&) const = default;

    std::vector<std::string> machines() const;  // sorted unique
    bool has_machine(const std::string& name) const;
};

// Versioned line-oriented container (magic "USFM-DATASET v1", then tagged
// CSV-encoded lines). save/load round-trip bit-exactly, doubles included.
void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);  // Error("dataset-format"|"unreadable-file")

}  // namespace usfm::telemetry
