#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "usfm/telemetry/dataset.hpp"

namespace usfm::telemetry {

// [first record, last record + 1ms): the half-open window that contains every
// record. Throws Error("empty-dataset") when there are no machine records.
TimeWindow full_span(const Dataset& d);

struct EnergyResult {
    std::map<std::string, double> per_machine;
    double total = 0.0;
    bool empty_window = false;  // window was empty; all sums are zero
};

// Sums interval energy of records whose timestamp lies in the half-open
// window. An empty machine filter means all machines; naming a machine absent
// from the dataset throws Error("unknown-machine").
EnergyResult window_energy(const Dataset& d, const std::vector<std::string>& machines,
                           TimeWindow window);

enum class CountRule { Transitions, Occurrences };

// Occurrences: records of the machine inside the window whose event matches.
// Transitions: those that additionally differ from the machine's previous
// record (looked up in the full stream; a machine's first record counts).
std::int64_t count_events(const Dataset& d, const std::string& machine, const std::string& event,
                          CountRule rule, TimeWindow window);

}  // namespace usfm::telemetry
