#include "usfm/telemetry/query.hpp"

#include <algorithm>

#include "usfm/error.hpp"

namespace usfm::telemetry {

TimeWindow full_span(const Dataset& d) {
    if (d.records.empty()) throw Error("empty-dataset", "dataset has no machine records");
    return TimeWindow{d.records.front().timestamp, Instant{d.records.back().timestamp.ms + 1}};
}

EnergyResult window_energy(const Dataset& d, const std::vector<std::string>& machines,
                           TimeWindow window) {
    EnergyResult result;
    for (const std::string& m : machines) {
        if (!d.has_machine(m)) throw Error("unknown-machine", "no records for machine '" + m + "'");
        result.per_machine.emplace(m, 0.0);
    }
    if (window.empty()) {
        result.empty_window = true;
        if (machines.empty())
            for (const std::string& m : d.machines()) result.per_machine.emplace(m, 0.0);
        return result;
    }
    const bool all = machines.empty();
    if (all)
        for (const std::string& m : d.machines()) result.per_machine.emplace(m, 0.0);

    for (const MachineRecord& r : d.records) {
        if (!window.contains(r.timestamp)) continue;
        const auto it = result.per_machine.find(r.machine);
        if (it == result.per_machine.end()) continue;
        it->second += r.energy_kwh;
    }
    for (const auto& [machine, energy] : result.per_machine) result.total += energy;
    return result;
}

std::int64_t count_events(const Dataset& d, const std::string& machine, const std::string& event,
                          CountRule rule, TimeWindow window) {
    if (!d.has_machine(machine))
        throw Error("unknown-machine", "no records for machine '" + machine + "'");

    std::int64_t count = 0;
    const std::string* previous_event = nullptr;
    for (const MachineRecord& r : d.records) {
        if (r.machine != machine) continue;
        const bool matches = r.event == event;
        const bool in_window = window.contains(r.timestamp);
        if (matches && in_window) {
            if (rule == CountRule::Occurrences)
                ++count;
            else if (!previous_event || *previous_event != event)
                ++count;
        }
        previous_event = &r.event;
    }
    return count;
}

}  // namespace usfm::telemetry
