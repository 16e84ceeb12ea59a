#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "usfm/opm/model.hpp"

namespace usfm::sms {

// Default conformance rules, each a predicate of the form "at least one
// incident link of the given kinds exists on the process":
//   INPUT_REQUIRED    consumption                (error)
//   OUTPUT_REQUIRED   result or state_change     (error)
//   ENABLER_REQUIRED  instrument or agent        (error)
//   COND_MISSING      condition                  (warning)
//   ENV_MISSING       effect                     (warning)
//   LOCTIME_MISSING   exhibited Location / Time  (warning, one finding per
//                                                 missing attribute)
// A process with only a state change still has a legal input story upstream
// (the changed object), but the template treats consumption as the input
// evidence, so INPUT_REQUIRED stays strict while OUTPUT_REQUIRED accepts a
// state change as the produced output.
enum class RuleSeverity { Error, Warning, Off };

std::string_view to_string(RuleSeverity s);
std::optional<RuleSeverity> rule_severity_from(std::string_view s);

struct Profile {
    std::string name;
    std::map<std::string, RuleSeverity> severities;

    static Profile default_profile();
    RuleSeverity severity_of(const std::string& rule) const;  // Off when unknown
};

// Profile files hold "RULE = severity" lines with '#' comments. resolve order:
// explicit path as given; otherwise "<dir>/<name>.profile" under the
// USFM_PROFILE_DIR environment variable; "default" always resolves built-in.
Profile load_profile_file(const std::string& path);
Profile resolve_profile(const std::string& name_or_path);

struct Finding {
    opm::ThingId process;
    std::string process_name;
    std::string rule;
    RuleSeverity severity;
    std::string detail;
};

struct ConformanceReport {
    std::string model_name;
    std::vector<Finding> findings;  // sorted by (process id, rule, detail)

    int error_count() const;
    int warning_count() const;
    bool clean() const { return error_count() == 0; }
};

ConformanceReport check_conformance(const opm::Model& m, const Profile& profile);

// Attribute-coverage requirements: Process targets mean "the process itself
// exhibits the attribute"; Equipment targets mean "at least one instrument of
// the process exhibits it".
enum class CoverageTarget { Process, Equipment };

struct AttributeRequirement {
    CoverageTarget target;
    std::string attribute;
};

struct CoverageGap {
    opm::ThingId process;
    std::string process_name;
    AttributeRequirement requirement;
};

std::vector<CoverageGap> attribute_coverage(const opm::Model& m,
                                            std::span<const AttributeRequirement> requirements);

}  // namespace usfm::sms
