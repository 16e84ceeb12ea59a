#include "usfm/sms/conformance.hpp"

#include <algorithm>
#include <cstdlib>

#include "usfm/error.hpp"
#include "usfm/util/text.hpp"

namespace usfm::sms {

std::string_view to_string(RuleSeverity s) {
    switch (s) {
        case RuleSeverity::Error: return "error";
        case RuleSeverity::Warning: return "warning";
        case RuleSeverity::Off: return "off";
    }
    return "off";
}

std::optional<RuleSeverity> rule_severity_from(std::string_view s) {
    if (s == "error") return RuleSeverity::Error;
    if (s == "warning") return RuleSeverity::Warning;
    if (s == "off") return RuleSeverity::Off;
    return std::nullopt;
}

Profile Profile::default_profile() {
    Profile p;
    p.name = "default";
    p.severities = {
        {"INPUT_REQUIRED", RuleSeverity::Error},
        {"OUTPUT_REQUIRED", RuleSeverity::Error},
        {"ENABLER_REQUIRED", RuleSeverity::Error},
        {"COND_MISSING", RuleSeverity::Warning},
        {"ENV_MISSING", RuleSeverity::Warning},
        {"LOCTIME_MISSING", RuleSeverity::Warning},
    };
    return p;
}

RuleSeverity Profile::severity_of(const std::string& rule) const {
    const auto it = severities.find(rule);
    return it == severities.end() ? RuleSeverity::Off : it->second;
}

Profile load_profile_file(const std::string& path) {
    Profile p = Profile::default_profile();
    std::string stem = path;
    const size_t slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    p.name = stem;

    const std::string text = read_text_file(path);
    int line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error("profile", "line " + std::to_string(line_no) + ": expected RULE = severity");
        const std::string rule = normalize_space(line.substr(0, eq));
        const std::string value = normalize_space(line.substr(eq + 1));
        const auto severity = rule_severity_from(value);
        if (rule.empty() || !severity)
            throw Error("profile",
                        "line " + std::to_string(line_no) + ": bad rule or severity '" +
                            std::string(line) + "'");
        p.severities[rule] = *severity;
    }
    return p;
}

Profile resolve_profile(const std::string& name_or_path) {
    if (name_or_path.empty() || name_or_path == "default") return Profile::default_profile();
    // bare names resolve under USFM_PROFILE_DIR; anything with a path
    // separator or a .profile suffix is taken as a literal path
    const bool looks_like_path = name_or_path.find('/') != std::string::npos ||
                                 name_or_path.find('\\') != std::string::npos ||
                                 name_or_path.ends_with(".profile");
    if (looks_like_path) return load_profile_file(name_or_path);
    const char* dir = std::getenv("USFM_PROFILE_DIR");
    if (!dir || !*dir)
        throw Error("profile", "profile '" + name_or_path +
                                   "' is not 'default' and USFM_PROFILE_DIR is unset");
    return load_profile_file(std::string(dir) + "/" + name_or_path + ".profile");
}

namespace {

struct LinkPresence {
    bool consumption = false;
    bool result = false;
    bool state_change = false;
    bool instrument = false;
    bool agent = false;
    bool condition = false;
    bool effect = false;
    bool exhibits_location = false;
    bool exhibits_time = false;
};

}  // namespace

int ConformanceReport::error_count() const {
    int n = 0;
    for (const Finding& f : findings) n += f.severity == RuleSeverity::Error;
    return n;
}
int ConformanceReport::warning_count() const {
    int n = 0;
    for (const Finding& f : findings) n += f.severity == RuleSeverity::Warning;
    return n;
}

ConformanceReport check_conformance(const opm::Model& m, const Profile& profile) {
    ConformanceReport report;
    report.model_name = m.name;

    for (const opm::Thing& t : m.things) {
        if (t.kind != opm::ThingKind::Process) continue;

        LinkPresence p;
        for (const opm::Link& l : m.links) {
            if (l.source.thing == t.id) {
                switch (l.kind) {
                    case opm::LinkKind::Consumption: p.consumption = true; break;
                    case opm::LinkKind::Result: p.result = true; break;
                    case opm::LinkKind::StateChange: p.state_change = true; break;
                    case opm::LinkKind::Instrument: p.instrument = true; break;
                    case opm::LinkKind::Effect: p.effect = true; break;
                    case opm::LinkKind::Exhibition: {
                        const opm::Thing* attr = m.thing(l.target.thing);
                        if (attr && attr->name == "Location") p.exhibits_location = true;
                        if (attr && attr->name == "Time") p.exhibits_time = true;
                        break;
                    }
                    default: break;
                }
            }
            if (l.target.thing == t.id) {
                if (l.kind == opm::LinkKind::Agent) p.agent = true;
                if (l.kind == opm::LinkKind::Condition) p.condition = true;
            }
        }

        auto add = [&](const char* rule, std::string detail) {
            const RuleSeverity severity = profile.severity_of(rule);
            if (severity == RuleSeverity::Off) return;
            report.findings.push_back(Finding{t.id, t.name, rule, severity, std::move(detail)});
        };

        if (!p.consumption) add("INPUT_REQUIRED", "no consumption link");
        if (!p.result && !p.state_change) add("OUTPUT_REQUIRED", "no result or state-change link");
        if (!p.instrument && !p.agent) add("ENABLER_REQUIRED", "no instrument or agent link");
        if (!p.condition) add("COND_MISSING", "no condition link");
        if (!p.effect) add("ENV_MISSING", "no environment effect link");
        if (!p.exhibits_location) add("LOCTIME_MISSING", "Location");
        if (!p.exhibits_time) add("LOCTIME_MISSING", "Time");
    }

    std::sort(report.findings.begin(), report.findings.end(),
              [](const Finding& a, const Finding& b) {
                  if (a.process != b.process) return a.process < b.process;
                  if (a.rule != b.rule) return a.rule < b.rule;
                  return a.detail < b.detail;
              });
    return report;
}

std::vector<CoverageGap> attribute_coverage(const opm::Model& m,
                                            std::span<const AttributeRequirement> requirements) {
    std::vector<CoverageGap> gaps;
    if (requirements.empty()) return gaps;

    auto exhibits = [&](opm::ThingId id, const std::string& attribute) {
        for (const opm::Link& l : m.links) {
            if (l.kind != opm::LinkKind::Exhibition || l.source.thing != id) continue;
            const opm::Thing* attr = m.thing(l.target.thing);
            if (attr && attr->name == attribute) return true;
        }
        return false;
    };

    for (const opm::Thing& t : m.things) {
        if (t.kind != opm::ThingKind::Process) continue;
        std::vector<opm::ThingId> instruments;
        for (const opm::Link& l : m.links)
            if (l.kind == opm::LinkKind::Instrument && l.source.thing == t.id)
                instruments.push_back(l.target.thing);

        for (const AttributeRequirement& req : requirements) {
            bool satisfied = false;
            if (req.target == CoverageTarget::Process) {
                satisfied = exhibits(t.id, req.attribute);
            } else {
                for (opm::ThingId instrument : instruments)
                    if (exhibits(instrument, req.attribute)) {
                        satisfied = true;
                        break;
                    }
            }
            if (!satisfied) gaps.push_back(CoverageGap{t.id, t.name, req});
        }
    }
    return gaps;
}

}  // namespace usfm::sms
