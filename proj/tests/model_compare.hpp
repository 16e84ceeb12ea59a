#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "usfm/opm/model.hpp"

// Graph isomorphism for models whose ids may differ but whose content should
// agree: every element is reduced to a canonical key built from scope-path
// and name, and the sorted key multisets are compared. Names are unique per
// scope, so the keys identify elements without reference to ids.
namespace testutil {

inline constexpr char kSep = '\x1f';

inline std::string thing_path(const usfm::opm::Model& m, usfm::opm::ThingId id) {
    const usfm::opm::Thing* t = m.thing(id);
    if (!t) return std::string("<dangling>") + kSep + std::to_string(id.value);
    std::string path = t->name;
    while (t->scope) {
        t = m.thing(*t->scope);
        if (!t) return std::string("<dangling scope>") + kSep + path;
        path = t->name + kSep + path;
    }
    return path;
}

inline std::string state_name(const usfm::opm::Model& m, std::optional<usfm::opm::StateId> id) {
    if (!id) return "";
    const usfm::opm::State* s = m.state(*id);
    return s ? s->name : "<dangling>";
}

inline std::vector<std::string> canonical_keys(const usfm::opm::Model& m) {
    std::vector<std::string> keys;
    for (const usfm::opm::Thing& t : m.things) {
        std::ostringstream k;
        k << "thing" << kSep << thing_path(m, t.id) << kSep << to_string(t.kind) << kSep
          << to_string(t.essence) << kSep << to_string(t.affiliation) << kSep
          << (t.implicit ? "implicit" : "declared");
        keys.push_back(k.str());
    }
    for (const usfm::opm::State& s : m.states) {
        std::ostringstream k;
        k << "state" << kSep << thing_path(m, s.owner) << kSep << s.name << kSep
          << (s.initial ? "initial" : "-") << kSep << (s.final ? "final" : "-");
        keys.push_back(k.str());
    }
    for (const usfm::opm::Link& l : m.links) {
        std::ostringstream k;
        k << "link" << kSep << to_string(l.kind) << kSep << thing_path(m, l.source.thing) << kSep
          << state_name(m, l.source.state) << kSep << thing_path(m, l.target.thing) << kSep
          << state_name(m, l.target.state) << kSep << state_name(m, l.from_state) << kSep
          << state_name(m, l.to_state);
        keys.push_back(k.str());
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

// empty string = isomorphic; otherwise a description of the first difference
inline std::string isomorphism_diff(const usfm::opm::Model& a, const usfm::opm::Model& b) {
    const std::vector<std::string> ka = canonical_keys(a);
    const std::vector<std::string> kb = canonical_keys(b);
    if (ka == kb) return "";

    std::ostringstream out;
    std::vector<std::string> only_a, only_b;
    std::set_difference(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(only_a));
    std::set_difference(kb.begin(), kb.end(), ka.begin(), ka.end(), std::back_inserter(only_b));
    auto dump = [&out](const char* label, const std::vector<std::string>& keys) {
        out << label << " (" << keys.size() << "):\n";
        for (size_t i = 0; i < keys.size() && i < 8; ++i) {
            std::string readable = keys[i];
            std::replace(readable.begin(), readable.end(), kSep, '|');
            out << "  " << readable << "\n";
        }
    };
    if (!only_a.empty()) dump("only in first", only_a);
    if (!only_b.empty()) dump("only in second", only_b);
    return out.str();
}

inline bool isomorphic(const usfm::opm::Model& a, const usfm::opm::Model& b) {
    return isomorphism_diff(a, b).empty();
}

}  // namespace testutil
