#include "usfm/opl/parse.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "usfm/error.hpp"
#include "usfm/util/text.hpp"

namespace usfm::opl {

std::string_view to_string(SentenceKind k) {
    switch (k) {
        case SentenceKind::EssenceDecl: return "essence_decl";
        case SentenceKind::StateSet: return "state_set";
        case SentenceKind::StateFlag: return "state_flag";
        case SentenceKind::ConsistsOf: return "consists_of";
        case SentenceKind::Exhibits: return "exhibits";
        case SentenceKind::ZoomsInto: return "zooms_into";
        case SentenceKind::OccursIf: return "occurs_if";
        case SentenceKind::Requires: return "requires";
        case SentenceKind::Consumes: return "consumes";
        case SentenceKind::Yields: return "yields";
        case SentenceKind::Affects: return "affects";
        case SentenceKind::Handles: return "handles";
        case SentenceKind::Changes: return "changes";
    }
    return "unknown";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out = "line " + std::to_string(d.line) + ": ";
    out += d.severity == Severity::Error ? "error" : "warning";
    out += " [" + d.code + "] " + d.message;
    return out;
}

bool ParseResult::has_errors() const {
    for (const Diagnostic& d : diagnostics)
        if (d.severity == Severity::Error) return true;
    return false;
}

std::vector<const Diagnostic*> ParseResult::errors() const {
    std::vector<const Diagnostic*> out;
    for (const Diagnostic& d : diagnostics)
        if (d.severity == Severity::Error) out.push_back(&d);
    return out;
}

namespace {

struct RawSentence {
    int line = 0;
    std::string text;  // terminator stripped, whitespace collapsed
    std::string raw;   // verbatim, terminator included
};

// '#' comments run to end of line; a sentence ends at '.', and may span lines.
std::vector<RawSentence> split_sentences(std::string_view text,
                                         std::vector<Diagnostic>& diagnostics) {
    std::vector<RawSentence> out;
    std::string current;
    int line = 1;
    int start_line = 0;
    bool in_comment = false;

    auto flush = [&](bool terminated) {
        const std::string collapsed = normalize_space(current);
        if (!collapsed.empty()) {
            if (terminated) {
                out.push_back(RawSentence{start_line, collapsed, collapsed + "."});
            } else {
                diagnostics.push_back(Diagnostic{start_line, Severity::Error, "PARSE_ERROR",
                                                 "sentence is missing its '.' terminator: \"" +
                                                     collapsed + "\""});
            }
        }
        current.clear();
        start_line = 0;
    };

    for (char c : text) {
        if (c == '\n') {
            ++line;
            in_comment = false;
            current += ' ';
            continue;
        }
        if (in_comment) continue;
        if (c == '#') {
            in_comment = true;
            continue;
        }
        if (c == '.') {
            flush(true);
            continue;
        }
        if (start_line == 0 && c != ' ' && c != '\t' && c != '\r') start_line = line;
        current += c;
    }
    flush(false);
    return out;
}

// Splits a top-level list: ", "-separated with an optional leading
// conjunction on the final element, or a single "A and B" / "A or B" pair.
// Commas and conjunctions inside parentheses never split.
std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> parts;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(') ++depth;
        else if (c == ')') depth = std::max(0, depth - 1);
        else if (c == ',' && depth == 0) {
            parts.emplace_back(normalize_space(text.substr(start, i - start)));
            start = i + 1;
        }
    }
    parts.emplace_back(normalize_space(text.substr(start)));

    auto strip_conj = [](std::string& s) {
        if (s.rfind("and ", 0) == 0) s = normalize_space(std::string_view(s).substr(4));
        else if (s.rfind("or ", 0) == 0) s = normalize_space(std::string_view(s).substr(3));
    };

    if (parts.size() > 1) {
        strip_conj(parts.back());
        return parts;
    }

    // no top-level comma: look for the first top-level pair conjunction
    const std::string& whole = parts[0];
    depth = 0;
    for (size_t i = 0; i + 1 < whole.size(); ++i) {
        const char c = whole[i];
        if (c == '(') ++depth;
        else if (c == ')') depth = std::max(0, depth - 1);
        else if (depth == 0 && c == ' ') {
            for (std::string_view conj : {std::string_view(" and "), std::string_view(" or ")}) {
                if (whole.compare(i, conj.size(), conj) == 0) {
                    std::string left = normalize_space(std::string_view(whole).substr(0, i));
                    std::string right =
                        normalize_space(std::string_view(whole).substr(i + conj.size()));
                    if (!left.empty() && !right.empty()) return {left, right};
                }
            }
        }
    }
    return parts;
}

size_t find_top_level(std::string_view text, std::string_view needle, size_t from = 0) {
    int depth = 0;
    for (size_t i = from; i + needle.size() <= text.size(); ++i) {
        const char c = text[i];
        if (c == '(') ++depth;
        else if (c == ')') depth = std::max(0, depth - 1);
        else if (depth == 0 && text.compare(i, needle.size(), needle) == 0) return i;
    }
    return std::string_view::npos;
}

struct Classifier {
    std::vector<Diagnostic>& diagnostics;

    void fail(const RawSentence& rs, const std::string& msg) {
        diagnostics.push_back(
            Diagnostic{rs.line, Severity::Error, "PARSE_ERROR", msg + ": \"" + rs.raw + "\""});
    }

    bool parse_essence_or_flag(const RawSentence& rs, size_t is_pos, Sentence& s) {
        s.subject = normalize_space(std::string_view(rs.text).substr(0, is_pos));
        const std::string predicate = normalize_space(std::string_view(rs.text).substr(is_pos + 4));
        if (s.subject.empty()) {
            fail(rs, "missing subject");
            return false;
        }
        if (predicate == "initial" || predicate == "final") {
            s.kind = SentenceKind::StateFlag;
            s.flag_initial = predicate == "initial";
            return true;
        }
        s.kind = SentenceKind::EssenceDecl;
        bool saw_essence = false, saw_affiliation = false;
        std::vector<std::string> words;
        size_t pos = 0;
        while (true) {
            const size_t next = predicate.find(" and ", pos);
            if (next == std::string::npos) {
                words.push_back(predicate.substr(pos));
                break;
            }
            words.push_back(predicate.substr(pos, next - pos));
            pos = next + 5;
        }
        if (words.size() > 2) {
            fail(rs, "unknown declaration predicate '" + predicate + "'");
            return false;
        }
        for (const std::string& w : words) {
            if (w == "physical" || w == "informational") {
                if (saw_essence) {
                    fail(rs, "conflicting essence words in '" + predicate + "'");
                    return false;
                }
                saw_essence = true;
                s.declares_physical = w == "physical";
                if (w == "informational") s.declares_physical = false;
            } else if (w == "environmental" || w == "systemic") {
                if (saw_affiliation) {
                    fail(rs, "conflicting affiliation words in '" + predicate + "'");
                    return false;
                }
                saw_affiliation = true;
                s.declares_environmental = w == "environmental";
            } else {
                fail(rs, "unknown declaration predicate '" + predicate + "'");
                return false;
            }
        }
        // remember which facets the sentence actually declares
        s.operands.clear();
        if (saw_essence)
            s.operands.push_back(Operand{s.declares_physical ? "physical" : "informational", ""});
        if (saw_affiliation)
            s.operands.push_back(
                Operand{s.declares_environmental ? "environmental" : "systemic", ""});
        return true;
    }

    bool parse_changes(const RawSentence& rs, size_t pos, Sentence& s) {
        s.kind = SentenceKind::Changes;
        s.subject = normalize_space(std::string_view(rs.text).substr(0, pos));
        const std::string rest = normalize_space(std::string_view(rs.text).substr(pos + 9));
        if (s.subject.empty() || rest.empty()) {
            fail(rs, "malformed state-change sentence");
            return false;
        }
        // clause list joined by top-level " and "; object names may themselves
        // contain "and", so segments accumulate until a clause shape appears
        std::vector<std::string> segments;
        size_t start = 0;
        while (true) {
            const size_t next = find_top_level(rest, " and ", start);
            if (next == std::string_view::npos) {
                segments.push_back(normalize_space(std::string_view(rest).substr(start)));
                break;
            }
            segments.push_back(normalize_space(std::string_view(rest).substr(start, next - start)));
            start = next + 5;
        }
        std::string pending;
        for (const std::string& segment : segments) {
            pending = pending.empty() ? segment : pending + " and " + segment;
            const size_t from_pos = find_top_level(pending, " from ");
            if (from_pos == std::string_view::npos) continue;
            const size_t to_pos = find_top_level(pending, " to ", from_pos + 6);
            if (to_pos == std::string_view::npos) continue;
            ChangeClause clause;
            clause.object = normalize_space(std::string_view(pending).substr(0, from_pos));
            clause.from_state =
                normalize_space(std::string_view(pending).substr(from_pos + 6, to_pos - from_pos - 6));
            clause.to_state = normalize_space(std::string_view(pending).substr(to_pos + 4));
            if (clause.object.empty() || clause.from_state.empty() || clause.to_state.empty())
                continue;
            s.clauses.push_back(std::move(clause));
            pending.clear();
        }
        if (!pending.empty() || s.clauses.empty()) {
            fail(rs, "malformed state-change clause");
            return false;
        }
        return true;
    }

    bool classify(const RawSentence& rs, Sentence& s) {
        s.line = rs.line;
        s.raw = rs.raw;
        const std::string& text = rs.text;

        struct Keyword {
            std::string_view token;
            SentenceKind kind;
        };
        static constexpr Keyword keywords[] = {
            {" occurs if ", SentenceKind::OccursIf},
            {" zooms into ", SentenceKind::ZoomsInto},
            {" consists of ", SentenceKind::ConsistsOf},
            {" exhibits ", SentenceKind::Exhibits},
            {" can be ", SentenceKind::StateSet},
            {" changes ", SentenceKind::Changes},
            {" requires ", SentenceKind::Requires},
            {" consumes ", SentenceKind::Consumes},
            {" yields ", SentenceKind::Yields},
            {" affects ", SentenceKind::Affects},
            {" handles ", SentenceKind::Handles},
        };
        for (const Keyword& kw : keywords) {
            const size_t pos = find_top_level(text, kw.token);
            if (pos == std::string_view::npos) continue;
            if (kw.kind == SentenceKind::Changes) return parse_changes(rs, pos, s);
            s.kind = kw.kind;
            s.subject = normalize_space(std::string_view(text).substr(0, pos));
            std::string rest = normalize_space(std::string_view(text).substr(pos + kw.token.size()));
            if (s.subject.empty() || rest.empty()) {
                fail(rs, "malformed sentence");
                return false;
            }
            if (kw.kind == SentenceKind::OccursIf) {
                static constexpr std::string_view suffix = " is in existent";
                if (rest.size() <= suffix.size() ||
                    rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) != 0) {
                    fail(rs, "condition must read '<process> occurs if <object> is in existent'");
                    return false;
                }
                s.operands.push_back(
                    Operand{normalize_space(rest.substr(0, rest.size() - suffix.size())), ""});
                return !s.operands[0].name.empty();
            }
            for (std::string& name : split_list(rest)) s.operands.push_back(Operand{name, ""});
            for (const Operand& op : s.operands)
                if (op.name.empty()) {
                    fail(rs, "empty operand");
                    return false;
                }
            return true;
        }

        const size_t is_pos = find_top_level(text, " is ");
        if (is_pos != std::string_view::npos) return parse_essence_or_flag(rs, is_pos, s);

        fail(rs, "unrecognized sentence form");
        return false;
    }
};

struct Builder {
    opm::Model& model;
    std::vector<Diagnostic>& diagnostics;
    const std::set<std::string>& process_names;

    std::map<std::uint32_t, int> first_ref_line;       // implicit things
    std::set<std::uint32_t> state_set_bound;           // scoped attrs with a state set

    void error(int line, const char* code, std::string msg) {
        diagnostics.push_back(Diagnostic{line, Severity::Error, code, std::move(msg)});
    }
    void warning(int line, const char* code, std::string msg) {
        diagnostics.push_back(Diagnostic{line, Severity::Warning, code, std::move(msg)});
    }

    opm::ThingKind evident_kind(const std::string& name) const {
        return process_names.count(name) ? opm::ThingKind::Process : opm::ThingKind::Object;
    }

    // declaration subjects bind to the latest declaration in any scope
    opm::ThingId subject_for_decl(const std::string& name) {
        if (auto id = model.find_thing_latest(name)) return *id;
        return opm::add_thing(model, name, evident_kind(name));
    }

    // link positions resolve at top level; unknown names become implicit things
    opm::ThingId resolve_top(const std::string& name, int line) {
        if (auto id = model.find_thing(name)) return *id;
        const opm::ThingId id = opm::add_thing(model, name, evident_kind(name),
                                               opm::Essence::Informational,
                                               opm::Affiliation::Systemic, std::nullopt, true);
        first_ref_line.emplace(id.value, line);
        return id;
    }

    void apply(const Sentence& s) {
        switch (s.kind) {
            case SentenceKind::EssenceDecl: {
                const opm::ThingId id = subject_for_decl(s.subject);
                opm::Thing& t = model.things[id.value];
                t.implicit = false;
                for (const Operand& facet : s.operands) {
                    if (facet.name == "physical") t.essence = opm::Essence::Physical;
                    else if (facet.name == "informational") t.essence = opm::Essence::Informational;
                    else if (facet.name == "environmental")
                        t.affiliation = opm::Affiliation::Environmental;
                    else if (facet.name == "systemic") t.affiliation = opm::Affiliation::Systemic;
                }
                break;
            }
            case SentenceKind::StateSet: {
                const opm::ThingId id = subject_for_decl(s.subject);
                opm::Thing& t = model.things[id.value];
                if (t.kind == opm::ThingKind::Process) {
                    error(s.line, "STATE_ON_PROCESS",
                          "'" + s.subject + "' is a process and cannot have states");
                    break;
                }
                if (t.scope && state_set_bound.count(id.value)) {
                    error(s.line, "DUP_STATE_SET",
                          "attribute '" + s.subject + "' already has a state set");
                    break;
                }
                t.implicit = false;
                state_set_bound.insert(id.value);
                for (const Operand& op : s.operands) {
                    try {
                        opm::add_state(model, id, op.name);
                    } catch (const Error& e) {
                        error(s.line, "DUP_STATE", e.what());
                    }
                }
                break;
            }
            case SentenceKind::StateFlag: {
                opm::StateId found{};
                bool ok = false;
                for (auto it = model.states.rbegin(); it != model.states.rend(); ++it) {
                    if (it->name == s.subject) {
                        found = it->id;
                        ok = true;
                        break;
                    }
                }
                if (!ok) {
                    error(s.line, "UNKNOWN_STATE",
                          "no declared state named '" + s.subject + "'");
                    break;
                }
                opm::State& st = model.states[found.value];
                (s.flag_initial ? st.initial : st.final) = true;
                break;
            }
            case SentenceKind::ConsistsOf:
            case SentenceKind::ZoomsInto: {
                const opm::ThingId subject = subject_for_decl(s.subject);
                model.things[subject.value].implicit = false;
                const opm::LinkKind kind = s.kind == SentenceKind::ConsistsOf
                                               ? opm::LinkKind::Aggregation
                                               : opm::LinkKind::InZoom;
                for (const Operand& op : s.operands) {
                    const opm::ThingId part = resolve_top(op.name, s.line);
                    try {
                        opm::add_link(model, kind, {subject, {}}, {part, {}});
                    } catch (const Error& e) {
                        error(s.line, "ILLEGAL_LINK", e.what());
                    }
                }
                break;
            }
            case SentenceKind::Exhibits: {
                const opm::ThingId subject = subject_for_decl(s.subject);
                model.things[subject.value].implicit = false;
                for (const Operand& op : s.operands) {
                    if (model.find_thing(op.name, subject)) {
                        warning(s.line, "DUP_EXHIBIT",
                                "'" + s.subject + "' already exhibits '" + op.name + "'");
                        continue;
                    }
                    const opm::ThingId attr =
                        opm::add_thing(model, op.name, opm::ThingKind::Object,
                                       opm::Essence::Informational, opm::Affiliation::Systemic,
                                       subject, false);
                    opm::add_link(model, opm::LinkKind::Exhibition, {subject, {}}, {attr, {}});
                }
                break;
            }
            case SentenceKind::OccursIf: {
                const opm::ThingId process = resolve_top(s.subject, s.line);
                const opm::ThingId object = resolve_top(s.operands[0].name, s.line);
                try {
                    opm::add_link(model, opm::LinkKind::Condition, {object, {}}, {process, {}});
                } catch (const Error& e) {
                    error(s.line, "ILLEGAL_LINK", e.what());
                }
                break;
            }
            case SentenceKind::Requires:
            case SentenceKind::Yields:
            case SentenceKind::Affects: {
                const opm::ThingId process = resolve_top(s.subject, s.line);
                const opm::LinkKind kind = s.kind == SentenceKind::Requires
                                               ? opm::LinkKind::Instrument
                                               : s.kind == SentenceKind::Yields
                                                     ? opm::LinkKind::Result
                                                     : opm::LinkKind::Effect;
                for (const Operand& op : s.operands) {
                    const opm::ThingId object = resolve_top(op.name, s.line);
                    try {
                        opm::add_link(model, kind, {process, {}}, {object, {}});
                    } catch (const Error& e) {
                        error(s.line, "ILLEGAL_LINK", e.what());
                    }
                }
                break;
            }
            case SentenceKind::Consumes: {
                const opm::ThingId process = resolve_top(s.subject, s.line);
                for (const Operand& op : s.operands) {
                    const auto [object, state] = resolve_consumed(op.name, s.line);
                    try {
                        opm::add_link(model, opm::LinkKind::Consumption, {process, {}},
                                      {object, state});
                    } catch (const Error& e) {
                        error(s.line, "ILLEGAL_LINK", e.what());
                    }
                }
                break;
            }
            case SentenceKind::Handles: {
                const opm::ThingId agent = resolve_top(s.subject, s.line);
                for (const Operand& op : s.operands) {
                    const opm::ThingId process = resolve_top(op.name, s.line);
                    try {
                        opm::add_link(model, opm::LinkKind::Agent, {agent, {}}, {process, {}});
                    } catch (const Error& e) {
                        error(s.line, "ILLEGAL_LINK", e.what());
                    }
                }
                break;
            }
            case SentenceKind::Changes: {
                const opm::ThingId process = resolve_top(s.subject, s.line);
                for (const ChangeClause& clause : s.clauses) {
                    const opm::ThingId object = resolve_top(clause.object, s.line);
                    const auto from = model.find_state(object, clause.from_state);
                    const auto to = model.find_state(object, clause.to_state);
                    if (!from || !to) {
                        error(s.line, "UNRESOLVED_STATE",
                              "'" + clause.object + "' has no state '" +
                                  (!from ? clause.from_state : clause.to_state) + "'");
                        continue;
                    }
                    try {
                        opm::add_link(model, opm::LinkKind::StateChange, {process, {}},
                                      {object, {}}, from, to);
                    } catch (const Error& e) {
                        error(s.line, "ILLEGAL_LINK", e.what());
                    }
                }
                break;
            }
        }
    }

    // A consumed operand may carry a source-state prefix; the longest prefix
    // that names a declared state of an existing top-level object wins, but an
    // exact full-name match beats any split.
    std::pair<opm::ThingId, std::optional<opm::StateId>> resolve_consumed(
        const std::string& text, int line) {
        if (auto id = model.find_thing(text)) return {*id, std::nullopt};
        const std::vector<std::string_view> words = split(text, ' ');
        for (size_t prefix = words.size() - 1; prefix >= 1; --prefix) {
            std::string state_name, object_name;
            for (size_t i = 0; i < words.size(); ++i) {
                std::string& dst = i < prefix ? state_name : object_name;
                if (!dst.empty()) dst += ' ';
                dst += words[i];
            }
            const auto object = model.find_thing(object_name);
            if (!object) continue;
            const auto state = model.find_state(*object, state_name);
            if (state) return {*object, state};
        }
        return {resolve_top(text, line), std::nullopt};
    }

    void finish() {
        for (const opm::Thing& t : model.things) {
            if (!t.implicit) continue;
            const auto it = first_ref_line.find(t.id.value);
            warning(it == first_ref_line.end() ? 0 : it->second, "IMPLICIT_DECL",
                    "'" + t.name + "' was referenced but never declared; assuming an "
                    "informational systemic " +
                        std::string(opm::to_string(t.kind)));
        }
    }
};

}  // namespace

ParseResult parse_document(std::string_view text, std::string model_name) {
    ParseResult result;
    result.model.name = std::move(model_name);

    const std::vector<RawSentence> raw = split_sentences(text, result.diagnostics);

    Classifier classifier{result.diagnostics};
    for (const RawSentence& rs : raw) {
        Sentence s{};
        if (classifier.classify(rs, s)) result.sentences.push_back(std::move(s));
    }

    std::set<std::string> process_names;
    for (const Sentence& s : result.sentences) {
        switch (s.kind) {
            case SentenceKind::OccursIf:
            case SentenceKind::Requires:
            case SentenceKind::Consumes:
            case SentenceKind::Yields:
            case SentenceKind::Affects:
            case SentenceKind::Changes:
                process_names.insert(s.subject);
                break;
            case SentenceKind::Handles:
                for (const Operand& op : s.operands) process_names.insert(op.name);
                break;
            default:
                break;
        }
    }

    Builder builder{result.model, result.diagnostics, process_names, {}, {}};
    for (const Sentence& s : result.sentences) builder.apply(s);
    builder.finish();

    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    return result;
}

ParseResult parse_file(const std::string& path) {
    std::string stem = path;
    const size_t slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    return parse_document(read_text_file(path), stem);
}

}  // namespace usfm::opl
