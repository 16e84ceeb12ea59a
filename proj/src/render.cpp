#include "usfm/opl/render.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace usfm::opl {

namespace {

using opm::LinkKind;
using opm::Model;
using opm::Thing;
using opm::ThingId;
using opm::ThingKind;

bool has_top_level_conj(const std::string& name) {
    int depth = 0;
    for (size_t i = 0; i + 1 < name.size(); ++i) {
        const char c = name[i];
        if (c == '(') ++depth;
        else if (c == ')') depth = std::max(0, depth - 1);
        else if (depth == 0 && c == ' ') {
            if (name.compare(i, 5, " and ") == 0 || name.compare(i, 4, " or ") == 0) return true;
        }
    }
    return false;
}

// "A and B" / "A, B, and C"; a two-element list falls back to "A, and B" when
// either name embeds a bare conjunction that would otherwise split.
std::string join_list(const std::vector<std::string>& names, const char* conj) {
    if (names.empty()) return {};
    if (names.size() == 1) return names[0];
    if (names.size() == 2) {
        if (has_top_level_conj(names[0]) || has_top_level_conj(names[1]))
            return names[0] + ", " + conj + " " + names[1];
        return names[0] + " " + conj + " " + names[1];
    }
    std::string out;
    for (size_t i = 0; i + 1 < names.size(); ++i) out += names[i] + ", ";
    out += std::string(conj) + " " + names.back();
    return out;
}

struct Renderer {
    const Model& m;
    std::string out;

    void line(const std::string& text) {
        out += text;
        out += '\n';
    }

    static std::string decl_predicate(const Thing& t) {
        const bool physical = t.essence == opm::Essence::Physical;
        const bool environmental = t.affiliation == opm::Affiliation::Environmental;
        if (environmental && physical) return "environmental and physical";
        if (environmental) return "environmental";
        if (physical) return "physical";
        return "informational";
    }

    std::vector<ThingId> structural_targets(ThingId source, LinkKind kind) const {
        std::vector<ThingId> out_ids;
        for (const opm::Link& l : m.links)
            if (l.kind == kind && l.source.thing == source) out_ids.push_back(l.target.thing);
        return out_ids;
    }

    bool has_structural_out(ThingId id) const {
        for (const opm::Link& l : m.links)
            if (opm::is_structural(l.kind) && l.source.thing == id) return true;
        return false;
    }

    std::vector<std::string> names_of(const std::vector<ThingId>& ids) const {
        std::vector<std::string> names;
        names.reserve(ids.size());
        for (ThingId id : ids) names.push_back(m.thing(id)->name);
        return names;
    }

    void emit_state_block(ThingId owner) {
        const std::vector<opm::StateId> states = m.states_of(owner);
        if (states.empty()) return;
        std::vector<std::string> names;
        for (opm::StateId sid : states) names.push_back(m.state(sid)->name);
        line(m.thing(owner)->name + " can be " + join_list(names, "or") + ".");
        for (opm::StateId sid : states) {
            const opm::State& s = *m.state(sid);
            if (s.initial) line(s.name + " is initial.");
            if (s.final) line(s.name + " is final.");
        }
    }

    // structural sentences of one subject, then each fresh scoped attribute's
    // own declarations immediately after the exhibits sentence that creates it
    void emit_structural(ThingId subject) {
        const std::string& name = m.thing(subject)->name;
        const std::vector<ThingId> parts = structural_targets(subject, LinkKind::Aggregation);
        if (!parts.empty()) line(name + " consists of " + join_list(names_of(parts), "and") + ".");
        const std::vector<ThingId> children = structural_targets(subject, LinkKind::InZoom);
        if (!children.empty())
            line(name + " zooms into " + join_list(names_of(children), "and") + ".");
        const std::vector<ThingId> attrs = structural_targets(subject, LinkKind::Exhibition);
        if (!attrs.empty()) {
            line(name + " exhibits " + join_list(names_of(attrs), "and") + ".");
            for (ThingId attr : attrs) {
                const Thing& t = *m.thing(attr);
                if (t.scope != std::optional<ThingId>(subject)) continue;  // not created here
                if (t.essence != opm::Essence::Informational ||
                    t.affiliation != opm::Affiliation::Systemic)
                    line(t.name + " is " + decl_predicate(t) + ".");
                emit_state_block(attr);
                emit_structural(attr);
            }
        }
    }

    // names of scoped attributes created anywhere below a subject
    void collect_subtree_attr_names(ThingId subject, std::set<std::string>& names) const {
        for (const opm::Link& l : m.links) {
            if (l.kind != LinkKind::Exhibition || l.source.thing != subject) continue;
            const Thing& t = *m.thing(l.target.thing);
            if (t.scope != std::optional<ThingId>(subject)) continue;
            names.insert(t.name);
            collect_subtree_attr_names(t.id, names);
        }
    }

    struct Procedural {
        std::string subject;
        std::uint32_t first_link;
        std::string text;
    };

    void procedural_sentences(std::vector<Procedural>& sentences) const {
        struct Group {
            std::vector<std::string> operands;
            std::uint32_t first_link = 0;
            bool used = false;
        };
        std::map<std::uint32_t, Group> requires_g, consumes_g, yields_g, affects_g;

        auto push = [&](std::map<std::uint32_t, Group>& groups, ThingId process,
                        std::string operand, std::uint32_t link_id) {
            Group& g = groups[process.value];
            if (!g.used) {
                g.first_link = link_id;
                g.used = true;
            }
            g.operands.push_back(std::move(operand));
        };

        for (const opm::Link& l : m.links) {
            const std::string& src = m.thing(l.source.thing)->name;
            const std::string& dst = m.thing(l.target.thing)->name;
            switch (l.kind) {
                case LinkKind::Condition:
                    sentences.push_back(
                        {dst, l.id.value, dst + " occurs if " + src + " is in existent."});
                    break;
                case LinkKind::Agent:
                    sentences.push_back({src, l.id.value, src + " handles " + dst + "."});
                    break;
                case LinkKind::Instrument:
                    push(requires_g, l.source.thing, dst, l.id.value);
                    break;
                case LinkKind::Consumption: {
                    std::string operand = dst;
                    if (l.target.state)
                        operand = m.state(*l.target.state)->name + " " + dst;
                    push(consumes_g, l.source.thing, std::move(operand), l.id.value);
                    break;
                }
                case LinkKind::Result:
                    push(yields_g, l.source.thing, dst, l.id.value);
                    break;
                case LinkKind::Effect:
                    push(affects_g, l.source.thing, dst, l.id.value);
                    break;
                case LinkKind::StateChange: {
                    const std::string from = m.state(*l.from_state)->name;
                    const std::string to = m.state(*l.to_state)->name;
                    sentences.push_back({src, l.id.value, src + " changes " + dst + " from " +
                                                              from + " to " + to + "."});
                    break;
                }
                default:
                    break;
            }
        }

        auto flush = [&](std::map<std::uint32_t, Group>& groups, const char* verb) {
            for (auto& [thing_value, group] : groups) {
                const std::string& subject = m.things[thing_value].name;
                sentences.push_back({subject, group.first_link,
                                     subject + " " + verb + " " +
                                         join_list(group.operands, "and") + "."});
            }
        };
        flush(requires_g, "requires");
        flush(consumes_g, "consumes");
        flush(yields_g, "yields");
        flush(affects_g, "affects");
    }
};

}  // namespace

std::string render_opl(const Model& m) {
    Renderer r{m, {}};

    std::vector<ThingId> top;  // top-level things sorted by name
    for (const Thing& t : m.things)
        if (!t.scope) top.push_back(t.id);
    std::stable_sort(top.begin(), top.end(), [&](ThingId a, ThingId b) {
        return m.thing(a)->name < m.thing(b)->name;
    });

    // declarations
    for (ThingId id : top) {
        const Thing& t = *m.thing(id);
        if (t.implicit) continue;
        const bool default_facets = t.essence == opm::Essence::Informational &&
                                    t.affiliation == opm::Affiliation::Systemic;
        // a default-facet thing that is declared by some other sentence shape
        // needs no standalone declaration
        if (default_facets && (r.has_structural_out(id) || !m.states_of(id).empty())) continue;
        if (default_facets && t.kind == ThingKind::Process) continue;  // kind is positional
        r.line(t.name + " is " + Renderer::decl_predicate(t) + ".");
    }

    // top-level state sets
    for (ThingId id : top) r.emit_state_block(id);

    // structural sentences; a subject named like an attribute created in some
    // other subject's subtree must be emitted before that subtree shadows it
    std::vector<ThingId> subjects;
    for (ThingId id : top)
        if (r.has_structural_out(id)) subjects.push_back(id);

    std::map<std::string, std::vector<size_t>> by_name;  // subject name -> indices
    for (size_t i = 0; i < subjects.size(); ++i)
        by_name[m.thing(subjects[i])->name].push_back(i);

    std::vector<std::set<size_t>> successors(subjects.size());
    std::vector<int> indegree(subjects.size(), 0);
    for (size_t creator = 0; creator < subjects.size(); ++creator) {
        std::set<std::string> created;
        r.collect_subtree_attr_names(subjects[creator], created);
        for (const std::string& name : created) {
            const auto it = by_name.find(name);
            if (it == by_name.end()) continue;
            for (size_t shadowed : it->second) {
                if (shadowed == creator) continue;
                if (successors[shadowed].insert(creator).second) ++indegree[creator];
            }
        }
    }
    std::set<std::pair<std::string, size_t>> ready;
    for (size_t i = 0; i < subjects.size(); ++i)
        if (indegree[i] == 0) ready.emplace(m.thing(subjects[i])->name, i);
    std::vector<size_t> order;
    while (!ready.empty()) {
        const size_t i = ready.begin()->second;
        ready.erase(ready.begin());
        order.push_back(i);
        for (size_t next : successors[i])
            if (--indegree[next] == 0) ready.emplace(m.thing(subjects[next])->name, next);
    }
    if (order.size() != subjects.size())  // constraint cycle: keep name order
        for (size_t i = 0; i < subjects.size(); ++i)
            if (indegree[i] > 0) order.push_back(i);
    for (size_t i : order) r.emit_structural(subjects[i]);

    // procedural sentences
    std::vector<Renderer::Procedural> sentences;
    r.procedural_sentences(sentences);
    std::stable_sort(sentences.begin(), sentences.end(),
                     [](const Renderer::Procedural& a, const Renderer::Procedural& b) {
                         if (a.subject != b.subject) return a.subject < b.subject;
                         return a.first_link < b.first_link;
                     });
    for (const Renderer::Procedural& s : sentences) r.line(s.text);

    return r.out;
}

namespace {

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string export_dot(const Model& m) {
    std::string out = "digraph \"" + dot_escape(m.name) + "\" {\n";
    out += "  rankdir=LR;\n";

    std::vector<bool> has_states(m.things.size(), false);
    for (const opm::State& s : m.states) has_states[s.owner.value] = true;

    auto node_attrs = [](const Thing& t) {
        std::string attrs = "shape=";
        attrs += t.kind == ThingKind::Object ? "box" : "ellipse";
        std::vector<std::string> styles;
        if (t.essence == opm::Essence::Physical) styles.push_back("filled");
        if (t.affiliation == opm::Affiliation::Environmental) styles.push_back("dashed");
        if (!styles.empty()) {
            attrs += ", style=\"";
            for (size_t i = 0; i < styles.size(); ++i) {
                if (i) attrs += ',';
                attrs += styles[i];
            }
            attrs += '"';
            if (t.essence == opm::Essence::Physical) attrs += ", fillcolor=lightgrey";
        }
        return attrs;
    };

    for (const Thing& t : m.things) {
        const std::string id = "t" + std::to_string(t.id.value);
        if (has_states[t.id.value]) {
            out += "  subgraph cluster_" + id + " {\n";
            out += "    label=\"\";\n";
            out += "    " + id + " [label=\"" + dot_escape(t.name) + "\", " + node_attrs(t) +
                   "];\n";
            for (const opm::State& s : m.states)
                if (s.owner == t.id)
                    out += "    s" + std::to_string(s.id.value) + " [label=\"" +
                           dot_escape(s.name) + "\", shape=box, style=rounded];\n";
            out += "  }\n";
        } else {
            out += "  " + id + " [label=\"" + dot_escape(t.name) + "\", " + node_attrs(t) +
                   "];\n";
        }
    }

    for (const opm::Link& l : m.links) {
        const std::string src = "t" + std::to_string(l.source.thing.value);
        const std::string dst = "t" + std::to_string(l.target.thing.value);
        std::string label(opm::to_string(l.kind));
        switch (l.kind) {
            case LinkKind::StateChange:
                out += "  s" + std::to_string(l.from_state->value) + " -> " + src +
                       " [label=\"changes\"];\n";
                out += "  " + src + " -> s" + std::to_string(l.to_state->value) +
                       " [label=\"changes\"];\n";
                break;
            case LinkKind::Consumption:
                if (l.target.state) {
                    out += "  s" + std::to_string(l.target.state->value) + " -> " + src +
                           " [label=\"consumption\"];\n";
                    break;
                }
                out += "  " + dst + " -> " + src + " [label=\"consumption\"];\n";
                break;
            case LinkKind::Instrument:
                out += "  " + dst + " -> " + src + " [label=\"instrument\"];\n";
                break;
            default:
                out += "  " + src + " -> " + dst + " [label=\"" + label + "\"];\n";
                break;
        }
    }
    out += "}\n";
    return out;
}

}  // namespace usfm::opl
