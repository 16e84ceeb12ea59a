#include "usfm/opm/validate.hpp"

#include <map>
#include <set>

namespace usfm::opm {

namespace {

void check_thing(const Model& m, const Thing& t, std::vector<Violation>& out) {
    auto report = [&](const char* rule, std::string msg) {
        out.push_back(Violation{rule, "thing", t.id.value, std::move(msg)});
    };
    if (t.name.empty()) report(violation::EmptyName, "thing has an empty name");
    if (t.scope) {
        if (!m.thing(*t.scope))
            report(violation::UnresolvedThing, "scope id out of range");
    }
}

void check_state(const Model& m, const State& s, std::vector<Violation>& out) {
    auto report = [&](const char* rule, std::string msg) {
        out.push_back(Violation{rule, "state", s.id.value, std::move(msg)});
    };
    if (s.name.empty()) report(violation::EmptyName, "state has an empty name");
    const Thing* owner = m.thing(s.owner);
    if (!owner) {
        report(violation::UnresolvedThing, "state owner id out of range");
        return;
    }
    if (owner->kind != ThingKind::Object)
        report(violation::StateOnProcess, "state declared on process '" + owner->name + "'");
}

void check_link(const Model& m, const Link& l, std::vector<Violation>& out) {
    auto report = [&](const char* rule, std::string msg) {
        out.push_back(Violation{rule, "link", l.id.value, std::move(msg)});
    };
    const Thing* src = m.thing(l.source.thing);
    const Thing* dst = m.thing(l.target.thing);
    if (!src) report(violation::UnresolvedThing, "link source id out of range");
    if (!dst) report(violation::UnresolvedThing, "link target id out of range");
    if (!src || !dst) return;

    const std::string_view kind_name = to_string(l.kind);
    auto need = [&](const Thing& t, ThingKind k, const char* end) {
        if (t.kind != k)
            report(violation::IllegalEndpoint, std::string(kind_name) + " link " + end +
                                                   " must be a " + std::string(to_string(k)) +
                                                   "; '" + t.name + "' is not");
    };
    if (is_structural(l.kind)) {
        if (l.source.thing == l.target.thing)
            report(violation::IllegalEndpoint,
                   std::string(kind_name) + " link is a self-loop on '" + src->name + "'");
    } else {
        switch (l.kind) {
            case LinkKind::Consumption:
            case LinkKind::Result:
            case LinkKind::Effect:
            case LinkKind::Instrument:
            case LinkKind::StateChange:
                need(*src, ThingKind::Process, "source");
                need(*dst, ThingKind::Object, "target");
                break;
            case LinkKind::Agent:
            case LinkKind::Condition:
                need(*src, ThingKind::Object, "source");
                need(*dst, ThingKind::Process, "target");
                break;
            default:
                break;
        }
    }

    auto check_qualifier = [&](const Endpoint& ep, bool allowed, const char* end) {
        if (!ep.state) return;
        if (!allowed) {
            report(violation::QualifierForbidden,
                   std::string("state qualifier on ") + end + " endpoint of " +
                       std::string(kind_name) + " link");
            return;
        }
        const State* s = m.state(*ep.state);
        if (!s) {
            report(violation::UnresolvedState, "endpoint state id out of range");
            return;
        }
        if (s->owner != ep.thing)
            report(violation::StateOwner,
                   "endpoint state '" + s->name + "' is not a state of the qualified object");
    };
    check_qualifier(l.source, false, "source");
    check_qualifier(l.target, l.kind == LinkKind::Consumption, "target");

    if (l.kind == LinkKind::StateChange) {
        if (!l.from_state || !l.to_state) {
            report(violation::MissingState, "state_change link lacks from/to states");
            return;
        }
        const State* from = m.state(*l.from_state);
        const State* to = m.state(*l.to_state);
        if (!from || !to) {
            report(violation::UnresolvedState, "state_change state id out of range");
            return;
        }
        if (from->owner != l.target.thing || to->owner != l.target.thing)
            report(violation::StateOwner,
                   "state_change states must belong to the changed object");
        if (*l.from_state == *l.to_state)
            report(violation::SameState, "state_change from and to states coincide");
    } else if (l.from_state || l.to_state) {
        report(violation::MissingState,
               "from/to states present on a non-state_change link");
    }
}

}  // namespace

std::vector<Violation> validate_graph(const Model& m) {
    std::vector<Violation> out;

    for (size_t i = 0; i < m.things.size(); ++i) {
        const Thing& t = m.things[i];
        if (t.id.value != i)
            out.push_back(Violation{violation::BadId, "thing", static_cast<std::uint32_t>(i),
                                    "thing id does not match its position"});
        check_thing(m, t, out);
    }
    // duplicate (scope, name) pairs
    std::map<std::pair<std::uint64_t, std::string>, std::uint32_t> seen;
    for (const Thing& t : m.things) {
        const std::uint64_t scope_key = t.scope ? t.scope->value + 1ull : 0ull;
        auto [it, inserted] = seen.emplace(std::make_pair(scope_key, t.name), t.id.value);
        if (!inserted)
            out.push_back(Violation{violation::DupName, "thing", t.id.value,
                                    "thing '" + t.name + "' redeclared in the same scope"});
    }

    for (size_t i = 0; i < m.states.size(); ++i) {
        const State& s = m.states[i];
        if (s.id.value != i)
            out.push_back(Violation{violation::BadId, "state", static_cast<std::uint32_t>(i),
                                    "state id does not match its position"});
        check_state(m, s, out);
    }
    std::set<std::pair<std::uint32_t, std::string>> state_names;
    for (const State& s : m.states) {
        if (!state_names.emplace(s.owner.value, s.name).second)
            out.push_back(Violation{violation::DupState, "state", s.id.value,
                                    "state '" + s.name + "' redeclared on the same owner"});
    }

    for (size_t i = 0; i < m.links.size(); ++i) {
        const Link& l = m.links[i];
        if (l.id.value != i)
            out.push_back(Violation{violation::BadId, "link", static_cast<std::uint32_t>(i),
                                    "link id does not match its position"});
        check_link(m, l, out);
    }
    return out;
}

std::optional<Model> in_zoom_view(const Model& m, ThingId zoomed) {
    if (!m.thing(zoomed)) return std::nullopt;

    std::set<std::uint32_t> members;
    std::vector<ThingId> frontier;
    for (const Link& l : m.links)
        if (l.kind == LinkKind::InZoom && l.source.thing == zoomed)
            if (members.insert(l.target.thing.value).second) frontier.push_back(l.target.thing);
    if (members.empty()) return std::nullopt;

    // structural closure below the children
    while (!frontier.empty()) {
        const ThingId current = frontier.back();
        frontier.pop_back();
        for (const Link& l : m.links) {
            if (!is_structural(l.kind) || l.source.thing != current) continue;
            if (l.target.thing == zoomed) continue;
            if (members.insert(l.target.thing.value).second) frontier.push_back(l.target.thing);
        }
    }

    Model view;
    view.name = m.name + "/" + m.thing(zoomed)->name;

    std::map<std::uint32_t, ThingId> thing_map;
    for (const Thing& t : m.things) {
        if (!members.count(t.id.value)) continue;
        const ThingId id{static_cast<std::uint32_t>(view.things.size())};
        Thing copy = t;
        copy.id = id;
        // scope pointers leaving the view are dropped; the attribute stays.
        if (copy.scope && !members.count(copy.scope->value)) copy.scope.reset();
        thing_map.emplace(t.id.value, id);
        view.things.push_back(std::move(copy));
    }
    for (Thing& t : view.things)
        if (t.scope) t.scope = thing_map.at(t.scope->value);

    std::map<std::uint32_t, StateId> state_map;
    for (const State& s : m.states) {
        if (!members.count(s.owner.value)) continue;
        const StateId id{static_cast<std::uint32_t>(view.states.size())};
        State copy = s;
        copy.id = id;
        copy.owner = thing_map.at(s.owner.value);
        state_map.emplace(s.id.value, id);
        view.states.push_back(std::move(copy));
    }

    auto map_state = [&state_map](std::optional<StateId> s) -> std::optional<StateId> {
        if (!s) return std::nullopt;
        return state_map.at(s->value);
    };
    for (const Link& l : m.links) {
        if (!members.count(l.source.thing.value) || !members.count(l.target.thing.value))
            continue;
        const LinkId id{static_cast<std::uint32_t>(view.links.size())};
        Link copy = l;
        copy.id = id;
        copy.source.thing = thing_map.at(l.source.thing.value);
        copy.source.state = map_state(l.source.state);
        copy.target.thing = thing_map.at(l.target.thing.value);
        copy.target.state = map_state(l.target.state);
        copy.from_state = map_state(l.from_state);
        copy.to_state = map_state(l.to_state);
        view.links.push_back(std::move(copy));
    }
    return view;
}

}  // namespace usfm::opm
