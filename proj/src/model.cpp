#include "usfm/opm/model.hpp"

#include "usfm/error.hpp"
#include "usfm/util/text.hpp"

namespace usfm::opm {

bool is_structural(LinkKind kind) {
    switch (kind) {
        case LinkKind::Aggregation:
        case LinkKind::Exhibition:
        case LinkKind::InZoom:
            return true;
        default:
            return false;
    }
}

std::string_view to_string(ThingKind k) {
    return k == ThingKind::Object ? "object" : "process";
}
std::string_view to_string(Essence e) {
    return e == Essence::Informational ? "informational" : "physical";
}
std::string_view to_string(Affiliation a) {
    return a == Affiliation::Systemic ? "systemic" : "environmental";
}
std::string_view to_string(LinkKind k) {
    switch (k) {
        case LinkKind::Aggregation: return "aggregation";
        case LinkKind::Exhibition: return "exhibition";
        case LinkKind::InZoom: return "in_zoom";
        case LinkKind::Consumption: return "consumption";
        case LinkKind::Result: return "result";
        case LinkKind::Effect: return "effect";
        case LinkKind::Instrument: return "instrument";
        case LinkKind::Agent: return "agent";
        case LinkKind::Condition: return "condition";
        case LinkKind::StateChange: return "state_change";
    }
    return "unknown";
}

std::optional<ThingKind> thing_kind_from(std::string_view s) {
    if (s == "object") return ThingKind::Object;
    if (s == "process") return ThingKind::Process;
    return std::nullopt;
}
std::optional<Essence> essence_from(std::string_view s) {
    if (s == "informational") return Essence::Informational;
    if (s == "physical") return Essence::Physical;
    return std::nullopt;
}
std::optional<Affiliation> affiliation_from(std::string_view s) {
    if (s == "systemic") return Affiliation::Systemic;
    if (s == "environmental") return Affiliation::Environmental;
    return std::nullopt;
}
std::optional<LinkKind> link_kind_from(std::string_view s) {
    static constexpr LinkKind kinds[] = {
        LinkKind::Aggregation, LinkKind::Exhibition, LinkKind::InZoom,
        LinkKind::Consumption, LinkKind::Result,     LinkKind::Effect,
        LinkKind::Instrument,  LinkKind::Agent,      LinkKind::Condition,
        LinkKind::StateChange,
    };
    for (LinkKind k : kinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

const Thing* Model::thing(ThingId id) const {
    return id.value < things.size() ? &things[id.value] : nullptr;
}
const State* Model::state(StateId id) const {
    return id.value < states.size() ? &states[id.value] : nullptr;
}
const Link* Model::link(LinkId id) const {
    return id.value < links.size() ? &links[id.value] : nullptr;
}

std::optional<ThingId> Model::find_thing(std::string_view name,
                                         std::optional<ThingId> scope) const {
    for (const Thing& t : things)
        if (t.scope == scope && t.name == name) return t.id;
    return std::nullopt;
}

std::optional<ThingId> Model::find_thing_latest(std::string_view name) const {
    for (auto it = things.rbegin(); it != things.rend(); ++it)
        if (it->name == name) return it->id;
    return std::nullopt;
}

std::optional<StateId> Model::find_state(ThingId owner, std::string_view name) const {
    for (const State& s : states)
        if (s.owner == owner && s.name == name) return s.id;
    return std::nullopt;
}

std::vector<StateId> Model::states_of(ThingId owner) const {
    std::vector<StateId> out;
    for (const State& s : states)
        if (s.owner == owner) out.push_back(s.id);
    return out;
}

std::vector<LinkId> Model::links_from(ThingId source) const {
    std::vector<LinkId> out;
    for (const Link& l : links)
        if (l.source.thing == source) out.push_back(l.id);
    return out;
}

std::vector<LinkId> Model::links_to(ThingId target) const {
    std::vector<LinkId> out;
    for (const Link& l : links)
        if (l.target.thing == target) out.push_back(l.id);
    return out;
}

ThingId add_thing(Model& m, std::string name, ThingKind kind, Essence essence,
                  Affiliation affiliation, std::optional<ThingId> scope, bool implicit) {
    name = normalize_space(name);
    if (name.empty()) throw Error("empty-name", "thing name must be nonempty");
    if (scope && !m.thing(*scope))
        throw Error("unresolved-thing", "scope id out of range");
    if (m.find_thing(name, scope))
        throw Error("duplicate-name", "thing '" + name + "' already declared in this scope");
    const ThingId id{static_cast<std::uint32_t>(m.things.size())};
    m.things.push_back(Thing{id, std::move(name), kind, essence, affiliation, scope, implicit});
    return id;
}

StateId add_state(Model& m, ThingId owner, std::string name) {
    name = normalize_space(name);
    if (name.empty()) throw Error("empty-name", "state name must be nonempty");
    const Thing* t = m.thing(owner);
    if (!t) throw Error("unresolved-thing", "state owner id out of range");
    if (t->kind != ThingKind::Object)
        throw Error("state-on-process", "states belong to objects; '" + t->name + "' is a process");
    if (m.find_state(owner, name))
        throw Error("duplicate-state",
                    "state '" + name + "' already declared on '" + t->name + "'");
    const StateId id{static_cast<std::uint32_t>(m.states.size())};
    m.states.push_back(State{id, owner, std::move(name), false, false});
    return id;
}

namespace {

const Thing& resolve_thing(const Model& m, ThingId id, const char* role) {
    const Thing* t = m.thing(id);
    if (!t) throw Error("unresolved-thing", std::string(role) + " id out of range");
    return *t;
}

void require_kind(const Thing& t, ThingKind kind, LinkKind link) {
    if (t.kind != kind)
        throw Error("illegal-endpoint", std::string(to_string(link)) + " link needs a " +
                                            std::string(to_string(kind)) + " at this end; '" +
                                            t.name + "' is a " + std::string(to_string(t.kind)));
}

void check_endpoint_state(const Model& m, const Endpoint& ep, bool allowed,
                          const char* which) {
    if (!ep.state) return;
    if (!allowed)
        throw Error("qualifier-forbidden",
                    std::string("state qualifier not allowed on ") + which + " endpoint");
    const State* s = m.state(*ep.state);
    if (!s) throw Error("unresolved-state", "state qualifier id out of range");
    if (s->owner != ep.thing)
        throw Error("state-owner", "state qualifier must belong to the qualified object");
}

}  // namespace

LinkId add_link(Model& m, LinkKind kind, Endpoint source, Endpoint target,
                std::optional<StateId> from_state, std::optional<StateId> to_state) {
    const Thing& src = resolve_thing(m, source.thing, "link source");
    const Thing& dst = resolve_thing(m, target.thing, "link target");

    if (is_structural(kind)) {
        if (source.thing == target.thing)
            throw Error("illegal-endpoint",
                        std::string(to_string(kind)) + " link cannot be a self-loop");
    } else {
        switch (kind) {
            case LinkKind::Consumption:
            case LinkKind::Result:
            case LinkKind::Effect:
            case LinkKind::Instrument:
            case LinkKind::StateChange:
                require_kind(src, ThingKind::Process, kind);
                require_kind(dst, ThingKind::Object, kind);
                break;
            case LinkKind::Agent:
            case LinkKind::Condition:
                require_kind(src, ThingKind::Object, kind);
                require_kind(dst, ThingKind::Process, kind);
                break;
            default:
                break;
        }
    }

    check_endpoint_state(m, source, false, "source");
    check_endpoint_state(m, target, kind == LinkKind::Consumption, "target");

    if (kind == LinkKind::StateChange) {
        if (!from_state || !to_state)
            throw Error("missing-state", "state_change link needs both from and to states");
        const State* from = m.state(*from_state);
        const State* to = m.state(*to_state);
        if (!from || !to) throw Error("unresolved-state", "state_change state id out of range");
        if (from->owner != target.thing || to->owner != target.thing)
            throw Error("state-owner", "state_change states must belong to the changed object");
        if (*from_state == *to_state)
            throw Error("same-state", "state_change from and to states must differ");
    } else if (from_state || to_state) {
        throw Error("missing-state",
                    "from/to states are only meaningful on state_change links");
    }

    const LinkId id{static_cast<std::uint32_t>(m.links.size())};
    m.links.push_back(Link{id, kind, source, target, from_state, to_state});
    return id;
}

std::uint64_t model_digest(const Model& m) {
    std::string buf;
    buf.reserve(256 + m.things.size() * 32 + m.states.size() * 16 + m.links.size() * 24);
    auto put = [&buf](std::string_view s) {
        buf += s;
        buf += '\x1f';
    };
    auto put_num = [&buf](std::uint64_t v) {
        buf += std::to_string(v);
        buf += '\x1f';
    };
    put(m.name);
    put_num(m.things.size());
    for (const Thing& t : m.things) {
        put(t.name);
        put(to_string(t.kind));
        put(to_string(t.essence));
        put(to_string(t.affiliation));
        put_num(t.scope ? t.scope->value + 1 : 0);
        put_num(t.implicit ? 1 : 0);
    }
    put_num(m.states.size());
    for (const State& s : m.states) {
        put(s.name);
        put_num(s.owner.value);
        put_num((s.initial ? 1u : 0u) | (s.final ? 2u : 0u));
    }
    put_num(m.links.size());
    for (const Link& l : m.links) {
        put(to_string(l.kind));
        put_num(l.source.thing.value);
        put_num(l.source.state ? l.source.state->value + 1 : 0);
        put_num(l.target.thing.value);
        put_num(l.target.state ? l.target.state->value + 1 : 0);
        put_num(l.from_state ? l.from_state->value + 1 : 0);
        put_num(l.to_state ? l.to_state->value + 1 : 0);
    }
    return fnv1a64(buf);
}

}  // namespace usfm::opm
