#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace usfm::opm {

enum class ThingKind { Object, Process };
enum class Essence { Informational, Physical };
enum class Affiliation { Systemic, Environmental };

enum class LinkKind {
    // structural
    Aggregation,   // whole -> part
    Exhibition,    // exhibitor -> attribute
    InZoom,        // container -> refined child
    // procedural
    Consumption,   // process -> consumed object (optional source state on target)
    Result,        // process -> created object
    Effect,        // process -> affected object
    Instrument,    // process -> enabling object
    Agent,         // handler object -> process
    Condition,     // condition object -> process
    StateChange,   // process -> object, with from/to states of that object
};

bool is_structural(LinkKind kind);

std::string_view to_string(ThingKind k);
std::string_view to_string(Essence e);
std::string_view to_string(Affiliation a);
std::string_view to_string(LinkKind k);

std::optional<ThingKind> thing_kind_from(std::string_view s);
std::optional<Essence> essence_from(std::string_view s);
std::optional<Affiliation> affiliation_from(std::string_view s);
std::optional<LinkKind> link_kind_from(std::string_view s);

// Ids are indices into the owning model's vectors; creation order is identity.
struct ThingId {
    std::uint32_t value = 0;
    auto operator<=>(const ThingId&) const = default;
};
struct StateId {
    std::uint32_t value = 0;
    auto operator<=>(const StateId&) const = default;
};
struct LinkId {
    std::uint32_t value = 0;
    auto operator<=>(const LinkId&) const = default;
};

struct Thing {
    ThingId id;
    std::string name;
    ThingKind kind = ThingKind::Object;
    Essence essence = Essence::Informational;
    Affiliation affiliation = Affiliation::Systemic;
    // Attributes created by an exhibition sentence live in their exhibitor's
    // scope; the same name may recur under different exhibitors.
    std::optional<ThingId> scope;
    // Set when the thing was auto-declared by reference; cleared by an
    // explicit declaration sentence.
    bool implicit = false;
};

struct State {
    StateId id;
    ThingId owner;  // must be an Object
    std::string name;
    bool initial = false;
    bool final = false;
};

// Link endpoint; `state` is the consumed-from state qualifier and is legal
// only on the object end of a Consumption link.
struct Endpoint {
    ThingId thing;
    std::optional<StateId> state;
};

struct Link {
    LinkId id;
    LinkKind kind;
    Endpoint source;
    Endpoint target;
    // StateChange only: both states belong to the target object and differ.
    std::optional<StateId> from_state;
    std::optional<StateId> to_state;
};

struct Model {
    std::string name;
    std::vector<Thing> things;
    std::vector<State> states;
    std::vector<Link> links;

    const Thing* thing(ThingId id) const;
    const State* state(StateId id) const;
    const Link* link(LinkId id) const;

    // Exact name in exact scope (nullopt scope = top level).
    std::optional<ThingId> find_thing(std::string_view name,
                                      std::optional<ThingId> scope = std::nullopt) const;
    // Most recently declared thing of this name in any scope.
    std::optional<ThingId> find_thing_latest(std::string_view name) const;
    std::optional<StateId> find_state(ThingId owner, std::string_view name) const;
    std::vector<StateId> states_of(ThingId owner) const;
    std::vector<LinkId> links_from(ThingId source) const;
    std::vector<LinkId> links_to(ThingId target) const;
};

// Mutators uphold referential integrity and link legality; all throw
// usfm::Error with a stable code on contract violation.
ThingId add_thing(Model& m, std::string name, ThingKind kind,
                  Essence essence = Essence::Informational,
                  Affiliation affiliation = Affiliation::Systemic,
                  std::optional<ThingId> scope = std::nullopt, bool implicit = false);

StateId add_state(Model& m, ThingId owner, std::string name);

LinkId add_link(Model& m, LinkKind kind, Endpoint source, Endpoint target,
                std::optional<StateId> from_state = std::nullopt,
                std::optional<StateId> to_state = std::nullopt);

// Content digest over the canonical serialization; equal-content models hash
// equal regardless of how they were produced.
std::uint64_t model_digest(const Model& m);

}  // namespace usfm::opm
