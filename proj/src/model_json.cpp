#include "usfm/opl/model_json.hpp"

#include <nlohmann/json.hpp>

#include "usfm/error.hpp"

namespace usfm::opl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::optional<opm::ThingId> thing_id_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number_unsigned()) throw Error("model-json", std::string(key) + " must be an id");
    return opm::ThingId{j.at(key).get<std::uint32_t>()};
}
std::optional<opm::StateId> state_id_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number_unsigned()) throw Error("model-json", std::string(key) + " must be an id");
    return opm::StateId{j.at(key).get<std::uint32_t>()};
}

}  // namespace

std::string model_to_json(const opm::Model& m) {
    ordered_json doc;
    doc["format"] = "usfm-model";
    doc["version"] = 1;
    doc["name"] = m.name;

    ordered_json things = ordered_json::array();
    for (const opm::Thing& t : m.things) {
        ordered_json jt;
        jt["id"] = t.id.value;
        jt["name"] = t.name;
        jt["kind"] = std::string(opm::to_string(t.kind));
        jt["essence"] = std::string(opm::to_string(t.essence));
        jt["affiliation"] = std::string(opm::to_string(t.affiliation));
        jt["scope"] = t.scope ? ordered_json(t.scope->value) : ordered_json(nullptr);
        jt["implicit"] = t.implicit;
        things.push_back(std::move(jt));
    }
    doc["things"] = std::move(things);

    ordered_json states = ordered_json::array();
    for (const opm::State& s : m.states) {
        ordered_json js;
        js["id"] = s.id.value;
        js["owner"] = s.owner.value;
        js["name"] = s.name;
        js["initial"] = s.initial;
        js["final"] = s.final;
        states.push_back(std::move(js));
    }
    doc["states"] = std::move(states);

    ordered_json links = ordered_json::array();
    for (const opm::Link& l : m.links) {
        ordered_json jl;
        jl["id"] = l.id.value;
        jl["kind"] = std::string(opm::to_string(l.kind));
        jl["source"] = l.source.thing.value;
        jl["source_state"] = l.source.state ? ordered_json(l.source.state->value)
                                            : ordered_json(nullptr);
        jl["target"] = l.target.thing.value;
        jl["target_state"] = l.target.state ? ordered_json(l.target.state->value)
                                            : ordered_json(nullptr);
        jl["from_state"] = l.from_state ? ordered_json(l.from_state->value) : ordered_json(nullptr);
        jl["to_state"] = l.to_state ? ordered_json(l.to_state->value) : ordered_json(nullptr);
        links.push_back(std::move(jl));
    }
    doc["links"] = std::move(links);

    return doc.dump(2) + "\n";
}

opm::Model model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("model-json", e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", "") != "usfm-model")
            throw Error("model-json", "not a usfm-model document");
        if (doc.value("version", 0) != 1)
            throw Error("model-json", "unsupported model version");

        opm::Model m;
        m.name = doc.value("name", "");

        for (const json& jt : doc.at("things")) {
            opm::Thing t;
            t.id = opm::ThingId{jt.at("id").get<std::uint32_t>()};
            t.name = jt.at("name").get<std::string>();
            const auto kind = opm::thing_kind_from(jt.at("kind").get<std::string>());
            const auto essence = opm::essence_from(jt.at("essence").get<std::string>());
            const auto affiliation = opm::affiliation_from(jt.at("affiliation").get<std::string>());
            if (!kind || !essence || !affiliation)
                throw Error("model-json", "bad enum value on thing " + std::to_string(t.id.value));
            t.kind = *kind;
            t.essence = *essence;
            t.affiliation = *affiliation;
            t.scope = thing_id_from(jt, "scope");
            t.implicit = jt.value("implicit", false);
            if (t.id.value != m.things.size())
                throw Error("model-json", "thing ids must be dense and ordered");
            m.things.push_back(std::move(t));
        }

        for (const json& js : doc.at("states")) {
            opm::State s;
            s.id = opm::StateId{js.at("id").get<std::uint32_t>()};
            s.owner = opm::ThingId{js.at("owner").get<std::uint32_t>()};
            s.name = js.at("name").get<std::string>();
            s.initial = js.value("initial", false);
            s.final = js.value("final", false);
            if (s.id.value != m.states.size())
                throw Error("model-json", "state ids must be dense and ordered");
            if (!m.thing(s.owner)) throw Error("model-json", "state owner out of range");
            m.states.push_back(std::move(s));
        }

        for (const json& jl : doc.at("links")) {
            opm::Link l;
            l.id = opm::LinkId{jl.at("id").get<std::uint32_t>()};
            const auto kind = opm::link_kind_from(jl.at("kind").get<std::string>());
            if (!kind)
                throw Error("model-json", "bad link kind on link " + std::to_string(l.id.value));
            l.kind = *kind;
            l.source.thing = opm::ThingId{jl.at("source").get<std::uint32_t>()};
            l.source.state = state_id_from(jl, "source_state");
            l.target.thing = opm::ThingId{jl.at("target").get<std::uint32_t>()};
            l.target.state = state_id_from(jl, "target_state");
            l.from_state = state_id_from(jl, "from_state");
            l.to_state = state_id_from(jl, "to_state");
            if (l.id.value != m.links.size())
                throw Error("model-json", "link ids must be dense and ordered");
            if (!m.thing(l.source.thing) || !m.thing(l.target.thing))
                throw Error("model-json", "link endpoint out of range");
            for (const auto& sid : {l.source.state, l.target.state, l.from_state, l.to_state})
                if (sid && !m.state(*sid)) throw Error("model-json", "link state out of range");
            m.links.push_back(std::move(l));
        }
        return m;
    } catch (const json::exception& e) {
        throw Error("model-json", e.what());
    }
}

}  // namespace usfm::opl
