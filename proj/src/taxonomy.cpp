#include "usfm/sms/taxonomy.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "usfm/error.hpp"
#include "usfm/util/text.hpp"

namespace usfm::sms {

using nlohmann::json;
using nlohmann::ordered_json;

bool is_process_category(std::string_view name) {
    return std::find(kProcessCategories.begin(), kProcessCategories.end(), name) !=
           kProcessCategories.end();
}

const ObjectCategory* Catalog::object_category(std::string_view name) const {
    for (const ObjectCategory& c : object_categories)
        if (c.name == name) return &c;
    return nullptr;
}

Catalog load_catalog(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error("catalog", e.what());
    }

    Catalog catalog;
    try {
        for (const json& j : doc.at("process_categories"))
            catalog.process_categories.push_back(j.get<std::string>());
        for (const json& jc : doc.at("object_categories")) {
            ObjectCategory c;
            c.name = jc.at("name").get<std::string>();
            if (jc.contains("attributes"))
                for (const json& a : jc.at("attributes"))
                    c.attributes.push_back(a.get<std::string>());
            if (jc.contains("subcategories")) {
                for (const json& js : jc.at("subcategories")) {
                    ObjectSubcategory s;
                    s.name = js.at("name").get<std::string>();
                    if (js.contains("attributes"))
                        for (const json& a : js.at("attributes"))
                            s.attributes.push_back(a.get<std::string>());
                    c.subcategories.push_back(std::move(s));
                }
            }
            catalog.object_categories.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        throw Error("catalog", e.what());
    }

    // shape invariants
    if (catalog.process_categories.size() != kProcessCategories.size())
        throw Error("catalog", "expected exactly " + std::to_string(kProcessCategories.size()) +
                                   " process categories");
    for (size_t i = 0; i < kProcessCategories.size(); ++i)
        if (catalog.process_categories[i] != kProcessCategories[i])
            throw Error("catalog", "process category " + std::to_string(i) + " must be '" +
                                       std::string(kProcessCategories[i]) + "', got '" +
                                       catalog.process_categories[i] + "'");

    auto need = [&](const char* name) -> const ObjectCategory& {
        const ObjectCategory* c = catalog.object_category(name);
        if (!c) throw Error("catalog", std::string("missing object category '") + name + "'");
        return *c;
    };
    if (need("input_material").subcategories.size() != 6)
        throw Error("catalog", "input_material must have exactly 6 subcategories");
    if (need("equipment").subcategories.size() != 4)
        throw Error("catalog", "equipment must have exactly 4 subcategories");
    const ObjectCategory& env = need("environment");
    std::set<std::string> env_names;
    for (const ObjectSubcategory& s : env.subcategories) env_names.insert(s.name);
    if (env_names != std::set<std::string>{"immediate", "outside"})
        throw Error("catalog", "environment subcategories must be exactly immediate/outside");

    return catalog;
}

std::optional<ClassifyNote> classify_process(const opm::Model& m, Classification& c,
                                             opm::ThingId process, const std::string& category) {
    const opm::Thing* t = m.thing(process);
    if (!t) throw Error("unresolved-thing", "no such thing to classify");
    if (t->kind != opm::ThingKind::Process)
        throw Error("not-a-process", "'" + t->name + "' is not a process");
    if (!is_process_category(category))
        throw Error("unknown-category", "'" + category + "' is not a process category");

    auto [it, inserted] = c.category_of.emplace(process.value, category);
    if (inserted) return std::nullopt;
    ClassifyNote note{process, "'" + t->name + "' reclassified from '" + it->second + "' to '" +
                                   category + "'"};
    it->second = category;
    return note;
}

SystemRecord system_record_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("system-record", e.what());
    }
    SystemRecord r;
    struct Field {
        const char* key;
        std::string SystemRecord::*member;
    };
    static constexpr Field fields[] = {
        {"product_type", &SystemRecord::product_type},
        {"complexity", &SystemRecord::complexity},
        {"system_classification", &SystemRecord::system_classification},
        {"automation_level", &SystemRecord::automation_level},
        {"production_control", &SystemRecord::production_control},
        {"quality_control", &SystemRecord::quality_control},
        {"waste_disposal", &SystemRecord::waste_disposal},
    };
    for (const Field& f : fields) {
        if (!doc.contains(f.key) || !doc.at(f.key).is_string())
            throw Error("system-record", std::string("missing or non-string field '") + f.key + "'");
        r.*f.member = doc.at(f.key).get<std::string>();
    }
    return r;
}

std::string system_record_to_json(const SystemRecord& r) {
    ordered_json doc;
    doc["product_type"] = r.product_type;
    doc["complexity"] = r.complexity;
    doc["system_classification"] = r.system_classification;
    doc["automation_level"] = r.automation_level;
    doc["production_control"] = r.production_control;
    doc["quality_control"] = r.quality_control;
    doc["waste_disposal"] = r.waste_disposal;
    return doc.dump(2) + "\n";
}

}  // namespace usfm::sms
