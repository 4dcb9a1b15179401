#include "biaseval/taxonomy.hpp"

#include <cctype>

#include "biaseval/util.hpp"

namespace biaseval {

namespace {

// casefold, collapse whitespace runs, strip one trailing " bias" token
std::string label_key(std::string_view raw) {
    std::string key;
    for (char c : util::to_lower_ascii(util::trim(raw))) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!key.empty() && key.back() != ' ') {
                key += ' ';
            }
        } else {
            key += c;
        }
    }
    if (key.size() > 5 && key.ends_with(" bias")) {
        key.resize(key.size() - 5);
        while (!key.empty() && key.back() == ' ') {
            key.pop_back();
        }
    }
    return key;
}

} // namespace

Taxonomy Taxonomy::load(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(util::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("taxonomy file " + path + ": " + e.what());
    }
    return from_json(doc);
}

Taxonomy Taxonomy::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("types") || !doc["types"].is_array()) {
        throw InputError("taxonomy: expected object with a \"types\" array");
    }
    if (doc["types"].empty()) {
        throw InputError("taxonomy: the type inventory is empty");
    }
    Taxonomy tax;
    for (const auto& entry : doc["types"]) {
        BiasType type;
        type.name = entry.at("name").get<std::string>();
        type.definition = entry.at("definition").get<std::string>();
        const auto& examples = entry.at("examples");
        if (!examples.is_array() || examples.size() != 2) {
            throw InputError("taxonomy: type \"" + type.name + "\" needs exactly 2 examples");
        }
        for (size_t i = 0; i < 2; ++i) {
            StrengthExample& ex = type.examples[i];
            ex.sentence = examples[i].at("sentence").get<std::string>();
            ex.strength = examples[i].at("strength").get<double>();
            ex.tier = examples[i].at("tier").get<std::string>();
            if (ex.strength < 0.0 || ex.strength > 1.0) {
                throw InputError("taxonomy: strength out of [0,1] for type \"" + type.name + "\"");
            }
        }
        if (type.examples[0].strength == type.examples[1].strength) {
            throw InputError("taxonomy: type \"" + type.name + "\" needs two distinct strengths");
        }
        tax.types_.push_back(std::move(type));
    }
    if (doc.contains("aliases")) {
        for (const auto& [alias, target] : doc["aliases"].items()) {
            tax.aliases_[alias] = target.get<std::string>();
        }
    }
    tax.index();
    return tax;
}

void Taxonomy::index() {
    for (size_t i = 0; i < types_.size(); ++i) {
        auto [it, inserted] = lookup_.emplace(label_key(types_[i].name), i);
        if (!inserted) {
            throw InputError("taxonomy: duplicate type name \"" + types_[i].name + "\"");
        }
    }
    for (const auto& [alias, target] : aliases_) {
        std::string key = label_key(alias);
        if (lookup_.count(key)) {
            throw InputError("taxonomy: alias \"" + alias + "\" collides with a canonical name");
        }
        auto target_it = lookup_.find(label_key(target));
        if (target_it == lookup_.end()) {
            throw InputError("taxonomy: alias \"" + alias + "\" maps to unknown type \"" + target + "\"");
        }
        alias_lookup_[key] = types_[target_it->second].name;
    }
}

const BiasType* Taxonomy::lookup_type(std::string_view name) const {
    auto it = lookup_.find(label_key(name));
    return it == lookup_.end() ? nullptr : &types_[it->second];
}

LabelResolution Taxonomy::resolve_label(std::string_view raw) const {
    if (util::trim(raw).empty()) {
        throw InputError("resolve_label: empty label");
    }
    LabelResolution res;
    res.raw = std::string(raw);
    if (const BiasType* type = lookup_type(raw)) {
        res.kind = LabelResolution::Kind::Canonical;
        res.canonical = type->name;
        return res;
    }
    auto it = alias_lookup_.find(label_key(raw));
    if (it != alias_lookup_.end()) {
        res.kind = LabelResolution::Kind::Aliased;
        res.canonical = it->second;
        return res;
    }
    res.kind = LabelResolution::Kind::Hallucinated;
    return res;
}

std::string Taxonomy::render_definition(const BiasType& type, bool with_examples) const {
    std::string out = type.display_name() + ": " + type.definition;
    if (with_examples) {
        out += "\nExamples:";
        for (const StrengthExample& ex : type.examples) {
            out += "\n" + ex.tier + " Bias Strength (" + util::format_strength(ex.strength) +
                   "): \"" + ex.sentence + "\"";
        }
    }
    return out;
}

} // namespace biaseval
