#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace biaseval {

struct StrengthExample {
    std::string sentence;
    double strength = 0.0;
    std::string tier; // e.g. "Moderate", "High"
};

struct BiasType {
    std::string name; // canonical, without the " Bias" suffix
    std::string definition;
    std::array<StrengthExample, 2> examples;

    std::string display_name() const { return name + " Bias"; }
};

/// Outcome of mapping a raw model label onto the taxonomy. Hallucinated
/// labels keep the raw text verbatim so they can be tallied.
struct LabelResolution {
    enum class Kind { Canonical, Aliased, Hallucinated };

    Kind kind = Kind::Hallucinated;
    std::string canonical; // empty iff hallucinated
    std::string raw;

    bool is_hallucinated() const { return kind == Kind::Hallucinated; }
    /// Canonical name for canonical/aliased labels, raw text otherwise.
    const std::string& counting_label() const {
        return kind == Kind::Hallucinated ? raw : canonical;
    }
};

/// The bias-type inventory: definitions, graded example sentences and the
/// alias table. Loaded once from a JSON definition file, immutable after
/// that, safe to share across threads.
class Taxonomy {
public:
    static Taxonomy load(const std::string& path);
    static Taxonomy from_json(const nlohmann::json& doc);

    const std::vector<BiasType>& types() const { return types_; }
    size_t size() const { return types_.size(); }
    const std::map<std::string, std::string>& aliases() const { return aliases_; }

    /// Canonical type for `name` after trimming, case-folding and stripping
    /// one optional trailing " Bias" token; nullptr when unknown.
    const BiasType* lookup_type(std::string_view name) const;

    LabelResolution resolve_label(std::string_view raw) const;

    /// "Name Bias: definition" plus, when requested, the two example
    /// sentences with their tier and numeric strength.
    std::string render_definition(const BiasType& type, bool with_examples) const;

private:
    Taxonomy() = default;
    void index();

    std::vector<BiasType> types_;
    std::map<std::string, std::string> aliases_;        // display name -> canonical name
    std::map<std::string, size_t> lookup_;              // normalized key -> type index
    std::map<std::string, std::string> alias_lookup_;   // normalized key -> canonical name
};

} // namespace biaseval
