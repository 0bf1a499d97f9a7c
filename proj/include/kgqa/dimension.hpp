#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kgqa/error.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

// The 13 knowledge dimensions. Closed set; order is the canonical order used
// for deterministic tie-breaking.
enum class Dimension : std::uint8_t {
    lexical,
    similarity,
    distinctness,
    taxonomic,
    part_whole,
    creation,
    utility,
    comparative,
    quality,
    temporal,
    spatial,
    motivational,
    relational_other,
};

inline constexpr std::size_t kDimensionCount = 13;

inline constexpr std::array<Dimension, kDimensionCount> all_dimensions() {
    return {Dimension::lexical,     Dimension::similarity,  Dimension::distinctness,
            Dimension::taxonomic,   Dimension::part_whole,  Dimension::creation,
            Dimension::utility,     Dimension::comparative, Dimension::quality,
            Dimension::temporal,    Dimension::spatial,     Dimension::motivational,
            Dimension::relational_other};
}

inline std::string_view to_string(Dimension d) {
    switch (d) {
        case Dimension::lexical: return "lexical";
        case Dimension::similarity: return "similarity";
        case Dimension::distinctness: return "distinctness";
        case Dimension::taxonomic: return "taxonomic";
        case Dimension::part_whole: return "part-whole";
        case Dimension::creation: return "creation";
        case Dimension::utility: return "utility";
        case Dimension::comparative: return "comparative";
        case Dimension::quality: return "quality";
        case Dimension::temporal: return "temporal";
        case Dimension::spatial: return "spatial";
        case Dimension::motivational: return "motivational";
        case Dimension::relational_other: return "relational-other";
    }
    return "unknown";
}

// Accepts the canonical names plus common aliases. "desire"/"goal" name the
// same dimension as "motivational": evaluation write-ups use both for one
// category, so they are treated as one value here, not two.
inline std::optional<Dimension> parse_dimension(std::string_view name) {
    std::string key = to_lower(trim(name));
    for (char& c : key)
        if (c == '_' || c == ' ') c = '-';
    for (Dimension d : all_dimensions())
        if (key == to_string(d)) return d;
    if (key == "part-whole" || key == "partwhole") return Dimension::part_whole;
    if (key == "desire" || key == "desire/goal" || key == "desire-goal" || key == "goal")
        return Dimension::motivational;
    if (key == "rel-other" || key == "relational" || key == "relationalother")
        return Dimension::relational_other;
    return std::nullopt;
}

inline Dimension require_dimension(std::string_view name) {
    auto d = parse_dimension(name);
    if (!d) throw Error(ErrorKind::spec, "unknown dimension: " + std::string(name));
    return *d;
}

inline std::size_t dimension_index(Dimension d) { return static_cast<std::size_t>(d); }

} // namespace kgqa
