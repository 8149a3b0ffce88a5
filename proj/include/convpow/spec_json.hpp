#ifndef CONVPOW_SPEC_JSON_HPP
#define CONVPOW_SPEC_JSON_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "convpow/measure.hpp"

namespace convpow {

/// Parses {"family": ..., params...}. Throws InvalidSpec on unknown family,
/// missing or mistyped fields.
///
/// Families and fields:
///   power_law {b, alpha}      affine {a, b}            log_power {alpha}
///   sqrt_exp_density {}       shifted_exp {a}          exp {a}
///   heavy_exp_density {alpha}
///   lattice {span, offset, masses, tail?}   tabulated {h, V, tail?}
/// where tail is "none" (default) or "repeat".
MeasureSpec spec_from_json(const nlohmann::json& j);

/// Accepts either inline JSON text or a path to a JSON file.
MeasureSpec spec_from_text_or_path(const std::string& text_or_path);

/// Density specs hold a callable and cannot be serialized (InvalidSpec).
nlohmann::json spec_to_json(const MeasureSpec& spec);

}  // namespace convpow

#endif
