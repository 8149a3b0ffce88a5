#include "convpow/spec_json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "convpow/errors.hpp"

namespace convpow {

namespace {

using nlohmann::json;

double num(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidSpec(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidSpec(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> num_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InvalidSpec(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw InvalidSpec(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Tail tail_of(const json& j) {
  if (!j.contains("tail")) return Tail::None;
  const auto& t = j.at("tail");
  if (t == "none") return Tail::None;
  if (t == "repeat") return Tail::Repeat;
  throw InvalidSpec("field 'tail' must be \"none\" or \"repeat\"");
}

const char* tail_name(Tail t) { return t == Tail::Repeat ? "repeat" : "none"; }

}  // namespace

MeasureSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw InvalidSpec("spec must be an object with a string 'family'");
  const auto family = j.at("family").get<std::string>();
  if (family == "power_law") return PowerLaw{num(j, "b"), num(j, "alpha")};
  if (family == "affine") return Affine{num(j, "a"), num(j, "b")};
  if (family == "log_power") return LogPower{num(j, "alpha")};
  if (family == "sqrt_exp_density") return SqrtExpDensity{};
  if (family == "shifted_exp") return ShiftedExp{num(j, "a")};
  if (family == "exp") return Exp{num(j, "a")};
  if (family == "heavy_exp_density") return HeavyExpDensity{num(j, "alpha")};
  if (family == "lattice") return Lattice{num(j, "span"), num(j, "offset"), num_list(j, "masses"), tail_of(j)};
  if (family == "tabulated") return Tabulated{num(j, "h"), num_list(j, "V"), tail_of(j)};
  if (family == "density") throw InvalidSpec("density specs carry a callable and cannot be read from JSON");
  throw InvalidSpec("unknown family '" + family + "'");
}

MeasureSpec spec_from_text_or_path(const std::string& text_or_path) {
  std::string text = text_or_path;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(text_or_path);
    if (!in) throw InvalidSpec("cannot read spec file '" + text_or_path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed spec JSON: ") + e.what());
  }
  return spec_from_json(j);
}

json spec_to_json(const MeasureSpec& spec) {
  json j;
  j["family"] = spec.family();
  if (const auto* m = spec.as<PowerLaw>()) {
    j["b"] = m->b;
    j["alpha"] = m->alpha;
  } else if (const auto* m = spec.as<Affine>()) {
    j["a"] = m->a;
    j["b"] = m->b;
  } else if (const auto* m = spec.as<LogPower>()) {
    j["alpha"] = m->alpha;
  } else if (const auto* m = spec.as<ShiftedExp>()) {
    j["a"] = m->a;
  } else if (const auto* m = spec.as<Exp>()) {
    j["a"] = m->a;
  } else if (const auto* m = spec.as<HeavyExpDensity>()) {
    j["alpha"] = m->alpha;
  } else if (const auto* m = spec.as<Lattice>()) {
    j["span"] = m->span;
    j["offset"] = m->offset;
    j["masses"] = m->masses;
    j["tail"] = tail_name(m->tail);
  } else if (const auto* m = spec.as<Tabulated>()) {
    j["h"] = m->h;
    j["V"] = m->values;
    j["tail"] = tail_name(m->tail);
  } else if (spec.as<Density>()) {
    throw InvalidSpec("density specs cannot be serialized");
  }
  return j;
}

}  // namespace convpow
