#include <json.hpp>

#include <map>
#include <set>

#include "ouruin/errors.hpp"
#include "ouruin/levy_models.hpp"

namespace ouruin {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>>& family_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"exponential", {"eta", "delta"}},
      {"linnik", {"eta", "delta", "alpha"}},
      {"stable", {"alpha"}},
      {"truncated_stable", {"C", "A", "alpha"}},
  };
  return keys;
}

double number_field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("model spec: missing key \"" + key + "\" in " + where);
  if (!it->is_number()) throw ConfigError("model spec: key \"" + key + "\" in " + where + " must be a number");
  return it->get<double>();
}

}  // namespace

LevyModel parse_model_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model spec: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("model spec: top level must be an object");
  static const std::set<std::string> top{"family", "params", "esscher_gamma"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!top.count(it.key())) throw ConfigError("model spec: unknown key \"" + it.key() + "\"");

  auto fam = j.find("family");
  if (fam == j.end() || !fam->is_string()) throw ConfigError("model spec: key \"family\" must be a string");
  const std::string family = fam->get<std::string>();
  auto known = family_keys().find(family);
  if (known == family_keys().end()) throw ConfigError("model spec: unknown family \"" + family + "\"");

  auto par = j.find("params");
  if (par == j.end() || !par->is_object()) throw ConfigError("model spec: key \"params\" must be an object");
  const auto& allowed = known->second;
  for (auto it = par->begin(); it != par->end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("model spec: unknown key \"params." + it.key() + "\" for family " + family);

  std::map<std::string, double> p;
  for (const auto& k : allowed) p[k] = number_field(*par, k, "params");

  try {
    LevyModel model = [&] {
      if (family == "exponential") return LevyModel::exponential(p["eta"], p["delta"]);
      if (family == "linnik") return LevyModel::linnik(p["eta"], p["delta"], p["alpha"]);
      if (family == "stable") return LevyModel::stable(p["alpha"]);
      return LevyModel::truncated_stable(p["C"], p["A"], p["alpha"]);
    }();
    if (j.contains("esscher_gamma")) {
      double g = number_field(j, "esscher_gamma", "spec");
      if (g < 0.0) throw ConfigError("model spec: key \"esscher_gamma\" must be >= 0");
      model = LevyModel::esscher(model, g);
    }
    return model;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model spec: ") + e.what());
  }
}

std::string model_to_json(const LevyModel& m) {
  json j;
  const LevyModel* base = &m;
  if (auto* e = std::get_if<Esscher>(&m.family())) {
    j["esscher_gamma"] = e->gamma;
    base = e->base.get();
  }
  const auto& f = base->family();
  if (auto* x = std::get_if<ExponentialJumps>(&f)) {
    j["family"] = "exponential";
    j["params"] = {{"eta", x->eta}, {"delta", x->delta}};
  } else if (auto* x = std::get_if<Linnik>(&f)) {
    j["family"] = "linnik";
    j["params"] = {{"eta", x->eta}, {"delta", x->delta}, {"alpha", x->alpha}};
  } else if (auto* x = std::get_if<Stable>(&f)) {
    j["family"] = "stable";
    j["params"] = {{"alpha", x->alpha}};
  } else if (auto* x = std::get_if<TruncatedStable>(&f)) {
    j["family"] = "truncated_stable";
    j["params"] = {{"C", x->C}, {"A", x->A}, {"alpha", x->alpha}};
  } else {
    throw UnsupportedError("model_to_json: only the built-in families serialize");
  }
  return j.dump();
}

}  // namespace ouruin
