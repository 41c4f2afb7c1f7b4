#include "json_config.hpp"

#include <json.hpp>

namespace csikit::cli {
namespace {

using nlohmann::json;

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return v.dump();
}

void flatten(const json& object, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
  for (const auto& [key, value] : object.items()) {
    if (value.is_object()) {
      auto nested = parents;
      nested.push_back(key);
      flatten(value, nested, out);
      continue;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array()) {
      for (const auto& v : value) item.inputs.push_back(scalar(v));
    } else if (!value.is_null()) {
      item.inputs.push_back(scalar(value));
    }
    out.push_back(std::move(item));
  }
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool /*write_description*/,
                                  std::string /*prefix*/) const {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const auto& name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& results = opt->results();
      j[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else if (default_also && !opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json j;
  try {
    j = json::parse(input);
  } catch (const json::exception& e) {
    throw CLI::ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ConfigError("JSON config must be an object");
  std::vector<CLI::ConfigItem> items;
  std::vector<std::string> parents;
  if (!default_section_.empty()) parents.push_back(default_section_);
  for (const auto& [key, value] : j.items()) {
    json one = json::object();
    one[key] = value;
    // An object named after the section is the same as top-level keys.
    if (value.is_object() && key == default_section_) {
      flatten(value, parents, items);
    } else if (value.is_object()) {
      flatten(one, {}, items);
    } else {
      flatten(one, parents, items);
    }
  }
  return items;
}

}  // namespace csikit::cli
