#pragma once

#include <CLI11.hpp>

namespace csikit::cli {

/// CLI11 config reader for JSON files whose keys are long option names
/// without dashes, e.g. {"seed": 7, "ks": [50, 100]}. Top-level keys are
/// attributed to `default_section` (the subcommand being run); nested objects
/// map to subcommands of the same name.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string default_section = {}) : default_section_(std::move(default_section)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

 private:
  std::string default_section_;
};

}  // namespace csikit::cli
