// Copyright 2026 The fockmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON configuration files for CLI11: {"<subcommand>": {"<long-flag>": value}}.
// Values given on the command line take precedence.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace fockmetro::cli {

class ConfigJson : public CLI::Config {
  public:
    std::string to_config(const CLI::App *app, bool default_also, bool, std::string) const override {
        return to_json(app, default_also).dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::parse_error &e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, "", {}, items);
        return items;
    }

    /// Resolved options of `app` (defaults included when `default_also`).
    static nlohmann::json to_json(const CLI::App *app, bool default_also) {
        nlohmann::json j = nlohmann::json::object();
        for (const CLI::Option *opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) {
                continue;
            }
            const std::string name = opt->get_lnames()[0];
            if (opt->get_type_size() != 0) {
                if (opt->count() == 1) {
                    j[name] = opt->results().at(0);
                } else if (opt->count() > 1) {
                    j[name] = opt->results();
                } else if (default_also && !opt->get_default_str().empty()) {
                    j[name] = opt->get_default_str();
                }
            } else if (opt->count() > 0) {
                j[name] = true;
            } else if (default_also) {
                j[name] = false;
            }
        }
        for (const CLI::App *sub : app->get_subcommands({})) {
            j[sub->get_name()] = to_json(sub, default_also);
        }
        return j;
    }

  private:
    static void collect(const nlohmann::json &j, const std::string &name, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem> &items) {
        if (j.is_object()) {
            if (!name.empty()) {
                parents.push_back(name);
            }
            for (auto it = j.begin(); it != j.end(); ++it) {
                collect(*it, it.key(), parents, items);
            }
            return;
        }
        if (name.empty()) {
            throw CLI::ConversionError("config file must hold a JSON object");
        }
        CLI::ConfigItem item;
        item.name = name;
        item.parents = parents;
        if (j.is_array()) {
            for (const auto &v : j) {
                item.inputs.push_back(scalar(v, name));
            }
        } else {
            item.inputs.push_back(scalar(j, name));
        }
        items.push_back(std::move(item));
    }

    static std::string scalar(const nlohmann::json &v, const std::string &name) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_boolean()) {
            return v.get<bool>() ? "true" : "false";
        }
        if (v.is_number()) {
            return v.dump();
        }
        throw CLI::ConversionError("unsupported config value for '" + name + "'");
    }
};

}  // namespace fockmetro::cli
