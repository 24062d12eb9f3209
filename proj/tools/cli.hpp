// Copyright 2026 The gramevo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAMEVO_TOOLS_CLI_HPP
#define GRAMEVO_TOOLS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gramevo/engine.hpp"

namespace gramevo::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message)
        : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : message)
        , line_(line)
    {
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Contents of a flat `key = value` run configuration.
struct RunConfig {
    EvolutionConfig evolution;
    // Set when the file carried an explicit rng_seed.
    bool has_seed { false };
    std::string grammar_path;
    std::string dataset_path;
    std::string output_dir { "." };
};

// Parses configuration text. `#` starts a comment line; unknown keys and
// malformed values are errors. Relative paths are resolved against base_dir.
[[nodiscard]] RunConfig parse_run_config(std::string_view text, const std::string& base_dir = {});
[[nodiscard]] RunConfig load_run_config(const std::string& path);

// Serialized `key = value` lines for every EvolutionConfig field except
// eval_threads, which cannot change a result.
[[nodiscard]] std::string echo_config(const EvolutionConfig& config);

// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gramevo::cli

#endif
