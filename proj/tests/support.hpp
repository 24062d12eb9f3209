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

#ifndef GRAMEVO_TESTS_SUPPORT_HPP
#define GRAMEVO_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gramevo/grammar.hpp"
#include "gramevo/mapping.hpp"

namespace gramevo::testing {

inline const std::string source_dir = GRAMEVO_SOURCE_DIR;

inline std::string numpy_grammar_path() { return source_dir + "/grammars/pi_numpy.bnf"; }
inline std::string canonical_grammar_path() { return source_dir + "/grammars/pi_canonical.bnf"; }

inline const Grammar& numpy_grammar()
{
    static const Grammar g = load_grammar(numpy_grammar_path());
    return g;
}

inline const Grammar& canonical_grammar()
{
    static const Grammar g = load_grammar(canonical_grammar_path());
    return g;
}

// Two evolved approximations of pi(x), used as parser and evaluator fixtures.
// nested_pi_formula prints products by juxtaposition.
inline const std::string nested_pi_formula
    = "2 sqrt(x) + x/(tanh((x + sqrt(tanh(78.45) sin(51.98)) x - log(sqrt(84.76) + 47.5))/exp(log(log(69.92) + 7.51)) x) "
      "+ sqrt(38.86) + log(log(x - log(sin(x) + 15.6) tanh(tanh(sqrt(x))) tanh(sin(log(x)) + 69.37) x)))";
inline const std::string log_pi_formula
    = "x/(ln(x/(ln(ln(92.89-sin(x)+x*x+sin(x)-64.03*sqrt(x)*ln(exp(sin(89.77))))*sqrt(sin(19.94))))))";

// Trial division, independent of the sieve.
inline bool is_prime_by_division(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

inline std::vector<std::uint32_t> primes_by_division(std::uint32_t limit)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = 2; n <= limit; ++n) {
        if (is_prime_by_division(n)) {
            out.push_back(n);
        }
    }
    return out;
}

// Replays the codon choices recorded in a derivation tree: pre-order over
// nonterminals, consuming codon (i mod length) at each multi-way choice.
// Returns false on the first mismatch.
inline bool replay_matches(const Grammar& g, const DerivationTree& node, const Genome& genome, std::size_t& consumed)
{
    if (node.symbol.is_terminal()) {
        return node.children.empty();
    }
    if (!node.production) {
        return false;
    }
    const auto& rule = g.rule(node.symbol.text);
    if (rule.productions.size() > 1) {
        auto codon = genome[consumed % genome.size()];
        ++consumed;
        if (*node.production != codon % rule.productions.size()) {
            return false;
        }
    } else if (*node.production != 0) {
        return false;
    }
    const auto& symbols = rule.productions[*node.production].symbols;
    if (symbols.size() != node.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (!(symbols[i] == node.children[i].symbol)) {
            return false;
        }
        if (!replay_matches(g, node.children[i], genome, consumed)) {
            return false;
        }
    }
    return true;
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path()
            / ("gramevo-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ignored;
        std::filesystem::remove_all(path_, ignored);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace gramevo::testing

#endif
