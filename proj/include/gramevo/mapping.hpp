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

#ifndef GRAMEVO_MAPPING_HPP
#define GRAMEVO_MAPPING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramevo/grammar.hpp"

namespace gramevo {

using Codon = std::uint32_t;

// Linear genotype. Every codon lies in [0, codon_max).
class Genome {
public:
    Genome(std::vector<Codon> codons, Codon codon_max);

    [[nodiscard]] std::span<const Codon> codons() const noexcept { return codons_; }
    [[nodiscard]] Codon codon_max() const noexcept { return codon_max_; }
    [[nodiscard]] std::size_t size() const noexcept { return codons_.size(); }
    [[nodiscard]] Codon operator[](std::size_t i) const { return codons_[i]; }

    // Replaces one codon; the value must stay below codon_max.
    void set(std::size_t i, Codon value);

    friend bool operator==(const Genome&, const Genome&) = default;

private:
    std::vector<Codon> codons_;
    Codon codon_max_;
};

struct DerivationTree {
    Symbol symbol;
    // Set on expanded nonterminals only.
    std::optional<std::size_t> production;
    std::vector<DerivationTree> children;
    int depth { 1 };
};

class IncompleteTree : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MappingStatus { Valid, InvalidDepth, InvalidWraps };

struct MappingResult {
    MappingStatus status { MappingStatus::InvalidWraps };
    std::optional<DerivationTree> tree;
    std::optional<std::string> phenotype;
    std::size_t codons_used { 0 };
    std::size_t wraps_used { 0 };

    [[nodiscard]] bool valid() const noexcept { return status == MappingStatus::Valid; }
};

struct MappingLimits {
    std::size_t max_wraps { 1 };
    int max_depth { 17 };
    // Derivations that grow past this many tree nodes are abandoned as InvalidDepth.
    std::size_t max_nodes { 100000 };
};

// Left-most depth-first derivation. A nonterminal with k > 1 alternatives
// consumes the next codon c and expands alternative c mod k; single-alternative
// rules consume nothing. Exhausted codons restart from the first codon up to
// max_wraps times. Depth is checked on the completed tree.
[[nodiscard]] MappingResult map_genome(const Grammar& grammar, const Genome& genome, const MappingLimits& limits = {});

[[nodiscard]] std::string phenotype_of(const DerivationTree& tree);

[[nodiscard]] int tree_depth(const DerivationTree& tree);

[[nodiscard]] const char* to_string(MappingStatus status) noexcept;

} // namespace gramevo

#endif
