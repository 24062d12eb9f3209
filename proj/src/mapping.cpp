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

#include "gramevo/mapping.hpp"

#include <algorithm>

namespace gramevo {

Genome::Genome(std::vector<Codon> codons, Codon codon_max)
    : codons_(std::move(codons))
    , codon_max_(codon_max)
{
    if (codon_max_ == 0) {
        throw std::invalid_argument("codon_max must be positive");
    }
    if (codons_.empty()) {
        throw std::invalid_argument("genome must contain at least one codon");
    }
    if (std::any_of(codons_.begin(), codons_.end(), [&](Codon c) { return c >= codon_max_; })) {
        throw std::invalid_argument("codon out of range [0, codon_max)");
    }
}

void Genome::set(std::size_t i, Codon value)
{
    if (value >= codon_max_) {
        throw std::invalid_argument("codon out of range [0, codon_max)");
    }
    codons_.at(i) = value;
}

namespace {

// Invalid derivations can be far deeper than the call stack tolerates for
// recursive destruction, so they are torn down level by level.
void dismantle(DerivationTree& root)
{
    std::vector<DerivationTree> work;
    work.swap(root.children);
    while (!work.empty()) {
        auto node = std::move(work.back());
        work.pop_back();
        for (auto& child : node.children) {
            work.push_back(std::move(child));
        }
    }
}

} // namespace

MappingResult map_genome(const Grammar& grammar, const Genome& genome, const MappingLimits& limits)
{
    const auto& start = grammar.rule(grammar.start_rule());
    if (limits.max_depth < start.min_depth) {
        throw std::invalid_argument("max_depth is below the start symbol's minimum derivation depth");
    }

    MappingResult result;
    DerivationTree root { Symbol { Symbol::Kind::Nonterminal, start.name, grammar.start_rule() }, std::nullopt, {}, 1 };

    auto codons = genome.codons();
    std::size_t position = 0;
    std::size_t nodes = 1;
    int depth = 1;

    std::vector<DerivationTree*> pending { &root };
    while (!pending.empty()) {
        auto* node = pending.back();
        pending.pop_back();

        const auto& rule = grammar.rule(node->symbol.rule);
        std::size_t choice = 0;
        if (rule.productions.size() > 1) {
            if (position == codons.size()) {
                if (result.wraps_used == limits.max_wraps) {
                    result.status = MappingStatus::InvalidWraps;
                    dismantle(root);
                    return result;
                }
                ++result.wraps_used;
                position = 0;
            }
            choice = codons[position++] % rule.productions.size();
            ++result.codons_used;
        }

        const auto& symbols = rule.productions[choice].symbols;
        node->production = choice;
        node->children.reserve(symbols.size());
        for (const auto& s : symbols) {
            node->children.push_back(DerivationTree { s, std::nullopt, {}, node->depth + 1 });
        }
        depth = std::max(depth, node->depth + 1);
        nodes += symbols.size();
        if (nodes > limits.max_nodes) {
            result.status = MappingStatus::InvalidDepth;
            dismantle(root);
            return result;
        }
        for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) {
            if (!it->symbol.is_terminal()) {
                pending.push_back(&*it);
            }
        }
    }

    if (depth > limits.max_depth) {
        result.status = MappingStatus::InvalidDepth;
        dismantle(root);
        return result;
    }
    result.status = MappingStatus::Valid;
    result.phenotype = phenotype_of(root);
    result.tree = std::move(root);
    return result;
}

namespace {

void append_leaves(const DerivationTree& node, std::string& out)
{
    if (node.symbol.is_terminal()) {
        out += node.symbol.text;
        return;
    }
    if (!node.production) {
        throw IncompleteTree("unexpanded nonterminal <" + node.symbol.text + "> in derivation tree");
    }
    for (const auto& child : node.children) {
        append_leaves(child, out);
    }
}

} // namespace

std::string phenotype_of(const DerivationTree& tree)
{
    std::string out;
    append_leaves(tree, out);
    return out;
}

int tree_depth(const DerivationTree& tree)
{
    int deepest = 0;
    for (const auto& child : tree.children) {
        deepest = std::max(deepest, tree_depth(child));
    }
    return 1 + deepest;
}

const char* to_string(MappingStatus status) noexcept
{
    switch (status) {
    case MappingStatus::Valid:
        return "valid";
    case MappingStatus::InvalidDepth:
        return "invalid-depth";
    case MappingStatus::InvalidWraps:
        return "invalid-wraps";
    }
    return "unknown";
}

} // namespace gramevo
