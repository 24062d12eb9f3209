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

#include <doctest.h>

#include "gramevo/mapping.hpp"
#include "gramevo/random.hpp"
#include "support.hpp"

using namespace gramevo;
using gramevo::testing::canonical_grammar;
using gramevo::testing::numpy_grammar;

namespace {

constexpr Codon codon_max = 100000;

MappingResult map_codons(const Grammar& g, std::vector<Codon> codons, std::size_t wraps = 0, int depth = 10)
{
    return map_genome(g, Genome(std::move(codons), codon_max), MappingLimits { wraps, depth, 100000 });
}

Genome random_genome(RandomStream& rng, std::size_t length)
{
    std::vector<Codon> codons(length);
    for (auto& c : codons) {
        c = static_cast<Codon>(rng.below(codon_max));
    }
    return Genome(std::move(codons), codon_max);
}

} // namespace

TEST_CASE("golden traces over the canonical grammar")
{
    const auto& g = canonical_grammar();

    auto x = map_codons(g, { 9 });
    REQUIRE(x.valid());
    CHECK(*x.phenotype == "x");
    CHECK(x.codons_used == 1);
    CHECK(x.wraps_used == 0);

    auto number = map_codons(g, { 10, 1, 2, 3, 4 });
    REQUIRE(number.valid());
    CHECK(*number.phenotype == "12.34");
    CHECK(number.codons_used == 5);
    CHECK(tree_depth(*number.tree) == 3);

    auto sum = map_codons(g, { 0, 9, 9 });
    REQUIRE(sum.valid());
    CHECK(*sum.phenotype == "x+x");
    CHECK(sum.codons_used == 3);
    CHECK(tree_depth(*sum.tree) == 3);
    CHECK(phenotype_of(*sum.tree) == "x+x");
}

TEST_CASE("golden traces over the numpy grammar")
{
    const auto& g = numpy_grammar();
    CHECK(*map_codons(g, { 9 }).phenotype == "x[:, 0]");
    CHECK(*map_codons(g, { 10, 1, 2, 3, 4 }).phenotype == "12.34");
    CHECK(*map_codons(g, { 0, 9, 9 }).phenotype == "x[:, 0]+x[:, 0]");
    // 5 mod 11 -> np.sin(<e>), 20 mod 11 -> x
    CHECK(*map_codons(g, { 5, 20 }).phenotype == "np.sin(x[:, 0])");
    // 3 -> pdiv, 9 -> x, 21 mod 11 = 10 -> constant, then digits 0 7 5 0
    CHECK(*map_codons(g, { 3, 9, 21, 0, 7, 5, 0 }).phenotype == "pdiv(x[:, 0],07.50)");
}

TEST_CASE("wrapping")
{
    const auto& g = canonical_grammar();

    // Each pass over [0, 0] adds another unexpanded <e>.
    auto runaway = map_codons(g, { 0, 0 }, 1);
    CHECK(runaway.status == MappingStatus::InvalidWraps);
    CHECK_FALSE(runaway.tree);
    CHECK_FALSE(runaway.phenotype);
    CHECK(runaway.wraps_used == 1);

    // [0, 9]: e+e, first e -> x, second e needs a codon -> wrap -> 0 -> e+e ...
    CHECK(map_codons(g, { 0, 9 }, 0).status == MappingStatus::InvalidWraps);
    // every pass over [0, 9] opens one more <e> than it closes
    auto wrapped = map_codons(g, { 0, 9 }, 2);
    CHECK(wrapped.status == MappingStatus::InvalidWraps);

    auto finishes = map_codons(g, { 0, 9, 0 }, 1);
    // e+e: x, then e -> 0 -> e+e, wrap, 0 -> e+e ... keeps growing
    CHECK(finishes.status == MappingStatus::InvalidWraps);

    // [10, 1, 2]: constant needs four digits; wraps once to read 10 mod 10 = 0 and 1.
    auto constant = map_codons(g, { 10, 1, 2 }, 1);
    REQUIRE(constant.valid());
    CHECK(*constant.phenotype == "12.01");
    CHECK(constant.wraps_used == 1);
    CHECK(constant.codons_used == 5);

    CHECK(map_codons(g, { 10, 1, 2 }, 0).status == MappingStatus::InvalidWraps);
}

TEST_CASE("depth limit is enforced on the completed tree")
{
    const auto& g = canonical_grammar();
    // psqrt(psqrt(x)): e(1) -> e(2) -> e(3) -> x(4)
    auto nested = map_codons(g, { 4, 4, 9 }, 0, 4);
    REQUIRE(nested.valid());
    CHECK(tree_depth(*nested.tree) == 4);

    auto too_deep = map_codons(g, { 4, 4, 9 }, 0, 3);
    CHECK(too_deep.status == MappingStatus::InvalidDepth);
    CHECK_FALSE(too_deep.tree);

    // wraps take precedence: the derivation never completes
    CHECK(map_codons(g, { 0, 0 }, 0, 2).status == MappingStatus::InvalidWraps);

    CHECK_THROWS_AS((void)map_codons(parse_grammar("<s> ::= <t>\n<t> ::= a"), { 0 }, 0, 1), std::invalid_argument);
}

TEST_CASE("node ceiling aborts runaway derivations")
{
    const auto& g = canonical_grammar();
    // all-zero codons keep choosing <e>+<e>; many wraps would let it balloon
    auto result = map_genome(g, Genome(std::vector<Codon>(50, 0), codon_max), MappingLimits { 100000, 17, 1000 });
    CHECK(result.status == MappingStatus::InvalidDepth);
}

TEST_CASE("deep invalid derivations do not exhaust the stack")
{
    // a chain grammar grows one level per codon
    auto g = parse_grammar("<s> ::= f(<s>) | a");
    std::vector<Codon> codons(200000, 0);
    auto result = map_genome(g, Genome(std::move(codons), 2), MappingLimits { 0, 17, 1000000 });
    CHECK(result.status == MappingStatus::InvalidWraps);
}

TEST_CASE("single-alternative rules consume no codon")
{
    auto g = parse_grammar("<s> ::= <a> <b>\n<a> ::= p\n<b> ::= q | r");
    auto result = map_genome(g, Genome({ 1 }, 10), MappingLimits { 0, 10, 1000 });
    REQUIRE(result.valid());
    CHECK(*result.phenotype == "pr");
    CHECK(result.codons_used == 1);
    CHECK(result.tree->production == 0);
}

TEST_CASE("phenotype_of and tree_depth on hand-built trees")
{
    DerivationTree leaf { Symbol { Symbol::Kind::Terminal, "a", 0 }, std::nullopt, {}, 1 };
    CHECK(phenotype_of(leaf) == "a");
    CHECK(tree_depth(leaf) == 1);

    DerivationTree open { Symbol { Symbol::Kind::Nonterminal, "e", 0 }, std::nullopt, {}, 1 };
    CHECK_THROWS_AS((void)phenotype_of(open), IncompleteTree);
    CHECK(tree_depth(open) == 1);
}

TEST_CASE("genome invariants")
{
    CHECK_THROWS_AS(Genome({}, 10), std::invalid_argument);
    CHECK_THROWS_AS(Genome({ 10 }, 10), std::invalid_argument);
    CHECK_THROWS_AS(Genome({ 0 }, 0), std::invalid_argument);
    Genome g({ 1, 2, 3 }, 10);
    CHECK_THROWS_AS(g.set(0, 10), std::invalid_argument);
    g.set(0, 9);
    CHECK(g[0] == 9);
}

TEST_CASE("mapping properties over random genomes")
{
    RandomStream rng(1234);
    MappingLimits limits { 1, 17, 100000 };
    std::size_t valid = 0;

    for (const auto* g : { &canonical_grammar(), &numpy_grammar() }) {
        for (int i = 0; i < 5000; ++i) {
            auto genome = random_genome(rng, 1 + rng.below(120));
            auto a = map_genome(*g, genome, limits);
            auto b = map_genome(*g, genome, limits);

            // determinism
            REQUIRE(a.status == b.status);
            REQUIRE(a.phenotype == b.phenotype);
            REQUIRE(a.codons_used == b.codons_used);
            REQUIRE(a.wraps_used == b.wraps_used);
            REQUIRE(a.wraps_used <= limits.max_wraps);
            REQUIRE(a.valid() == a.tree.has_value());
            REQUIRE(a.valid() == a.phenotype.has_value());
            if (!a.valid()) {
                continue;
            }
            ++valid;

            // mod rule, replayed against the tree
            std::size_t consumed = 0;
            REQUIRE(testing::replay_matches(*g, *a.tree, genome, consumed));
            REQUIRE(consumed == a.codons_used);

            REQUIRE(phenotype_of(*a.tree) == *a.phenotype);
            REQUIRE(tree_depth(*a.tree) <= limits.max_depth);

            // unused-codon neutrality
            if (a.wraps_used == 0) {
                std::vector<Codon> extended(genome.codons().begin(), genome.codons().end());
                for (int extra = 0; extra < 25; ++extra) {
                    extended.push_back(static_cast<Codon>(rng.below(codon_max)));
                }
                auto c = map_genome(*g, Genome(std::move(extended), codon_max), limits);
                REQUIRE(c.valid());
                REQUIRE(*c.phenotype == *a.phenotype);
                REQUIRE(c.codons_used == a.codons_used);
            }
        }
    }
    CHECK(valid > 1000);
}
