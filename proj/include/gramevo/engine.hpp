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

#ifndef GRAMEVO_ENGINE_HPP
#define GRAMEVO_ENGINE_HPP

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gramevo/expr.hpp"
#include "gramevo/grammar.hpp"
#include "gramevo/mapping.hpp"
#include "gramevo/primes.hpp"
#include "gramevo/random.hpp"

namespace gramevo {

// Minimized fitness. Worst is a distinct state that orders after every
// finite value and compares equal only to itself.
class Fitness {
public:
    // Non-finite values collapse to Worst.
    explicit Fitness(double value) noexcept
        : value_(value)
        , worst_(!std::isfinite(value))
    {
    }

    static Fitness worst() noexcept { return Fitness(); }

    [[nodiscard]] bool is_worst() const noexcept { return worst_; }
    // +inf for Worst.
    [[nodiscard]] double value() const noexcept { return worst_ ? std::numeric_limits<double>::infinity() : value_; }

    friend bool operator==(const Fitness& a, const Fitness& b) noexcept
    {
        return a.worst_ == b.worst_ && (a.worst_ || a.value_ == b.value_);
    }
    friend std::weak_ordering operator<=>(const Fitness& a, const Fitness& b) noexcept
    {
        if (a.worst_ || b.worst_) {
            return a.worst_ == b.worst_ ? std::weak_ordering::equivalent
                : a.worst_              ? std::weak_ordering::greater
                                        : std::weak_ordering::less;
        }
        return a.value_ < b.value_ ? std::weak_ordering::less
            : b.value_ < a.value_  ? std::weak_ordering::greater
                                   : std::weak_ordering::equivalent;
    }

private:
    Fitness() noexcept
        : value_(0.0)
        , worst_(true)
    {
    }

    double value_;
    bool worst_;
};

struct Individual {
    Genome genome;
    std::optional<std::string> phenotype;
    ExprPtr expr;
    Fitness fitness { Fitness::worst() };
    bool valid { false };
    std::size_t codons_used { 0 };
};

struct EvolutionConfig {
    std::size_t population_size { 500 };
    std::size_t generations { 50 };
    std::size_t genome_length { 200 };
    Codon codon_max { 100000 };
    std::size_t max_wraps { 1 };
    int max_depth { 17 };
    std::size_t tournament_size { 2 };
    double crossover_rate { 0.75 };
    double mutation_rate { 0.01 };
    std::size_t elitism_count { 1 };
    std::uint64_t rng_seed { 0 };
    std::size_t invalid_retries { 10 };
    // Fitness evaluation workers; 0 picks the hardware concurrency. Results
    // do not depend on this value.
    std::size_t eval_threads { 0 };

    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    [[nodiscard]] MappingLimits mapping_limits() const noexcept { return { max_wraps, max_depth, 100000 }; }

    friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

struct GenerationRecord {
    std::size_t generation { 0 };
    Fitness best_fitness { Fitness::worst() };
    // Mean over valid individuals; NaN when none is valid.
    double mean_fitness { std::numeric_limits<double>::quiet_NaN() };
    std::size_t invalid_count { 0 };
    std::string best_phenotype;

    friend bool operator==(const GenerationRecord& a, const GenerationRecord& b) noexcept
    {
        auto same_mean = (std::isnan(a.mean_fitness) && std::isnan(b.mean_fitness)) || a.mean_fitness == b.mean_fitness;
        return a.generation == b.generation && a.best_fitness == b.best_fitness && same_mean
            && a.invalid_count == b.invalid_count && a.best_phenotype == b.best_phenotype;
    }
};

struct RunResult {
    Individual best;
    std::vector<GenerationRecord> history;
    double elapsed_seconds { 0.0 };
    EvolutionConfig config_echo;
};

using ProgressSink = std::function<void(const GenerationRecord&)>;

// Mean squared error of expr over the dataset; Worst when any prediction or
// the accumulated sum is non-finite.
[[nodiscard]] Fitness fitness_mse(const ExprNode& expr, const Dataset& dataset);

// Maps and parses a genome without scoring it.
[[nodiscard]] Individual decode(Genome genome, const Grammar& grammar, const MappingLimits& limits);

// Scores a decoded individual in place.
void score(Individual& individual, const Dataset& dataset);

// Decodes and scores a batch on `threads` workers (0 = hardware concurrency).
// Each result depends only on its own genome.
[[nodiscard]] std::vector<Individual> evaluate_genomes(std::vector<Genome> genomes, const Grammar& grammar,
    const Dataset& dataset, const MappingLimits& limits, std::size_t threads);

[[nodiscard]] Genome random_genome(std::size_t length, Codon codon_max, RandomStream& rng);

// Random genomes, each redrawn up to invalid_retries times while its mapping
// is invalid, then scored.
[[nodiscard]] std::vector<Individual> init_population(const EvolutionConfig& config, const Grammar& grammar,
    const Dataset& dataset, RandomStream& rng);

// k uniform draws with replacement; the lowest fitness wins, earliest draw on ties.
[[nodiscard]] const Individual& tournament_select(std::span<const Individual> population, std::size_t k, RandomStream& rng);

struct CrossoverResult {
    Genome first;
    Genome second;
    // Set when a cut was made.
    std::optional<std::size_t> cut;
    // Either parent was shorter than two codons, so no cut was possible.
    bool degenerate { false };
};

// With probability `rate`, swaps tails at a cut uniform in [1, min_len - 1].
[[nodiscard]] CrossoverResult crossover(const Genome& a, const Genome& b, double rate, RandomStream& rng);

// Swaps tails at a fixed cut point.
[[nodiscard]] std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b, std::size_t cut);

// Each codon is redrawn uniformly with probability `rate`.
[[nodiscard]] Genome mutate(Genome genome, double rate, RandomStream& rng);

// Generational loop with elitism. Deterministic in (config, grammar, dataset).
[[nodiscard]] RunResult evolve(const EvolutionConfig& config, const Grammar& grammar, const Dataset& dataset,
    const ProgressSink& progress = {});

} // namespace gramevo

#endif
