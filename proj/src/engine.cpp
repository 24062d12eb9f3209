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

#include "gramevo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace gramevo {

void EvolutionConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(what);
        }
    };
    require(population_size > 0, "population_size must be positive");
    require(generations > 0, "generations must be positive");
    require(genome_length > 0, "genome_length must be positive");
    require(codon_max > 0, "codon_max must be positive");
    require(max_depth > 0, "max_depth must be positive");
    require(tournament_size > 0, "tournament_size must be positive");
    require(tournament_size <= population_size, "tournament_size must not exceed population_size");
    require(elitism_count <= population_size, "elitism_count must not exceed population_size");
    require(crossover_rate >= 0.0 && crossover_rate <= 1.0, "crossover_rate must lie in [0, 1]");
    require(mutation_rate >= 0.0 && mutation_rate <= 1.0, "mutation_rate must lie in [0, 1]");
}

Fitness fitness_mse(const ExprNode& expr, const Dataset& dataset)
{
    auto predictions = evaluate_batch(expr, dataset.xs());
    auto ys = dataset.ys();
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!std::isfinite(predictions[i])) {
            return Fitness::worst();
        }
        auto residual = predictions[i] - ys[i];
        sum += residual * residual;
    }
    return Fitness(sum / static_cast<double>(predictions.size()));
}

Individual decode(Genome genome, const Grammar& grammar, const MappingLimits& limits)
{
    auto mapped = map_genome(grammar, genome, limits);
    Individual ind { std::move(genome), std::nullopt, nullptr, Fitness::worst(), false, mapped.codons_used };
    if (!mapped.valid()) {
        return ind;
    }
    ind.phenotype = std::move(mapped.phenotype);
    try {
        ind.expr = parse_formula(*ind.phenotype);
    } catch (const ExprError&) {
        // the grammar emits text outside the formula language
        ind.expr = nullptr;
    }
    return ind;
}

void score(Individual& individual, const Dataset& dataset)
{
    individual.fitness = individual.expr ? fitness_mse(*individual.expr, dataset) : Fitness::worst();
    individual.valid = !individual.fitness.is_worst();
}

namespace {

std::size_t worker_count(std::size_t requested, std::size_t jobs)
{
    std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs job(i) for every i in [0, count) across the workers. Jobs write only
// to their own slot, so the outcome is independent of scheduling.
template <class Job>
void parallel_for(std::size_t count, std::size_t threads, Job&& job)
{
    auto workers = worker_count(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next { 0 };
    std::exception_ptr failure;
    std::atomic<bool> failed { false };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (auto i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    try {
                        job(i);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            failure = std::current_exception();
                        }
                        return;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

std::vector<Individual> evaluate_genomes(std::vector<Genome> genomes, const Grammar& grammar, const Dataset& dataset,
    const MappingLimits& limits, std::size_t threads)
{
    std::vector<std::optional<Individual>> slots(genomes.size());
    parallel_for(genomes.size(), threads, [&](std::size_t i) {
        auto ind = decode(std::move(genomes[i]), grammar, limits);
        score(ind, dataset);
        slots[i] = std::move(ind);
    });
    std::vector<Individual> out;
    out.reserve(slots.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

Genome random_genome(std::size_t length, Codon codon_max, RandomStream& rng)
{
    std::vector<Codon> codons(length);
    for (auto& c : codons) {
        c = static_cast<Codon>(rng.below(codon_max));
    }
    return Genome(std::move(codons), codon_max);
}

std::vector<Individual> init_population(const EvolutionConfig& config, const Grammar& grammar, const Dataset& dataset,
    RandomStream& rng)
{
    config.validate();
    auto limits = config.mapping_limits();
    std::vector<Genome> genomes;
    genomes.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        auto genome = random_genome(config.genome_length, config.codon_max, rng);
        for (std::size_t retry = 0; retry < config.invalid_retries && !map_genome(grammar, genome, limits).valid(); ++retry) {
            genome = random_genome(config.genome_length, config.codon_max, rng);
        }
        genomes.push_back(std::move(genome));
    }
    return evaluate_genomes(std::move(genomes), grammar, dataset, limits, config.eval_threads);
}

const Individual& tournament_select(std::span<const Individual> population, std::size_t k, RandomStream& rng)
{
    if (population.empty() || k == 0) {
        throw std::invalid_argument("tournament needs a non-empty population and k >= 1");
    }
    const Individual* winner = &population[rng.below(population.size())];
    for (std::size_t draw = 1; draw < k; ++draw) {
        const auto& contender = population[rng.below(population.size())];
        if (contender.fitness < winner->fitness) {
            winner = &contender;
        }
    }
    return *winner;
}

std::pair<Genome, Genome> crossover_at(const Genome& a, const Genome& b, std::size_t cut)
{
    if (a.codon_max() != b.codon_max()) {
        throw std::invalid_argument("crossover parents must share codon_max");
    }
    if (cut == 0 || cut >= std::min(a.size(), b.size())) {
        throw std::invalid_argument("crossover cut must lie in [1, min_length - 1]");
    }
    auto ca = a.codons();
    auto cb = b.codons();
    std::vector<Codon> first(ca.begin(), ca.begin() + static_cast<std::ptrdiff_t>(cut));
    first.insert(first.end(), cb.begin() + static_cast<std::ptrdiff_t>(cut), cb.end());
    std::vector<Codon> second(cb.begin(), cb.begin() + static_cast<std::ptrdiff_t>(cut));
    second.insert(second.end(), ca.begin() + static_cast<std::ptrdiff_t>(cut), ca.end());
    return { Genome(std::move(first), a.codon_max()), Genome(std::move(second), b.codon_max()) };
}

CrossoverResult crossover(const Genome& a, const Genome& b, double rate, RandomStream& rng)
{
    if (a.codon_max() != b.codon_max()) {
        throw std::invalid_argument("crossover parents must share codon_max");
    }
    auto shortest = std::min(a.size(), b.size());
    if (shortest < 2) {
        return { a, b, std::nullopt, true };
    }
    if (!rng.chance(rate)) {
        return { a, b, std::nullopt, false };
    }
    auto cut = 1 + static_cast<std::size_t>(rng.below(shortest - 1));
    auto [first, second] = crossover_at(a, b, cut);
    return { std::move(first), std::move(second), cut, false };
}

Genome mutate(Genome genome, double rate, RandomStream& rng)
{
    for (std::size_t i = 0; i < genome.size(); ++i) {
        if (rng.chance(rate)) {
            genome.set(i, static_cast<Codon>(rng.below(genome.codon_max())));
        }
    }
    return genome;
}

namespace {

GenerationRecord summarize(std::size_t generation, std::span<const Individual> population, std::size_t best_index)
{
    GenerationRecord record;
    record.generation = generation;
    const auto& best = population[best_index];
    record.best_fitness = best.fitness;
    record.best_phenotype = best.phenotype.value_or("");

    double sum = 0.0;
    std::size_t valid = 0;
    for (const auto& ind : population) {
        if (ind.valid) {
            sum += ind.fitness.value();
            ++valid;
        } else {
            ++record.invalid_count;
        }
    }
    if (valid > 0) {
        record.mean_fitness = sum / static_cast<double>(valid);
    }
    return record;
}

// Indices sorted by fitness; equal fitness keeps population order.
std::vector<std::size_t> ranking(std::span<const Individual> population)
{
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    std::stable_sort(order.begin(), order.end(),
        [&](std::size_t a, std::size_t b) { return population[a].fitness < population[b].fitness; });
    return order;
}

} // namespace

RunResult evolve(const EvolutionConfig& config, const Grammar& grammar, const Dataset& dataset, const ProgressSink& progress)
{
    config.validate();
    auto started = std::chrono::steady_clock::now();
    auto limits = config.mapping_limits();
    RandomStream rng(config.rng_seed);

    auto population = init_population(config, grammar, dataset, rng);

    std::vector<GenerationRecord> history;
    history.reserve(config.generations);
    std::optional<Individual> best;

    for (std::size_t generation = 0; generation < config.generations; ++generation) {
        auto order = ranking(population);
        auto record = summarize(generation, population, order.front());
        if (!best || population[order.front()].fitness < best->fitness) {
            best = population[order.front()];
        }
        history.push_back(record);
        if (progress) {
            progress(history.back());
        }
        if (generation + 1 == config.generations) {
            break;
        }

        std::vector<Individual> next;
        next.reserve(config.population_size);
        for (std::size_t e = 0; e < config.elitism_count; ++e) {
            next.push_back(population[order[e]]);
        }

        auto offspring_needed = config.population_size - next.size();
        std::vector<Genome> offspring;
        offspring.reserve(offspring_needed);
        while (offspring.size() < offspring_needed) {
            const auto& mother = tournament_select(population, config.tournament_size, rng);
            const auto& father = tournament_select(population, config.tournament_size, rng);
            auto children = crossover(mother.genome, father.genome, config.crossover_rate, rng);
            offspring.push_back(mutate(std::move(children.first), config.mutation_rate, rng));
            if (offspring.size() < offspring_needed) {
                offspring.push_back(mutate(std::move(children.second), config.mutation_rate, rng));
            }
        }

        auto scored = evaluate_genomes(std::move(offspring), grammar, dataset, limits, config.eval_threads);
        for (auto& ind : scored) {
            next.push_back(std::move(ind));
        }
        population = std::move(next);
    }

    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    return RunResult { std::move(*best), std::move(history), elapsed.count(), config };
}

} // namespace gramevo
