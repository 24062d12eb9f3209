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

#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "gramevo/expr.hpp"
#include "gramevo/grammar.hpp"
#include "gramevo/primes.hpp"

namespace gramevo::cli {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) noexcept
{
    auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && blank(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && blank(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

template <class T>
T parse_number(std::string_view value, std::size_t line, std::string_view key)
{
    T out {};
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc {} || end != value.data() + value.size()) {
        throw ConfigError(line, "invalid value '" + std::string(value) + "' for " + std::string(key));
    }
    return out;
}

std::string resolve(std::string_view value, const std::string& base_dir)
{
    fs::path p { std::string(value) };
    if (p.is_relative() && !base_dir.empty()) {
        p = fs::path(base_dir) / p;
    }
    return p.lexically_normal().string();
}

std::uint64_t parse_seed(std::string_view text)
{
    std::uint64_t seed = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc {} || end != text.data() + text.size()) {
        throw std::invalid_argument("invalid seed '" + std::string(text) + "'");
    }
    return seed;
}

// Writes to a temporary sibling and renames it over `path`.
void write_file(const fs::path& path, const std::string& content)
{
    auto temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw std::runtime_error("failed writing '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw std::runtime_error("cannot move output into '" + path.string() + "': " + ec.message());
    }
}

std::string fitness_text(const Fitness& f)
{
    return f.is_worst() ? "inf" : format_real(f.value());
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

RunConfig parse_run_config(std::string_view text, const std::string& base_dir)
{
    RunConfig rc;
    auto& ev = rc.evolution;

    std::istringstream in { std::string(text) };
    std::string raw;
    std::size_t line = 0;
    std::set<std::string, std::less<>> seen;
    while (std::getline(in, raw)) {
        ++line;
        auto content = trim(raw);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        auto eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line, "expected 'key = value'");
        }
        auto key = trim(content.substr(0, eq));
        auto value = trim(content.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError(line, "missing value for " + std::string(key));
        }
        if (!seen.emplace(key).second) {
            throw ConfigError(line, "duplicate key " + std::string(key));
        }

        if (key == "population_size") {
            ev.population_size = parse_number<std::size_t>(value, line, key);
        } else if (key == "generations") {
            ev.generations = parse_number<std::size_t>(value, line, key);
        } else if (key == "genome_length") {
            ev.genome_length = parse_number<std::size_t>(value, line, key);
        } else if (key == "codon_max") {
            ev.codon_max = parse_number<Codon>(value, line, key);
        } else if (key == "max_wraps") {
            ev.max_wraps = parse_number<std::size_t>(value, line, key);
        } else if (key == "max_depth") {
            ev.max_depth = parse_number<int>(value, line, key);
        } else if (key == "tournament_size") {
            ev.tournament_size = parse_number<std::size_t>(value, line, key);
        } else if (key == "crossover_rate") {
            ev.crossover_rate = parse_number<double>(value, line, key);
        } else if (key == "mutation_rate") {
            ev.mutation_rate = parse_number<double>(value, line, key);
        } else if (key == "elitism_count") {
            ev.elitism_count = parse_number<std::size_t>(value, line, key);
        } else if (key == "rng_seed") {
            ev.rng_seed = parse_number<std::uint64_t>(value, line, key);
            rc.has_seed = true;
        } else if (key == "invalid_retries") {
            ev.invalid_retries = parse_number<std::size_t>(value, line, key);
        } else if (key == "eval_threads") {
            ev.eval_threads = parse_number<std::size_t>(value, line, key);
        } else if (key == "grammar_path") {
            rc.grammar_path = resolve(value, base_dir);
        } else if (key == "dataset_path") {
            rc.dataset_path = resolve(value, base_dir);
        } else if (key == "output_dir") {
            rc.output_dir = resolve(value, base_dir);
        } else {
            throw ConfigError(line, "unknown key '" + std::string(key) + "'");
        }
    }

    try {
        ev.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return rc;
}

RunConfig load_run_config(const std::string& path)
{
    auto base = fs::path(path).parent_path().string();
    return parse_run_config(read_text(path), base);
}

std::string echo_config(const EvolutionConfig& c)
{
    std::ostringstream out;
    out << "population_size = " << c.population_size << '\n'
        << "generations = " << c.generations << '\n'
        << "genome_length = " << c.genome_length << '\n'
        << "codon_max = " << c.codon_max << '\n'
        << "max_wraps = " << c.max_wraps << '\n'
        << "max_depth = " << c.max_depth << '\n'
        << "tournament_size = " << c.tournament_size << '\n'
        << "crossover_rate = " << format_real(c.crossover_rate) << '\n'
        << "mutation_rate = " << format_real(c.mutation_rate) << '\n'
        << "elitism_count = " << c.elitism_count << '\n'
        << "rng_seed = " << c.rng_seed << '\n'
        << "invalid_retries = " << c.invalid_retries << '\n';
    return out.str();
}

namespace {

struct GenDataArgs {
    std::string mode { "prime-indexed" };
    std::size_t n { 1000 };
    std::uint32_t limit { 0 };
    std::string out;
};

int cmd_gen_data(const GenDataArgs& args, std::ostream& out)
{
    auto mode = args.mode == "integer-range" ? DatasetMode::IntegerRange : DatasetMode::PrimeIndexed;
    auto limit = args.limit > 0 ? args.limit : required_limit(mode, args.n);
    auto table = sieve(limit);
    auto dataset = build_dataset(mode, args.n, table);
    write_dataset(dataset, args.out);
    auto points = dataset.points();
    out << "wrote " << dataset.size() << " points, x in [" << format_real(points.front().x) << ", "
        << format_real(points.back().x) << "] to " << args.out << '\n';
    return 0;
}

struct EvolveArgs {
    std::string config_path;
    std::string grammar_path;
    std::string dataset_path;
    std::string output_dir;
    std::string seed;
    std::size_t population_size { 0 };
    std::size_t generations { 0 };
    std::size_t genome_length { 0 };
    Codon codon_max { 0 };
    std::size_t max_wraps { 0 };
    int max_depth { 0 };
    std::size_t tournament_size { 0 };
    double crossover_rate { 0.0 };
    double mutation_rate { 0.0 };
    std::size_t elitism_count { 0 };
    std::size_t invalid_retries { 0 };
    std::size_t eval_threads { 0 };
    bool quiet { false };

    // Options given on the command line; they take precedence over the file.
    const CLI::App* app { nullptr };
    [[nodiscard]] bool given(const std::string& name) const { return app->count(name) > 0; }
};

std::uint64_t choose_seed(const EvolveArgs& args, const RunConfig& rc)
{
    if (args.given("--seed")) {
        return parse_seed(args.seed);
    }
    if (rc.has_seed) {
        return rc.evolution.rng_seed;
    }
    if (const char* env = std::getenv("GRAMEVO_SEED"); env != nullptr && *env != '\0') {
        return parse_seed(env);
    }
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

int cmd_evolve(const EvolveArgs& args, std::ostream& out)
{
    RunConfig rc = args.config_path.empty() ? parse_run_config("") : load_run_config(args.config_path);
    auto& ev = rc.evolution;

    if (args.given("--grammar")) rc.grammar_path = args.grammar_path;
    if (args.given("--dataset")) rc.dataset_path = args.dataset_path;
    if (args.given("--output-dir")) rc.output_dir = args.output_dir;
    if (args.given("--population")) ev.population_size = args.population_size;
    if (args.given("--generations")) ev.generations = args.generations;
    if (args.given("--genome-length")) ev.genome_length = args.genome_length;
    if (args.given("--codon-max")) ev.codon_max = args.codon_max;
    if (args.given("--max-wraps")) ev.max_wraps = args.max_wraps;
    if (args.given("--max-depth")) ev.max_depth = args.max_depth;
    if (args.given("--tournament-size")) ev.tournament_size = args.tournament_size;
    if (args.given("--crossover-rate")) ev.crossover_rate = args.crossover_rate;
    if (args.given("--mutation-rate")) ev.mutation_rate = args.mutation_rate;
    if (args.given("--elitism")) ev.elitism_count = args.elitism_count;
    if (args.given("--invalid-retries")) ev.invalid_retries = args.invalid_retries;
    if (args.given("--threads")) ev.eval_threads = args.eval_threads;
    ev.rng_seed = choose_seed(args, rc);
    ev.validate();

    if (rc.grammar_path.empty() || rc.dataset_path.empty()) {
        throw std::invalid_argument("a grammar and a dataset are required (config keys grammar_path/dataset_path or --grammar/--dataset)");
    }
    auto grammar = load_grammar(rc.grammar_path);
    auto dataset = read_dataset(rc.dataset_path);

    auto result = evolve(ev, grammar, dataset, [&](const GenerationRecord& r) {
        if (args.quiet) {
            return;
        }
        out << "gen " << r.generation << "  best " << fitness_text(r.best_fitness) << "  mean "
            << format_real(r.mean_fitness) << "  invalid " << r.invalid_count << "  " << r.best_phenotype << '\n'
            << std::flush;
    });

    fs::path dir(rc.output_dir);
    fs::create_directories(dir);

    std::ostringstream history;
    history << "generation,best_fitness,mean_fitness,invalid_count\n";
    for (const auto& r : result.history) {
        history << r.generation << ',' << fitness_text(r.best_fitness) << ',' << format_real(r.mean_fitness) << ','
                << r.invalid_count << '\n';
    }

    const auto& best = result.best;
    std::ostringstream summary;
    summary << "formula = " << (best.expr ? format_expr(*best.expr) : std::string("none")) << '\n'
            << "phenotype = " << best.phenotype.value_or("none") << '\n'
            << "fitness = " << fitness_text(best.fitness) << '\n'
            << "valid = " << (best.valid ? "true" : "false") << '\n'
            << echo_config(ev)
            << "grammar_path = " << rc.grammar_path << '\n'
            << "dataset_path = " << rc.dataset_path << '\n'
            << "elapsed_seconds = " << format_real(result.elapsed_seconds) << '\n';

    std::ostringstream predictions;
    predictions << "x,y_true,y_pred\n";
    std::vector<double> ys_pred = best.expr ? evaluate_batch(*best.expr, dataset.xs())
                                            : std::vector<double>(dataset.size(), std::nan(""));
    auto points = dataset.points();
    for (std::size_t i = 0; i < points.size(); ++i) {
        predictions << format_real(points[i].x) << ',' << format_real(points[i].y) << ',' << format_real(ys_pred[i]) << '\n';
    }

    write_file(dir / "history.csv", history.str());
    write_file(dir / "best.txt", summary.str());
    write_file(dir / "predictions.csv", predictions.str());

    out << "best fitness " << fitness_text(best.fitness) << " after " << result.history.size() << " generations ("
        << format_real(result.elapsed_seconds) << " s, seed " << ev.rng_seed << ")\n"
        << "formula " << (best.expr ? format_expr(*best.expr) : std::string("none")) << '\n';
    return 0;
}

struct EvalArgs {
    std::string formula;
    std::string formula_file;
    std::vector<double> points;
    std::string dataset_path;
};

int cmd_eval(const EvalArgs& args, std::ostream& out)
{
    auto text = args.formula_file.empty() ? args.formula : std::string(trim(read_text(args.formula_file)));
    auto expr = parse_formula(text);
    for (double x : args.points) {
        out << format_real(x) << '\t' << format_real(evaluate(*expr, x)) << '\n';
    }
    if (!args.dataset_path.empty()) {
        auto dataset = read_dataset(args.dataset_path);
        out << "mse\t" << fitness_text(fitness_mse(*expr, dataset)) << '\n';
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app { "Grammatical evolution for single-variable symbolic regression", "gramevo" };
    app.require_subcommand(1);

    GenDataArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-data", "Write a prime-counting regression dataset");
    gen_cmd->add_option("--mode", gen.mode, "prime-indexed: (p_i, i); integer-range: (x, pi(x)) for x = 2..n+1")
        ->check(CLI::IsMember({ "prime-indexed", "integer-range" }))
        ->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Number of points")->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--limit", gen.limit, "Sieve limit (default: just large enough for n)");
    gen_cmd->add_option("--out", gen.out, "Output file")->required();

    EvolveArgs ev;
    auto* ev_cmd = app.add_subcommand("evolve", "Run grammatical evolution against a dataset");
    ev.app = ev_cmd;
    ev_cmd->add_option("--config", ev.config_path, "Flat key = value run configuration");
    ev_cmd->add_option("--grammar", ev.grammar_path, "BNF grammar file");
    ev_cmd->add_option("--dataset", ev.dataset_path, "Dataset file");
    ev_cmd->add_option("--output-dir", ev.output_dir, "Directory for history.csv, best.txt, predictions.csv");
    ev_cmd->add_option("--seed", ev.seed, "RNG seed (falls back to config, then GRAMEVO_SEED, then random)");
    ev_cmd->add_option("--population", ev.population_size);
    ev_cmd->add_option("--generations", ev.generations);
    ev_cmd->add_option("--genome-length", ev.genome_length);
    ev_cmd->add_option("--codon-max", ev.codon_max);
    ev_cmd->add_option("--max-wraps", ev.max_wraps);
    ev_cmd->add_option("--max-depth", ev.max_depth);
    ev_cmd->add_option("--tournament-size", ev.tournament_size);
    ev_cmd->add_option("--crossover-rate", ev.crossover_rate);
    ev_cmd->add_option("--mutation-rate", ev.mutation_rate);
    ev_cmd->add_option("--elitism", ev.elitism_count);
    ev_cmd->add_option("--invalid-retries", ev.invalid_retries);
    ev_cmd->add_option("--threads", ev.eval_threads, "Fitness evaluation workers (0 = all cores)");
    ev_cmd->add_flag("--quiet", ev.quiet, "Suppress per-generation progress lines");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula at points and optionally score it");
    auto* formula_opt = eval_cmd->add_option("--formula", eval.formula, "Formula text");
    auto* file_opt = eval_cmd->add_option("--formula-file", eval.formula_file, "File holding the formula");
    formula_opt->excludes(file_opt);
    eval_cmd->add_option("--points", eval.points, "x values to evaluate at");
    eval_cmd->add_option("--dataset", eval.dataset_path, "Also print the MSE against this dataset");

    std::vector<std::string> argv_storage { "gramevo" };
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*gen_cmd) {
            return cmd_gen_data(gen, out);
        }
        if (*ev_cmd) {
            return cmd_evolve(ev, out);
        }
        if (formula_opt->count() == 0 && file_opt->count() == 0) {
            err << "error: eval needs --formula or --formula-file\n";
            return 2;
        }
        return cmd_eval(eval, out);
    } catch (const ExprError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const GrammarError& e) {
        err << "error: grammar: " << e.what() << '\n';
    } catch (const DatasetError& e) {
        err << "error: dataset: " << e.what() << '\n';
    } catch (const PrimesError& e) {
        err << "error: primes: " << e.what() << '\n';
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

} // namespace gramevo::cli
