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

#ifndef GRAMEVO_GRAMMAR_HPP
#define GRAMEVO_GRAMMAR_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gramevo {

class GrammarError : public std::runtime_error {
public:
    enum class Kind {
        UndefinedNonterminal,
        UnknownNonterminal,
        EmptyProduction,
        NoRules,
        UnterminatedNonterminal,
        InfiniteGrammar,
        DuplicateRule,
        MalformedRule,
    };

    GrammarError(Kind kind, std::string subject, const std::string& message)
        : std::runtime_error(message), kind_(kind), subject_(std::move(subject)) { }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    // Nonterminal name (or rule name) the error refers to; may be empty.
    [[nodiscard]] const std::string& subject() const noexcept { return subject_; }

private:
    Kind kind_;
    std::string subject_;
};

struct Symbol {
    enum class Kind { Terminal, Nonterminal };

    Kind kind { Kind::Terminal };
    // Terminal literal, or nonterminal name without angle brackets.
    std::string text;
    // Index into Grammar::rules() for nonterminals; unused for terminals.
    std::size_t rule { 0 };

    [[nodiscard]] bool is_terminal() const noexcept { return kind == Kind::Terminal; }

    friend bool operator==(const Symbol& a, const Symbol& b) noexcept
    {
        return a.kind == b.kind && a.text == b.text;
    }
};

struct Production {
    std::vector<Symbol> symbols;
};

struct Rule {
    std::string name;
    std::vector<Production> productions;
    int min_depth { 0 };
};

// An immutable context-free grammar. Rules keep their source order and the
// first rule is the start symbol. Safe to share between threads.
class Grammar {
public:
    // Builds a grammar from already tokenized rules; resolves nonterminal
    // references and computes minimum derivation depths.
    explicit Grammar(std::vector<Rule> rules);

    [[nodiscard]] const std::string& start() const noexcept { return rules_.front().name; }
    [[nodiscard]] std::size_t start_rule() const noexcept { return 0; }
    [[nodiscard]] const std::vector<Rule>& rules() const noexcept { return rules_; }
    [[nodiscard]] const Rule& rule(std::size_t index) const { return rules_.at(index); }

    [[nodiscard]] bool contains(std::string_view nonterminal) const;
    [[nodiscard]] const Rule& rule(std::string_view nonterminal) const;
    [[nodiscard]] std::size_t production_count(std::string_view nonterminal) const;
    [[nodiscard]] int min_depth(std::string_view nonterminal) const;
    [[nodiscard]] std::map<std::string, int> min_depths() const;

    // BNF text that parses back to an identical grammar.
    [[nodiscard]] std::string to_bnf() const;

private:
    std::vector<Rule> rules_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Parses `<name> ::= alt | alt ...` text. A rule body runs until the next
// rule header; lines whose first non-blank character is `#` are comments.
[[nodiscard]] Grammar parse_grammar(std::string_view text);

[[nodiscard]] Grammar load_grammar(const std::string& path);

// Fixpoint: depth[n] = 1 + min over productions of the max child depth
// (0 for all-terminal productions). Throws InfiniteGrammar when some
// nonterminal can never derive an all-terminal sentence.
[[nodiscard]] std::vector<int> compute_min_depths(const std::vector<Rule>& rules);

} // namespace gramevo

#endif
