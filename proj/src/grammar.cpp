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

#include "gramevo/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

namespace gramevo {

namespace {

bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

// Whitespace runs that cross a line break become a single space; other
// whitespace inside a terminal is kept as written.
std::string fold_line_breaks(std::string_view run)
{
    std::string out;
    out.reserve(run.size());
    for (std::size_t i = 0; i < run.size();) {
        if (!is_space(run[i])) {
            out.push_back(run[i++]);
            continue;
        }
        auto j = i;
        bool newline = false;
        while (j < run.size() && is_space(run[j])) {
            newline = newline || run[j] == '\n' || run[j] == '\r';
            ++j;
        }
        if (newline) {
            out.push_back(' ');
        } else {
            out.append(run.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

void push_terminal(Production& p, std::string_view run)
{
    if (trim(run).empty()) {
        return;
    }
    p.symbols.push_back(Symbol { Symbol::Kind::Terminal, fold_line_breaks(run), 0 });
}

Production tokenize_alternative(std::string_view alt, const std::string& rule_name)
{
    alt = trim(alt);
    if (alt.empty()) {
        throw GrammarError(GrammarError::Kind::EmptyProduction, rule_name,
            "rule <" + rule_name + "> has an empty alternative");
    }

    Production p;
    std::size_t run_start = 0;
    std::size_t i = 0;
    while (i < alt.size()) {
        if (alt[i] != '<') {
            ++i;
            continue;
        }
        auto close = alt.find('>', i + 1);
        auto name = close == std::string_view::npos ? std::string_view {} : alt.substr(i + 1, close - i - 1);
        if (close == std::string_view::npos || name.find('<') != std::string_view::npos) {
            throw GrammarError(GrammarError::Kind::UnterminatedNonterminal, rule_name,
                "unterminated nonterminal reference in rule <" + rule_name + ">");
        }
        if (trim(name).empty()) {
            throw GrammarError(GrammarError::Kind::MalformedRule, rule_name,
                "empty nonterminal reference in rule <" + rule_name + ">");
        }
        push_terminal(p, alt.substr(run_start, i - run_start));
        p.symbols.push_back(Symbol { Symbol::Kind::Nonterminal, std::string(name), 0 });
        i = close + 1;
        run_start = i;
    }
    push_terminal(p, alt.substr(run_start));
    return p;
}

} // namespace

std::vector<int> compute_min_depths(const std::vector<Rule>& rules)
{
    constexpr int unknown = std::numeric_limits<int>::max();
    std::vector<int> depth(rules.size(), unknown);

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t r = 0; r < rules.size(); ++r) {
            for (const auto& production : rules[r].productions) {
                int deepest = 0;
                for (const auto& s : production.symbols) {
                    if (!s.is_terminal()) {
                        deepest = std::max(deepest, depth[s.rule]);
                    }
                }
                if (deepest != unknown && deepest + 1 < depth[r]) {
                    depth[r] = deepest + 1;
                    changed = true;
                }
            }
        }
    }

    for (std::size_t r = 0; r < rules.size(); ++r) {
        if (depth[r] == unknown) {
            throw GrammarError(GrammarError::Kind::InfiniteGrammar, rules[r].name,
                "nonterminal <" + rules[r].name + "> cannot derive a terminal sentence");
        }
    }
    return depth;
}

Grammar::Grammar(std::vector<Rule> rules)
    : rules_(std::move(rules))
{
    if (rules_.empty()) {
        throw GrammarError(GrammarError::Kind::NoRules, {}, "grammar has no rules");
    }
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        const auto& name = rules_[r].name;
        if (name.find_first_of("<>|") != std::string::npos || trim(name).empty()) {
            throw GrammarError(GrammarError::Kind::MalformedRule, name, "invalid nonterminal name '" + name + "'");
        }
        if (!index_.emplace(name, r).second) {
            throw GrammarError(GrammarError::Kind::DuplicateRule, name, "rule <" + name + "> is defined twice");
        }
    }
    for (auto& rule : rules_) {
        if (rule.productions.empty()) {
            throw GrammarError(GrammarError::Kind::EmptyProduction, rule.name, "rule <" + rule.name + "> has no alternatives");
        }
        for (auto& production : rule.productions) {
            if (production.symbols.empty()) {
                throw GrammarError(GrammarError::Kind::EmptyProduction, rule.name,
                    "rule <" + rule.name + "> has an empty alternative");
            }
            for (auto& s : production.symbols) {
                if (s.is_terminal()) {
                    if (trim(s.text).empty()) {
                        throw GrammarError(GrammarError::Kind::MalformedRule, rule.name,
                            "whitespace-only terminal in rule <" + rule.name + ">");
                    }
                    continue;
                }
                auto it = index_.find(s.text);
                if (it == index_.end()) {
                    throw GrammarError(GrammarError::Kind::UndefinedNonterminal, s.text,
                        "nonterminal <" + s.text + "> is referenced but never defined");
                }
                s.rule = it->second;
            }
        }
    }
    auto depths = compute_min_depths(rules_);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        rules_[r].min_depth = depths[r];
    }
}

bool Grammar::contains(std::string_view nonterminal) const
{
    return index_.find(std::string(nonterminal)) != index_.end();
}

const Rule& Grammar::rule(std::string_view nonterminal) const
{
    auto it = index_.find(std::string(nonterminal));
    if (it == index_.end()) {
        throw GrammarError(GrammarError::Kind::UnknownNonterminal, std::string(nonterminal),
            "unknown nonterminal <" + std::string(nonterminal) + ">");
    }
    return rules_[it->second];
}

std::size_t Grammar::production_count(std::string_view nonterminal) const
{
    return rule(nonterminal).productions.size();
}

int Grammar::min_depth(std::string_view nonterminal) const
{
    return rule(nonterminal).min_depth;
}

std::map<std::string, int> Grammar::min_depths() const
{
    std::map<std::string, int> out;
    for (const auto& r : rules_) {
        out.emplace(r.name, r.min_depth);
    }
    return out;
}

std::string Grammar::to_bnf() const
{
    std::string out;
    for (const auto& r : rules_) {
        out += '<' + r.name + "> ::= ";
        for (std::size_t p = 0; p < r.productions.size(); ++p) {
            if (p > 0) {
                out += " | ";
            }
            for (const auto& s : r.productions[p].symbols) {
                out += s.is_terminal() ? s.text : '<' + s.text + '>';
            }
        }
        out += '\n';
    }
    return out;
}

Grammar parse_grammar(std::string_view text)
{
    static const std::regex header(R"(^\s*<([^<>|]+)>\s*::=(.*)$)");

    struct RawRule {
        std::string name;
        std::string body;
    };
    std::vector<RawRule> raw;

    std::istringstream in { std::string(text) };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        std::smatch m;
        if (std::regex_match(line, m, header)) {
            raw.push_back({ m[1].str(), m[2].str() });
        } else if (raw.empty()) {
            throw GrammarError(GrammarError::Kind::MalformedRule, {},
                "line " + std::to_string(line_no) + ": text before the first rule header");
        } else {
            raw.back().body += '\n';
            raw.back().body += line;
        }
    }
    if (raw.empty()) {
        throw GrammarError(GrammarError::Kind::NoRules, {}, "grammar has no rules");
    }

    std::vector<Rule> rules;
    rules.reserve(raw.size());
    for (const auto& rr : raw) {
        Rule rule { rr.name, {}, 0 };
        std::string_view body = rr.body;
        std::size_t begin = 0;
        for (;;) {
            auto bar = body.find('|', begin);
            rule.productions.push_back(tokenize_alternative(body.substr(begin, bar - begin), rr.name));
            if (bar == std::string_view::npos) {
                break;
            }
            begin = bar + 1;
        }
        rules.push_back(std::move(rule));
    }
    return Grammar(std::move(rules));
}

Grammar load_grammar(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open grammar file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_grammar(buffer.str());
}

} // namespace gramevo
