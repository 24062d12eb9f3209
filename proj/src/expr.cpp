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

#include "gramevo/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

namespace gramevo {

ExprPtr make_const(double value)
{
    if (!std::isfinite(value)) {
        throw std::invalid_argument("expression constants must be finite");
    }
    return std::make_shared<const ExprNode>(ExprNode { ExprNode::Const { value } });
}

ExprPtr make_var()
{
    return std::make_shared<const ExprNode>(ExprNode { ExprNode::Var {} });
}

ExprPtr make_unary(UnaryOp op, ExprPtr child)
{
    if (!child) {
        throw std::invalid_argument("null operand");
    }
    return std::make_shared<const ExprNode>(ExprNode { ExprNode::Unary { op, std::move(child) } });
}

ExprPtr make_binary(BinaryOp op, ExprPtr left, ExprPtr right)
{
    if (!left || !right) {
        throw std::invalid_argument("null operand");
    }
    return std::make_shared<const ExprNode>(ExprNode { ExprNode::Binary { op, std::move(left), std::move(right) } });
}

ExprError::ExprError(Kind kind, std::size_t position, std::string detail)
    : std::runtime_error((kind == Kind::SyntaxError ? "syntax error at position " : "unknown token at position ")
        + std::to_string(position) + ": " + detail)
    , kind_(kind)
    , position_(position)
    , detail_(std::move(detail))
{
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Number, Ident, Var, Plus, Minus, Star, Slash, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string_view text;
    double number { 0.0 };
};

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_alpha(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_blank(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Lexer {
public:
    explicit Lexer(std::string_view text)
        : text_(text)
    {
    }

    Token next()
    {
        skip_blanks();
        auto start = pos_;
        if (pos_ == text_.size()) {
            return { Tok::End, start, {} };
        }
        char c = text_[pos_];
        if (is_digit(c) || (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
            return number();
        }
        if (is_alpha(c)) {
            return identifier();
        }
        ++pos_;
        switch (c) {
        case '+': return { Tok::Plus, start, text_.substr(start, 1) };
        case '-': return { Tok::Minus, start, text_.substr(start, 1) };
        case '*': return { Tok::Star, start, text_.substr(start, 1) };
        case '/': return { Tok::Slash, start, text_.substr(start, 1) };
        case '(': return { Tok::LParen, start, text_.substr(start, 1) };
        case ')': return { Tok::RParen, start, text_.substr(start, 1) };
        case ',': return { Tok::Comma, start, text_.substr(start, 1) };
        default:
            throw ExprError(ExprError::Kind::UnknownToken, start, "unexpected character '" + std::string(1, c) + "'");
        }
    }

private:
    void skip_blanks()
    {
        while (pos_ < text_.size() && is_blank(text_[pos_])) {
            ++pos_;
        }
    }

    Token number()
    {
        auto start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) {
                ++pos_;
            }
        }
        auto literal = text_.substr(start, pos_ - start);
        double value = 0.0;
        auto [end, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value, std::chars_format::fixed);
        if (ec != std::errc {} || end != literal.data() + literal.size() || !std::isfinite(value)) {
            throw ExprError(ExprError::Kind::SyntaxError, start, "invalid numeric literal '" + std::string(literal) + "'");
        }
        return { Tok::Number, start, literal, value };
    }

    Token identifier()
    {
        auto start = pos_;
        for (;;) {
            while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]))) {
                ++pos_;
            }
            // dotted names such as np.sin
            if (pos_ + 1 < text_.size() && text_[pos_] == '.' && is_alpha(text_[pos_ + 1])) {
                ++pos_;
                continue;
            }
            break;
        }
        auto name = text_.substr(start, pos_ - start);
        if (name == "x") {
            variable_index(start);
            return { Tok::Var, start, text_.substr(start, pos_ - start) };
        }
        return { Tok::Ident, start, name };
    }

    // Accepts the column selector `x[:, 0]` with arbitrary blanks inside.
    void variable_index(std::size_t var_pos)
    {
        auto save = pos_;
        skip_blanks();
        if (pos_ == text_.size() || text_[pos_] != '[') {
            pos_ = save;
            return;
        }
        ++pos_;
        auto expect = [&](char c) {
            skip_blanks();
            if (pos_ == text_.size() || text_[pos_] != c) {
                throw ExprError(ExprError::Kind::SyntaxError, pos_,
                    std::string("malformed variable selector, expected '") + c + "'");
            }
            ++pos_;
        };
        expect(':');
        expect(',');
        skip_blanks();
        auto index_start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            ++pos_;
        }
        auto index = text_.substr(index_start, pos_ - index_start);
        if (index.empty()) {
            throw ExprError(ExprError::Kind::SyntaxError, pos_, "malformed variable selector, expected column index");
        }
        if (index.find_first_not_of('0') != std::string_view::npos) {
            throw ExprError(ExprError::Kind::UnknownToken, var_pos,
                "only column 0 is supported, got x[:, " + std::string(index) + "]");
        }
        expect(']');
    }

    std::string_view text_;
    std::size_t pos_ { 0 };
};

struct FunctionName {
    std::string_view name;
    UnaryOp op;
};

constexpr std::array unary_functions {
    FunctionName { "sin", UnaryOp::Sin },
    FunctionName { "np.sin", UnaryOp::Sin },
    FunctionName { "tanh", UnaryOp::Tanh },
    FunctionName { "np.tanh", UnaryOp::Tanh },
    FunctionName { "exp", UnaryOp::Exp },
    FunctionName { "np.exp", UnaryOp::Exp },
    FunctionName { "ln", UnaryOp::Ln },
    FunctionName { "log", UnaryOp::Ln },
    FunctionName { "sqrt", UnaryOp::Sqrt },
    FunctionName { "psqrt", UnaryOp::PSqrt },
    FunctionName { "plog", UnaryOp::PLog },
};

std::optional<UnaryOp> lookup_unary(std::string_view name)
{
    for (const auto& f : unary_functions) {
        if (f.name == name) {
            return f.op;
        }
    }
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text)
        : lexer_(text)
        , current_(lexer_.next())
    {
    }

    ExprPtr parse()
    {
        auto e = sum();
        if (current_.kind != Tok::End) {
            throw ExprError(ExprError::Kind::SyntaxError, current_.pos,
                "unexpected '" + std::string(current_.text) + "' after complete expression");
        }
        return e;
    }

private:
    void advance() { current_ = lexer_.next(); }

    void expect(Tok kind, const char* what)
    {
        if (current_.kind != kind) {
            throw ExprError(ExprError::Kind::SyntaxError, current_.pos, std::string("expected ") + what);
        }
        advance();
    }

    [[nodiscard]] bool starts_primary() const noexcept
    {
        return current_.kind == Tok::Number || current_.kind == Tok::Ident || current_.kind == Tok::Var
            || current_.kind == Tok::LParen;
    }

    ExprPtr sum()
    {
        auto left = product();
        while (current_.kind == Tok::Plus || current_.kind == Tok::Minus) {
            auto op = current_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            left = make_binary(op, std::move(left), product());
        }
        return left;
    }

    ExprPtr product()
    {
        auto left = signed_factor();
        for (;;) {
            if (current_.kind == Tok::Star || current_.kind == Tok::Slash) {
                auto op = current_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
                advance();
                left = make_binary(op, std::move(left), signed_factor());
            } else if (starts_primary()) {
                // juxtaposition, e.g. "2 sqrt(x)"
                left = make_binary(BinaryOp::Mul, std::move(left), signed_factor());
            } else {
                return left;
            }
        }
    }

    ExprPtr signed_factor()
    {
        if (current_.kind == Tok::Minus) {
            advance();
            return make_unary(UnaryOp::Neg, signed_factor());
        }
        return primary();
    }

    ExprPtr primary()
    {
        auto token = current_;
        switch (token.kind) {
        case Tok::Number:
            advance();
            return make_const(token.number);
        case Tok::Var:
            advance();
            return make_var();
        case Tok::LParen: {
            advance();
            auto inner = sum();
            expect(Tok::RParen, "')'");
            return inner;
        }
        case Tok::Ident:
            return call(token);
        case Tok::End:
            throw ExprError(ExprError::Kind::SyntaxError, token.pos, "unexpected end of input, expected an operand");
        default:
            throw ExprError(ExprError::Kind::SyntaxError, token.pos,
                "unexpected '" + std::string(token.text) + "', expected an operand");
        }
    }

    ExprPtr call(const Token& name)
    {
        auto unary = lookup_unary(name.text);
        bool is_pdiv = name.text == "pdiv";
        if (!unary && !is_pdiv) {
            throw ExprError(ExprError::Kind::UnknownToken, name.pos, "unknown identifier '" + std::string(name.text) + "'");
        }
        advance();
        expect(Tok::LParen, "'(' after function name");
        auto first = sum();
        if (is_pdiv) {
            expect(Tok::Comma, "',' in pdiv");
            auto second = sum();
            expect(Tok::RParen, "')'");
            return make_binary(BinaryOp::PDiv, std::move(first), std::move(second));
        }
        expect(Tok::RParen, "')'");
        return make_unary(*unary, std::move(first));
    }

    Lexer lexer_;
    Token current_;
};

} // namespace

ExprPtr parse_formula(std::string_view text)
{
    return Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double apply(UnaryOp op, double a) noexcept
{
    switch (op) {
    case UnaryOp::Sin: return std::sin(a);
    case UnaryOp::Tanh: return std::tanh(a);
    case UnaryOp::Exp: return std::exp(a);
    case UnaryOp::Sqrt: return std::sqrt(a);
    case UnaryOp::Ln: return std::log(a);
    case UnaryOp::PSqrt: return std::sqrt(std::fabs(a));
    case UnaryOp::PLog: return std::fabs(a) > protection_epsilon ? std::log(std::fabs(a)) : 0.0;
    case UnaryOp::Neg: return -a;
    }
    return std::nan("");
}

double apply(BinaryOp op, double a, double b) noexcept
{
    switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::PDiv: return std::fabs(b) > protection_epsilon ? a / b : 1.0;
    case BinaryOp::Div: return a / b;
    }
    return std::nan("");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void evaluate_into(const ExprNode& expr, std::span<const double> xs, std::span<double> out)
{
    std::visit(overloaded {
                   [&](const ExprNode::Const& c) { std::fill(out.begin(), out.end(), c.value); },
                   [&](const ExprNode::Var&) { std::copy(xs.begin(), xs.end(), out.begin()); },
                   [&](const ExprNode::Unary& u) {
                       evaluate_into(*u.child, xs, out);
                       for (auto& v : out) {
                           v = apply(u.op, v);
                       }
                   },
                   [&](const ExprNode::Binary& b) {
                       evaluate_into(*b.left, xs, out);
                       std::vector<double> rhs(out.size());
                       evaluate_into(*b.right, xs, rhs);
                       for (std::size_t i = 0; i < out.size(); ++i) {
                           out[i] = apply(b.op, out[i], rhs[i]);
                       }
                   },
               },
        expr.node);
}

} // namespace

double evaluate(const ExprNode& expr, double x)
{
    return std::visit(overloaded {
                          [](const ExprNode::Const& c) { return c.value; },
                          [x](const ExprNode::Var&) { return x; },
                          [x](const ExprNode::Unary& u) { return apply(u.op, evaluate(*u.child, x)); },
                          [x](const ExprNode::Binary& b) {
                              auto left = evaluate(*b.left, x);
                              return apply(b.op, left, evaluate(*b.right, x));
                          },
                      },
        expr.node);
}

std::vector<double> evaluate_batch(const ExprNode& expr, std::span<const double> xs)
{
    std::vector<double> out(xs.size());
    if (!xs.empty()) {
        evaluate_into(expr, xs, out);
    }
    return out;
}

std::size_t node_count(const ExprNode& expr)
{
    return std::visit(overloaded {
                          [](const ExprNode::Const&) -> std::size_t { return 1; },
                          [](const ExprNode::Var&) -> std::size_t { return 1; },
                          [](const ExprNode::Unary& u) { return 1 + node_count(*u.child); },
                          [](const ExprNode::Binary& b) { return 1 + node_count(*b.left) + node_count(*b.right); },
                      },
        expr.node);
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

constexpr int prec_sum = 1;
constexpr int prec_product = 2;
constexpr int prec_negation = 3;
constexpr int prec_atom = 4;

const char* function_name(UnaryOp op) noexcept
{
    switch (op) {
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::PSqrt: return "psqrt";
    case UnaryOp::PLog: return "plog";
    case UnaryOp::Neg: return "-";
    }
    return "?";
}

int precedence(const ExprNode& expr) noexcept
{
    return std::visit(overloaded {
                          [](const ExprNode::Const&) { return prec_atom; },
                          [](const ExprNode::Var&) { return prec_atom; },
                          [](const ExprNode::Unary& u) { return u.op == UnaryOp::Neg ? prec_negation : prec_atom; },
                          [](const ExprNode::Binary& b) {
                              switch (b.op) {
                              case BinaryOp::Add:
                              case BinaryOp::Sub: return prec_sum;
                              case BinaryOp::Mul:
                              case BinaryOp::Div: return prec_product;
                              case BinaryOp::PDiv: return prec_atom;
                              }
                              return prec_atom;
                          },
                      },
        expr.node);
}

std::string format_number(double value)
{
    std::array<char, 400> buffer {};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), std::fabs(value), std::chars_format::fixed);
    if (ec != std::errc {}) {
        throw std::runtime_error("constant too large to format");
    }
    std::string digits(buffer.data(), end);
    return value < 0.0 || std::signbit(value) ? "(-" + digits + ")" : digits;
}

void format_into(const ExprNode& expr, std::string& out);

void format_operand(const ExprNode& expr, bool parenthesize, std::string& out)
{
    if (parenthesize) {
        out += '(';
    }
    format_into(expr, out);
    if (parenthesize) {
        out += ')';
    }
}

void format_into(const ExprNode& expr, std::string& out)
{
    std::visit(overloaded {
                   [&](const ExprNode::Const& c) { out += format_number(c.value); },
                   [&](const ExprNode::Var&) { out += 'x'; },
                   [&](const ExprNode::Unary& u) {
                       if (u.op == UnaryOp::Neg) {
                           out += '-';
                           format_operand(*u.child, precedence(*u.child) < prec_negation, out);
                           return;
                       }
                       out += function_name(u.op);
                       format_operand(*u.child, true, out);
                   },
                   [&](const ExprNode::Binary& b) {
                       if (b.op == BinaryOp::PDiv) {
                           out += "pdiv(";
                           format_into(*b.left, out);
                           out += ',';
                           format_into(*b.right, out);
                           out += ')';
                           return;
                       }
                       auto own = precedence(expr);
                       format_operand(*b.left, precedence(*b.left) < own, out);
                       switch (b.op) {
                       case BinaryOp::Add: out += '+'; break;
                       case BinaryOp::Sub: out += '-'; break;
                       case BinaryOp::Mul: out += '*'; break;
                       default: out += '/'; break;
                       }
                       // Floating-point operations do not reassociate, so an
                       // equal-precedence right operand keeps its parentheses.
                       format_operand(*b.right, precedence(*b.right) <= own, out);
                   },
               },
        expr.node);
}

} // namespace

std::string format_expr(const ExprNode& expr)
{
    std::string out;
    format_into(expr, out);
    return out;
}

} // namespace gramevo
