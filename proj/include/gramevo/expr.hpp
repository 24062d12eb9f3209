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

#ifndef GRAMEVO_EXPR_HPP
#define GRAMEVO_EXPR_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gramevo {

enum class UnaryOp { Sin, Tanh, Exp, Sqrt, Ln, PSqrt, PLog, Neg };
enum class BinaryOp { Add, Sub, Mul, PDiv, Div };

// Guard below which protected division and logarithm fall back.
inline constexpr double protection_epsilon = 1e-9;

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable expression tree over the single variable x. Subtrees are shared,
// so copies are cheap and concurrent evaluation needs no locking.
struct ExprNode {
    struct Const {
        double value;
    };
    struct Var { };
    struct Unary {
        UnaryOp op;
        ExprPtr child;
    };
    struct Binary {
        BinaryOp op;
        ExprPtr left;
        ExprPtr right;
    };

    std::variant<Const, Var, Unary, Binary> node;
};

[[nodiscard]] ExprPtr make_const(double value);
[[nodiscard]] ExprPtr make_var();
[[nodiscard]] ExprPtr make_unary(UnaryOp op, ExprPtr child);
[[nodiscard]] ExprPtr make_binary(BinaryOp op, ExprPtr left, ExprPtr right);

class ExprError : public std::runtime_error {
public:
    enum class Kind { SyntaxError, UnknownToken };

    ExprError(Kind kind, std::size_t position, std::string detail);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    // Zero-based byte offset into the parsed text.
    [[nodiscard]] std::size_t position() const noexcept { return position_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    Kind kind_;
    std::size_t position_;
    std::string detail_;
};

// Parses formula text: phenotypes in either the NumPy-style token set
// (np.sin, np.tanh, np.exp, x[:, 0]) or the neutral one, and hand-written
// formulas with ln/log/sqrt, `/`, unary minus and implicit multiplication
// by juxtaposition ("2 sqrt(x)").
[[nodiscard]] ExprPtr parse_formula(std::string_view text);

// Protected operators: pdiv(a,b) = 1 when |b| <= eps, psqrt(a) = sqrt(|a|),
// plog(a) = 0 when |a| <= eps else ln|a|. ln, sqrt, `/` and exp are the
// plain functions and may return inf or nan.
[[nodiscard]] double evaluate(const ExprNode& expr, double x);

// Element-wise evaluate(); results are bit-identical to the scalar path.
[[nodiscard]] std::vector<double> evaluate_batch(const ExprNode& expr, std::span<const double> xs);

// Canonical text with explicit `*`, neutral function names and only the
// parentheses needed to reproduce the same evaluation order.
[[nodiscard]] std::string format_expr(const ExprNode& expr);

[[nodiscard]] std::size_t node_count(const ExprNode& expr);

} // namespace gramevo

#endif
