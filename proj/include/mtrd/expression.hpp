#pragma once

/// Small arithmetic expression language for config-supplied functions.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('-' | '+') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
///
/// Functions: exp log sqrt sin cos tan tanh sinh cosh coth atan abs.
/// Constants: pi. A '^' whose exponent is an integer literal uses repeated
/// multiplication, so negative bases are allowed there.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"

namespace mtrd {

class Expression {
public:
    enum class Op { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, IntPow, Call };
    enum class Fn { Exp, Log, Sqrt, Sin, Cos, Tan, Tanh, Sinh, Cosh, Coth, Atan, Abs };

    struct Node {
        Op op = Op::Number;
        double number = 0.0;
        std::size_t var = 0;
        int exponent = 0;
        Fn fn = Fn::Exp;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    Expression() = default;

    static Expression parse(const std::string& text, std::vector<std::string> variables) {
        Parser p{text, variables, 0};
        Expression e;
        e.root_ = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size()) p.fail("unexpected trailing input");
        e.text_ = text;
        e.variables_ = std::move(variables);
        e.used_ = std::vector<bool>(e.variables_.size(), false);
        mark_used(*e.root_, e.used_);
        return e;
    }

    template <class T>
    T operator()(std::span<const T> vars) const {
        return eval<T>(*root_, vars);
    }

    const std::string& text() const { return text_; }
    const std::vector<std::string>& variables() const { return variables_; }
    bool uses(std::size_t var) const { return var < used_.size() && used_[var]; }

private:
    struct Parser {
        const std::string& s;
        const std::vector<std::string>& vars;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& msg) const {
            throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos) + " in '" + s + "'");
        }
        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool accept(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        static std::shared_ptr<const Node> make(Op op, std::shared_ptr<const Node> a = nullptr,
                                                std::shared_ptr<const Node> b = nullptr) {
            auto n = std::make_shared<Node>();
            n->op = op;
            n->lhs = std::move(a);
            n->rhs = std::move(b);
            return n;
        }

        std::shared_ptr<const Node> parse_expr() {
            auto lhs = parse_term();
            for (;;) {
                if (accept('+')) lhs = make(Op::Add, lhs, parse_term());
                else if (accept('-')) lhs = make(Op::Sub, lhs, parse_term());
                else return lhs;
            }
        }
        std::shared_ptr<const Node> parse_term() {
            auto lhs = parse_unary();
            for (;;) {
                if (accept('*')) lhs = make(Op::Mul, lhs, parse_unary());
                else if (accept('/')) lhs = make(Op::Div, lhs, parse_unary());
                else return lhs;
            }
        }
        std::shared_ptr<const Node> parse_unary() {
            if (accept('-')) return make(Op::Neg, parse_unary());
            if (accept('+')) return parse_unary();
            return parse_power();
        }
        std::shared_ptr<const Node> parse_power() {
            auto base = parse_atom();
            if (!accept('^')) return base;
            auto exponent = parse_unary();
            const Node* e = exponent.get();
            bool negated = false;
            if (e->op == Op::Neg) {
                negated = true;
                e = e->lhs.get();
            }
            if (e->op == Op::Number && e->number == std::floor(e->number) && std::abs(e->number) <= 64) {
                auto n = std::make_shared<Node>();
                n->op = Op::IntPow;
                n->exponent = static_cast<int>(negated ? -e->number : e->number);
                n->lhs = std::move(base);
                return n;
            }
            return make(Op::Pow, std::move(base), std::move(exponent));
        }
        std::shared_ptr<const Node> parse_atom() {
            skip_ws();
            if (pos >= s.size()) fail("unexpected end of input");
            const char c = s[pos];
            if (accept('(')) {
                auto inner = parse_expr();
                if (!accept(')')) fail("expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const char* begin = s.c_str() + pos;
                char* end = nullptr;
                const double v = std::strtod(begin, &end);
                if (end == begin) fail("bad number");
                pos += static_cast<std::size_t>(end - begin);
                auto n = std::make_shared<Node>();
                n->op = Op::Number;
                n->number = v;
                return n;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos;
                while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
                const std::string name = s.substr(start, pos - start);
                if (accept('(')) {
                    auto arg = parse_expr();
                    if (!accept(')')) fail("expected ')' after argument of " + name);
                    auto n = std::make_shared<Node>();
                    n->op = Op::Call;
                    n->fn = function(name);
                    n->lhs = std::move(arg);
                    return n;
                }
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    if (vars[i] == name) {
                        auto n = std::make_shared<Node>();
                        n->op = Op::Variable;
                        n->var = i;
                        return n;
                    }
                }
                if (name == "pi") {
                    auto n = std::make_shared<Node>();
                    n->number = std::numbers::pi;
                    return n;
                }
                pos = start;
                fail("unknown identifier '" + name + "'");
            }
            fail(std::string("unexpected character '") + c + "'");
        }
        Fn function(const std::string& name) const {
            static const std::pair<const char*, Fn> table[] = {
                {"exp", Fn::Exp},   {"log", Fn::Log},   {"sqrt", Fn::Sqrt}, {"sin", Fn::Sin},
                {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"tanh", Fn::Tanh}, {"sinh", Fn::Sinh},
                {"cosh", Fn::Cosh}, {"coth", Fn::Coth}, {"atan", Fn::Atan}, {"abs", Fn::Abs},
            };
            for (const auto& [n, f] : table) {
                if (name == n) return f;
            }
            fail("unknown function '" + name + "'");
        }
    };

    static void mark_used(const Node& n, std::vector<bool>& used) {
        if (n.op == Op::Variable) used[n.var] = true;
        if (n.lhs) mark_used(*n.lhs, used);
        if (n.rhs) mark_used(*n.rhs, used);
    }

    template <class T>
    static T eval(const Node& n, std::span<const T> v) {
        switch (n.op) {
            case Op::Number: return T(n.number);
            case Op::Variable: return v[n.var];
            case Op::Neg: return -eval<T>(*n.lhs, v);
            case Op::Add: return eval<T>(*n.lhs, v) + eval<T>(*n.rhs, v);
            case Op::Sub: return eval<T>(*n.lhs, v) - eval<T>(*n.rhs, v);
            case Op::Mul: return eval<T>(*n.lhs, v) * eval<T>(*n.rhs, v);
            case Op::Div: return eval<T>(*n.lhs, v) / eval<T>(*n.rhs, v);
            case Op::IntPow: return ipow(eval<T>(*n.lhs, v), n.exponent);
            case Op::Pow: return exp(eval<T>(*n.rhs, v) * log(eval<T>(*n.lhs, v)));
            case Op::Call: {
                const T a = eval<T>(*n.lhs, v);
                switch (n.fn) {
                    case Fn::Exp: return exp(a);
                    case Fn::Log: return log(a);
                    case Fn::Sqrt: return sqrt(a);
                    case Fn::Sin: return sin(a);
                    case Fn::Cos: return cos(a);
                    case Fn::Tan: return tan(a);
                    case Fn::Tanh: return tanh(a);
                    case Fn::Sinh: return sinh(a);
                    case Fn::Cosh: return cosh(a);
                    case Fn::Coth: return coth(a);
                    case Fn::Atan: return atan(a);
                    case Fn::Abs: return abs(a);
                }
            }
        }
        return T(0.0);
    }

    std::shared_ptr<const Node> root_;
    std::string text_;
    std::vector<std::string> variables_;
    std::vector<bool> used_;
};

}  // namespace mtrd
