#pragma once

// Small arithmetic-expression language for user-supplied boundary data.
// Grammar (recursive descent):
//
//   expr    := term  (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            -- right associative
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Names: variables x, y, theta; the constant pi; functions sin, cos, exp,
// abs, sqrt, log (natural), min, max.  The printed form of a parsed
// expression re-parses to an equivalent tree.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alphaconv {

class expr_error : public std::runtime_error {
public:
    expr_error(const std::string& what, size_t position)
        : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    size_t position() const { return position_; }

private:
    size_t position_;
};

namespace exprdet {

enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Var { X, Y, Theta };
enum class Fn { Sin, Cos, Exp, Abs, Sqrt, Log, Min, Max };

struct Node {
    Kind kind;
    double number = 0.0;
    Var var = Var::X;
    Fn fn = Fn::Sin;
    std::vector<std::shared_ptr<const Node>> args;
};

using NodePtr = std::shared_ptr<const Node>;

inline double eval(const Node& n, double x, double y, double theta) {
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Var:
            switch (n.var) {
                case Var::X: return x;
                case Var::Y: return y;
                case Var::Theta: return theta;
            }
            break;
        case Kind::Neg: return -eval(*n.args[0], x, y, theta);
        case Kind::Add: return eval(*n.args[0], x, y, theta) + eval(*n.args[1], x, y, theta);
        case Kind::Sub: return eval(*n.args[0], x, y, theta) - eval(*n.args[1], x, y, theta);
        case Kind::Mul: return eval(*n.args[0], x, y, theta) * eval(*n.args[1], x, y, theta);
        case Kind::Div: return eval(*n.args[0], x, y, theta) / eval(*n.args[1], x, y, theta);
        case Kind::Pow: return std::pow(eval(*n.args[0], x, y, theta), eval(*n.args[1], x, y, theta));
        case Kind::Call: {
            const double a = eval(*n.args[0], x, y, theta);
            switch (n.fn) {
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Exp: return std::exp(a);
                case Fn::Abs: return std::abs(a);
                case Fn::Sqrt: return std::sqrt(a);
                case Fn::Log: return std::log(a);
                case Fn::Min: return std::min(a, eval(*n.args[1], x, y, theta));
                case Fn::Max: return std::max(a, eval(*n.args[1], x, y, theta));
            }
            break;
        }
    }
    throw std::logic_error("expr: corrupt node");
}

// Precedence levels used when printing: higher binds tighter.
inline int precedence(Kind k) {
    switch (k) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

inline void print(const Node& n, std::string& out);

inline void print_child(const Node& parent, const Node& child, bool parens_on_tie, std::string& out) {
    const bool need = precedence(child.kind) < precedence(parent.kind) ||
                      (parens_on_tie && precedence(child.kind) == precedence(parent.kind));
    if (need) out += '(';
    print(child, out);
    if (need) out += ')';
}

inline void print(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            return;
        }
        case Kind::Var:
            out += (n.var == Var::X ? "x" : n.var == Var::Y ? "y" : "theta");
            return;
        case Kind::Neg:
            out += '-';
            print_child(n, *n.args[0], false, out);
            return;
        case Kind::Add:
        case Kind::Sub:
            print_child(n, *n.args[0], false, out);
            out += (n.kind == Kind::Add ? '+' : '-');
            print_child(n, *n.args[1], true, out);
            return;
        case Kind::Mul:
        case Kind::Div:
            print_child(n, *n.args[0], false, out);
            out += (n.kind == Kind::Mul ? '*' : '/');
            print_child(n, *n.args[1], true, out);
            return;
        case Kind::Pow:
            print_child(n, *n.args[0], true, out);
            out += '^';
            print_child(n, *n.args[1], false, out);
            return;
        case Kind::Call: {
            static const char* names[] = {"sin", "cos", "exp", "abs", "sqrt", "log", "min", "max"};
            out += names[static_cast<int>(n.fn)];
            out += '(';
            for (size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ',';
                print(*n.args[i], out);
            }
            out += ')';
            return;
        }
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw expr_error("syntax error: " + msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    static NodePtr make(Kind k, NodePtr a, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->args.push_back(std::move(a));
        if (b) n->args.push_back(std::move(b));
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = make(Kind::Add, lhs, term());
            else if (eat('-'))
                lhs = make(Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = make(Kind::Mul, lhs, unary());
            else if (eat('/'))
                lhs = make(Kind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected an operand");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            const size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) pos_ = mark;  // bare 'e' belongs to the next token
        }
        const std::string tok(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            pos_ = start;
            fail("malformed number");
        }
        auto n = std::make_shared<Node>();
        n->kind = Kind::Number;
        n->number = v;
        return n;
    }

    NodePtr name() {
        const size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);

        if (id == "x" || id == "y" || id == "theta") {
            auto n = std::make_shared<Node>();
            n->kind = Kind::Var;
            n->var = (id == "x") ? Var::X : (id == "y") ? Var::Y : Var::Theta;
            return n;
        }
        if (id == "pi") {
            auto n = std::make_shared<Node>();
            n->kind = Kind::Number;
            n->number = std::acos(-1.0);
            return n;
        }

        struct FnEntry { std::string_view name; Fn fn; size_t arity; };
        static constexpr FnEntry fns[] = {
            {"sin", Fn::Sin, 1},  {"cos", Fn::Cos, 1}, {"exp", Fn::Exp, 1},
            {"abs", Fn::Abs, 1},  {"sqrt", Fn::Sqrt, 1}, {"log", Fn::Log, 1},
            {"min", Fn::Min, 2},  {"max", Fn::Max, 2},
        };
        for (const auto& f : fns) {
            if (id != f.name) continue;
            if (!eat('('))
                fail("function '" + std::string(id) + "' needs an argument list");
            std::vector<NodePtr> args;
            args.push_back(expr());
            while (eat(',')) args.push_back(expr());
            if (!eat(')')) fail("expected ')'");
            if (args.size() != f.arity) {
                pos_ = start;
                fail("function '" + std::string(id) + "' takes " + std::to_string(f.arity) +
                     " argument(s), got " + std::to_string(args.size()));
            }
            auto n = std::make_shared<Node>();
            n->kind = Kind::Call;
            n->fn = f.fn;
            n->args = std::move(args);
            return n;
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
    }
};

}  // namespace exprdet

// An immutable parsed expression in the variables x, y, theta.
class Expression {
public:
    Expression() = default;

    static Expression parse(std::string_view text) {
        Expression e;
        e.root_ = exprdet::Parser(text).run();
        return e;
    }

    bool valid() const { return root_ != nullptr; }

    double eval(double x, double y, double theta) const {
        return exprdet::eval(*root_, x, y, theta);
    }

    std::string str() const {
        std::string out;
        exprdet::print(*root_, out);
        return out;
    }

private:
    exprdet::NodePtr root_;
};

}  // namespace alphaconv
