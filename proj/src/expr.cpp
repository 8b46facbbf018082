#include "svlie/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "svlie/errors.hpp"

namespace svlie {

Expr::Expr(NodePtr root, int dim) : root_(std::move(root)), dim_(dim) { compile(); }

Expr Expr::constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Const;
    n->value = v;
    return Expr(std::move(n), 0);
}

Expr Expr::variable(int index, int dim) {
    if (index < 1 || index > dim)
        throw UnknownVariable("variable x" + std::to_string(index) + " out of range (dim " +
                              std::to_string(dim) + ")");
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Var;
    n->var = index;
    return Expr(std::move(n), dim);
}

// ---------------------------------------------------------------------------
// Parsing

class ExprParser {
public:
    ExprParser(const std::string& text, int dim) : text_(text), dim_(dim) {}

    Expr::NodePtr parse() {
        auto n = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("trailing characters in expression: \"" + text_.substr(pos_) + "\"");
        return n;
    }

private:
    using NodePtr = Expr::NodePtr;

    const std::string& text_;
    int dim_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
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

    static NodePtr make(ExprOp op, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Expr::Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = make(ExprOp::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = make(ExprOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = make(ExprOp::Mul, lhs, parse_unary());
            else if (eat('/'))
                lhs = make(ExprOp::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make(ExprOp::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) {
            skip_ws();
            bool neg = eat('-');
            size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ == start) throw SyntaxError("'^' requires an integer literal exponent");
            int e = std::atoi(text_.substr(start, pos_ - start).c_str());
            auto n = make(ExprOp::PowInt, base);
            const_cast<Expr::Node*>(n.get())->ipow = neg ? -e : e;
            return n;
        }
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = parse_sum();
            if (!eat(')')) throw SyntaxError("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw SyntaxError(std::string("unexpected character '") + c + "' in expression");
    }

    NodePtr parse_number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw SyntaxError("malformed number");
        pos_ += static_cast<size_t>(end - begin);
        auto n = make(ExprOp::Const);
        const_cast<Expr::Node*>(n.get())->value = v;
        return n;
    }

    NodePtr parse_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if ((name[0] == 'x' || name[0] == 'X') && name.size() > 1 &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int idx = std::atoi(name.c_str() + 1);
            if (idx < 1 || idx > dim_)
                throw UnknownVariable("variable " + name + " out of range (dim " +
                                      std::to_string(dim_) + ")");
            auto n = make(ExprOp::Var);
            const_cast<Expr::Node*>(n.get())->var = idx;
            return n;
        }
        auto unary_fn = [&](ExprOp op) {
            if (!eat('(')) throw SyntaxError(name + " requires '('");
            NodePtr a = parse_sum();
            if (!eat(')')) throw SyntaxError("missing ')' after " + name);
            return make(op, a);
        };
        auto binary_fn = [&](ExprOp op) {
            if (!eat('(')) throw SyntaxError(name + " requires '('");
            NodePtr a = parse_sum();
            if (!eat(',')) throw SyntaxError(name + " requires two arguments");
            NodePtr b = parse_sum();
            if (!eat(')')) throw SyntaxError("missing ')' after " + name);
            return make(op, a, b);
        };
        if (name == "abs") return unary_fn(ExprOp::Abs);
        if (name == "sign") return unary_fn(ExprOp::Sign);
        if (name == "sin") return unary_fn(ExprOp::Sin);
        if (name == "cos") return unary_fn(ExprOp::Cos);
        if (name == "exp") return unary_fn(ExprOp::Exp);
        if (name == "min") return binary_fn(ExprOp::Min);
        if (name == "max") return binary_fn(ExprOp::Max);
        if (name == "pow") {
            if (!eat('(')) throw SyntaxError("pow requires '('");
            NodePtr a = parse_sum();
            if (!eat(',')) throw SyntaxError("pow requires two arguments");
            skip_ws();
            bool neg = eat('-');
            size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ == s) throw SyntaxError("pow exponent must be an integer literal");
            int e = std::atoi(text_.substr(s, pos_ - s).c_str());
            if (!eat(')')) throw SyntaxError("missing ')' after pow");
            auto n = make(ExprOp::PowInt, a);
            const_cast<Expr::Node*>(n.get())->ipow = neg ? -e : e;
            return n;
        }
        throw SyntaxError("unknown identifier \"" + name + "\"");
    }
};

Expr Expr::parse(const std::string& text, int dim) {
    ExprParser p(text, dim);
    return Expr(p.parse(), dim);
}

// ---------------------------------------------------------------------------
// Compilation and evaluation

void Expr::compile() {
    tape_.clear();
    stack_need_ = 0;
    int depth = 0;
    // Post-order walk; every instruction pushes exactly one value after
    // consuming its operands.
    std::vector<std::pair<NodePtr, bool>> stack{{root_, false}};
    std::vector<NodePtr> order;
    while (!stack.empty()) {
        auto [n, visited] = stack.back();
        stack.pop_back();
        if (!n) continue;
        if (visited) {
            order.push_back(n);
            continue;
        }
        stack.push_back({n, true});
        stack.push_back({n->b, false});
        stack.push_back({n->a, false});
    }
    for (const auto& n : order) {
        tape_.push_back(Instr{n->op, n->value, n->var, n->ipow});
        switch (n->op) {
            case ExprOp::Const:
            case ExprOp::Var:
                ++depth;
                if (depth > stack_need_) stack_need_ = depth;
                break;
            case ExprOp::Add:
            case ExprOp::Sub:
            case ExprOp::Mul:
            case ExprOp::Div:
            case ExprOp::Min:
            case ExprOp::Max:
                --depth;
                break;
            default:
                break;  // unary: depth unchanged
        }
    }
}

namespace {

double ipow_eval(double base, int e) {
    if (e == 0) return 1.0;
    bool inv = e < 0;
    unsigned n = static_cast<unsigned>(inv ? -e : e);
    double r = 1.0, b = base;
    while (n) {
        if (n & 1u) r *= b;
        b *= b;
        n >>= 1u;
    }
    if (inv) {
        if (r == 0.0) throw DomainError("zero raised to a negative power");
        return 1.0 / r;
    }
    return r;
}

}  // namespace

double Expr::eval(std::span<const double> x) const {
    double stack[64];
    double* sp = stack;
    for (const Instr& ins : tape_) {
        switch (ins.op) {
            case ExprOp::Const:
                *sp++ = ins.value;
                break;
            case ExprOp::Var:
                if (ins.var > static_cast<int>(x.size()))
                    throw UnknownVariable("point has too few coordinates for x" +
                                          std::to_string(ins.var));
                *sp++ = x[static_cast<size_t>(ins.var - 1)];
                break;
            case ExprOp::Add:
                sp[-2] += sp[-1];
                --sp;
                break;
            case ExprOp::Sub:
                sp[-2] -= sp[-1];
                --sp;
                break;
            case ExprOp::Mul:
                sp[-2] *= sp[-1];
                --sp;
                break;
            case ExprOp::Div:
                if (sp[-1] == 0.0) throw DomainError("division by zero");
                sp[-2] /= sp[-1];
                --sp;
                break;
            case ExprOp::Neg:
                sp[-1] = -sp[-1];
                break;
            case ExprOp::PowInt:
                sp[-1] = ipow_eval(sp[-1], ins.ipow);
                break;
            case ExprOp::Abs:
                sp[-1] = std::abs(sp[-1]);
                break;
            case ExprOp::Sign:
                sp[-1] = sp[-1] > 0.0 ? 1.0 : (sp[-1] < 0.0 ? -1.0 : 0.0);
                break;
            case ExprOp::Sin:
                sp[-1] = std::sin(sp[-1]);
                break;
            case ExprOp::Cos:
                sp[-1] = std::cos(sp[-1]);
                break;
            case ExprOp::Exp:
                sp[-1] = std::exp(sp[-1]);
                break;
            case ExprOp::Min:
                sp[-2] = std::min(sp[-2], sp[-1]);
                --sp;
                break;
            case ExprOp::Max:
                sp[-2] = std::max(sp[-2], sp[-1]);
                --sp;
                break;
        }
    }
    return sp[-1];
}

// ---------------------------------------------------------------------------
// Symbolic derivative

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

NodePtr simplify(NodePtr n) {
    if (!n) return n;
    auto is_zero = [](const NodePtr& p) { return p->op == ExprOp::Const && p->value == 0.0; };
    auto is_one = [](const NodePtr& p) { return p->op == ExprOp::Const && p->value == 1.0; };
    auto cnst = [](double v) {
        auto c = std::make_shared<Node>();
        c->op = ExprOp::Const;
        c->value = v;
        return NodePtr(c);
    };
    switch (n->op) {
        case ExprOp::Add:
            if (is_zero(n->a)) return n->b;
            if (is_zero(n->b)) return n->a;
            if (n->a->op == ExprOp::Const && n->b->op == ExprOp::Const)
                return cnst(n->a->value + n->b->value);
            break;
        case ExprOp::Sub:
            if (is_zero(n->b)) return n->a;
            if (n->a->op == ExprOp::Const && n->b->op == ExprOp::Const)
                return cnst(n->a->value - n->b->value);
            break;
        case ExprOp::Mul:
            if (is_zero(n->a) || is_zero(n->b)) return cnst(0.0);
            if (is_one(n->a)) return n->b;
            if (is_one(n->b)) return n->a;
            if (n->a->op == ExprOp::Const && n->b->op == ExprOp::Const)
                return cnst(n->a->value * n->b->value);
            break;
        case ExprOp::Div:
            if (is_zero(n->a)) return cnst(0.0);
            if (is_one(n->b)) return n->a;
            break;
        case ExprOp::Neg:
            if (n->a->op == ExprOp::Const) return cnst(-n->a->value);
            break;
        case ExprOp::PowInt:
            if (n->ipow == 0) return cnst(1.0);
            if (n->ipow == 1) return n->a;
            break;
        default:
            break;
    }
    return n;
}

namespace {

NodePtr deriv_rec(const NodePtr& n, int v) {
    auto make = [](ExprOp op, NodePtr a = nullptr, NodePtr b = nullptr, double val = 0.0,
                   int var = 0, int ipow = 0) {
        auto m = std::make_shared<Expr::Node>();
        m->op = op;
        m->a = std::move(a);
        m->b = std::move(b);
        m->value = val;
        m->var = var;
        m->ipow = ipow;
        return NodePtr(m);
    };
    auto cnst = [&](double c) { return make(ExprOp::Const, nullptr, nullptr, c); };
    switch (n->op) {
        case ExprOp::Const:
            return cnst(0.0);
        case ExprOp::Var:
            return cnst(n->var == v ? 1.0 : 0.0);
        case ExprOp::Add:
            return make(ExprOp::Add, deriv_rec(n->a, v), deriv_rec(n->b, v));
        case ExprOp::Sub:
            return make(ExprOp::Sub, deriv_rec(n->a, v), deriv_rec(n->b, v));
        case ExprOp::Mul:
            return make(ExprOp::Add, make(ExprOp::Mul, deriv_rec(n->a, v), n->b),
                        make(ExprOp::Mul, n->a, deriv_rec(n->b, v)));
        case ExprOp::Div:
            return make(
                ExprOp::Div,
                make(ExprOp::Sub, make(ExprOp::Mul, deriv_rec(n->a, v), n->b),
                     make(ExprOp::Mul, n->a, deriv_rec(n->b, v))),
                make(ExprOp::PowInt, n->b, nullptr, 0.0, 0, 2));
        case ExprOp::Neg:
            return make(ExprOp::Neg, deriv_rec(n->a, v));
        case ExprOp::PowInt:
            return make(ExprOp::Mul, cnst(static_cast<double>(n->ipow)),
                        make(ExprOp::Mul,
                             make(ExprOp::PowInt, n->a, nullptr, 0.0, 0, n->ipow - 1),
                             deriv_rec(n->a, v)));
        case ExprOp::Abs:
            return make(ExprOp::Mul, make(ExprOp::Sign, n->a), deriv_rec(n->a, v));
        case ExprOp::Sign:
            return cnst(0.0);
        case ExprOp::Sin:
            return make(ExprOp::Mul, make(ExprOp::Cos, n->a), deriv_rec(n->a, v));
        case ExprOp::Cos:
            return make(ExprOp::Neg, make(ExprOp::Mul, make(ExprOp::Sin, n->a), deriv_rec(n->a, v)));
        case ExprOp::Exp:
            return make(ExprOp::Mul, make(ExprOp::Exp, n->a), deriv_rec(n->a, v));
        case ExprOp::Min:
        case ExprOp::Max:
            throw DomainError("min/max have no single-valued derivative");
    }
    throw DomainError("unreachable expression op");
}

NodePtr simplify_deep(const NodePtr& n) {
    if (!n) return n;
    auto m = std::make_shared<Expr::Node>(*n);
    m->a = simplify_deep(n->a);
    m->b = simplify_deep(n->b);
    return Expr::simplify(m);
}

}  // namespace

Expr Expr::derivative(int index) const {
    NodePtr d = deriv_rec(root_, index);
    return Expr(simplify_deep(d), dim_);
}

std::string Expr::str() const {
    struct Printer {
        static std::string print(const NodePtr& n) {
            switch (n->op) {
                case ExprOp::Const: {
                    char buf[32];
                    snprintf(buf, sizeof(buf), "%.17g", n->value);
                    return buf;
                }
                case ExprOp::Var:
                    return "x" + std::to_string(n->var);
                case ExprOp::Add:
                    return "(" + print(n->a) + " + " + print(n->b) + ")";
                case ExprOp::Sub:
                    return "(" + print(n->a) + " - " + print(n->b) + ")";
                case ExprOp::Mul:
                    return "(" + print(n->a) + "*" + print(n->b) + ")";
                case ExprOp::Div:
                    return "(" + print(n->a) + "/" + print(n->b) + ")";
                case ExprOp::Neg:
                    return "(-" + print(n->a) + ")";
                case ExprOp::PowInt:
                    return print(n->a) + "^" + std::to_string(n->ipow);
                case ExprOp::Abs:
                    return "abs(" + print(n->a) + ")";
                case ExprOp::Sign:
                    return "sign(" + print(n->a) + ")";
                case ExprOp::Sin:
                    return "sin(" + print(n->a) + ")";
                case ExprOp::Cos:
                    return "cos(" + print(n->a) + ")";
                case ExprOp::Exp:
                    return "exp(" + print(n->a) + ")";
                case ExprOp::Min:
                    return "min(" + print(n->a) + ", " + print(n->b) + ")";
                case ExprOp::Max:
                    return "max(" + print(n->a) + ", " + print(n->b) + ")";
            }
            return "?";
        }
    };
    return root_ ? Printer::print(root_) : "<empty>";
}

}  // namespace svlie
