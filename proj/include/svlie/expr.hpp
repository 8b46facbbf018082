// Scalar expression DSL over variables x1..xn: arithmetic, integer powers,
// abs/sign/sin/cos/exp/min/max. Expressions are parsed to an immutable AST
// and compiled to a flat tape for fast evaluation.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace svlie {

enum class ExprOp {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowInt,
    Abs,
    Sign,
    Sin,
    Cos,
    Exp,
    Min,
    Max,
};

class Expr {
public:
    Expr() = default;

    // `dim` bounds the variable indices (x1..xdim). Throws SyntaxError /
    // UnknownVariable.
    static Expr parse(const std::string& text, int dim);

    static Expr constant(double v);
    static Expr variable(int index, int dim);

    double eval(std::span<const double> x) const;

    // Symbolic partial derivative with respect to x_index (1-based).
    // abs'(u) = sign(u) u', sign' = 0; min/max are rejected (throws
    // DomainError) since no single-valued derivative exists.
    Expr derivative(int index) const;

    std::string str() const;
    bool valid() const { return root_ != nullptr; }
    int dim() const { return dim_; }

    // AST node; exposed for the symbolic-derivative machinery.
    struct Node {
        ExprOp op;
        double value = 0.0;  // Const
        int var = 0;         // Var (1-based)
        int ipow = 0;        // PowInt exponent
        std::shared_ptr<const Node> a, b;
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expr(NodePtr root, int dim);

private:
    struct Instr {
        ExprOp op;
        double value;
        int var;
        int ipow;
    };

    void compile();

    NodePtr root_;
    int dim_ = 0;
    std::vector<Instr> tape_;
    int stack_need_ = 0;

    friend class ExprParser;
};

}  // namespace svlie
