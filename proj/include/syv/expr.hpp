#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace syv {

class ExprError : public std::runtime_error {
public:
    ExprError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Value with first and second partials in up to kMaxVars declared variables.
// Second partials are stored once, upper triangle in row-major order.
struct JetValue {
    static constexpr int kMaxVars = 6;

    int nvars = 0;
    double v = 0.0;
    std::array<double, kMaxVars> d{};
    std::array<double, kMaxVars*(kMaxVars + 1) / 2> dd{};

    static constexpr int tri(int i, int j)
    {
        if (i > j) { const int t = i; i = j; j = t; }
        return i * kMaxVars - i * (i - 1) / 2 + (j - i);
    }
    double d2(int i, int j) const { return dd[tri(i, j)]; }

    static JetValue constant(double c, int nvars);
    static JetValue variable(int index, double value, int nvars);
};

// Immutable expression tree over declared variables, the usual binary
// operators (^ is right-associative), a fixed set of unary functions,
// and the named constants pi, e.
class ExprAst {
public:
    static ExprAst parse(const std::string& text, const std::vector<std::string>& variables);

    // Evaluates value plus first/second partials by forward second-order
    // jet propagation. `point` must assign every declared variable.
    JetValue eval_jet(const std::vector<double>& point) const;

    // Value only (same domain handling as eval_jet).
    double eval(const std::vector<double>& point) const;

    const std::vector<std::string>& variables() const { return vars_; }
    const std::string& text() const { return text_; }
    int var_index(const std::string& name) const;

    // whether the parsed tree actually references the declared variable
    bool uses_variable(const std::string& name) const;

private:
    enum class Node : unsigned char {
        Const, Var, Add, Sub, Mul, Div, Pow, Neg,
        Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs
    };
    struct NodeRec {
        Node op;
        int a = -1, b = -1;       // children
        double value = 0.0;       // Const payload
        int var = -1;             // Var payload
        std::size_t offset = 0;   // byte offset in source, for diagnostics
    };

    friend class Parser;

    JetValue eval_node(int idx, const std::vector<double>& point) const;

    std::vector<NodeRec> nodes_;
    int root_ = -1;
    std::vector<std::string> vars_;
    std::string text_;
};

} // namespace syv
