#include "syv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace syv {

JetValue JetValue::constant(double c, int nvars)
{
    JetValue j;
    j.nvars = nvars;
    j.v = c;
    return j;
}

JetValue JetValue::variable(int index, double value, int nvars)
{
    JetValue j;
    j.nvars = nvars;
    j.v = value;
    j.d[index] = 1.0;
    return j;
}

namespace {

JetValue jadd(const JetValue& a, const JetValue& b)
{
    JetValue r = a;
    r.v += b.v;
    for (int i = 0; i < a.nvars; ++i) r.d[i] += b.d[i];
    for (std::size_t k = 0; k < a.dd.size(); ++k) r.dd[k] += b.dd[k];
    return r;
}

JetValue jsub(const JetValue& a, const JetValue& b)
{
    JetValue r = a;
    r.v -= b.v;
    for (int i = 0; i < a.nvars; ++i) r.d[i] -= b.d[i];
    for (std::size_t k = 0; k < a.dd.size(); ++k) r.dd[k] -= b.dd[k];
    return r;
}

JetValue jneg(const JetValue& a)
{
    JetValue r = a;
    r.v = -r.v;
    for (int i = 0; i < a.nvars; ++i) r.d[i] = -r.d[i];
    for (std::size_t k = 0; k < a.dd.size(); ++k) r.dd[k] = -r.dd[k];
    return r;
}

JetValue jmul(const JetValue& a, const JetValue& b)
{
    JetValue r;
    r.nvars = a.nvars;
    r.v = a.v * b.v;
    for (int i = 0; i < a.nvars; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (int i = 0; i < a.nvars; ++i)
        for (int j = i; j < a.nvars; ++j) {
            const int k = JetValue::tri(i, j);
            r.dd[k] = a.dd[k] * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i] + a.v * b.dd[k];
        }
    return r;
}

// Composition with a scalar function: f(g), given f'(g.v) and f''(g.v).
JetValue jcompose(const JetValue& g, double f, double fp, double fpp)
{
    JetValue r;
    r.nvars = g.nvars;
    r.v = f;
    for (int i = 0; i < g.nvars; ++i) r.d[i] = fp * g.d[i];
    for (int i = 0; i < g.nvars; ++i)
        for (int j = i; j < g.nvars; ++j) {
            const int k = JetValue::tri(i, j);
            r.dd[k] = fp * g.dd[k] + fpp * g.d[i] * g.d[j];
        }
    return r;
}

bool is_integer(double x) { return std::floor(x) == x && std::abs(x) < 1e15; }

} // namespace

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars, ExprAst& out)
        : s_(text), out_(out)
    {
        out_.vars_ = vars;
        out_.text_ = text;
    }

    void run()
    {
        skip_ws();
        if (pos_ >= s_.size())
            throw ExprError("empty expression", 0);
        out_.root_ = parse_expr();
        skip_ws();
        if (pos_ < s_.size())
            throw ExprError("unexpected trailing input", pos_);
    }

private:
    using Node = ExprAst::Node;

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    int add_node(Node op, int a, int b, std::size_t off, double value = 0.0, int var = -1)
    {
        out_.nodes_.push_back({op, a, b, value, var, off});
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int parse_expr()
    {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            const std::size_t off = pos_;
            if (accept('+')) lhs = add_node(Node::Add, lhs, parse_term(), off);
            else if (accept('-')) lhs = add_node(Node::Sub, lhs, parse_term(), off);
            else return lhs;
        }
    }

    int parse_term()
    {
        int lhs = parse_unary();
        for (;;) {
            skip_ws();
            const std::size_t off = pos_;
            if (accept('*')) lhs = add_node(Node::Mul, lhs, parse_unary(), off);
            else if (accept('/')) lhs = add_node(Node::Div, lhs, parse_unary(), off);
            else return lhs;
        }
    }

    int parse_unary()
    {
        skip_ws();
        const std::size_t off = pos_;
        if (accept('-')) return add_node(Node::Neg, parse_unary(), -1, off);
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    int parse_power()
    {
        int base = parse_primary();
        skip_ws();
        const std::size_t off = pos_;
        if (accept('^'))
            return add_node(Node::Pow, base, parse_unary(), off); // right-associative
        return base;
    }

    int parse_primary()
    {
        skip_ws();
        if (pos_ >= s_.size())
            throw ExprError("unexpected end of expression", pos_);
        const std::size_t off = pos_;
        const char c = s_[pos_];

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin)
                throw ExprError("malformed number", pos_);
            pos_ += static_cast<std::size_t>(end - begin);
            return add_node(Node::Const, -1, -1, off, value);
        }

        if (c == '(') {
            ++pos_;
            const int inner = parse_expr();
            if (!accept(')'))
                throw ExprError("missing ')'", pos_);
            return inner;
        }

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
                ++end;
            const std::string name = s_.substr(pos_, end - pos_);
            pos_ = end;
            skip_ws();

            if (pos_ < s_.size() && s_[pos_] == '(') {
                const Node fn = function_for(name, off);
                ++pos_; // '('
                const int arg = parse_expr();
                skip_ws();
                if (accept(','))
                    throw ExprError(name + " takes exactly one argument", pos_ - 1);
                if (!accept(')'))
                    throw ExprError("missing ')'", pos_);
                return add_node(fn, arg, -1, off);
            }

            if (name == "pi") return add_node(Node::Const, -1, -1, off, M_PI);
            if (name == "e") return add_node(Node::Const, -1, -1, off, M_E);
            const int vi = out_.var_index(name);
            if (vi < 0)
                throw ExprError("unknown identifier '" + name + "'", off);
            return add_node(Node::Var, -1, -1, off, 0.0, vi);
        }

        throw ExprError(std::string("unexpected character '") + c + "'", pos_);
    }

    Node function_for(const std::string& name, std::size_t off)
    {
        if (name == "sin") return Node::Sin;
        if (name == "cos") return Node::Cos;
        if (name == "sinh") return Node::Sinh;
        if (name == "cosh") return Node::Cosh;
        if (name == "tanh") return Node::Tanh;
        if (name == "exp") return Node::Exp;
        if (name == "log") return Node::Log;
        if (name == "sqrt") return Node::Sqrt;
        if (name == "abs") return Node::Abs;
        throw ExprError("unknown function '" + name + "'", off);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    ExprAst& out_;
};

ExprAst ExprAst::parse(const std::string& text, const std::vector<std::string>& variables)
{
    if (static_cast<int>(variables.size()) > JetValue::kMaxVars)
        throw ExprError("too many variables", 0);
    ExprAst ast;
    Parser p(text, variables, ast);
    p.run();
    return ast;
}

int ExprAst::var_index(const std::string& name) const
{
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

bool ExprAst::uses_variable(const std::string& name) const
{
    const int vi = var_index(name);
    if (vi < 0) return false;
    for (const NodeRec& n : nodes_)
        if (n.op == Node::Var && n.var == vi) return true;
    return false;
}

JetValue ExprAst::eval_node(int idx, const std::vector<double>& point) const
{
    const NodeRec& n = nodes_[idx];
    const int nv = static_cast<int>(vars_.size());
    switch (n.op) {
    case Node::Const: return JetValue::constant(n.value, nv);
    case Node::Var:   return JetValue::variable(n.var, point[n.var], nv);
    case Node::Add:   return jadd(eval_node(n.a, point), eval_node(n.b, point));
    case Node::Sub:   return jsub(eval_node(n.a, point), eval_node(n.b, point));
    case Node::Neg:   return jneg(eval_node(n.a, point));
    case Node::Mul:   return jmul(eval_node(n.a, point), eval_node(n.b, point));
    case Node::Div: {
        const JetValue a = eval_node(n.a, point);
        const JetValue b = eval_node(n.b, point);
        if (b.v == 0.0)
            throw ExprError("division by zero", n.offset);
        const double inv = 1.0 / b.v;
        return jmul(a, jcompose(b, inv, -inv * inv, 2.0 * inv * inv * inv));
    }
    case Node::Pow: {
        const JetValue a = eval_node(n.a, point);
        const JetValue b = eval_node(n.b, point);
        const bool b_const = (nodes_[n.b].op == Node::Const) ||
                             ([&] { for (int i = 0; i < b.nvars; ++i) if (b.d[i] != 0) return false;
                                    for (double x : b.dd) if (x != 0) return false;
                                    return true; }());
        if (b_const && is_integer(b.v)) {
            long long k = static_cast<long long>(b.v);
            if (k == 0) return JetValue::constant(1.0, nv);
            if (a.v == 0.0 && k < 0)
                throw ExprError("zero raised to a negative power", n.offset);
            const double p = std::pow(a.v, static_cast<double>(k));
            const double pp1 = std::pow(a.v, static_cast<double>(k - 1));
            const double pp2 = (k == 1) ? 0.0 : std::pow(a.v, static_cast<double>(k - 2));
            return jcompose(a, p, k * pp1, static_cast<double>(k) * (k - 1) * pp2);
        }
        if (a.v <= 0.0)
            throw ExprError("power with non-positive base and non-integer exponent", n.offset);
        // a^b = exp(b log a)
        const double la = std::log(a.v);
        const JetValue logA = jcompose(a, la, 1.0 / a.v, -1.0 / (a.v * a.v));
        const JetValue expo = jmul(b, logA);
        const double ev = std::exp(expo.v);
        return jcompose(expo, ev, ev, ev);
    }
    case Node::Sin: {
        const JetValue a = eval_node(n.a, point);
        return jcompose(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
    }
    case Node::Cos: {
        const JetValue a = eval_node(n.a, point);
        return jcompose(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
    }
    case Node::Sinh: {
        const JetValue a = eval_node(n.a, point);
        return jcompose(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v));
    }
    case Node::Cosh: {
        const JetValue a = eval_node(n.a, point);
        return jcompose(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v));
    }
    case Node::Tanh: {
        const JetValue a = eval_node(n.a, point);
        const double t = std::tanh(a.v);
        const double sech2 = 1.0 - t * t;
        return jcompose(a, t, sech2, -2.0 * t * sech2);
    }
    case Node::Exp: {
        const JetValue a = eval_node(n.a, point);
        const double ev = std::exp(a.v);
        return jcompose(a, ev, ev, ev);
    }
    case Node::Log: {
        const JetValue a = eval_node(n.a, point);
        if (a.v <= 0.0)
            throw ExprError("log of non-positive value", n.offset);
        return jcompose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
    }
    case Node::Sqrt: {
        const JetValue a = eval_node(n.a, point);
        if (a.v < 0.0)
            throw ExprError("sqrt of negative value", n.offset);
        if (a.v == 0.0)
            throw ExprError("sqrt jet undefined at zero", n.offset);
        const double s = std::sqrt(a.v);
        return jcompose(a, s, 0.5 / s, -0.25 / (s * a.v));
    }
    case Node::Abs: {
        const JetValue a = eval_node(n.a, point);
        if (a.v == 0.0)
            throw ExprError("abs jet undefined at zero", n.offset);
        const double sgn = a.v > 0.0 ? 1.0 : -1.0;
        return jcompose(a, std::abs(a.v), sgn, 0.0);
    }
    }
    throw ExprError("corrupt expression tree", 0);
}

JetValue ExprAst::eval_jet(const std::vector<double>& point) const
{
    if (point.size() != vars_.size())
        throw ExprError("evaluation point does not assign every declared variable", 0);
    return eval_node(root_, point);
}

double ExprAst::eval(const std::vector<double>& point) const
{
    return eval_jet(point).v;
}

} // namespace syv
