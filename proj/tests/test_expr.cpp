#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "syv/expr.hpp"

#include <cmath>
#include <map>
#include <random>

using syv::ExprAst;
using syv::ExprError;
using syv::JetValue;

TEST_CASE("parse basics")
{
    const ExprAst e = ExprAst::parse("sin(u)*cos(v)", {"u", "v"});
    CHECK(e.eval({0.5, 0.25}) == doctest::Approx(std::sin(0.5) * std::cos(0.25)).epsilon(1e-15));

    // ^ is right-associative: 2^3^2 = 2^9
    const ExprAst p = ExprAst::parse("2^3^2", {});
    CHECK(p.eval({}) == doctest::Approx(512.0));

    CHECK_THROWS_AS(ExprAst::parse("u + w", {"u", "v"}), ExprError);
    CHECK_THROWS_AS(ExprAst::parse("", {"u"}), ExprError);
    CHECK_THROWS_AS(ExprAst::parse("sin(u, v)", {"u", "v"}), ExprError);
    CHECK_THROWS_AS(ExprAst::parse("sin(u", {"u"}), ExprError);
    CHECK_THROWS_AS(ExprAst::parse("frob(u)", {"u"}), ExprError);

    try {
        ExprAst::parse("u + w", {"u", "v"});
    } catch (const ExprError& err) {
        CHECK(err.offset() == 4);
    }

    const ExprAst c = ExprAst::parse("pi + e", {});
    CHECK(c.eval({}) == doctest::Approx(M_PI + M_E));

    const ExprAst m = ExprAst::parse("-u^2", {"u"});
    CHECK(m.eval({3.0}) == doctest::Approx(-9.0));
}

TEST_CASE("eval_jet pinned examples")
{
    {
        const ExprAst e = ExprAst::parse("u*v", {"u", "v"});
        const JetValue j = e.eval_jet({2.0, 3.0});
        CHECK(j.v == doctest::Approx(6.0));
        CHECK(j.d[0] == doctest::Approx(3.0));
        CHECK(j.d[1] == doctest::Approx(2.0));
        CHECK(j.d2(0, 1) == doctest::Approx(1.0));
        CHECK(j.d2(0, 0) == doctest::Approx(0.0));
    }
    {
        const ExprAst e = ExprAst::parse("sin(u)", {"u"});
        const JetValue j = e.eval_jet({0.0});
        CHECK(j.v == doctest::Approx(0.0));
        CHECK(j.d[0] == doctest::Approx(1.0));
        CHECK(j.d2(0, 0) == doctest::Approx(0.0));
    }
    {
        const ExprAst e = ExprAst::parse("exp(2*u+v)", {"u", "v"});
        const JetValue j = e.eval_jet({0.0, 0.0});
        CHECK(j.v == doctest::Approx(1.0));
        CHECK(j.d[0] == doctest::Approx(2.0));
        CHECK(j.d[1] == doctest::Approx(1.0));
        CHECK(j.d2(0, 0) == doctest::Approx(4.0));
        CHECK(j.d2(0, 1) == doctest::Approx(2.0));
    }
}

TEST_CASE("domain errors surface as evaluation errors")
{
    const ExprAst e = ExprAst::parse("log(u)", {"u"});
    CHECK_THROWS_AS(e.eval({-1.0}), ExprError);
    const ExprAst s = ExprAst::parse("sqrt(u)", {"u"});
    CHECK_THROWS_AS(s.eval({-1.0}), ExprError);
    const ExprAst d = ExprAst::parse("1/u", {"u"});
    CHECK_THROWS_AS(d.eval({0.0}), ExprError);
    const ExprAst p = ExprAst::parse("u^0.5", {"u"});
    CHECK_THROWS_AS(p.eval({-2.0}), ExprError);
}

namespace {

// Independent dense polynomial in two variables with exact differentiation,
// used as the oracle for jet propagation on polynomial ASTs.
struct Poly2 {
    // coefficients[i][j] of u^i v^j
    std::map<std::pair<int, int>, double> c;

    static Poly2 constant(double x)
    {
        Poly2 p;
        p.c[{0, 0}] = x;
        return p;
    }
    static Poly2 var(int which)
    {
        Poly2 p;
        p.c[which == 0 ? std::make_pair(1, 0) : std::make_pair(0, 1)] = 1.0;
        return p;
    }
    Poly2 operator+(const Poly2& o) const
    {
        Poly2 r = *this;
        for (auto& [k, v] : o.c) r.c[k] += v;
        return r;
    }
    Poly2 operator*(const Poly2& o) const
    {
        Poly2 r;
        for (auto& [ka, va] : c)
            for (auto& [kb, vb] : o.c)
                r.c[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
        return r;
    }
    Poly2 diff(int which) const
    {
        Poly2 r;
        for (auto& [k, v] : c) {
            const int e = which == 0 ? k.first : k.second;
            if (e == 0) continue;
            auto kk = k;
            (which == 0 ? kk.first : kk.second) -= 1;
            r.c[kk] += v * e;
        }
        return r;
    }
    double eval(double u, double v) const
    {
        double acc = 0.0;
        for (auto& [k, val] : c)
            acc += val * std::pow(u, k.first) * std::pow(v, k.second);
        return acc;
    }
};

struct RandomPoly {
    std::string text;
    Poly2 poly;
};

RandomPoly random_poly(std::mt19937& rng, int depth)
{
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 3);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    switch (kind(rng)) {
    case 0: {
        const double x = std::round(coef(rng) * 8.0) / 8.0;
        return {"(" + std::to_string(x) + ")", Poly2::constant(x)};
    }
    case 1: {
        const int w = rng() % 2;
        return {w == 0 ? "u" : "v", Poly2::var(w)};
    }
    case 2: {
        auto a = random_poly(rng, depth - 1);
        auto b = random_poly(rng, depth - 1);
        return {"(" + a.text + " + " + b.text + ")", a.poly + b.poly};
    }
    default: {
        auto a = random_poly(rng, depth - 1);
        auto b = random_poly(rng, depth - 1);
        return {"(" + a.text + " * " + b.text + ")", a.poly * b.poly};
    }
    }
}

} // namespace

TEST_CASE("jets of random polynomials match symbolic differentiation")
{
    std::mt19937 rng(20240901);
    std::uniform_real_distribution<double> pts(-1.5, 1.5);
    for (int trial = 0; trial < 60; ++trial) {
        const RandomPoly rp = random_poly(rng, 3);
        const ExprAst e = ExprAst::parse(rp.text, {"u", "v"});
        const double u = pts(rng), v = pts(rng);
        const JetValue j = e.eval_jet({u, v});

        const Poly2 pu = rp.poly.diff(0), pv = rp.poly.diff(1);
        const double scale = 1.0 + std::abs(j.v);
        CHECK(j.v == doctest::Approx(rp.poly.eval(u, v)).epsilon(1e-12));
        CHECK(std::abs(j.d[0] - pu.eval(u, v)) < 1e-11 * scale);
        CHECK(std::abs(j.d[1] - pv.eval(u, v)) < 1e-11 * scale);
        CHECK(std::abs(j.d2(0, 0) - pu.diff(0).eval(u, v)) < 1e-10 * scale);
        CHECK(std::abs(j.d2(0, 1) - pu.diff(1).eval(u, v)) < 1e-10 * scale);
        CHECK(std::abs(j.d2(1, 1) - pv.diff(1).eval(u, v)) < 1e-10 * scale);
    }
}

TEST_CASE("jets of smooth expressions match central differences at 4th order")
{
    const char* exprs[] = {
        "sin(u)*cos(v) + exp(0.3*u*v)",
        "tanh(u + 0.5*v) * cosh(0.2*u)",
        "exp(sin(u) + cos(v))",
        "sinh(0.3*u)*v + cos(u*v)",
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pts(-0.8, 0.8);
    for (const char* text : exprs) {
        const ExprAst e = ExprAst::parse(text, {"u", "v"});
        const double u = pts(rng), v = pts(rng);
        const JetValue j = e.eval_jet({u, v});

        for (int var = 0; var < 2; ++var) {
            auto fd = [&](double h) {
                std::vector<double> a = {u, v}, b = {u, v};
                a[var] += h;
                b[var] -= h;
                return (e.eval(a) - e.eval(b)) / (2.0 * h);
            };
            const double e1 = std::abs(fd(1e-3) - j.d[var]);
            const double e2 = std::abs(fd(5e-4) - j.d[var]);
            // halving h cuts the O(h^2) error by >= 3.5x (4x up to roundoff)
            if (e1 > 1e-12)
                CHECK(e1 / e2 > 3.5);
            CHECK(e2 < 1e-6);
        }
    }
}
