#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "syv/series.hpp"

#include <cmath>
#include <random>

using syv::LogSeries;
using syv::MatrixSeries;

TEST_CASE("truncated products")
{
    LogSeries a = LogSeries::constant(1.0, 3);
    a.a(1) = 1.0; // 1 + r
    LogSeries b = LogSeries::constant(1.0, 3);
    b.a(1) = -1.0; // 1 - r
    const LogSeries p = a * b;
    CHECK(p.a(0) == doctest::Approx(1.0));
    CHECK(p.a(1) == doctest::Approx(0.0));
    CHECK(p.a(2) == doctest::Approx(-1.0));
    CHECK(p.a(3) == doctest::Approx(0.0));
}

TEST_CASE("binomial series (1 + a1 r)^-3")
{
    const double a1 = 0.7;
    LogSeries s(2);
    s.a(1) = a1;
    const LogSeries p = s.one_plus_pow(-3.0);
    CHECK(p.a(0) == doctest::Approx(1.0));
    CHECK(p.a(1) == doctest::Approx(-3.0 * a1));
    CHECK(p.a(2) == doctest::Approx(6.0 * a1 * a1));
}

TEST_CASE("log slot bookkeeping")
{
    // (r^2 log r)(1 + r) at K = 4
    LogSeries a(4);
    a.b(2) = 1.0;
    LogSeries b = LogSeries::constant(1.0, 4);
    b.a(1) = 1.0;
    const LogSeries p = a * b;
    CHECK(p.b(2) == doctest::Approx(1.0));
    CHECK(p.b(3) == doctest::Approx(1.0));
    CHECK(p.a(2) == doctest::Approx(0.0));
    CHECK(p.b(4) == doctest::Approx(0.0));
}

TEST_CASE("(log r)^2 inside the truncation throws")
{
    LogSeries a(2);
    a.b(1) = 1.0; // r log r
    CHECK_THROWS_AS((void)(a * a), std::logic_error);

    // negligible log coefficients are dropped instead
    LogSeries tiny(2);
    tiny.b(1) = 1e-16;
    CHECK_NOTHROW((void)(tiny * tiny));
}

TEST_CASE("series derivative")
{
    // d/dr [ (a2 + b2 log r) r^2 ] = (2 a2 + b2) r + 2 b2 r log r
    LogSeries s(3);
    s.a(2) = 5.0;
    s.b(2) = 3.0;
    const LogSeries d = s.derivative();
    CHECK(d.a(1) == doctest::Approx(13.0));
    CHECK(d.b(1) == doctest::Approx(6.0));
}

TEST_CASE("matrix series inverse")
{
    // (1-r)^2 I has inverse I (1 + 2r + 3r^2 + ...)
    MatrixSeries M(2, 2);
    M[0] = Eigen::MatrixXd::Identity(2, 2);
    M[1] = -2.0 * Eigen::MatrixXd::Identity(2, 2);
    M[2] = Eigen::MatrixXd::Identity(2, 2);
    const MatrixSeries inv = M.inverse();
    CHECK(inv[0](0, 0) == doctest::Approx(1.0));
    CHECK(inv[1](1, 1) == doctest::Approx(2.0));
    CHECK(inv[2](0, 0) == doctest::Approx(3.0));
    CHECK(inv[1](0, 1) == doctest::Approx(0.0));

    // identity stays identity
    MatrixSeries I(3, 2);
    I[0] = Eigen::MatrixXd::Identity(3, 3);
    const MatrixSeries Iinv = I.inverse();
    CHECK((Iinv[0] - Eigen::MatrixXd::Identity(3, 3)).norm() == doctest::Approx(0.0));
    CHECK(Iinv[1].norm() == doctest::Approx(0.0));

    // product check on random symmetric jets at K = 4
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        MatrixSeries A(2, 4);
        for (int k = 0; k <= 4; ++k) {
            Eigen::MatrixXd m(2, 2);
            m << unif(rng), unif(rng), 0.0, unif(rng);
            m(1, 0) = m(0, 1);
            A[k] = m;
        }
        A[0] += 3.0 * Eigen::MatrixXd::Identity(2, 2);
        const MatrixSeries Ainv = A.inverse();
        const MatrixSeries prod = A * Ainv;
        CHECK((prod[0] - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-13);
        for (int k = 1; k <= 4; ++k)
            CHECK(prod[k].norm() < 1e-12);
    }
}

namespace {

syv::MatrixSeries random_spd_jets(std::mt19937& rng, int dim, int K)
{
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    MatrixSeries A(dim, K);
    for (int k = 0; k <= K; ++k) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j)
                m(i, j) = m(j, i) = unif(rng);
        A[k] = m;
    }
    A[0] += (dim + 2.0) * Eigen::MatrixXd::Identity(dim, dim);
    return A;
}

} // namespace

TEST_CASE("sqrt_det_ratio scalar case and stated quadratic coefficients")
{
    // h_r = (1-r)^2 h0: ratio is exactly (1-r)^2
    MatrixSeries M(2, 3);
    Eigen::MatrixXd h0(2, 2);
    h0 << 2.0, 0.3, 0.3, 1.5;
    M[0] = h0;
    M[1] = -2.0 * h0;
    M[2] = h0;
    const LogSeries s = sqrt_det_ratio(M);
    CHECK(s.a(0) == doctest::Approx(1.0));
    CHECK(s.a(1) == doctest::Approx(-2.0));
    CHECK(s.a(2) == doctest::Approx(1.0));
    CHECK(std::abs(s.a(3)) < 1e-13);

    // constant family
    MatrixSeries C(2, 3);
    C[0] = h0;
    const LogSeries cs = sqrt_det_ratio(C);
    CHECK(cs.a(0) == doctest::Approx(1.0));
    for (int k = 1; k <= 3; ++k)
        CHECK(std::abs(cs.a(k)) < 1e-15);

    // order-1 and order-2 coefficients match
    //   (1/2) tr_h h'   and   (1/4)[tr_h h'' - |h'|^2_h + (1/2)(tr_h h')^2]
    // on random jets (derivative jets h' = M[1], h'' = 2 M[2]).
    std::mt19937 rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
        const MatrixSeries A = random_spd_jets(rng, 2, 2);
        const LogSeries r = sqrt_det_ratio(A);
        const Eigen::MatrixXd hinv = A[0].inverse();
        const Eigen::MatrixXd hp = A[1];
        const Eigen::MatrixXd hpp = 2.0 * A[2];
        const double tr_hp = (hinv * hp).trace();
        const double tr_hpp = (hinv * hpp).trace();
        const double hp2 = (hinv * hp * hinv * hp).trace();
        CHECK(r.a(1) == doctest::Approx(0.5 * tr_hp).epsilon(1e-12));
        CHECK(r.a(2) ==
              doctest::Approx(0.25 * (tr_hpp - hp2 + 0.5 * tr_hp * tr_hp)).epsilon(1e-12));
    }
}

TEST_CASE("series identities hold under evaluation with O(r^{K+1}) error")
{
    // sqrt_det_ratio against direct determinant evaluation of a polynomial
    // family: error decays at least like r^{K+1} on a log-log slope fit.
    std::mt19937 rng(31);
    const int K = 4;
    const MatrixSeries A = random_spd_jets(rng, 2, K);
    const LogSeries s = sqrt_det_ratio(A);

    const double det0 = A[0].determinant();
    std::vector<double> rs = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (double r : rs) {
        const double exact = std::sqrt(A.eval(r).determinant() / det0);
        const double err = std::abs(s.eval(r) - exact);
        if (err < 1e-16) continue;
        const double x = std::log(r), y = std::log(err);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    REQUIRE(m >= 3);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope > K + 0.5);
}

TEST_CASE("pow with nonzero constant factors it out")
{
    LogSeries s = LogSeries::constant(4.0, 2);
    s.a(1) = 1.0;
    const LogSeries p = s.pow(-0.5); // (4 + r)^{-1/2}
    for (double r : {0.01, 0.1}) {
        CHECK(p.eval(r) == doctest::Approx(1.0 / std::sqrt(4.0 + r)).epsilon(1e-4));
    }
}
