#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <vector>

namespace syv {

// Truncated series sum_k (a_k + b_k log r) r^k, k = 0..K.
//
// A single log slot per order is enough for the whole solver path: the only
// log term the expansion ever acquires sits at order n, and products of two
// log-carrying terms land beyond the truncation order. Rather than silently
// dropping a (log r)^2 term that would land inside the truncation, mul()
// checks the offending coefficient product and throws.
class LogSeries {
public:
    static constexpr int kMaxOrder = 12;

    LogSeries() : K_(0) {}
    explicit LogSeries(int K);
    static LogSeries constant(double c, int K);
    static LogSeries monomial(double c, int k, int K); // c r^k

    int order() const { return K_; }
    double a(int k) const { return a_[k]; }
    double b(int k) const { return b_[k]; }
    double& a(int k) { return a_[k]; }
    double& b(int k) { return b_[k]; }

    LogSeries& operator+=(const LogSeries& o);
    LogSeries& operator-=(const LogSeries& o);
    friend LogSeries operator+(LogSeries x, const LogSeries& y) { return x += y; }
    friend LogSeries operator-(LogSeries x, const LogSeries& y) { return x -= y; }
    friend LogSeries operator*(const LogSeries& x, const LogSeries& y) { return mul(x, y); }

    LogSeries scaled(double c) const;
    LogSeries shifted(int m) const;      // multiply by r^m (coefficients past K drop)
    LogSeries derivative() const;        // d/dr, applied termwise to (a_k + b_k log r) r^k
    LogSeries r_derivative() const;      // r d/dr (degree-preserving, no singular terms)
    LogSeries r2_second_derivative() const; // r^2 d^2/dr^2

    // Product. `effective_max` < K restricts which coefficient products are
    // formed at all: a factor of r^m applied after the product makes orders
    // above K - m irrelevant, and products that would land there (including
    // any log x log pairing) must not be formed.
    static LogSeries mul(const LogSeries& x, const LogSeries& y, int effective_max = -1);

    // exp of a series with zero constant term.
    LogSeries exp_zero_const() const;

    // (1 + s)^p for s = *this with s(0) = 0, any real p, via exp(p log1p(s)).
    LogSeries one_plus_pow(double p) const;

    // Power of a series with arbitrary nonzero constant term: the constant is
    // factored out and the rest goes through one_plus_pow.
    LogSeries pow(double p) const;

    double eval(double r) const;         // plugs in a numeric r > 0

private:
    int K_;
    std::array<double, kMaxOrder + 1> a_{};
    std::array<double, kMaxOrder + 1> b_{};
};

// Series of symmetric matrices sum_k M_k r^k (no log slot; collar jets are
// smooth). Sizes are small (n <= 10), so plain MatrixXd per order.
class MatrixSeries {
public:
    MatrixSeries() : K_(0) {}
    MatrixSeries(int dim, int K);

    int order() const { return K_; }
    int dim() const { return coef_.empty() ? 0 : static_cast<int>(coef_[0].rows()); }
    Eigen::MatrixXd& operator[](int k) { return coef_[k]; }
    const Eigen::MatrixXd& operator[](int k) const { return coef_[k]; }

    MatrixSeries& operator+=(const MatrixSeries& o);
    friend MatrixSeries operator+(MatrixSeries x, const MatrixSeries& y) { return x += y; }
    friend MatrixSeries operator*(const MatrixSeries& x, const MatrixSeries& y);

    MatrixSeries derivative() const;

    // Neumann-series inverse; requires invertible order-0 coefficient.
    MatrixSeries inverse() const;

    LogSeries trace() const;

    double eval_entry(int i, int j, double r) const;
    Eigen::MatrixXd eval(double r) const;

private:
    int K_;
    std::vector<Eigen::MatrixXd> coef_;
};

// Series of sqrt(det M(r) / det M(0)) via exp(0.5 tr log(M0^{-1} M(r))).
LogSeries sqrt_det_ratio(const MatrixSeries& M);

} // namespace syv
