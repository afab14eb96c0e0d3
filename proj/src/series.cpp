#include "syv/series.hpp"

#include <cmath>

namespace syv {

LogSeries::LogSeries(int K) : K_(K)
{
    if (K < 0 || K > kMaxOrder)
        throw std::invalid_argument("LogSeries order out of range");
}

LogSeries LogSeries::constant(double c, int K)
{
    LogSeries s(K);
    s.a_[0] = c;
    return s;
}

LogSeries LogSeries::monomial(double c, int k, int K)
{
    LogSeries s(K);
    if (k <= K) s.a_[k] = c;
    return s;
}

LogSeries& LogSeries::operator+=(const LogSeries& o)
{
    if (o.K_ != K_) throw std::invalid_argument("LogSeries order mismatch");
    for (int k = 0; k <= K_; ++k) { a_[k] += o.a_[k]; b_[k] += o.b_[k]; }
    return *this;
}

LogSeries& LogSeries::operator-=(const LogSeries& o)
{
    if (o.K_ != K_) throw std::invalid_argument("LogSeries order mismatch");
    for (int k = 0; k <= K_; ++k) { a_[k] -= o.a_[k]; b_[k] -= o.b_[k]; }
    return *this;
}

LogSeries LogSeries::scaled(double c) const
{
    LogSeries r = *this;
    for (int k = 0; k <= K_; ++k) { r.a_[k] *= c; r.b_[k] *= c; }
    return r;
}

LogSeries LogSeries::shifted(int m) const
{
    LogSeries r(K_);
    for (int k = 0; k + m <= K_; ++k) { r.a_[k + m] = a_[k]; r.b_[k + m] = b_[k]; }
    return r;
}

LogSeries LogSeries::derivative() const
{
    // d/dr (a_k + b_k log r) r^k = (k a_k + b_k) r^{k-1} + k b_k r^{k-1} log r.
    // A b_0 log r term would differentiate to b_0/r, outside the ring; the
    // solver never produces one (b_0 = 0 throughout).
    if (b_[0] != 0.0)
        throw std::logic_error("LogSeries::derivative: b_0 log r term present");
    LogSeries r(K_);
    for (int k = 1; k <= K_; ++k) {
        r.a_[k - 1] = k * a_[k] + b_[k];
        r.b_[k - 1] = k * b_[k];
    }
    return r;
}

LogSeries LogSeries::mul(const LogSeries& x, const LogSeries& y, int effective_max)
{
    if (x.K_ != y.K_) throw std::invalid_argument("LogSeries order mismatch");
    const int K = x.K_;
    const int top = effective_max < 0 ? K : effective_max;
    LogSeries r(K);
    for (int i = 0; i <= top; ++i)
        for (int j = 0; i + j <= top; ++j) {
            r.a_[i + j] += x.a_[i] * y.a_[j];
            r.b_[i + j] += x.a_[i] * y.b_[j] + x.b_[i] * y.a_[j];
            const double log2coef = x.b_[i] * y.b_[j];
            if (log2coef != 0.0) {
                // (log r)^2 inside the truncation window: only tolerable when
                // the coefficient is roundoff-level (e.g. the numerically-zero
                // obstruction in n = 1 runs).
                const double scale = std::abs(x.b_[i]) + std::abs(y.b_[j]);
                if (std::abs(log2coef) > 1e-12 * std::max(1.0, scale))
                    throw std::logic_error("LogSeries::mul: (log r)^2 term within truncation");
            }
        }
    return r;
}

LogSeries LogSeries::exp_zero_const() const
{
    if (a_[0] != 0.0 || b_[0] != 0.0)
        throw std::invalid_argument("exp_zero_const needs w(0) = 0");
    const int K = K_;
    LogSeries result = LogSeries::constant(1.0, K);
    LogSeries wk = *this;
    double fact = 1.0;
    for (int m = 1; m <= K; ++m) {
        fact *= m;
        result += wk.scaled(1.0 / fact);
        if (m < K) wk = mul(wk, *this);
    }
    return result;
}

LogSeries LogSeries::one_plus_pow(double p) const
{
    if (a_[0] != 0.0 || b_[0] != 0.0)
        throw std::invalid_argument("one_plus_pow needs s(0) = 0");
    const int K = K_;
    // log(1+s) = sum_{m>=1} (-1)^{m+1} s^m / m, truncated (s is nilpotent).
    LogSeries log1p(K);
    LogSeries power = *this;
    double sign = 1.0;
    for (int m = 1; m <= K; ++m) {
        log1p += power.scaled(sign / m);
        if (m < K) power = mul(power, *this);
        sign = -sign;
    }
    return log1p.scaled(p).exp_zero_const();
}

LogSeries LogSeries::pow(double p) const
{
    const double c = a_[0];
    if (c <= 0.0 || b_[0] != 0.0)
        throw std::invalid_argument("LogSeries::pow needs positive smooth constant term");
    LogSeries s = *this;
    s.a_[0] = 0.0;
    s = s.scaled(1.0 / c);
    return s.one_plus_pow(p).scaled(std::pow(c, p));
}

double LogSeries::eval(double r) const
{
    const double lg = std::log(r);
    double acc = 0.0;
    for (int k = K_; k >= 0; --k)
        acc = acc * r + (a_[k] + b_[k] * lg);
    return acc;
}

LogSeries LogSeries::r_derivative() const
{
    // r d/dr (a_k + b_k log r) r^k = (k a_k + b_k) r^k + k b_k r^k log r
    LogSeries r(K_);
    for (int k = 0; k <= K_; ++k) {
        r.a_[k] = k * a_[k] + b_[k];
        r.b_[k] = k * b_[k];
    }
    return r;
}

LogSeries LogSeries::r2_second_derivative() const
{
    // r^2 d^2/dr^2 (a_k + b_k log r) r^k
    //   = [k(k-1) a_k + (2k-1) b_k] r^k + k(k-1) b_k r^k log r
    LogSeries r(K_);
    for (int k = 0; k <= K_; ++k) {
        r.a_[k] = k * (k - 1.0) * a_[k] + (2.0 * k - 1.0) * b_[k];
        r.b_[k] = k * (k - 1.0) * b_[k];
    }
    return r;
}

MatrixSeries::MatrixSeries(int dim, int K) : K_(K)
{
    coef_.assign(K + 1, Eigen::MatrixXd::Zero(dim, dim));
}

MatrixSeries& MatrixSeries::operator+=(const MatrixSeries& o)
{
    if (o.K_ != K_) throw std::invalid_argument("MatrixSeries order mismatch");
    for (int k = 0; k <= K_; ++k) coef_[k] += o.coef_[k];
    return *this;
}

MatrixSeries operator*(const MatrixSeries& x, const MatrixSeries& y)
{
    if (x.K_ != y.K_) throw std::invalid_argument("MatrixSeries order mismatch");
    MatrixSeries r(x.dim(), x.K_);
    for (int i = 0; i <= x.K_; ++i)
        for (int j = 0; i + j <= x.K_; ++j)
            r.coef_[i + j] += x.coef_[i] * y.coef_[j];
    return r;
}

MatrixSeries MatrixSeries::derivative() const
{
    MatrixSeries r(dim(), K_);
    for (int k = 1; k <= K_; ++k) r.coef_[k - 1] = k * coef_[k];
    return r;
}

MatrixSeries MatrixSeries::inverse() const
{
    const Eigen::MatrixXd M0 = coef_[0];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M0);
    if (!lu.isInvertible())
        throw std::runtime_error("MatrixSeries::inverse: singular order-0 matrix");
    const Eigen::MatrixXd inv0 = lu.inverse();

    // M = M0 (I + N), N = M0^{-1}(M - M0); inverse = (sum (-N)^m) M0^{-1}.
    MatrixSeries N(dim(), K_);
    for (int k = 1; k <= K_; ++k) N.coef_[k] = inv0 * coef_[k];

    MatrixSeries acc(dim(), K_);
    acc.coef_[0] = Eigen::MatrixXd::Identity(dim(), dim());
    MatrixSeries Npow = N;
    double sign = -1.0;
    for (int m = 1; m <= K_; ++m) {
        for (int k = 0; k <= K_; ++k) acc.coef_[k] += sign * Npow.coef_[k];
        if (m < K_) Npow = Npow * N;
        sign = -sign;
    }
    MatrixSeries r(dim(), K_);
    for (int k = 0; k <= K_; ++k) r.coef_[k] = acc.coef_[k] * inv0;
    return r;
}

LogSeries MatrixSeries::trace() const
{
    LogSeries t(K_);
    for (int k = 0; k <= K_; ++k) t.a(k) = coef_[k].trace();
    return t;
}

double MatrixSeries::eval_entry(int i, int j, double r) const
{
    double acc = 0.0;
    for (int k = K_; k >= 0; --k) acc = acc * r + coef_[k](i, j);
    return acc;
}

Eigen::MatrixXd MatrixSeries::eval(double r) const
{
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim(), dim());
    for (int k = K_; k >= 0; --k) acc = acc * r + coef_[k];
    return acc;
}

LogSeries sqrt_det_ratio(const MatrixSeries& M)
{
    const int K = M.order();
    const Eigen::MatrixXd M0 = M[0];
    Eigen::LLT<Eigen::MatrixXd> llt(M0);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("sqrt_det_ratio: order-0 matrix not positive definite");

    // W(r) = M0^{-1} M(r) = I + N, sqrt(det W) = exp(0.5 tr log(I + N)).
    const Eigen::MatrixXd inv0 = M0.inverse();
    MatrixSeries N(M.dim(), K);
    for (int k = 1; k <= K; ++k) N[k] = inv0 * M[k];

    LogSeries trlog(K);
    MatrixSeries Npow = N;
    double sign = 1.0;
    for (int m = 1; m <= K; ++m) {
        for (int k = 0; k <= K; ++k) trlog.a(k) += sign / m * Npow[k].trace();
        if (m < K) Npow = Npow * N;
        sign = -sign;
    }
    return trlog.scaled(0.5).exp_zero_const();
}

} // namespace syv
