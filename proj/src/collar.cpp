#include "syv/collar.hpp"

#include "syv/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace syv {

MatrixSeries CollarJets::taylor(std::size_t node, int order) const
{
    const int dim = h_jet(node, 0).rows();
    MatrixSeries M(dim, order);
    double fact = 1.0;
    for (int m = 0; m <= order; ++m) {
        if (m > 0) fact *= m;
        M[m] = m <= K ? Eigen::MatrixXd(h_jet(node, m) / fact)
                      : Eigen::MatrixXd(Eigen::MatrixXd::Zero(dim, dim));
    }
    return M;
}

LogSeries CollarJets::rbar_series(std::size_t node, int order) const
{
    LogSeries s(order);
    double fact = 1.0;
    for (int m = 0; m < n && m <= order; ++m) {
        if (m > 0) fact *= m;
        s.a(m) = rbar[node * n + m] / fact;
    }
    return s;
}

CollarJets euclidean_collar(const HypersurfaceData& data, int K)
{
    CollarJets cj;
    cj.n = data.n;
    cj.K = K;
    cj.N = data.N;
    cj.hj.assign(data.N * (K + 1), SMat::Zero(data.n, data.n));
    cj.rbar.assign(data.N * data.n, 0.0);
    cj.rbar_nn.assign(data.N, 0.0);

    // h_r = h - 2rL + r^2 L h^{-1} L exactly; jets of order >= 3 vanish.
    par::for_each(data.N, [&](std::size_t k) {
        cj.h_jet(k, 0) = data.h[k];
        if (K >= 1) cj.h_jet(k, 1) = -2.0 * data.L[k];
        if (K >= 2) cj.h_jet(k, 2) = 2.0 * data.L[k] * data.hinv[k] * data.L[k];
    });
    return cj;
}

CollarJets spaceform_collar(const HypersurfaceData& data, double c, int K)
{
    CollarJets cj;
    cj.n = data.n;
    cj.K = K;
    cj.N = data.N;
    cj.hj.assign(data.N * (K + 1), SMat::Zero(data.n, data.n));
    cj.rbar.assign(data.N * data.n, 0.0);
    cj.rbar_nn.assign(data.N, 0.0);

    // Taylor coefficients of C = cos(sqrt(c) r) and S = sin(sqrt(c) r)/sqrt(c)
    // (cosh/sinh for c < 0, 1 and r for c = 0): C_k = (-c)^{k/2}/k! on even k,
    // S_k = (-c)^{(k-1)/2}/k! on odd k.
    std::vector<double> C(K + 1, 0.0), S(K + 1, 0.0);
    double fact = 1.0, cpow = 1.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) fact *= k;
        if (k % 2 == 0) {
            C[k] = cpow / fact;
        } else {
            S[k] = cpow / fact;
            cpow *= -c;
        }
    }
    auto conv = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(K + 1, 0.0);
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j)
                r[i + j] += a[i] * b[j];
        return r;
    };
    const std::vector<double> CC = conv(C, C), CS = conv(C, S), SS = conv(S, S);

    par::for_each(data.N, [&](std::size_t k) {
        const SMat LL = data.L[k] * data.hinv[k] * data.L[k];
        double fm = 1.0;
        for (int m = 0; m <= K; ++m) {
            if (m > 0) fm *= m;
            cj.h_jet(k, m) = fm * (CC[m] * data.h[k] - 2.0 * CS[m] * data.L[k] + SS[m] * LL);
        }
        cj.rbar[k * data.n + 0] = (data.n + 1) * data.n * c;
        cj.rbar_nn[k] = c * data.n;
    });
    return cj;
}

namespace {

// Geodesic of e^{2 omega} delta together with its first-order variations in
// the surface parameters: state = (x, xdot, J_i, Jdot_i).
struct GeoState {
    AVec x, v;
    std::vector<AVec> J, Jd;

    GeoState& axpy(double s, const GeoState& b)
    {
        x += s * b.x;
        v += s * b.v;
        for (std::size_t i = 0; i < J.size(); ++i) {
            J[i] += s * b.J[i];
            Jd[i] += s * b.Jd[i];
        }
        return *this;
    }
    double norm() const
    {
        double m = x.norm() + v.norm();
        for (const auto& j : J) m += j.norm();
        for (const auto& j : Jd) m += j.norm();
        return m;
    }
};

// Gamma(a,b) = a (g.b) + b (g.a) - (a.b) g for the conformal connection.
AVec gamma2(const OmegaJet& oj, const AVec& a, const AVec& b)
{
    return a * oj.g.dot(b) + b * oj.g.dot(a) - a.dot(b) * oj.g;
}

GeoState rhs(const AmbientSpec& ambient, const GeoState& s)
{
    const OmegaJet oj = ambient.omega_jets(s.x);
    GeoState d;
    d.x = s.v;
    d.v = -gamma2(oj, s.v, s.v);
    d.J.resize(s.J.size());
    d.Jd.resize(s.J.size());
    const double v2 = s.v.squaredNorm();
    const AVec Hv = oj.H * s.v;
    for (std::size_t i = 0; i < s.J.size(); ++i) {
        d.J[i] = s.Jd[i];
        // d/dx [Gamma(v,v)] along J_i = 2 (J.Hv) v - |v|^2 H J
        const AVec dGamma = 2.0 * s.J[i].dot(Hv) * s.v - v2 * (oj.H * s.J[i]);
        d.Jd[i] = -dGamma - 2.0 * gamma2(oj, s.Jd[i], s.v);
    }
    return d;
}

GeoState rk4_step(const AmbientSpec& ambient, const GeoState& s, double h)
{
    const GeoState k1 = rhs(ambient, s);
    GeoState s2 = s; s2.axpy(0.5 * h, k1);
    const GeoState k2 = rhs(ambient, s2);
    GeoState s3 = s; s3.axpy(0.5 * h, k2);
    const GeoState k3 = rhs(ambient, s3);
    GeoState s4 = s; s4.axpy(h, k3);
    const GeoState k4 = rhs(ambient, s4);
    GeoState out = s;
    out.axpy(h / 6.0, k1);
    out.axpy(h / 3.0, k2);
    out.axpy(h / 3.0, k3);
    out.axpy(h / 6.0, k4);
    return out;
}

// Integrate over [0, span] (span may be negative) with step-doubling control.
GeoState integrate_segment(const AmbientSpec& ambient, GeoState s, double span, double tol)
{
    const double dir = span >= 0 ? 1.0 : -1.0;
    double remaining = std::abs(span);
    double h = remaining / 4.0;
    int guard = 0;
    while (remaining > 1e-300) {
        if (++guard > 100000)
            throw std::runtime_error("numeric_collar: geodesic integrator stalled");
        h = std::min(h, remaining);
        const GeoState full = rk4_step(ambient, s, dir * h);
        GeoState half = rk4_step(ambient, s, dir * h / 2.0);
        half = rk4_step(ambient, half, dir * h / 2.0);
        GeoState diff = half;
        diff.axpy(-1.0, full);
        const double err = diff.norm() / 15.0;
        const double scale = tol * (1.0 + half.norm());
        if (err <= scale) {
            s = half;
            remaining -= h;
            if (err < 0.01 * scale) h *= 2.0;
        } else {
            h /= 2.0;
        }
    }
    return s;
}

double richardson(double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; }

} // namespace

CollarJets numeric_collar(const AmbientSpec& ambient, const SurfaceGrid& grid,
                          const HypersurfaceData& data, int K, double delta_r)
{
    if (!ambient.conformal_route())
        throw std::invalid_argument("numeric_collar needs a conformally flat ambient");
    if (K > 4)
        throw std::invalid_argument("numeric_collar supports jets up to order 4");
    const int n = grid.spec.n;
    const std::size_t N = grid.nodes();
    const double delta = delta_r > 0 ? delta_r : 0.01 * data.min_curv_radius;

    CollarJets cj;
    cj.n = n;
    cj.K = K;
    cj.N = N;
    cj.hj.assign(N * (K + 1), SMat::Zero(n, n));
    cj.rbar.assign(N * n, 0.0);
    cj.rbar_nn.assign(N, 0.0);

    // Euclidean Weingarten data for the variation initial conditions.
    std::vector<SMat> he(N, SMat::Zero(n, n)), Se(N, SMat::Zero(n, n));
    for (std::size_t k = 0; k < N; ++k) {
        const AVec Xu = grid.d1u[k];
        he[k](0, 0) = Xu.dot(Xu);
        if (n == 2) {
            he[k](0, 1) = he[k](1, 0) = Xu.dot(grid.d1v[k]);
            he[k](1, 1) = grid.d1v[k].dot(grid.d1v[k]);
        }
        SMat Le(n, n);
        Le(0, 0) = grid.d2uu[k].dot(data.normal_euc[k]);
        if (n == 2) {
            Le(0, 1) = Le(1, 0) = grid.d2uv[k].dot(data.normal_euc[k]);
            Le(1, 1) = grid.d2vv[k].dot(data.normal_euc[k]);
        }
        Se[k] = he[k].inverse() * Le;
    }

    std::vector<std::string> node_error(N);

    par::for_each(N, [&](std::size_t k) {
        try {
            const OmegaJet oj0 = ambient.omega_jets(grid.pos[k]);
            const double ew = std::exp(oj0.w);
            const AVec ne = data.normal_euc[k];

            GeoState s0;
            s0.x = grid.pos[k];
            s0.v = ne / ew;
            s0.J.resize(n);
            s0.Jd.resize(n);
            const std::array<AVec, 2> T = {grid.d1u[k], n == 2 ? grid.d1v[k] : AVec()};
            for (int i = 0; i < n; ++i) {
                s0.J[i] = T[i];
                // d/du_i (e^{-omega} n_e) = e^{-omega} (dn_e/du_i - (grad w . T_i) n_e),
                // with dn_e/du_i = -S^k_i X_k (Euclidean Weingarten).
                AVec dn = AVec::Zero(grid.chart_dim);
                for (int m = 0; m < n; ++m)
                    dn -= Se[k](m, i) * T[m];
                s0.Jd[i] = (dn - oj0.g.dot(T[i]) * ne) / ew;
            }

            // Station values of h_r at r = +-delta, +-2 delta, +-4 delta.
            const std::array<double, 3> stations = {delta, 2.0 * delta, 4.0 * delta};
            std::array<SMat, 3> hp, hm;
            std::array<double, 3> rbp{}, rbm{};
            for (int dir = 0; dir < 2; ++dir) {
                GeoState s = s0;
                double at = 0.0;
                for (int m = 0; m < 3; ++m) {
                    const double target = (dir == 0 ? 1.0 : -1.0) * stations[m];
                    s = integrate_segment(ambient, s, target - at, 1e-13);
                    at = target;
                    const OmegaJet oj = ambient.omega_jets(s.x);
                    SMat hr(n, n);
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j)
                            hr(i, j) = hr(j, i) =
                                std::exp(2.0 * oj.w) * s.J[i].dot(s.J[j]);
                    const double rb = conformal_scalar(oj, n + 1);
                    if (dir == 0) { hp[m] = hr; rbp[m] = rb; }
                    else          { hm[m] = hr; rbm[m] = rb; }
                }
            }

            // Richardson-extrapolated central differences, orders 1..4.
            const SMat f0 = data.h[k];
            auto d1 = [&](int fine, int coarse, double dd) {
                const SMat a = (hp[fine] - hm[fine]) / (2.0 * dd);
                const SMat b = (hp[coarse] - hm[coarse]) / (4.0 * dd);
                return SMat((4.0 * a - b) / 3.0);
            };
            auto d2c = [&](double dd) {
                const SMat a = (hp[0] - 2.0 * f0 + hm[0]) / (dd * dd);
                const SMat b = (hp[1] - 2.0 * f0 + hm[1]) / (4.0 * dd * dd);
                return SMat((4.0 * a - b) / 3.0);
            };
            auto d3c = [&](double dd) {
                const SMat a =
                    (hp[1] - 2.0 * hp[0] + 2.0 * hm[0] - hm[1]) / (2.0 * dd * dd * dd);
                const SMat b =
                    (hp[2] - 2.0 * hp[1] + 2.0 * hm[1] - hm[2]) / (16.0 * dd * dd * dd);
                return SMat((4.0 * a - b) / 3.0);
            };
            auto d4c = [&](double dd) {
                const double d4 = dd * dd * dd * dd;
                const SMat a = (hp[1] - 4.0 * hp[0] + 6.0 * f0 - 4.0 * hm[0] + hm[1]) / d4;
                const SMat b =
                    (hp[2] - 4.0 * hp[1] + 6.0 * f0 - 4.0 * hm[1] + hm[2]) / (16.0 * d4);
                return SMat((4.0 * a - b) / 3.0);
            };

            cj.h_jet(k, 0) = f0;
            if (K >= 1) cj.h_jet(k, 1) = d1(0, 1, delta);
            if (K >= 2) cj.h_jet(k, 2) = d2c(delta);
            if (K >= 3) cj.h_jet(k, 3) = d3c(delta);
            if (K >= 4) cj.h_jet(k, 4) = d4c(delta);

            // Jet-fit sanity: the fitted Taylor polynomial must reproduce the
            // nearest station.
            {
                SMat recon = SMat::Zero(n, n);
                double fact = 1.0, rp = 1.0;
                for (int m = 0; m <= K; ++m) {
                    if (m > 0) { fact *= m; rp *= delta; }
                    recon += cj.h_jet(k, m) * (rp / fact);
                }
                const double resid = (recon - hp[0]).norm() / std::max(1.0, f0.norm());
                if (resid > 1e-4)
                    throw std::runtime_error("jet fit residual " + std::to_string(resid));
            }

            cj.rbar[k * n + 0] = data.rbar[k];
            if (n >= 2) {
                const double a = (rbp[0] - rbm[0]) / (2.0 * delta);
                const double b = (rbp[1] - rbm[1]) / (4.0 * delta);
                cj.rbar[k * n + 1] = richardson(a, b);
            }
            cj.rbar_nn[k] = data.rbar_nn[k];
        } catch (const std::exception& e) {
            node_error[k] = e.what();
        }
    });

    for (std::size_t k = 0; k < N; ++k)
        if (!node_error[k].empty())
            throw std::runtime_error("numeric_collar: node " + std::to_string(k) + ": " +
                                     node_error[k]);
    return cj;
}

CollarReport collar_consistency_check(const CollarJets& jets, const HypersurfaceData& data,
                                      double tol)
{
    CollarReport rep;
    rep.tol = tol;
    for (std::size_t k = 0; k < jets.N; ++k) {
        const SMat r1 = jets.h_jet(k, 1) + 2.0 * data.L[k];
        const SMat r2 = jets.h_jet(k, 2) + 2.0 * data.rbar_0i0j[k] -
                        2.0 * data.L[k] * data.hinv[k] * data.L[k];
        const double n1 = r1.cwiseAbs().maxCoeff();
        const double n2 = r2.cwiseAbs().maxCoeff();
        if (std::max(n1, n2) > std::max(rep.res1, rep.res2))
            rep.worst_node = k;
        rep.res1 = std::max(rep.res1, n1);
        rep.res2 = std::max(rep.res2, n2);
    }
    rep.pass = rep.res1 <= tol && rep.res2 <= tol;
    return rep;
}

} // namespace syv
