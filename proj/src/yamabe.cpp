#include "syv/yamabe.hpp"

#include "syv/parallel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace syv {

namespace {

// Residual of the constant-scalar-curvature equation in terms of phi:
//   (1 + r phi)[ r^2 phi_rr + 4 r phi_r + 2 phi
//                + (1/2) h^{ij} h'_{ij} (1 + 2 r phi + r^2 phi_r)
//                + r^2 Lap phi ]
//   - (n+1)/2 [ 2 (r phi_r + 2 phi) + r (r phi_r + 2 phi)^2
//               + r^3 h^{ij} d_i phi d_j phi ]
//   + (1/2n) r (1 + r phi)^2 Rbar.
// The |d phi|^2 block never contributes at orders <= n for n <= 2 and is
// zero in homogeneous mode, so it is not assembled. Coefficients above
// order n of the result are not trusted (series derivative truncation).
LogSeries assemble_residual(const LogSeries& phi, const LogSeries& half_tr,
                            const LogSeries& rbar, const LogSeries& lap_phi, int n)
{
    const int K = phi.order();
    const LogSeries one = LogSeries::constant(1.0, K);
    const LogSeries rphi = phi.shifted(1);
    const LogSeries one_rphi = one + rphi;
    const LogSeries r_phir = phi.r_derivative();        // r phi_r
    const LogSeries r2_phirr = phi.r2_second_derivative();

    LogSeries A = r2_phirr + r_phir.scaled(4.0) + phi.scaled(2.0);
    A += LogSeries::mul(half_tr, one + rphi.scaled(2.0) + r_phir.shifted(1));
    A += lap_phi.shifted(2);

    const LogSeries term1 = LogSeries::mul(one_rphi, A);

    const LogSeries B = r_phir + phi.scaled(2.0);
    const LogSeries term2 =
        (B.scaled(2.0) + LogSeries::mul(B, B, K - 1).shifted(1)).scaled(-0.5 * (n + 1));

    const LogSeries sq = LogSeries::mul(one_rphi, one_rphi, K - 1);
    const LogSeries term3 =
        LogSeries::mul(sq, rbar, K - 1).shifted(1).scaled(0.5 / n);

    return term1 + term2 + term3;
}

struct NodeSolve {
    LogSeries phi;
    double obstruction;
};

NodeSolve solve_node(const MatrixSeries& h_taylor, const LogSeries& rbar, double lap_phi0,
                     int n)
{
    const int K = n + 2;
    const MatrixSeries hinv = h_taylor.inverse();
    const MatrixSeries hp = h_taylor.derivative();
    const LogSeries half_tr = (hinv * hp).trace().scaled(0.5);

    LogSeries lap = LogSeries::constant(lap_phi0, K);

    NodeSolve out;
    out.phi = LogSeries(K);
    for (int k = 0; k <= n; ++k) {
        const LogSeries res = assemble_residual(out.phi, half_tr, rbar, lap, n);
        if (k < n) {
            out.phi.a(k) = -res.a(k) / ((k + 2) * (k - n));
        } else {
            out.obstruction = -res.a(n) / (n + 2);
            out.phi.b(n) = out.obstruction;
        }
    }

    // The solved orders must vanish.
    const LogSeries res = assemble_residual(out.phi, half_tr, rbar, lap, n);
    double scale = 1.0;
    for (int k = 0; k <= n; ++k)
        scale = std::max(scale, std::abs(out.phi.a(k)));
    for (int k = 0; k <= n; ++k)
        if (std::abs(res.a(k)) > 1e-10 * scale || std::abs(res.b(k)) > 1e-10 * scale)
            throw std::runtime_error("solve_yamabe: residual did not vanish at order " +
                                     std::to_string(k));
    return out;
}

} // namespace

YamabeExpansion solve_yamabe(const CollarJets& jets, const HypersurfaceData& data,
                             const SurfaceGrid* grid, YamabeMode mode)
{
    const int n = data.n;
    const int K = n + 2;
    if (jets.K < n + 1)
        throw std::invalid_argument("solve_yamabe: collar jets order too low");

    if (mode == YamabeMode::Homogeneous) {
        // All tangential terms vanish by assumption; the data must actually
        // be node-wise constant for that to be sound.
        auto constant = [&](const std::vector<double>& f) {
            for (double x : f)
                if (std::abs(x - f[0]) > 1e-10 * (1.0 + std::abs(f[0]))) return false;
            return true;
        };
        if (!constant(data.H) || !constant(data.R) || !constant(data.rbar) ||
            !constant(data.Lo2))
            throw std::invalid_argument("solve_yamabe: homogeneous mode given non-constant data");
    } else {
        if (n > 2)
            throw std::invalid_argument("solve_yamabe: grid mode supports n <= 2");
        if (n == 2 && grid == nullptr)
            throw std::invalid_argument("solve_yamabe: grid mode needs the surface grid");
    }

    YamabeExpansion exp;
    exp.n = n;
    exp.N = data.N;
    exp.phi.assign(n, std::vector<double>(data.N, 0.0));
    exp.obstruction.assign(data.N, 0.0);

    // Orders k < n carry no tangential term for n <= 2 (r^2 Lap phi starts at
    // order 2 >= n in the residual only when k = n), so phi_0..phi_{n-1} are
    // pointwise. The single grid-wide pass in between supplies Lap phi_0 for
    // the obstruction order.
    std::vector<std::string> node_error(data.N);
    par::for_each(data.N, [&](std::size_t node) {
        try {
            const MatrixSeries hT = jets.taylor(node, K);
            const LogSeries rb = jets.rbar_series(node, K);
            const NodeSolve s = solve_node(hT, rb, 0.0, n);
            for (int k = 0; k < n; ++k)
                exp.phi[k][node] = s.phi.a(k);
        } catch (const std::exception& e) {
            node_error[node] = e.what();
        }
    });
    for (std::size_t k = 0; k < data.N; ++k)
        if (!node_error[k].empty())
            throw std::runtime_error("solve_yamabe: node " + std::to_string(k) + ": " +
                                     node_error[k]);

    std::vector<double> lap0(data.N, 0.0);
    if (mode == YamabeMode::Grid && n == 2)
        lap0 = tangential_laplacian(*grid, data, exp.phi[0]);

    par::for_each(data.N, [&](std::size_t node) {
        try {
            const MatrixSeries hT = jets.taylor(node, K);
            const LogSeries rb = jets.rbar_series(node, K);
            const NodeSolve s = solve_node(hT, rb, lap0[node], n);
            exp.obstruction[node] = s.obstruction;
            for (int k = 0; k < n; ++k)
                exp.phi[k][node] = s.phi.a(k);
        } catch (const std::exception& e) {
            node_error[node] = e.what();
        }
    });
    for (std::size_t k = 0; k < data.N; ++k)
        if (!node_error[k].empty())
            throw std::runtime_error("solve_yamabe: node " + std::to_string(k) + ": " +
                                     node_error[k]);

    return exp;
}

ClosedFormPhis closed_form_phis(const HypersurfaceData& data, int n)
{
    ClosedFormPhis out;
    out.phi0.assign(data.N, 0.0);
    for (std::size_t k = 0; k < data.N; ++k)
        out.phi0[k] = -data.H[k] / (2.0 * n);

    if (n >= 2) {
        out.phi1.assign(data.N, 0.0);
        out.phi1_alt.assign(data.N, 0.0);
        for (std::size_t k = 0; k < data.N; ++k) {
            // 3(n-1) phi_r = H^2/n - |L|^2 - h^{ij} Rbar_{0i0j} + Rbar/(2n)
            out.phi1_alt[k] = (data.H[k] * data.H[k] / n - data.L2[k] - data.rbar_nn[k] +
                               data.rbar[k] / (2.0 * n)) /
                              (3.0 * (n - 1));
            // 3(n-1) phi_r = (1-n)/(2n) (Rbar + H^2) + (R - |Lo|^2)/2
            out.phi1[k] = ((1.0 - n) / (2.0 * n) * (data.rbar[k] + data.H[k] * data.H[k]) +
                           0.5 * (data.R[k] - data.Lo2[k])) /
                          (3.0 * (n - 1));
        }
    }
    return out;
}

ResidualScan residual_scan(const YamabeExpansion& exp, const CollarJets& jets,
                           const HypersurfaceData& data, const SurfaceGrid* grid,
                           const std::vector<double>& r_samples)
{
    const int n = exp.n;
    const int K = n + 2;
    const std::size_t N = data.N;

    // u as a log-series: u = r + sum phi_k r^{k+2} + L r^{n+2} log r.
    auto u_series = [&](std::size_t node) {
        LogSeries u(K);
        u.a(1) = 1.0;
        for (int k = 0; k < n; ++k)
            u.a(k + 2) = exp.phi[k][node];
        u.b(n + 2) = exp.obstruction[node];
        return u;
    };

    ResidualScan scan;
    scan.samples = r_samples;
    scan.residuals.assign(r_samples.size(), 0.0);

    const bool tangential = grid != nullptr && n >= 1 && data.N > 1;
    std::vector<std::vector<double>> coef_fields;
    if (tangential) {
        for (int k = 0; k < n; ++k)
            coef_fields.push_back(exp.phi[k]);
        coef_fields.push_back(exp.obstruction);
    }

    for (std::size_t si = 0; si < r_samples.size(); ++si) {
        const double r = r_samples[si];
        const double lg = std::log(r);

        // Collar metric at the sample radius, from the stored jets.
        std::vector<SMat> hr(N, SMat::Zero(n, n));
        std::vector<SMat> hrp(N, SMat::Zero(n, n));
        par::for_each(N, [&](std::size_t node) {
            const MatrixSeries hT = jets.taylor(node, K);
            const Eigen::MatrixXd h_at = hT.eval(r);
            const Eigen::MatrixXd hp_at = hT.derivative().eval(r);
            hr[node] = h_at;
            hrp[node] = hp_at;
        });

        // Tangential pieces: Lap u = sum r^{k+2} Lap phi_k + r^{n+2} log r Lap L,
        // |du|_tan^2 = h_r^{ij} d_i u d_j u with d_i u built the same way.
        std::vector<double> lap_u(N, 0.0), grad2(N, 0.0);
        if (tangential) {
            std::vector<std::vector<double>> laps, dus, dvs;
            for (const auto& f : coef_fields) {
                laps.push_back(tangential_laplacian_metric(*grid, hr, f));
                dus.push_back(grid_partial(*grid, f, 0));
                if (n == 2) dvs.push_back(grid_partial(*grid, f, 1));
            }
            par::for_each(N, [&](std::size_t node) {
                double lap = 0.0, du = 0.0, dv = 0.0;
                double rp = r * r;
                for (int k = 0; k < n; ++k) {
                    lap += rp * laps[k][node];
                    du += rp * dus[k][node];
                    if (n == 2) dv += rp * dvs[k][node];
                    rp *= r;
                }
                const double rlog = std::pow(r, n + 2) * lg;
                lap += rlog * laps[n][node];
                du += rlog * dus[n][node];
                if (n == 2) dv += rlog * dvs[n][node];
                lap_u[node] = lap;
                const SMat hi = hr[node].inverse();
                if (n == 1)
                    grad2[node] = hi(0, 0) * du * du;
                else
                    grad2[node] = hi(0, 0) * du * du + 2.0 * hi(0, 1) * du * dv +
                                  hi(1, 1) * dv * dv;
            });
        }

        std::vector<double> res(N, 0.0);
        par::for_each(N, [&](std::size_t node) {
            const LogSeries u = u_series(node);
            const LogSeries ur = u.derivative();
            const LogSeries urr = ur.derivative();
            const double uv = u.eval(r);
            const double urv = ur.eval(r);
            const double urrv = urr.eval(r);

            const double half_tr = 0.5 * (hr[node].inverse() * hrp[node]).trace();
            const double rbar_at = jets.rbar_series(node, K).eval(r);

            const double du2 = urv * urv + grad2[node];
            const double lap_total = urrv + half_tr * urv + lap_u[node];
            // R_{u^{-2} g} = -n(n+1)|du|^2 + 2n u Lap u + u^2 Rbar
            const double Rg = -n * (n + 1.0) * du2 + 2.0 * n * uv * lap_total +
                              uv * uv * rbar_at;
            res[node] = std::abs(Rg + n * (n + 1.0));
        });
        double worst = 0.0;
        for (double x : res) worst = std::max(worst, x);
        scan.residuals[si] = worst;
        scan.max_residual = std::max(scan.max_residual, worst);
    }

    if (scan.max_residual < 1e-10) {
        scan.exact = true;
        return scan;
    }

    // Fit log|res| - log|log r| = log C + p log r.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < r_samples.size(); ++i) {
        if (scan.residuals[i] <= 0) continue;
        const double x = std::log(r_samples[i]);
        const double y = std::log(scan.residuals[i]) - std::log(std::abs(std::log(r_samples[i])));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 3)
        throw std::runtime_error("residual_scan: too few usable samples for the decay fit");
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12)
        throw std::runtime_error("residual_scan: ill-conditioned decay fit");
    scan.exponent = (m * sxy - sx * sy) / denom;
    return scan;
}

double gauge_independence_residual(const YamabeExpansion& exp, const CollarJets& jets,
                                   std::size_t node, double perturbation)
{
    const int n = exp.n;
    const int K = n + 2;
    const MatrixSeries hT = jets.taylor(node, K);
    const LogSeries rbar = jets.rbar_series(node, K);
    const MatrixSeries hinv = hT.inverse();
    const LogSeries half_tr = (hinv * hT.derivative()).trace().scaled(0.5);
    const LogSeries lap(K);

    LogSeries phi(K);
    for (int k = 0; k < n; ++k)
        phi.a(k) = exp.phi[k][node];
    phi.b(n) = exp.obstruction[node];

    const LogSeries base = assemble_residual(phi, half_tr, rbar, lap, n);
    phi.a(n) += perturbation;
    const LogSeries pert = assemble_residual(phi, half_tr, rbar, lap, n);
    return std::abs(pert.a(n) - base.a(n));
}

void verify_indicial_identities(int max_n)
{
    for (int n = 1; n <= max_n; ++n) {
        const int K = n + 2;
        const LogSeries half_tr(K); // trivial background
        const LogSeries rbar(K);
        const LogSeries lap(K);

        for (int k = 0; k <= n; ++k) {
            const LogSeries phi = LogSeries::monomial(1.0, k, K);
            const LogSeries res = assemble_residual(phi, half_tr, rbar, lap, n);
            const double want = (k + 2) * (k - n);
            if (std::abs(res.a(k) - want) > 1e-12)
                throw std::logic_error(
                    "indicial self-test failed: n=" + std::to_string(n) +
                    " k=" + std::to_string(k) + " got " + std::to_string(res.a(k)) +
                    " want " + std::to_string(want));
        }

        // r^n log r probe through the linearization (small amplitude so the
        // quadratic log x log cross terms stay at the roundoff floor).
        const double eps = 1e-7;
        LogSeries phi(K);
        phi.b(n) = eps;
        const LogSeries res = assemble_residual(phi, half_tr, rbar, lap, n);
        if (std::abs(res.a(n) / eps - (n + 2)) > 1e-9)
            throw std::logic_error("indicial self-test failed: log-slot constant, n=" +
                                   std::to_string(n));
        if (std::abs(res.b(n) / eps) > 1e-9)
            throw std::logic_error("indicial self-test failed: log slot not annihilated, n=" +
                                   std::to_string(n));
    }
}

} // namespace syv
