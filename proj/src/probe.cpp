#include "syv/probe.hpp"

#include "syv/grid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace syv {

ProbeModel make_probe_model(const std::string& id)
{
    if (id == "hyperbolic-ball") {
        ProbeModel m;
        m.id = id;
        m.n = 2;
        m.u = ExprAst::parse("(1 - (x^2 + y^2 + z^2))/2", {"x", "y", "z"});
        return m;
    }
    if (id == "hyperbolic-disc") {
        ProbeModel m;
        m.id = id;
        m.n = 1;
        m.u = ExprAst::parse("(1 - (x^2 + y^2))/2", {"x", "y"});
        return m;
    }
    throw std::invalid_argument("unknown probe model '" + id + "'");
}

double verify_probe_model(const ProbeModel& model, unsigned seed, int points)
{
    const int n = model.n;
    const int d = n + 1;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;
    int kept = 0;
    while (kept < points) {
        std::vector<double> x(d);
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
            x[a] = 0.95 * model.radius * unif(rng);
            s += x[a] * x[a];
        }
        if (s >= 0.9 * model.radius * model.radius || s < 1e-4)
            continue;
        ++kept;
        const JetValue j = model.u.eval_jet(x);
        double du2 = 0.0, lap = 0.0;
        for (int a = 0; a < d; ++a) {
            du2 += j.d[a] * j.d[a];
            lap += j.d2(a, a);
        }
        // R_{u^{-2} delta} = -n(n+1) |du|^2 + 2n u Lap u  (flat background)
        const double Rg = -n * (n + 1.0) * du2 + 2.0 * n * j.v * lap;
        worst = std::max(worst, std::abs(Rg + n * (n + 1.0)));
    }
    return worst;
}

namespace {

double sphere_area_factor(int n)
{
    // surface measure of the radius-s sphere in R^{n+1} is factor * s^n
    if (n == 1) return 2.0 * M_PI;
    if (n == 2) return 4.0 * M_PI;
    throw std::invalid_argument("probe models exist for n = 1, 2 only");
}

// Composite Gauss-Legendre on a mesh graded geometrically toward the upper
// endpoint (where the integrand blows up like a power of the boundary
// distance), refined by panel doubling until two levels agree.
double integrate_graded(const std::function<double(double)>& f, double upper,
                        double boundary_gap)
{
    static std::vector<double> gx, gw;
    if (gx.empty())
        gauss_legendre(16, gx, gw);

    const auto level_value = [&](int panels_per_octave) {
        // breakpoints: distance to the singular point decreases geometrically
        std::vector<double> bp;
        bp.push_back(0.0);
        const double full = upper + boundary_gap; // distance scale at s = 0
        double d = full / 2.0;
        while (d > boundary_gap * 1.0000001) {
            for (int q = panels_per_octave; q >= 1; --q) {
                const double dq = d * std::pow(2.0, double(q - 1) / panels_per_octave);
                const double s = upper + boundary_gap - dq;
                if (s > bp.back() + 1e-300)
                    bp.push_back(s);
            }
            d /= 2.0;
        }
        bp.push_back(upper);
        double acc = 0.0;
        for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
            const double a = bp[p], b = bp[p + 1];
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            double panel = 0.0;
            for (int q = 0; q < 16; ++q)
                panel += gw[q] * f(mid + half * gx[q]);
            acc += panel * half;
        }
        return acc;
    };

    double prev = level_value(1);
    for (int lvl = 2; lvl <= 8; lvl *= 2) {
        const double cur = level_value(lvl);
        if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    throw std::runtime_error("probe_volume: quadrature did not converge");
}

} // namespace

double probe_volume(const ProbeModel& model, double eps)
{
    if (eps < 0.0 || eps > model.radius)
        throw std::invalid_argument("probe_volume: eps outside [0, radius]");
    const double upper = model.radius - eps;
    if (upper <= 0.0)
        return 0.0;

    const int n = model.n;
    const double area = sphere_area_factor(n);
    const auto integrand = [&](double s) {
        std::vector<double> x(n + 1, 0.0);
        x[0] = s;
        const double uval = model.u.eval(x);
        return area * std::pow(s, n) * std::pow(uval, -(n + 1.0));
    };
    return integrate_graded(integrand, upper, eps);
}

std::vector<double> geometric_ladder(double lo, double hi, int count)
{
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
    return out;
}

ExpansionFit fit_expansion(const ProbeModel& model, const std::vector<double>& eps_samples)
{
    const int n = model.n;
    const int m = static_cast<int>(eps_samples.size());
    if (m < 12)
        throw std::invalid_argument("fit_expansion needs at least 12 samples");

    // Reported basis: {eps^{-n}, ..., eps^{-1}, log(1/eps), 1}. The true
    // expansion continues with an O(eps) tail that would otherwise leak into
    // the log and constant coefficients at ~1e-2, so o(1) guard columns
    // {eps, eps^2, eps^3} join the regression and their coefficients are
    // discarded.
    const int ncols = n + 5;
    double emid = 1.0;
    {
        double acc = 0.0;
        for (double e : eps_samples) acc += std::log(e);
        emid = std::exp(acc / m);
    }

    Eigen::MatrixXd A(m, ncols);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
        const double e = eps_samples[i];
        for (int k = 0; k < n; ++k)
            A(i, k) = std::pow(e / emid, k - n); // scaled eps^{k-n}
        A(i, n) = std::log(1.0 / e);
        A(i, n + 1) = 1.0;
        A(i, n + 2) = e / emid;
        A(i, n + 3) = (e / emid) * (e / emid);
        A(i, n + 4) = std::pow(e / emid, 3);
        rhs(i) = probe_volume(model, e);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::VectorXd sol = qr.solve(rhs);
    const Eigen::VectorXd misfit = A * sol - rhs;

    ExpansionFit fit;
    fit.c.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
        fit.c[k] = sol(k) * std::pow(emid, double(n - k)); // unscale
    fit.energy = sol(n);
    fit.V = sol(n + 1);
    fit.residual = std::sqrt(misfit.squaredNorm() / m);

    const Eigen::MatrixXd Rm = qr.matrixR().topLeftCorner(ncols, ncols);
    double dmax = 0.0, dmin = 1e300;
    for (int k = 0; k < ncols; ++k) {
        const double d = std::abs(Rm(k, k));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    fit.condition = dmin > 0 ? dmax / dmin : 1e300;
    if (fit.condition > 1e13)
        throw std::runtime_error("fit_expansion: ill-conditioned normal equations, cond ~ " +
                                 std::to_string(fit.condition));
    return fit;
}

} // namespace syv
