#include "syv/anomaly.hpp"

#include "syv/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace syv {

ConformalJets conformal_jets(const ExprAst& omega, const SurfaceGrid& grid,
                             const HypersurfaceData& data, const AmbientSpec& ambient)
{
    const int n = grid.spec.n;
    const int cd = grid.chart_dim;
    const std::size_t N = grid.nodes();

    ConformalJets cj;
    cj.N = N;
    cj.w.assign(N, 0.0);
    cj.wr.assign(N, 0.0);
    cj.wrr.assign(N, 0.0);
    cj.wi2.assign(N, 0.0);
    cj.wi.assign(N, {0.0, 0.0});
    cj.ups0.assign(N, 0.0);
    cj.upsr.assign(N, 0.0);
    cj.upsrr.assign(N, 0.0);
    cj.b.assign(N, {0.0, 0.0, 0.0});

    // variable layout of omega: chart coordinates and optionally r
    const char* coord_names[] = {"x", "y", "z", "w"};
    std::vector<int> coord_slot(cd, -1);
    for (int a = 0; a < cd; ++a)
        coord_slot[a] = omega.var_index(coord_names[a]);
    const int r_slot = omega.var_index("r");

    par::for_each(N, [&](std::size_t k) {
        std::vector<double> pt(omega.variables().size(), 0.0);
        for (int a = 0; a < cd; ++a)
            if (coord_slot[a] >= 0) pt[coord_slot[a]] = grid.pos[k][a];
        if (r_slot >= 0) pt[r_slot] = 0.0;
        const JetValue jet = omega.eval_jet(pt);

        // geodesic through the node with inward unit initial velocity
        const AVec xdot = data.normal[k];
        AVec xddot = AVec::Zero(cd);
        if (ambient.spherical_chart()) {
            xddot = -ambient.c * grid.pos[k];
        } else if (ambient.conformal_route()) {
            const OmegaJet oj = ambient.omega_jets(grid.pos[k]);
            xddot = -(2.0 * oj.g.dot(xdot) * xdot - xdot.squaredNorm() * oj.g);
        }

        AVec g = AVec::Zero(cd);
        AMat Hs = AMat::Zero(cd, cd);
        for (int a = 0; a < cd; ++a) {
            if (coord_slot[a] >= 0) {
                g[a] = jet.d[coord_slot[a]];
                for (int bb = 0; bb < cd; ++bb)
                    if (coord_slot[bb] >= 0)
                        Hs(a, bb) = jet.d2(coord_slot[a], coord_slot[bb]);
            }
        }

        cj.w[k] = jet.v;
        double wr = g.dot(xdot);
        double wrr = xdot.dot(Hs * xdot) + g.dot(xddot);
        if (r_slot >= 0) {
            wr += jet.d[r_slot];
            wrr += jet.d2(r_slot, r_slot);
            for (int a = 0; a < cd; ++a)
                if (coord_slot[a] >= 0)
                    wrr += 2.0 * jet.d2(r_slot, coord_slot[a]) * xdot[a];
        }
        cj.wr[k] = wr;
        cj.wrr[k] = wrr;

        const std::array<AVec, 2> T = {grid.d1u[k], n == 2 ? grid.d1v[k] : AVec()};
        std::array<double, 2> wi = {0.0, 0.0};
        for (int i = 0; i < n; ++i)
            wi[i] = g.dot(T[i]);
        cj.wi[k] = wi;
        double wi2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                wi2 += data.hinv[k](i, j) * wi[i] * wi[j];
        cj.wi2[k] = wi2;

        // Upsilon jets of rhat = e^Upsilon r from the eikonal recursion.
        cj.ups0[k] = cj.w[k];
        cj.upsr[k] = 0.5 * wr;
        cj.upsrr[k] = (wrr + 0.25 * wr * wr - wi2) / 3.0;

        // b-expansion of the inverse relation r = rhat b(x, rhat).
        const double ew = std::exp(-cj.w[k]);
        cj.b[k][0] = ew;
        cj.b[k][1] = -0.5 * wr * ew * ew;
        cj.b[k][2] = (wr * wr / 3.0 + wi2 / 6.0 - wrr / 6.0) * ew * ew * ew;
    });

    return cj;
}

double anomaly_route_b(const ConformalJets& cj, const VolumeData& vol,
                       const HypersurfaceData& data)
{
    if (vol.n != 2)
        throw std::invalid_argument("anomaly_route_b needs n = 2");

    std::vector<double> integrand(cj.N, 0.0);
    for (std::size_t k = 0; k < cj.N; ++k) {
        LogSeries b(2);
        b.a(0) = cj.b[k][0];
        b.a(1) = cj.b[k][1];
        b.a(2) = cj.b[k][2];
        const double c1 = b.pow(-1.0).a(1); // eps-coefficient of b^{-1}
        const double c2 = b.pow(-2.0).a(2); // eps^2-coefficient of b^{-2}

        // cross-check against the stated closed forms
        const double c1_stated = 0.5 * cj.wr[k];
        const double c2_stated =
            cj.wr[k] * cj.wr[k] / 12.0 - cj.wi2[k] / 3.0 + cj.wrr[k] / 3.0;
        const double scale = 1.0 + std::abs(c1_stated) + std::abs(c2_stated);
        if (std::abs(c1 - c1_stated) > 1e-10 * scale ||
            std::abs(c2 - c2_stated) > 1e-10 * scale)
            throw std::logic_error("anomaly_route_b: series coefficients disagree with "
                                   "their closed forms");

        integrand[k] = -0.5 * c2 - vol.v[1][k] * c1 + vol.v[2][k] * (-cj.w[k]);
    }
    return surface_integrate(integrand, data);
}

double anomaly_route_closed(const ConformalJets& cj, const HypersurfaceData& data)
{
    if (data.n != 2)
        throw std::invalid_argument("anomaly_route_closed needs n = 2");
    std::vector<double> integrand(cj.N, 0.0);
    for (std::size_t k = 0; k < cj.N; ++k)
        integrand[k] = -0.125 * (2.0 * (data.Lo2[k] - data.R[k]) * cj.w[k] -
                                 data.H[k] * cj.wr[k] +
                                 (4.0 * cj.wrr[k] - 4.0 * cj.wi2[k] + cj.wr[k] * cj.wr[k]) / 3.0);
    return surface_integrate(integrand, data);
}

double minimal_area_anomaly(const ConformalJets& cj, const HypersurfaceData& data)
{
    if (data.n != 2)
        throw std::invalid_argument("minimal_area_anomaly needs n = 2");
    std::vector<double> integrand(cj.N, 0.0);
    for (std::size_t k = 0; k < cj.N; ++k)
        integrand[k] =
            0.125 * ((data.H[k] * data.H[k] + 4.0 * data.schouten_tr[k]) * cj.w[k] -
                     2.0 * data.H[k] * cj.wr[k] + 2.0 * cj.wi2[k]);
    return surface_integrate(integrand, data);
}

} // namespace syv
