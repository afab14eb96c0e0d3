#include "syv/variation.hpp"

#include "syv/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace syv {

SurfaceField eval_surface_field(const ExprAst& f, const SurfaceGrid& grid)
{
    const int n = grid.spec.n;
    const int cd = grid.chart_dim;
    const std::size_t N = grid.nodes();

    SurfaceField out;
    out.val.assign(N, 0.0);
    out.d1.assign(N, {0.0, 0.0});
    out.d2.assign(N, {0.0, 0.0, 0.0});

    const int iu = f.uses_variable("u") ? f.var_index("u") : -1;
    const int iv = f.uses_variable("v") ? f.var_index("v") : -1;
    const char* coord_names[] = {"x", "y", "z", "w"};
    std::vector<int> cs(cd, -1);
    bool uses_coords = false;
    for (int a = 0; a < cd; ++a) {
        cs[a] = f.uses_variable(coord_names[a]) ? f.var_index(coord_names[a]) : -1;
        uses_coords = uses_coords || cs[a] >= 0;
    }
    if (uses_coords && (iu >= 0 || iv >= 0))
        throw std::invalid_argument("surface field must use (u,v) or chart coordinates, not both");

    par::for_each(N, [&](std::size_t k) {
        std::vector<double> pt(f.variables().size(), 0.0);
        const int i = static_cast<int>(k % grid.spec.nu);
        const int j = static_cast<int>(k / grid.spec.nu);
        if (iu >= 0) pt[iu] = grid.u[i];
        if (iv >= 0) pt[iv] = n == 2 ? grid.v[j] : 0.0;
        for (int a = 0; a < cd; ++a)
            if (cs[a] >= 0) pt[cs[a]] = grid.pos[k][a];
        const JetValue jet = f.eval_jet(pt);
        out.val[k] = jet.v;

        if (!uses_coords) {
            out.d1[k][0] = iu >= 0 ? jet.d[iu] : 0.0;
            out.d1[k][1] = iv >= 0 ? jet.d[iv] : 0.0;
            out.d2[k][0] = iu >= 0 ? jet.d2(iu, iu) : 0.0;
            out.d2[k][1] = (iu >= 0 && iv >= 0) ? jet.d2(iu, iv) : 0.0;
            out.d2[k][2] = iv >= 0 ? jet.d2(iv, iv) : 0.0;
            return;
        }

        // chain rule through the embedding
        AVec g = AVec::Zero(cd);
        AMat Hs = AMat::Zero(cd, cd);
        for (int a = 0; a < cd; ++a) {
            if (cs[a] < 0) continue;
            g[a] = jet.d[cs[a]];
            for (int b = 0; b < cd; ++b)
                if (cs[b] >= 0) Hs(a, b) = jet.d2(cs[a], cs[b]);
        }
        const std::array<AVec, 2> T = {grid.d1u[k], n == 2 ? grid.d1v[k] : AVec()};
        const std::array<AVec, 3> T2 = {grid.d2uu[k], n == 2 ? grid.d2uv[k] : AVec(),
                                        n == 2 ? grid.d2vv[k] : AVec()};
        for (int a = 0; a < n; ++a)
            out.d1[k][a] = g.dot(T[a]);
        const int pairs[3][2] = {{0, 0}, {0, 1}, {1, 1}};
        const int npairs = n == 2 ? 3 : 1;
        for (int p = 0; p < npairs; ++p) {
            const int a = pairs[p][0], b = pairs[p][1];
            out.d2[k][p] = T[a].dot(Hs * T[b]) + g.dot(T2[p]);
        }
    });
    return out;
}

SurfaceGrid offset_surface(const SurfaceGrid& grid, const HypersurfaceData& data,
                           const SurfaceField& f, double t)
{
    if (grid.spec.n != 2)
        throw std::invalid_argument("offset_surface supports n = 2 grids");
    const std::size_t N = grid.nodes();

    double fmax = 0.0;
    for (double x : f.val) fmax = std::max(fmax, std::abs(x));
    if (std::abs(t) * fmax >= 0.1 * data.min_curv_radius)
        throw std::runtime_error("offset_surface: offset exceeds a tenth of the minimum "
                                 "curvature radius");

    // Shape operator components S(k,i) = L^k_i and their grid derivatives.
    // Index parity under the pole reflection: off-diagonal components flip.
    std::array<std::vector<double>, 4> S, dSu, dSv;
    for (auto& s : S) s.assign(N, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
        const SMat mixed = data.hinv[k] * data.L[k];
        S[0][k] = mixed(0, 0);
        S[1][k] = mixed(0, 1);
        S[2][k] = mixed(1, 0);
        S[3][k] = mixed(1, 1);
    }
    const double parity[4] = {1.0, -1.0, -1.0, 1.0};
    for (int c = 0; c < 4; ++c) {
        dSu[c] = grid_partial(grid, S[c], 0);
        dSv[c] = grid_partial(grid, S[c], 1, parity[c]);
    }
    auto Sat = [&](std::size_t k, int row, int col) { return S[row * 2 + col][k]; };
    auto dSat = [&](std::size_t k, int dir, int row, int col) {
        return dir == 0 ? dSu[row * 2 + col][k] : dSv[row * 2 + col][k];
    };

    SurfaceGrid out = grid;
    par::for_each(N, [&](std::size_t k) {
        const AVec nu = data.normal[k];
        const double w = t * f.val[k];
        const std::array<double, 2> wi = {t * f.d1[k][0], t * f.d1[k][1]};
        const std::array<double, 3> wij = {t * f.d2[k][0], t * f.d2[k][1], t * f.d2[k][2]};

        const std::array<AVec, 2> T = {grid.d1u[k], grid.d1v[k]};
        std::array<AVec, 2> dnu;
        for (int i = 0; i < 2; ++i) {
            dnu[i] = AVec::Zero(grid.chart_dim);
            for (int m = 0; m < 2; ++m)
                dnu[i] -= Sat(k, m, i) * T[m];
        }

        out.pos[k] = grid.pos[k] + w * nu;
        out.d1u[k] = grid.d1u[k] + wi[0] * nu + w * dnu[0];
        out.d1v[k] = grid.d1v[k] + wi[1] * nu + w * dnu[1];

        const std::array<AVec, 3> X2 = {grid.d2uu[k], grid.d2uv[k], grid.d2vv[k]};
        const int pairs[3][2] = {{0, 0}, {0, 1}, {1, 1}};
        std::array<AVec, 3> Y2;
        for (int p = 0; p < 3; ++p) {
            const int i = pairs[p][0], j = pairs[p][1];
            // d_j d_i nu = -(d_j S^m_i) X_m - S^m_i X_mj
            AVec ddnu = AVec::Zero(grid.chart_dim);
            for (int m = 0; m < 2; ++m) {
                ddnu -= dSat(k, j, m, i) * T[m];
                const int q = (m == 0 && j == 0) ? 0 : (m == 1 && j == 1) ? 2 : 1;
                ddnu -= Sat(k, m, i) * X2[q];
            }
            Y2[p] = X2[p] + wij[p] * nu + wi[i] * dnu[j] + wi[j] * dnu[i] + w * ddnu;
        }
        out.d2uu[k] = Y2[0];
        out.d2uv[k] = Y2[1];
        out.d2vv[k] = Y2[2];
    });
    return out;
}

double variation_rhs(const std::vector<double>& f, const YamabeExpansion& exp,
                     const HypersurfaceData& data)
{
    std::vector<double> integrand(data.N, 0.0);
    for (std::size_t k = 0; k < data.N; ++k)
        integrand[k] = f[k] * exp.obstruction[k];
    return (exp.n + 2.0) * (exp.n - 1.0) * surface_integrate(integrand, data);
}

FdVariation energy_variation_fd(const std::function<double(const SurfaceGrid&)>& energy_of,
                                const SurfaceGrid& grid, const HypersurfaceData& data,
                                const SurfaceField& f, double t0)
{
    const double tt = t0 > 0 ? t0 : 1e-3 * data.min_curv_radius;
    const double Ep1 = energy_of(offset_surface(grid, data, f, tt));
    const double Em1 = energy_of(offset_surface(grid, data, f, -tt));
    const double Ep2 = energy_of(offset_surface(grid, data, f, tt / 2.0));
    const double Em2 = energy_of(offset_surface(grid, data, f, -tt / 2.0));

    FdVariation out;
    out.level_t0 = (Ep1 - Em1) / (2.0 * tt);
    out.level_t0_half = (Ep2 - Em2) / tt;
    out.estimate = (4.0 * out.level_t0_half - out.level_t0) / 3.0;
    out.error_indicator = std::abs(out.level_t0_half - out.level_t0);
    return out;
}

} // namespace syv
