#include "syv/geometry.hpp"

#include "syv/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace syv {

namespace {

AVec cross3(const AVec& a, const AVec& b)
{
    AVec r(3);
    r[0] = a[1] * b[2] - a[2] * b[1];
    r[1] = a[2] * b[0] - a[0] * b[2];
    r[2] = a[0] * b[1] - a[1] * b[0];
    return r;
}

// Generalized cross product in R^4: vector orthogonal to a, b, c.
AVec cross4(const AVec& a, const AVec& b, const AVec& c)
{
    AVec r(4);
    for (int k = 0; k < 4; ++k) {
        Eigen::Matrix3d M;
        int col = 0;
        for (int m = 0; m < 4; ++m) {
            if (m == k) continue;
            M(0, col) = a[m];
            M(1, col) = b[m];
            M(2, col) = c[m];
            ++col;
        }
        r[k] = ((k % 2) == 0 ? 1.0 : -1.0) * M.determinant();
    }
    return r;
}

std::vector<double> eval_point(const ExprAst& e, double uu, double vv)
{
    std::vector<double> pt;
    for (const auto& name : e.variables()) {
        if (name == "u") pt.push_back(uu);
        else if (name == "v") pt.push_back(vv);
        else throw ExprError("embedding expressions may only use u, v", 0);
    }
    return pt;
}

} // namespace

SurfaceGrid build_surface(const AmbientSpec& ambient, const std::vector<ExprAst>& embedding,
                          const GridSpec& spec)
{
    spec.validate();
    const int cd = ambient.chart_dim();
    if (static_cast<int>(embedding.size()) != cd)
        throw std::invalid_argument("embedding needs " + std::to_string(cd) +
                                    " component expressions");
    if (spec.n + 1 != ambient.dim)
        throw std::invalid_argument("ambient dimension must be n+1");

    SurfaceGrid g;
    g.spec = spec;
    g.chart_dim = cd;
    g.build_nodes();

    const std::size_t N = spec.n == 1 ? static_cast<std::size_t>(spec.nu)
                                      : static_cast<std::size_t>(spec.nu) * spec.nv;
    g.pos.assign(N, AVec::Zero(cd));
    g.d1u.assign(N, AVec::Zero(cd));
    g.d2uu.assign(N, AVec::Zero(cd));
    if (spec.n == 2) {
        g.d1v.assign(N, AVec::Zero(cd));
        g.d2uv.assign(N, AVec::Zero(cd));
        g.d2vv.assign(N, AVec::Zero(cd));
    }

    par::for_each(N, [&](std::size_t node) {
        const int i = static_cast<int>(node % spec.nu);
        const int j = static_cast<int>(node / spec.nu);
        const double uu = g.u[i];
        const double vv = spec.n == 2 ? g.v[j] : 0.0;
        for (int comp = 0; comp < cd; ++comp) {
            const ExprAst& e = embedding[comp];
            const JetValue jet = e.eval_jet(eval_point(e, uu, vv));
            const int iu = e.var_index("u");
            const int iv = e.var_index("v");
            g.pos[node][comp] = jet.v;
            g.d1u[node][comp] = iu >= 0 ? jet.d[iu] : 0.0;
            g.d2uu[node][comp] = iu >= 0 ? jet.d2(iu, iu) : 0.0;
            if (spec.n == 2) {
                g.d1v[node][comp] = iv >= 0 ? jet.d[iv] : 0.0;
                g.d2uv[node][comp] = (iu >= 0 && iv >= 0) ? jet.d2(iu, iv) : 0.0;
                g.d2vv[node][comp] = iv >= 0 ? jet.d2(iv, iv) : 0.0;
            }
        }
    });

    // Immersion check: Jacobian rank n at every node.
    double scale = 0.0;
    for (std::size_t k = 0; k < N; ++k)
        scale = std::max(scale, g.d1u[k].squaredNorm() +
                                    (spec.n == 2 ? g.d1v[k].squaredNorm() : 0.0));
    for (std::size_t k = 0; k < N; ++k) {
        double cr2;
        if (spec.n == 1) {
            cr2 = g.d1u[k].squaredNorm();
        } else {
            SMat gram(2, 2);
            gram(0, 0) = g.d1u[k].dot(g.d1u[k]);
            gram(0, 1) = gram(1, 0) = g.d1u[k].dot(g.d1v[k]);
            gram(1, 1) = g.d1v[k].dot(g.d1v[k]);
            cr2 = gram.determinant();
        }
        if (!(cr2 > 1e-20 * std::max(1.0, scale * scale)))
            throw std::runtime_error("build_surface: rank-deficient immersion at node " +
                                     std::to_string(k));
    }

    // Spherical chart: nodes must lie on the model sphere.
    if (ambient.spherical_chart()) {
        const double r2 = 1.0 / ambient.c;
        for (std::size_t k = 0; k < N; ++k)
            if (std::abs(g.pos[k].squaredNorm() - r2) > 1e-9 * r2)
                throw std::runtime_error(
                    "build_surface: embedding leaves the model sphere |X|^2 = 1/c");
    }

    // Sphere topology: the surface must close at both poles.
    if (spec.topo == Topology::Sphere) {
        const double eps = 1e-6;
        for (double vpole : {eps, M_PI - eps}) {
            AVec first = AVec::Zero(cd);
            double spread = 0.0, diam = 0.0;
            for (int i = 0; i < 8; ++i) {
                const double uu = 2.0 * M_PI * i / 8.0;
                AVec p = AVec::Zero(cd);
                for (int compi = 0; compi < cd; ++compi)
                    p[compi] = embedding[compi].eval(eval_point(embedding[compi], uu, vpole));
                if (i == 0) first = p;
                spread = std::max(spread, (p - first).norm());
                diam = std::max(diam, p.norm());
            }
            if (spread > 1e-3 * std::max(1.0, diam))
                throw std::runtime_error("build_surface: surface does not close at a pole");
        }
    }

    return g;
}

namespace {

// Cross-product normal before orientation; length carries the area density.
AVec parametric_normal(const SurfaceGrid& g, const AmbientSpec& ambient, std::size_t k)
{
    if (g.spec.n == 1) {
        if (ambient.spherical_chart())
            return cross3(g.pos[k] * std::sqrt(ambient.c), g.d1u[k]);
        AVec r(2);
        r[0] = -g.d1u[k][1];
        r[1] = g.d1u[k][0];
        return r;
    }
    if (ambient.spherical_chart())
        return cross4(g.pos[k] * std::sqrt(ambient.c), g.d1u[k], g.d1v[k]);
    return cross3(g.d1u[k], g.d1v[k]);
}

} // namespace

HypersurfaceData fundamental_forms(const SurfaceGrid& grid, const AmbientSpec& ambient,
                                   const OrientationSpec& orient)
{
    const int n = grid.spec.n;
    const std::size_t N = grid.nodes();
    const bool conf = ambient.conformal_route();
    const bool sph = ambient.spherical_chart();

    HypersurfaceData d;
    d.n = n;
    d.N = N;
    d.h.assign(N, SMat::Zero(n, n));
    d.hinv.assign(N, SMat::Zero(n, n));
    d.L.assign(N, SMat::Zero(n, n));
    d.H.assign(N, 0.0);
    d.L2.assign(N, 0.0);
    d.Lo2.assign(N, 0.0);
    d.R.assign(N, 0.0);
    d.sqrt_det_h.assign(N, 0.0);
    d.dA.assign(N, 0.0);
    d.normal.assign(N, AVec::Zero(grid.chart_dim));
    d.normal_euc.assign(N, AVec::Zero(grid.chart_dim));
    d.rbar.assign(N, 0.0);
    d.rbar_nn.assign(N, 0.0);
    d.rbar_0i0j.assign(N, SMat::Zero(n, n));
    d.amb_trace.assign(N, 0.0);
    d.schouten_tr.assign(N, 0.0);
    d.conf_grad.assign(N, {0.0, 0.0});

    // Resolve the orientation sign relative to the parametric normal.
    std::vector<double> sign(N, 1.0);
    switch (orient.mode) {
    case OrientationSpec::Mode::ParametricPlus:
        break;
    case OrientationSpec::Mode::ParametricMinus:
        for (auto& s : sign) s = -1.0;
        break;
    case OrientationSpec::Mode::TowardPoint: {
        for (std::size_t k = 0; k < N; ++k) {
            AVec t;
            if (sph) {
                const AVec& X = grid.pos[k];
                t = orient.point - (orient.point.dot(X) / X.squaredNorm()) * X;
            } else {
                t = orient.point - grid.pos[k];
            }
            const AVec nc = parametric_normal(grid, ambient, k);
            const double dp = nc.dot(t);
            if (std::abs(dp) < 0.1 * nc.norm() * t.norm())
                throw std::runtime_error("fundamental_forms: normal selector inconsistent "
                                         "(surface tangent to the reference direction)");
            sign[k] = dp > 0 ? 1.0 : -1.0;
        }
        break;
    }
    case OrientationSpec::Mode::AutoInward:
    case OrientationSpec::Mode::AutoOutward: {
        if (sph)
            throw std::runtime_error("fundamental_forms: auto orientation is ambiguous in the "
                                     "spherical chart; use toward-point");
        // Divergence theorem: integral of <X, N_out> over a closed surface is
        // (n+1) Vol > 0. Flip so the chosen normal points inward.
        double flux = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            const AVec nc = parametric_normal(grid, ambient, k);
            flux += grid.pos[k].dot(nc) * grid.wquad[k];
        }
        double s = flux > 0 ? -1.0 : 1.0;
        if (orient.mode == OrientationSpec::Mode::AutoOutward) s = -s;
        for (auto& x : sign) x = s;
        break;
    }
    }

    par::for_each(N, [&](std::size_t k) {
        const AVec Xu = grid.d1u[k];
        const AVec Xv = n == 2 ? grid.d1v[k] : AVec();

        // Euclidean pieces of the chart.
        SMat he(n, n);
        he(0, 0) = Xu.dot(Xu);
        if (n == 2) {
            he(0, 1) = he(1, 0) = Xu.dot(Xv);
            he(1, 1) = Xv.dot(Xv);
        }
        AVec nc = parametric_normal(grid, ambient, k);
        const AVec ne = sign[k] * nc / nc.norm();

        SMat Le(n, n);
        Le(0, 0) = grid.d2uu[k].dot(ne);
        if (n == 2) {
            Le(0, 1) = Le(1, 0) = grid.d2uv[k].dot(ne);
            Le(1, 1) = grid.d2vv[k].dot(ne);
        }

        double ambient_double_trace = 0.0;

        if (conf) {
            const OmegaJet oj = ambient.omega_jets(grid.pos[k]);
            const double ew = std::exp(oj.w);
            const double dnw = oj.g.dot(ne);
            for (int i = 0; i < n; ++i)
                d.conf_grad[k][i] = oj.g.dot(i == 0 ? Xu : Xv);

            d.h[k] = ew * ew * he;
            d.L[k] = ew * (Le - dnw * he);
            d.normal_euc[k] = ne;
            d.normal[k] = ne / ew;

            d.rbar[k] = conformal_scalar(oj, n + 1);
            const AVec nu_bar = d.normal[k];
            const std::array<AVec, 2> T = {Xu, Xv};
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double val = conformal_rm(oj, nu_bar, T[i], nu_bar, T[j]);
                    d.rbar_0i0j[k](i, j) = val;
                    d.rbar_0i0j[k](j, i) = val;
                }
            d.hinv[k] = d.h[k].inverse();
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < n; ++jj)
                    for (int kk = 0; kk < n; ++kk)
                        for (int l = 0; l < n; ++l)
                            ambient_double_trace += d.hinv[k](i, jj) * d.hinv[k](kk, l) *
                                                    conformal_rm(oj, T[i], T[kk], T[jj], T[l]);
            if (n >= 2) {
                double ptr = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int jj = 0; jj < n; ++jj)
                        ptr += d.hinv[k](i, jj) * conformal_schouten(oj, n + 1, T[i], T[jj]);
                d.schouten_tr[k] = ptr;
            }
        } else {
            d.h[k] = he;
            d.L[k] = Le;
            d.hinv[k] = he.inverse();
            d.normal_euc[k] = ne;
            d.normal[k] = ne;
            if (sph) {
                const double c = ambient.c;
                d.rbar[k] = (n + 1) * n * c;
                d.rbar_0i0j[k] = c * he;
                ambient_double_trace = c * n * (n - 1);
                d.schouten_tr[k] = 0.5 * c * n;
            }
        }

        const SMat mixed = d.hinv[k] * d.L[k];
        d.H[k] = mixed.trace();
        d.L2[k] = (mixed * mixed).trace();
        d.Lo2[k] = d.L2[k] - d.H[k] * d.H[k] / n;
        d.rbar_nn[k] = (d.hinv[k] * d.rbar_0i0j[k]).trace();
        d.amb_trace[k] = ambient_double_trace;
        d.R[k] = ambient_double_trace - d.L2[k] + d.H[k] * d.H[k];

        const double det = d.h[k].determinant();
        if (!(det > 0.0))
            throw std::runtime_error("fundamental_forms: induced metric not positive definite");
        d.sqrt_det_h[k] = std::sqrt(det);
        d.dA[k] = d.sqrt_det_h[k] * grid.wquad[k];
    });

    double kmax = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const SMat mixed = d.hinv[k] * d.L[k];
        if (n == 1) {
            kmax = std::max(kmax, std::abs(mixed(0, 0)));
        } else {
            const double tr = mixed.trace(), det = mixed.determinant();
            const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
            kmax = std::max({kmax, std::abs(tr / 2.0 + disc), std::abs(tr / 2.0 - disc)});
        }
    }
    d.min_curv_radius = kmax > 0 ? 1.0 / kmax : 1e30;

    return d;
}

std::vector<double> intrinsic_scalar(const HypersurfaceData& data, const AmbientSpec& ambient)
{
    const int n = data.n;
    std::vector<double> R(data.N, 0.0);
    for (std::size_t k = 0; k < data.N; ++k) {
        double amb = data.amb_trace[k];
        if (ambient.euclidean_route())
            amb = 0.0;
        else if (ambient.kind == AmbientSpec::Kind::SpaceForm && ambient.c > 0.0)
            amb = ambient.c * n * (n - 1);
        R[k] = amb - data.L2[k] + data.H[k] * data.H[k];
    }
    return R;
}

double surface_integrate(const std::vector<double>& field, const HypersurfaceData& data)
{
    if (field.size() != data.N)
        throw std::invalid_argument("surface_integrate: field size mismatch");
    std::vector<double> terms(data.N);
    for (std::size_t k = 0; k < data.N; ++k)
        terms[k] = field[k] * data.dA[k];
    return par::accumulate(terms);
}

std::vector<double> tangential_laplacian_metric(const SurfaceGrid& grid,
                                                const std::vector<SMat>& h,
                                                const std::vector<double>& f)
{
    const int n = grid.spec.n;
    const std::size_t N = grid.nodes();

    if (n == 1) {
        // (1/W) d/du ( W h^{uu} f_u ), W = sqrt(h_uu)
        std::vector<double> fu = grid_partial(grid, f, 0);
        std::vector<double> G(N);
        std::vector<double> W(N);
        for (std::size_t k = 0; k < N; ++k) {
            W[k] = std::sqrt(h[k](0, 0));
            G[k] = W[k] * fu[k] / h[k](0, 0);
        }
        std::vector<double> dG = grid_partial(grid, G, 0);
        std::vector<double> out(N);
        for (std::size_t k = 0; k < N; ++k)
            out[k] = dG[k] / W[k];
        return out;
    }

    std::vector<double> fu = grid_partial(grid, f, 0, 1.0);
    std::vector<double> fv = grid_partial(grid, f, 1, 1.0);

    std::vector<double> Gu(N), Gv(N), W(N);
    par::for_each(N, [&](std::size_t k) {
        const SMat hi = h[k].inverse();
        W[k] = std::sqrt(h[k].determinant());
        Gu[k] = W[k] * (hi(0, 0) * fu[k] + hi(0, 1) * fv[k]);
        Gv[k] = W[k] * (hi(1, 0) * fu[k] + hi(1, 1) * fv[k]);
    });

    // With the signed area density, the v-flux continues across a pole with
    // parity +1 (and u-stencils never cross a pole).
    std::vector<double> dGu = grid_partial(grid, Gu, 0, 1.0);
    std::vector<double> dGv = grid_partial(grid, Gv, 1, 1.0);

    std::vector<double> out(N);
    for (std::size_t k = 0; k < N; ++k)
        out[k] = (dGu[k] + dGv[k]) / W[k];
    return out;
}

std::vector<double> tangential_laplacian(const SurfaceGrid& grid, const HypersurfaceData& data,
                                         const std::vector<double>& f)
{
    const int n = grid.spec.n;
    const std::size_t N = grid.nodes();

    const std::vector<double> fu = grid_partial(grid, f, 0);
    const std::vector<double> fuu = grid_partial2(grid, f, 0);
    std::vector<double> fv, fvv, fuv;
    if (n == 2) {
        fv = grid_partial(grid, f, 1);
        fvv = grid_partial2(grid, f, 1);
        fuv = grid_partial(grid, fu, 1);
    }

    std::vector<double> out(N, 0.0);
    par::for_each(N, [&](std::size_t k) {
        const std::array<AVec, 2> T = {grid.d1u[k], n == 2 ? grid.d1v[k] : AVec()};
        const std::array<AVec, 3> X2 = {grid.d2uu[k], n == 2 ? grid.d2uv[k] : AVec(),
                                        n == 2 ? grid.d2vv[k] : AVec()};
        // Euclidean-part Christoffels of the induced metric: he^{kl} <X_ij, X_l>
        SMat he(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                he(i, j) = T[i].dot(T[j]);
        const SMat heinv = he.inverse();
        const int pair_of[2][2] = {{0, 1}, {1, 2}};
        double gamma[2][2][2]; // [k][i][j]
        for (int kk = 0; kk < n; ++kk)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l)
                        acc += heinv(kk, l) * X2[pair_of[i][j]].dot(T[l]);
                    gamma[kk][i][j] = acc;
                }
        // conformal correction Gamma += d^k_i psi_j + d^k_j psi_i - h_ij h^{kl} psi_l
        const std::array<double, 2> psi = data.conf_grad[k];
        for (int kk = 0; kk < n; ++kk)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double corr = 0.0;
                    if (kk == i) corr += psi[j];
                    if (kk == j) corr += psi[i];
                    double raise = 0.0;
                    for (int l = 0; l < n; ++l)
                        raise += heinv(kk, l) * psi[l];
                    corr -= he(i, j) * raise;
                    gamma[kk][i][j] += corr;
                }

        const double d1[2] = {fu[k], n == 2 ? fv[k] : 0.0};
        const double d2[2][2] = {{fuu[k], n == 2 ? fuv[k] : 0.0},
                                 {n == 2 ? fuv[k] : 0.0, n == 2 ? fvv[k] : 0.0}};
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double hess = d2[i][j];
                for (int kk = 0; kk < n; ++kk)
                    hess -= gamma[kk][i][j] * d1[kk];
                acc += data.hinv[k](i, j) * hess;
            }
        out[k] = acc;
    });
    return out;
}

EulerChar euler_characteristic(const HypersurfaceData& data)
{
    if (data.n != 2)
        throw std::invalid_argument("euler_characteristic needs n = 2");
    const double total = surface_integrate(data.R, data) / (4.0 * M_PI);
    EulerChar e;
    e.chi = static_cast<int>(std::lround(total));
    e.residual = std::abs(total - e.chi);
    if (e.residual > 0.01)
        throw std::runtime_error("euler_characteristic: residual too large (under-resolved)");
    return e;
}

} // namespace syv
