#include "syv/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace syv {

void GridSpec::validate() const
{
    if (n != 1 && n != 2)
        throw std::invalid_argument("grid: intrinsic dimension must be 1 or 2");
    if (nu < 16)
        throw std::invalid_argument("grid: nu must be >= 16");
    if (n == 2 && nv < 16)
        throw std::invalid_argument("grid: nv must be >= 16");
    if (n == 1 && topo != Topology::Circle)
        throw std::invalid_argument("grid: n = 1 needs circle topology");
    if (n == 2 && topo == Topology::Circle)
        throw std::invalid_argument("grid: n = 2 needs torus or sphere topology");
    if (topo == Topology::Sphere && nu % 2 != 0)
        throw std::invalid_argument("grid: sphere topology needs even nu for the pole rule");
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        // Initial guess, then Newton on P_n.
        double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15)
                break;
        }
        x[k] = t;
        w[k] = 2.0 / ((1.0 - t * t) * pp * pp);
    }
}

void fd_weights(double x0, const double* x, int nd, int m, double* w)
{
    // Fornberg recursion for derivative orders 0..m.
    std::vector<double> c(static_cast<std::size_t>(nd) * (m + 1), 0.0);
    auto C = [&](int i, int k) -> double& {
        return c[static_cast<std::size_t>(i) * (m + 1) + k];
    };
    double c1 = 1.0;
    double c4 = x[0] - x0;
    C(0, 0) = 1.0;
    for (int i = 1; i < nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    for (int k = 0; k <= m; ++k)
        for (int i = 0; i < nd; ++i)
            w[static_cast<std::size_t>(k) * nd + i] = C(i, k);
}

void SurfaceGrid::build_nodes()
{
    spec.validate();
    const int nu = spec.nu;
    u.resize(nu);
    for (int i = 0; i < nu; ++i)
        u[i] = 2.0 * M_PI * i / nu;

    if (spec.n == 1) {
        v.clear();
        wquad.assign(nu, 2.0 * M_PI / nu);
        return;
    }

    const int nv = spec.nv;
    v.resize(nv);
    wquad.assign(static_cast<std::size_t>(nu) * nv, 0.0);

    if (spec.topo == Topology::Torus) {
        for (int j = 0; j < nv; ++j)
            v[j] = 2.0 * M_PI * j / nv;
        const double w0 = (2.0 * M_PI / nu) * (2.0 * M_PI / nv);
        for (auto& x : wquad)
            x = w0;
    } else {
        // Gauss-Legendre in t = cos(v); the Newton sweep produces t descending,
        // so v = arccos(t) comes out ascending in (0, pi).
        std::vector<double> t, w;
        gauss_legendre(nv, t, w);
        std::vector<double> wv(nv);
        for (int k = 0; k < nv; ++k) {
            v[k] = std::acos(t[k]);
            wv[k] = w[k] / std::sqrt(1.0 - t[k] * t[k]); // dv weight = w_t / sin v
        }
        for (int j = 0; j < nv; ++j)
            for (int i = 0; i < nu; ++i)
                wquad[idx(i, j)] = (2.0 * M_PI / nu) * wv[j];
    }

    // v-direction 5-point stencils.
    vstencil.assign(nv, VStencil{});
    for (int j = 0; j < nv; ++j) {
        std::array<double, 5> xs{};
        VStencil st;
        for (int s = -2; s <= 2; ++s) {
            int jj = j + s;
            int slot = s + 2;
            if (spec.topo == Topology::Torus) {
                double coord = 0.0;
                int row = ((jj % nv) + nv) % nv;
                coord = v[row] + 2.0 * M_PI * std::floor(double(jj) / nv);
                st.row[slot] = row;
                st.reflected[slot] = false;
                xs[slot] = coord;
            } else {
                if (jj < 0) {
                    st.row[slot] = -1 - jj;
                    st.reflected[slot] = true;
                    xs[slot] = -v[-1 - jj];
                } else if (jj >= nv) {
                    st.row[slot] = 2 * nv - 1 - jj;
                    st.reflected[slot] = true;
                    xs[slot] = 2.0 * M_PI - v[2 * nv - 1 - jj];
                } else {
                    st.row[slot] = jj;
                    st.reflected[slot] = false;
                    xs[slot] = v[jj];
                }
            }
        }
        std::array<double, 15> wall{};
        fd_weights(v[j], xs.data(), 5, 2, wall.data());
        for (int s5 = 0; s5 < 5; ++s5) {
            st.w1[s5] = wall[5 + s5];
            st.w2[s5] = wall[10 + s5];
        }
        vstencil[j] = st;
    }
}

std::vector<double> grid_partial(const SurfaceGrid& g, const std::vector<double>& f,
                                 int dir, double parity)
{
    const int nu = g.spec.nu;
    std::vector<double> out(f.size(), 0.0);

    if (dir == 0) {
        const double h = 2.0 * M_PI / nu;
        const int nrows = g.spec.n == 1 ? 1 : g.spec.nv;
        for (int j = 0; j < nrows; ++j) {
            const std::size_t base = static_cast<std::size_t>(j) * nu;
            for (int i = 0; i < nu; ++i) {
                const auto at = [&](int k) { return f[base + ((k % nu) + nu) % nu]; };
                out[base + i] =
                    (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
            }
        }
        return out;
    }

    if (g.spec.n == 1)
        throw std::invalid_argument("grid_partial: no v direction on a curve grid");

    const int nv = g.spec.nv;
    const int half = nu / 2;
    for (int j = 0; j < nv; ++j) {
        const auto& st = g.vstencil[j];
        for (int i = 0; i < nu; ++i) {
            double acc = 0.0;
            for (int s = 0; s < 5; ++s) {
                int ii = i;
                double sign = 1.0;
                if (st.reflected[s]) {
                    ii = (i + half) % nu;
                    sign = parity;
                }
                acc += st.w1[s] * sign * f[g.idx(ii, st.row[s])];
            }
            out[g.idx(i, j)] = acc;
        }
    }
    return out;
}

std::vector<double> grid_partial2(const SurfaceGrid& g, const std::vector<double>& f,
                                  int dir, double parity)
{
    const int nu = g.spec.nu;
    std::vector<double> out(f.size(), 0.0);

    if (dir == 0) {
        const double h = 2.0 * M_PI / nu;
        const int nrows = g.spec.n == 1 ? 1 : g.spec.nv;
        for (int j = 0; j < nrows; ++j) {
            const std::size_t base = static_cast<std::size_t>(j) * nu;
            for (int i = 0; i < nu; ++i) {
                const auto at = [&](int k) { return f[base + ((k % nu) + nu) % nu]; };
                out[base + i] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) +
                                 16.0 * at(i - 1) - at(i - 2)) /
                                (12.0 * h * h);
            }
        }
        return out;
    }

    if (g.spec.n == 1)
        throw std::invalid_argument("grid_partial2: no v direction on a curve grid");

    const int nv = g.spec.nv;
    const int half = nu / 2;
    for (int j = 0; j < nv; ++j) {
        const auto& st = g.vstencil[j];
        for (int i = 0; i < nu; ++i) {
            double acc = 0.0;
            for (int s = 0; s < 5; ++s) {
                int ii = i;
                double sign = 1.0;
                if (st.reflected[s]) {
                    ii = (i + half) % nu;
                    sign = parity;
                }
                acc += st.w2[s] * sign * f[g.idx(ii, st.row[s])];
            }
            out[g.idx(i, j)] = acc;
        }
    }
    return out;
}

} // namespace syv
