#pragma once

#include "syv/ambient.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace syv {

enum class Topology { Circle, Torus, Sphere };

struct GridSpec {
    int n = 2;            // intrinsic dimension, 1 or 2
    int nu = 64;
    int nv = 32;          // ignored for n = 1
    Topology topo = Topology::Sphere;

    void validate() const;
};

// Discretized parametric hypersurface with per-node embedding jets.
//
// Parameter layout: u uniform on [0, 2pi) in both periodic directions; for
// sphere topology v_j = arccos(t_j) with t_j the Gauss-Legendre nodes, so the
// polar rows exclude the poles and quadrature in the polar direction is
// Gauss-Legendre exact. Fields extend across a pole by the doubled-grid rule
// f(u, -v) = f(u + pi, v), which needs nu even.
struct SurfaceGrid {
    GridSpec spec;
    int chart_dim = 3;

    std::vector<double> u;        // nu values
    std::vector<double> v;        // nv values (empty for n = 1)
    std::vector<double> wquad;    // per-node parameter-space quadrature weight

    // per-node embedding jets; node index = j*nu + i (n = 1: just i)
    std::vector<AVec> pos;
    std::vector<AVec> d1u, d1v;
    std::vector<AVec> d2uu, d2uv, d2vv;

    std::size_t nodes() const { return pos.size(); }
    std::size_t idx(int i, int j) const
    {
        return static_cast<std::size_t>(j) * spec.nu + static_cast<std::size_t>(i);
    }

    // 5-point stencil in v, per row (Fornberg weights on the possibly
    // nonuniform polar nodes), first- and second-derivative weights.
    struct VStencil {
        std::array<int, 5> row;
        std::array<bool, 5> reflected; // ghost across a pole: shift u by pi
        std::array<double, 5> w1;
        std::array<double, 5> w2;
    };
    std::vector<VStencil> vstencil;

    void build_nodes(); // fills u, v, wquad, vstencil from spec
};

// 4th-order partial derivative of a per-node scalar field. dir 0 = u, 1 = v.
// `parity` is the sign the field picks up under the doubled-grid pole
// reflection (+1 for scalars, -1 for v-flux-like components).
std::vector<double> grid_partial(const SurfaceGrid& g, const std::vector<double>& f,
                                 int dir, double parity = 1.0);

// Second partial in one direction (5-point stencils).
std::vector<double> grid_partial2(const SurfaceGrid& g, const std::vector<double>& f,
                                  int dir, double parity = 1.0);

// Gauss-Legendre nodes/weights on (-1, 1).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Fornberg finite-difference weights for derivative orders 0..m at x0;
// w is (m+1) x nd, row-major by derivative order.
void fd_weights(double x0, const double* x, int nd, int m, double* w);

} // namespace syv
