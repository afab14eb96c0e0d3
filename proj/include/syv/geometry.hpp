#pragma once

#include "syv/expr.hpp"
#include "syv/grid.hpp"

#include <optional>
#include <vector>

namespace syv {

// How to pick the inward unit normal.
//  - AutoInward: closed surface in a flat chart; the global divergence-theorem
//    sign test selects the normal pointing into the enclosed region.
//  - TowardPoint: normal points toward a reference chart point (used for
//    geodesic spheres in the spherical chart, where "enclosed" is ambiguous).
//  - ParametricPlus/Minus: explicit sign on the parametric cross normal.
struct OrientationSpec {
    enum class Mode { AutoInward, AutoOutward, TowardPoint, ParametricPlus, ParametricMinus };
    Mode mode = Mode::AutoInward;
    AVec point;
};

struct HypersurfaceData {
    int n = 2;
    std::size_t N = 0;

    std::vector<SMat> h, hinv, L;
    std::vector<double> H;             // h^{ij} L_{ij}
    std::vector<double> L2;            // |L|^2
    std::vector<double> Lo2;           // |trace-free part|^2
    std::vector<double> R;             // intrinsic scalar curvature
    std::vector<double> sqrt_det_h;
    std::vector<double> dA;            // sqrt(det h) * parameter quadrature weight
    std::vector<AVec> normal;          // inward unit normal, chart components
    std::vector<AVec> normal_euc;      // Euclidean-unit normal (= normal on flat routes)

    // ambient curvature data restricted to the surface
    std::vector<double> rbar;          // ambient scalar curvature
    std::vector<double> rbar_nn;       // h^{ij} Rbar_{0i0j}
    std::vector<SMat> rbar_0i0j;       // normal-normal curvature matrix
    std::vector<double> amb_trace;     // h^{ij} h^{kl} Rbar_{ikjl}
    std::vector<double> schouten_tr;   // h^{ij} Pbar_{ij} (n >= 2)
    std::vector<std::array<double, 2>> conf_grad; // tangential d(omega), conformal routes

    double min_curv_radius = 0.0;      // 1 / max |principal curvature|
};

SurfaceGrid build_surface(const AmbientSpec& ambient, const std::vector<ExprAst>& embedding,
                          const GridSpec& spec);

HypersurfaceData fundamental_forms(const SurfaceGrid& grid, const AmbientSpec& ambient,
                                   const OrientationSpec& orient);

// R = (ambient double trace of Rm over tangents) - |L|^2 + H^2.
std::vector<double> intrinsic_scalar(const HypersurfaceData& data, const AmbientSpec& ambient);

// Fixed-order compensated quadrature of field * dA.
double surface_integrate(const std::vector<double>& field, const HypersurfaceData& data);

// Laplace-Beltrami of a node field, 4th order: covariant form
// h^{ij}(f_{,ij} - Gamma^k_{ij} f_{,k}) with exact Christoffel symbols from
// the embedding jets (plus the conformal correction on conformal routes).
std::vector<double> tangential_laplacian(const SurfaceGrid& grid, const HypersurfaceData& data,
                                         const std::vector<double>& f);

// Flux-form variant with a caller-supplied metric (per-node), e.g. the
// collar metric h_r at a fixed r > 0; the signed area density makes the
// v-flux extend across a pole with parity +1.
std::vector<double> tangential_laplacian_metric(const SurfaceGrid& grid,
                                                const std::vector<SMat>& h,
                                                const std::vector<double>& f);

struct EulerChar {
    int chi;
    double residual;
};
EulerChar euler_characteristic(const HypersurfaceData& data);

} // namespace syv
