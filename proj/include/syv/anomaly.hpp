#pragma once

#include "syv/volume.hpp"

namespace syv {

// Jets of a conformal factor omega at the surface (r = 0): value, first and
// second normal derivatives, tangential gradient and its h-norm squared, and
// the derived distance-rescaling jets Upsilon and the b-expansion
// coefficients of the inverse relation r = rhat b(x, rhat).
struct ConformalJets {
    std::size_t N = 0;
    std::vector<double> w, wr, wrr, wi2;
    std::vector<std::array<double, 2>> wi; // coordinate tangential gradient
    std::vector<double> ups0, upsr, upsrr;
    std::vector<std::array<double, 3>> b;  // b0, b1, b2
};

// omega may use the chart coordinates (x[, y[, z]]) and r; normal derivatives
// follow the inward normal geodesic of the ambient.
ConformalJets conformal_jets(const ExprAst& omega, const SurfaceGrid& grid,
                             const HypersurfaceData& data, const AmbientSpec& ambient);

// Constant term of the volume-difference expansion
//   int [ -1/2 eps^{-2} b^{-2} - eps^{-1} v1 b^{-1} + v2 log b ],
// with the epsilon-coefficients of b^{-1}, b^{-2} derived by series
// arithmetic and cross-checked against their stated closed forms.
double anomaly_route_b(const ConformalJets& cj, const VolumeData& vol,
                       const HypersurfaceData& data);

// Direct quadrature of the closed-form n = 2 anomaly
//   -(1/8) int [ 2(|Lo|^2 - R) w - H w_r + (1/3)(4 w_rr - 4 w_i w^i + w_r^2) ].
double anomaly_route_closed(const ConformalJets& cj, const HypersurfaceData& data);

// Minimal-area analogue, reported for display only:
//   (1/8) int [ (H^2 + 4 h^{ij} Pbar_{ij}) w - 2 H w_r + 2 w_i w^i ].
double minimal_area_anomaly(const ConformalJets& cj, const HypersurfaceData& data);

} // namespace syv
