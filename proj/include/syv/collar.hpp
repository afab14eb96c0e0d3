#pragma once

#include "syv/geometry.hpp"
#include "syv/series.hpp"

#include <vector>

namespace syv {

// Per-node r-jets of the geodesic collar family h_r (derivative jets
// d^m/dr^m h|_{r=0}) plus ambient scalar-curvature jets along the normal
// geodesic and the normal-normal curvature trace at r = 0.
struct CollarJets {
    int n = 2;
    int K = 4;
    std::size_t N = 0;

    std::vector<SMat> hj;        // N*(K+1), node-major: hj[node*(K+1)+m]
    std::vector<double> rbar;    // N*n, jets m = 0..n-1 of Rbar along the geodesic
    std::vector<double> rbar_nn; // h^{ij} Rbar_{0i0j} at r = 0

    const SMat& h_jet(std::size_t node, int m) const { return hj[node * (K + 1) + m]; }
    SMat& h_jet(std::size_t node, int m) { return hj[node * (K + 1) + m]; }

    // Taylor series h_r = sum h^{(m)}/m! r^m at one node.
    MatrixSeries taylor(std::size_t node, int order) const;
    // Rbar along the geodesic as a series (orders >= n truncated to zero).
    LogSeries rbar_series(std::size_t node, int order) const;
};

// Exact polynomial collar of a flat ambient: h_r = h - 2rL + r^2 L h^{-1} L.
CollarJets euclidean_collar(const HypersurfaceData& data, int K);

// Tube-formula collar of a space form: with S the shape operator and
// C_c(r) = cos(sqrt(c) r), S_c(r) = sin(sqrt(c) r)/sqrt(c) (hyperbolic
// analogues for c < 0),
//   h_r = C_c^2 h - 2 C_c S_c L + S_c^2 L h^{-1} L.
CollarJets spaceform_collar(const HypersurfaceData& data, double c, int K);

// Collar of a conformally flat ambient by per-node geodesic integration of
// e^{2 omega} delta with first-order variations, sampled at r = +-delta,
// +-2 delta, +-4 delta and fitted by Richardson-extrapolated differences.
CollarJets numeric_collar(const AmbientSpec& ambient, const SurfaceGrid& grid,
                          const HypersurfaceData& data, int K, double delta_r = 0.0);

// Residuals of the two stated identities h' = -2L and
// h'' = -2 Rbar_{0i0j} + 2 L_{ik} L_j{}^k.
struct CollarReport {
    double res1 = 0.0;
    double res2 = 0.0;
    std::size_t worst_node = 0;
    double tol = 0.0;
    bool pass = false;
};
CollarReport collar_consistency_check(const CollarJets& jets, const HypersurfaceData& data,
                                      double tol);

} // namespace syv
