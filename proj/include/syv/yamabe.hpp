#pragma once

#include "syv/collar.hpp"

#include <optional>
#include <vector>

namespace syv {

// Coefficients of the defining-function expansion u = r + r^2 phi with
// phi = phi_0 + phi_1 r + ... + phi_{n-1} r^{n-1} + L r^n log r. The smooth
// coefficient at order n is unconstrained and fixed to zero.
struct YamabeExpansion {
    int n = 2;
    std::size_t N = 0;
    std::vector<std::vector<double>> phi; // phi[k][node], k = 0..n-1
    std::vector<double> obstruction;      // per node

    // u^{(k)} = phi_{k-2} for 2 <= k <= n+1.
    double u_coef(int k, std::size_t node) const { return phi.at(k - 2)[node]; }
};

enum class YamabeMode { Grid, Homogeneous };

// Order-by-order solve of the constant-scalar-curvature equation for phi.
// The r^k residual coefficient carries the indicial factor (k+2)(k-n); at
// k = n that factor vanishes and the obstruction enters through the log
// slot, whose non-log indicial output is (n+2).
//
// Grid mode includes the tangential term that contributes at order n for
// n <= 2 (the Laplacian of phi_0 in the induced metric); homogeneous mode
// requires node-wise constant data and drops all tangential terms.
YamabeExpansion solve_yamabe(const CollarJets& jets, const HypersurfaceData& data,
                             const SurfaceGrid* grid, YamabeMode mode);

// Closed forms: phi_0 = -H/(2n) and, for n >= 2, phi_1 by two routes that
// must agree identically (the normal-normal curvature route and the
// intrinsic-data route).
struct ClosedFormPhis {
    std::vector<double> phi0;
    std::vector<double> phi1;        // intrinsic-data route
    std::vector<double> phi1_alt;    // normal-normal curvature route
};
ClosedFormPhis closed_form_phis(const HypersurfaceData& data, int n);

// Numerically evaluate the scalar curvature of u^{-2} gbar along collar
// normals at sample radii and fit |R_g + n(n+1)| ~ C r^p log r.
struct ResidualScan {
    bool exact = false;          // residual at noise floor at every sample
    double exponent = 0.0;       // fitted p (meaningless when exact)
    double max_residual = 0.0;
    std::vector<double> samples; // r values
    std::vector<double> residuals;
};
ResidualScan residual_scan(const YamabeExpansion& exp, const CollarJets& jets,
                           const HypersurfaceData& data, const SurfaceGrid* grid,
                           const std::vector<double>& r_samples);

// Startup self-test: linearization of the equation applied to r^k produces
// (k+2)(k-n) at order k, and applied to r^n log r produces (n+2) in the
// non-log slot and 0 in the log slot. Throws on any failure.
void verify_indicial_identities(int max_n = 6);

// Change of the order-n residual coefficient when the unconstrained smooth
// coefficient phi_n is perturbed; its indicial factor vanishes, so the
// returned value is roundoff.
double gauge_independence_residual(const YamabeExpansion& exp, const CollarJets& jets,
                                   std::size_t node, double perturbation);

} // namespace syv
