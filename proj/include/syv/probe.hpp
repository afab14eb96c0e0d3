#pragma once

#include "syv/expr.hpp"

#include <string>
#include <vector>

namespace syv {

// Rotationally symmetric models with an exact constant-scalar-curvature
// defining function, used for end-to-end validation of the volume expansion.
//  - hyperbolic-ball: closed unit ball in R^3, u = (1 - |x|^2)/2, n = 2
//  - hyperbolic-disc: closed unit disc in R^2, u = (1 - |x|^2)/2, n = 1
struct ProbeModel {
    std::string id;
    int n = 2;
    ExprAst u;
    double radius = 1.0;
};

ProbeModel make_probe_model(const std::string& id);

// Checks R_{u^{-2} delta} = -n(n+1) at random interior points through the
// conformal-change formula evaluated with expression jets. Returns the worst
// residual.
double verify_probe_model(const ProbeModel& model, unsigned seed, int points = 100);

// Vol({r > eps}) = int_{|x| < radius - eps} u^{-(n+1)} dx by adaptive radial
// quadrature (the models are rotationally symmetric).
double probe_volume(const ProbeModel& model, double eps);

// Least squares on the basis {eps^{-n}, ..., eps^{-1}, log(1/eps), 1} with
// the power columns scaled by the mid-ladder epsilon for conditioning.
struct ExpansionFit {
    std::vector<double> c;   // c_0..c_{n-1}
    double energy = 0.0;     // log(1/eps) coefficient
    double V = 0.0;          // constant term
    double residual = 0.0;   // rms misfit
    double condition = 0.0;
};
ExpansionFit fit_expansion(const ProbeModel& model, const std::vector<double>& eps_samples);

std::vector<double> geometric_ladder(double lo, double hi, int count);

} // namespace syv
