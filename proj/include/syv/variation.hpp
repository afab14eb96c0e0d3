#pragma once

#include "syv/yamabe.hpp"

#include <functional>

namespace syv {

// Scalar field on the surface with coordinate first/second partials.
struct SurfaceField {
    std::vector<double> val;
    std::vector<std::array<double, 2>> d1;
    std::vector<std::array<double, 3>> d2; // uu, uv, vv
};

// Evaluate an expression in (u, v) or in the chart coordinates (x, y, z)
// as a field on the surface, with tangential jets by the chain rule.
SurfaceField eval_surface_field(const ExprAst& f, const SurfaceGrid& grid);

// Normal offset Y = X + t f nu in a Euclidean ambient, reparametrized by the
// same grid. Embedding jets are exact except for the tangential derivative
// of the shape operator, which is taken by 4th-order grid differences; that
// term enters the offset's second fundamental form at order t^2 only.
SurfaceGrid offset_surface(const SurfaceGrid& grid, const HypersurfaceData& data,
                           const SurfaceField& f, double t);

// (n+2)(n-1) int f L dA.
double variation_rhs(const std::vector<double>& f, const YamabeExpansion& exp,
                     const HypersurfaceData& data);

// Richardson central difference of E under offsets +-t0, +-t0/2. `energy_of`
// runs the full pipeline on an offset grid and returns its energy.
struct FdVariation {
    double estimate = 0.0;
    double error_indicator = 0.0;
    double level_t0 = 0.0;
    double level_t0_half = 0.0;
};
FdVariation energy_variation_fd(const std::function<double(const SurfaceGrid&)>& energy_of,
                                const SurfaceGrid& grid, const HypersurfaceData& data,
                                const SurfaceField& f, double t0);

} // namespace syv
