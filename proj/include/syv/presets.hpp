#pragma once

#include "syv/geometry.hpp"

#include <string>

namespace syv {

// A ready-to-run surface: ambient, embedding expressions, grid, orientation.
struct SurfaceSetup {
    AmbientSpec ambient;
    std::vector<ExprAst> embedding;
    GridSpec grid;
    OrientationSpec orientation;
    std::string name;
};

// Named presets:
//   sphere(a)                 round sphere in R^3
//   ellipsoid(a,b,c)          in R^3
//   torus(R,a)                ring/tube radii in R^3
//   circle(a), ellipse(a,b)   curves in R^2
//   geodesic-sphere(c,rho)    polar radius rho in the space form of
//                             curvature c (c != 0)
SurfaceSetup preset_sphere(double a, int nu, int nv);
SurfaceSetup preset_ellipsoid(double a, double b, double c, int nu, int nv);
SurfaceSetup preset_torus(double R, double a, int nu, int nv);
SurfaceSetup preset_circle(double a, int nu);
SurfaceSetup preset_ellipse(double a, double b, int nu);
SurfaceSetup preset_geodesic_sphere(double c, double rho, int nu, int nv);

// Deterministic randomly perturbed sphere/torus plus a smooth conformal
// factor expression, for randomized verification fleets.
SurfaceSetup preset_random_surface(unsigned seed, int nu, int nv);
std::string random_omega_expr(unsigned seed);

struct BuiltSurface {
    SurfaceSetup setup;
    SurfaceGrid grid;
    HypersurfaceData data;
};
BuiltSurface build_preset(const SurfaceSetup& setup);

std::string format_double(double x);

} // namespace syv
