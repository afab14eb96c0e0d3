#include "syv/presets.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace syv {

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::vector<ExprAst> parse_embedding(const std::vector<std::string>& comps,
                                     const std::vector<std::string>& vars)
{
    std::vector<ExprAst> out;
    out.reserve(comps.size());
    for (const auto& s : comps)
        out.push_back(ExprAst::parse(s, vars));
    return out;
}

} // namespace

SurfaceSetup preset_sphere(double a, int nu, int nv)
{
    return preset_ellipsoid(a, a, a, nu, nv);
}

SurfaceSetup preset_ellipsoid(double a, double b, double c, int nu, int nv)
{
    SurfaceSetup s;
    s.name = "ellipsoid";
    s.ambient = AmbientSpec::euclidean(3);
    const std::string A = format_double(a), B = format_double(b), C = format_double(c);
    s.embedding = parse_embedding({A + "*cos(u)*sin(v)", B + "*sin(u)*sin(v)", C + "*cos(v)"},
                                  {"u", "v"});
    s.grid = {2, nu, nv, Topology::Sphere};
    s.orientation.mode = OrientationSpec::Mode::AutoInward;
    return s;
}

SurfaceSetup preset_torus(double R, double a, int nu, int nv)
{
    SurfaceSetup s;
    s.name = "torus";
    s.ambient = AmbientSpec::euclidean(3);
    const std::string Rs = format_double(R), As = format_double(a);
    s.embedding = parse_embedding({"(" + Rs + " + " + As + "*cos(v))*cos(u)",
                                   "(" + Rs + " + " + As + "*cos(v))*sin(u)",
                                   As + "*sin(v)"},
                                  {"u", "v"});
    s.grid = {2, nu, nv, Topology::Torus};
    s.orientation.mode = OrientationSpec::Mode::AutoInward;
    return s;
}

SurfaceSetup preset_circle(double a, int nu)
{
    return preset_ellipse(a, a, nu);
}

SurfaceSetup preset_ellipse(double a, double b, int nu)
{
    SurfaceSetup s;
    s.name = "ellipse";
    s.ambient = AmbientSpec::euclidean(2);
    s.embedding = parse_embedding({format_double(a) + "*cos(u)", format_double(b) + "*sin(u)"},
                                  {"u"});
    s.grid = {1, nu, 0, Topology::Circle};
    s.orientation.mode = OrientationSpec::Mode::AutoInward;
    return s;
}

SurfaceSetup preset_geodesic_sphere(double c, double rho, int nu, int nv)
{
    SurfaceSetup s;
    s.name = "geodesic-sphere";
    s.ambient = AmbientSpec::space_form(3, c);
    s.grid = {2, nu, nv, Topology::Sphere};

    if (c > 0.0) {
        // Embedding chart of S^3(1/sqrt(c)) in R^4 around the pole
        // (0,0,0,1/sqrt(c)); polar radius rho means angle sqrt(c) rho.
        const double rs = 1.0 / std::sqrt(c);
        const double ang = std::sqrt(c) * rho;
        const std::string SR = format_double(rs * std::sin(ang));
        const std::string CR = format_double(rs * std::cos(ang));
        s.embedding = parse_embedding({SR + "*cos(u)*sin(v)", SR + "*sin(u)*sin(v)",
                                       SR + "*cos(v)", CR},
                                      {"u", "v"});
        s.orientation.mode = OrientationSpec::Mode::TowardPoint;
        s.orientation.point = AVec::Zero(4);
        s.orientation.point[3] = rs;
    } else if (c < 0.0) {
        // Ball chart: the geodesic sphere of radius rho is the Euclidean
        // sphere of radius tanh(sqrt(-c) rho / 2)/sqrt(-c).
        const double q = std::sqrt(-c);
        const double rad = std::tanh(q * rho / 2.0) / q;
        const std::string A = format_double(rad);
        s.embedding = parse_embedding(
            {A + "*cos(u)*sin(v)", A + "*sin(u)*sin(v)", A + "*cos(v)"}, {"u", "v"});
        s.orientation.mode = OrientationSpec::Mode::AutoInward;
    } else {
        return preset_sphere(rho, nu, nv);
    }
    return s;
}

SurfaceSetup preset_random_surface(unsigned seed, int nu, int nv)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    if (seed % 2 == 0) {
        // Sphere with a smooth radial modulation rho(x,y,z) = 1 + small
        // quadratic polynomial in the unit-sphere position.
        const std::string x = "cos(u)*sin(v)", y = "sin(u)*sin(v)", z = "cos(v)";
        std::string rho = "1";
        const std::string monos[] = {x, y, z, "(" + x + ")*(" + y + ")",
                                     "(" + y + ")*(" + z + ")", "(" + z + ")^2"};
        for (const auto& mtext : monos)
            rho += " + " + format_double(0.08 * unif(rng)) + "*" + mtext;
        SurfaceSetup s;
        s.name = "random-sphere";
        s.ambient = AmbientSpec::euclidean(3);
        s.embedding = parse_embedding({"(" + rho + ")*" + x, "(" + rho + ")*" + y,
                                       "(" + rho + ")*" + z},
                                      {"u", "v"});
        s.grid = {2, nu, nv, Topology::Sphere};
        s.orientation.mode = OrientationSpec::Mode::AutoInward;
        return s;
    }

    // Torus with modulated tube radius.
    const double R = 2.0 + 0.3 * unif(rng);
    std::string a = format_double(0.8 + 0.1 * unif(rng));
    a += " + " + format_double(0.05 * unif(rng)) + "*cos(u)";
    a += " + " + format_double(0.05 * unif(rng)) + "*sin(v + " + format_double(unif(rng)) + ")";
    a = "(" + a + ")";
    SurfaceSetup s;
    s.name = "random-torus";
    s.ambient = AmbientSpec::euclidean(3);
    const std::string Rs = format_double(R);
    s.embedding = parse_embedding({"(" + Rs + " + " + a + "*cos(v))*cos(u)",
                                   "(" + Rs + " + " + a + "*cos(v))*sin(u)",
                                   a + "*sin(v)"},
                                  {"u", "v"});
    s.grid = {2, nu, nv, Topology::Torus};
    s.orientation.mode = OrientationSpec::Mode::AutoInward;
    return s;
}

std::string random_omega_expr(unsigned seed)
{
    std::mt19937 rng(seed * 7919u + 13u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::string w = format_double(0.2 * unif(rng));
    w += " + " + format_double(0.1 * unif(rng)) + "*x";
    w += " + " + format_double(0.1 * unif(rng)) + "*y";
    w += " + " + format_double(0.1 * unif(rng)) + "*z";
    w += " + " + format_double(0.05 * unif(rng)) + "*x*y";
    w += " + " + format_double(0.05 * unif(rng)) + "*z^2";
    w += " + " + format_double(0.1 * unif(rng)) + "*r";
    w += " + " + format_double(0.05 * unif(rng)) + "*r*x";
    w += " + " + format_double(0.05 * unif(rng)) + "*r^2";
    return w;
}

BuiltSurface build_preset(const SurfaceSetup& setup)
{
    BuiltSurface b;
    b.setup = setup;
    b.grid = build_surface(setup.ambient, setup.embedding, setup.grid);
    b.data = fundamental_forms(b.grid, setup.ambient, setup.orientation);
    return b;
}

} // namespace syv
