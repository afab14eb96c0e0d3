#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "syv/presets.hpp"
#include "syv/runner.hpp"
#include "syv/yamabe.hpp"

#include <cmath>
#include <random>

using namespace syv;

namespace {

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("indicial self-tests pass for n = 1..6")
{
    CHECK_NOTHROW(verify_indicial_identities(6));
}

TEST_CASE("unit sphere: phi0 = -1/2, phi1 = 0, obstruction 0")
{
    const BuiltSurface s = build_preset(preset_sphere(1.0, 64, 32));
    const CollarJets jets = euclidean_collar(s.data, 4);
    const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);

    double w0 = 0.0, w1 = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k) {
        w0 = std::max(w0, std::abs(yam.phi[0][k] + 0.5));
        w1 = std::max(w1, std::abs(yam.phi[1][k]));
    }
    CHECK(w0 < 1e-13);
    CHECK(w1 < 1e-13);
    CHECK(max_abs(yam.obstruction) < 1e-10);

    // u-coefficient accessors: u^{(2)} = phi_0
    CHECK(yam.u_coef(2, 0) == doctest::Approx(-0.5));
}

TEST_CASE("unit circle (n = 1): phi0 = -1/2 and the obstruction vanishes")
{
    const BuiltSurface s = build_preset(preset_circle(1.0, 64));
    const CollarJets jets = euclidean_collar(s.data, 3);
    const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);
    double w0 = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k)
        w0 = std::max(w0, std::abs(yam.phi[0][k] + 0.5));
    CHECK(w0 < 1e-13);
    CHECK(max_abs(yam.obstruction) < 1e-12);
}

TEST_CASE("equatorial S^2 in S^3 homogeneous: phi0 = 0, phi1 = -1/6")
{
    const HomogeneousResult hr = run_homogeneous(2, 1.0, M_PI / 2.0);
    CHECK(std::abs(hr.yam.phi[0][0]) < 1e-14);
    CHECK(hr.yam.phi[1][0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("geodesic spheres: phi1 = -1/6 in S^3 and +1/6 in H^3 at every radius")
{
    for (double rho : {0.6, 1.2}) {
        const HomogeneousResult sph = run_homogeneous(2, 1.0, rho);
        CHECK(sph.yam.phi[1][0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
        const HomogeneousResult hyp = run_homogeneous(2, -1.0, rho);
        CHECK(hyp.yam.phi[1][0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
}

TEST_CASE("closed-form phi routes agree and match the solver on the fleet")
{
    std::vector<BuiltSurface> fleet;
    fleet.push_back(build_preset(preset_sphere(1.0, 32, 16)));
    fleet.push_back(build_preset(preset_torus(2.0, 1.0, 32, 32)));
    fleet.push_back(build_preset(preset_ellipsoid(1.0, 1.3, 0.7, 32, 32)));
    fleet.push_back(build_preset(preset_geodesic_sphere(1.0, M_PI / 3.0, 32, 16)));
    fleet.push_back(build_preset(preset_geodesic_sphere(-1.0, 0.9, 32, 16)));

    for (const auto& s : fleet) {
        const bool flat = s.setup.ambient.euclidean_route();
        const CollarJets jets = flat ? euclidean_collar(s.data, 4)
                                     : spaceform_collar(s.data, s.setup.ambient.c, 4);
        const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);
        const ClosedFormPhis cf = closed_form_phis(s.data, 2);

        CHECK(max_diff(cf.phi1, cf.phi1_alt) < 1e-12);
        CHECK(max_diff(yam.phi[0], cf.phi0) < 1e-12);
        CHECK(max_diff(yam.phi[1], cf.phi1) < 1e-12);
    }

    // homogeneous spheres in n = 3..6
    for (int n = 3; n <= 6; ++n) {
        const HomogeneousResult hr = run_homogeneous(n, 0.0, 1.0);
        const ClosedFormPhis cf = closed_form_phis(hr.data, n);
        CHECK(std::abs(hr.yam.phi[0][0] - cf.phi0[0]) < 1e-13);
        CHECK(std::abs(hr.yam.phi[1][0] - cf.phi1[0]) < 1e-13);
    }
}

TEST_CASE("obstruction is gauge independent in the unconstrained coefficient")
{
    const BuiltSurface s = build_preset(preset_ellipsoid(1.0, 1.3, 0.7, 32, 32));
    const CollarJets jets = euclidean_collar(s.data, 4);
    const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::uniform_int_distribution<std::size_t> pick(0, s.data.N - 1);
    for (int t = 0; t < 10; ++t)
        CHECK(gauge_independence_residual(yam, jets, pick(rng), unif(rng)) < 1e-13);
}

TEST_CASE("homogeneous mode rejects non-constant data")
{
    const BuiltSurface s = build_preset(preset_ellipsoid(1.0, 1.3, 0.7, 32, 32));
    const CollarJets jets = euclidean_collar(s.data, 4);
    CHECK_THROWS(solve_yamabe(jets, s.data, nullptr, YamabeMode::Homogeneous));
}

TEST_CASE("conformal covariance of the obstruction under constant rescaling")
{
    // scaling the embedding by e^k rescales the obstruction by e^{-(n+1)k}
    const double kconst = 0.4;
    const double ek = std::exp(kconst);
    const BuiltSurface a = build_preset(preset_ellipsoid(1.0, 1.3, 0.7, 48, 48));
    const BuiltSurface b =
        build_preset(preset_ellipsoid(ek * 1.0, ek * 1.3, ek * 0.7, 48, 48));

    const CollarJets ja = euclidean_collar(a.data, 4);
    const CollarJets jb = euclidean_collar(b.data, 4);
    const YamabeExpansion ya = solve_yamabe(ja, a.data, &a.grid, YamabeMode::Grid);
    const YamabeExpansion yb = solve_yamabe(jb, b.data, &b.grid, YamabeMode::Grid);

    double worst = 0.0;
    for (std::size_t k = 0; k < a.data.N; ++k)
        worst = std::max(worst,
                         std::abs(yb.obstruction[k] - std::pow(ek, -3.0) * ya.obstruction[k]));
    CHECK(worst < 1e-9);
}

TEST_CASE("residual scan: exact on the sphere, order n+2 decay elsewhere")
{
    const std::vector<double> ladder = geometric_ladder(1e-3, 1e-1, 12);

    {
        const BuiltSurface s = build_preset(preset_sphere(1.0, 32, 16));
        const CollarJets jets = euclidean_collar(s.data, 4);
        const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);
        const ResidualScan scan = residual_scan(yam, jets, s.data, &s.grid, ladder);
        CHECK(scan.exact);
        CHECK(scan.max_residual < 1e-10);
    }
    {
        const BuiltSurface s = build_preset(preset_ellipsoid(1.0, 1.3, 0.7, 48, 48));
        const CollarJets jets = euclidean_collar(s.data, 4);
        const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);
        const ResidualScan scan = residual_scan(yam, jets, s.data, &s.grid, ladder);
        CHECK(!scan.exact);
        CHECK(scan.exponent >= 3.7);
    }
    {
        // equatorial sphere, homogeneous: truncation gives a clean r^4 tail
        const HomogeneousResult hr = run_homogeneous(2, 1.0, M_PI / 2.0);
        const ResidualScan scan =
            residual_scan(hr.yam, hr.jets, hr.data, nullptr, ladder);
        if (!scan.exact)
            CHECK(scan.exponent >= 3.7);
    }
    {
        // ellipse, n = 1: decay at order n+2 = 3
        const BuiltSurface s = build_preset(preset_ellipse(1.0, 1.4, 64));
        const CollarJets jets = euclidean_collar(s.data, 3);
        const YamabeExpansion yam = solve_yamabe(jets, s.data, &s.grid, YamabeMode::Grid);
        const ResidualScan scan = residual_scan(yam, jets, s.data, &s.grid, ladder);
        if (!scan.exact)
            CHECK(scan.exponent >= 2.7);
    }
}

TEST_CASE("hyperbolic ball truncation: the sphere expansion is u = r - r^2/2")
{
    // For the unit sphere the exact defining function is (1 - |x|^2)/2 =
    // r - r^2/2 in collar coordinates, so all higher coefficients vanish.
    const HomogeneousResult hr = run_homogeneous(2, 0.0, 1.0);
    CHECK(hr.yam.phi[0][0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(hr.yam.phi[1][0]) < 1e-14);
    CHECK(std::abs(hr.yam.obstruction[0]) < 1e-14);
}
