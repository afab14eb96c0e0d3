#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "syv/collar.hpp"
#include "syv/presets.hpp"

#include <cmath>
#include <random>

using namespace syv;

namespace {

HypersurfaceData synthetic_point(int n, const SMat& h, const SMat& L)
{
    HypersurfaceData d;
    d.n = n;
    d.N = 1;
    d.h.assign(1, h);
    d.hinv.assign(1, SMat(h.inverse()));
    d.L.assign(1, L);
    const SMat mixed = d.hinv[0] * L;
    d.H.assign(1, mixed.trace());
    d.L2.assign(1, (mixed * mixed).trace());
    d.Lo2.assign(1, d.L2[0] - d.H[0] * d.H[0] / n);
    d.R.assign(1, 0.0);
    d.sqrt_det_h.assign(1, std::sqrt(h.determinant()));
    d.dA.assign(1, 1.0);
    d.rbar.assign(1, 0.0);
    d.rbar_nn.assign(1, 0.0);
    d.rbar_0i0j.assign(1, SMat::Zero(n, n));
    d.amb_trace.assign(1, 0.0);
    d.schouten_tr.assign(1, 0.0);
    d.conf_grad.assign(1, {0.0, 0.0});
    d.min_curv_radius = 1.0;
    return d;
}

} // namespace

TEST_CASE("euclidean collar of the unit sphere is (1-r)^2 h0")
{
    const BuiltSurface s = build_preset(preset_sphere(1.0, 32, 16));
    const CollarJets cj = euclidean_collar(s.data, 4);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k) {
        worst = std::max(worst, (cj.h_jet(k, 1) + 2.0 * s.data.h[k]).norm());
        worst = std::max(worst, (cj.h_jet(k, 2) - 2.0 * s.data.h[k]).norm());
        worst = std::max(worst, cj.h_jet(k, 3).norm());
        worst = std::max(worst, cj.h_jet(k, 4).norm());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("totally geodesic data has a constant collar")
{
    const HypersurfaceData d = synthetic_point(2, SMat::Identity(2, 2), SMat::Zero(2, 2));
    const CollarJets cj = euclidean_collar(d, 4);
    for (int m = 1; m <= 4; ++m)
        CHECK(cj.h_jet(0, m).norm() == doctest::Approx(0.0));
}

TEST_CASE("circle collar is (1 - r/a)^2 h0")
{
    const double a = 2.0;
    const BuiltSurface s = build_preset(preset_circle(a, 32));
    const CollarJets cj = euclidean_collar(s.data, 3);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k) {
        worst = std::max(worst,
                         std::abs(cj.h_jet(k, 1)(0, 0) + 2.0 / a * s.data.h[k](0, 0)));
        worst = std::max(worst,
                         std::abs(cj.h_jet(k, 2)(0, 0) - 2.0 / (a * a) * s.data.h[k](0, 0)));
        worst = std::max(worst, std::abs(cj.h_jet(k, 3)(0, 0)));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("space-form collar reproduces the stated order-1,2 jets on random data")
{
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        SMat h(2, 2), L(2, 2);
        h << 2.0 + unif(rng), 0.0, 0.0, 2.0 + unif(rng);
        h(0, 1) = h(1, 0) = 0.4 * unif(rng);
        L << unif(rng), 0.0, 0.0, unif(rng);
        L(0, 1) = L(1, 0) = 0.5 * unif(rng);
        const double c = 1.5 * unif(rng);

        HypersurfaceData d = synthetic_point(2, h, L);
        d.rbar_0i0j[0] = c * h;
        const CollarJets cj = spaceform_collar(d, c, 4);

        CHECK((cj.h_jet(0, 1) + 2.0 * L).norm() < 1e-12);
        const SMat want2 = -2.0 * c * h + 2.0 * L * h.inverse() * L;
        CHECK((cj.h_jet(0, 2) - want2).norm() < 1e-12);

        const CollarReport rep = collar_consistency_check(cj, d, 1e-12);
        CHECK(rep.pass);
    }
}

TEST_CASE("space-form collar with c = 0 equals the euclidean collar")
{
    const BuiltSurface s = build_preset(preset_torus(2.0, 1.0, 32, 32));
    const CollarJets a = euclidean_collar(s.data, 4);
    const CollarJets b = spaceform_collar(s.data, 0.0, 4);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k)
        for (int m = 0; m <= 4; ++m)
            worst = std::max(worst, (a.h_jet(k, m) - b.h_jet(k, m)).norm());
    CHECK(worst < 1e-14);
}

TEST_CASE("equatorial S^2 in S^3: h' = 0, h'' = -2 h0")
{
    const BuiltSurface eq = build_preset(preset_geodesic_sphere(1.0, M_PI / 2.0, 32, 16));
    const CollarJets cj = spaceform_collar(eq.data, 1.0, 4);
    double worst = 0.0;
    for (std::size_t k = 0; k < eq.data.N; ++k) {
        worst = std::max(worst, cj.h_jet(k, 1).norm());
        worst = std::max(worst, (cj.h_jet(k, 2) + 2.0 * eq.data.h[k]).norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("geodesic sphere collar matches sin^2(rho - r)/sin^2(rho) analytically")
{
    const double rho = M_PI / 3.0;
    const BuiltSurface s = build_preset(preset_geodesic_sphere(1.0, rho, 32, 16));
    const CollarJets cj = spaceform_collar(s.data, 1.0, 4);

    // d^m/dr^m [sin^2(rho - r)] at r = 0, divided by sin^2(rho)
    const double s2 = std::sin(rho) * std::sin(rho);
    const double jets[5] = {1.0, -std::sin(2.0 * rho) / s2, 2.0 * std::cos(2.0 * rho) / s2,
                            4.0 * std::sin(2.0 * rho) / s2, -8.0 * std::cos(2.0 * rho) / s2};
    double worst = 0.0;
    for (std::size_t k = 0; k < s.data.N; k += 41)
        for (int m = 0; m <= 4; ++m)
            worst = std::max(worst,
                             (cj.h_jet(k, m) - jets[m] * s.data.h[k]).norm() /
                                 s.data.h[k].norm());
    CHECK(worst < 1e-12);
}

TEST_CASE("euclidean collar consistency on the torus")
{
    const BuiltSurface s = build_preset(preset_torus(2.0, 1.0, 32, 32));
    const CollarJets cj = euclidean_collar(s.data, 4);
    const CollarReport rep = collar_consistency_check(cj, s.data, 1e-13);
    CHECK(rep.pass);
    CHECK(rep.res1 < 1e-13);
    CHECK(rep.res2 < 1e-13);
}

TEST_CASE("numeric collar with omega = 0 matches the euclidean collar")
{
    SurfaceSetup setup = preset_sphere(1.0, 32, 16);
    setup.ambient = AmbientSpec::conformal(3, ExprAst::parse("0", {"x", "y", "z"}));
    const BuiltSurface s = build_preset(setup);
    const CollarJets num = numeric_collar(setup.ambient, s.grid, s.data, 4);
    const CollarJets eu = euclidean_collar(s.data, 4);
    double worst1 = 0.0, worst2 = 0.0, worst34 = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k) {
        worst1 = std::max(worst1, (num.h_jet(k, 1) - eu.h_jet(k, 1)).norm());
        worst2 = std::max(worst2, (num.h_jet(k, 2) - eu.h_jet(k, 2)).norm());
        worst34 = std::max(worst34, (num.h_jet(k, 3) - eu.h_jet(k, 3)).norm());
        worst34 = std::max(worst34, (num.h_jet(k, 4) - eu.h_jet(k, 4)).norm());
    }
    CHECK(worst1 < 1e-9);
    CHECK(worst2 < 1e-9);
    CHECK(worst34 < 1e-4);
}

TEST_CASE("numeric collar under a constant conformal factor scales exactly")
{
    const double kconst = 0.3;
    SurfaceSetup setup = preset_sphere(1.0, 32, 16);
    setup.ambient = AmbientSpec::conformal(
        3, ExprAst::parse(format_double(kconst), {"x", "y", "z"}));
    const BuiltSurface s = build_preset(setup);

    // distances scale by e^k: h_r(e^{2k} delta) = e^{2k} h^euc_{r e^{-k}}
    const BuiltSurface flat = build_preset(preset_sphere(1.0, 32, 16));
    const CollarJets eu = euclidean_collar(flat.data, 4);
    const CollarJets num = numeric_collar(setup.ambient, s.grid, s.data, 4);
    const double ek = std::exp(kconst);
    double worst = 0.0, worst_high = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k)
        for (int m = 0; m <= 4; ++m) {
            const double scale = std::pow(ek, 2.0 - m);
            const double diff = (num.h_jet(k, m) - scale * eu.h_jet(k, m)).norm() /
                                std::max(1.0, eu.h_jet(k, m).norm());
            (m <= 2 ? worst : worst_high) = std::max(m <= 2 ? worst : worst_high, diff);
        }
    CHECK(worst < 1e-8);
    CHECK(worst_high < 1e-4);

    // so h^{(1)} = -2 Lhat with Hhat = e^{-k} H
    double worstH = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k)
        worstH = std::max(worstH, std::abs(s.data.H[k] - 2.0 / ek));
    CHECK(worstH < 1e-12);
}

TEST_CASE("numeric collar satisfies the curvature identities for omega = 0.05 z")
{
    SurfaceSetup setup = preset_sphere(1.0, 32, 16);
    setup.ambient = AmbientSpec::conformal(3, ExprAst::parse("0.05*z", {"x", "y", "z"}));
    const BuiltSurface s = build_preset(setup);
    const CollarJets num = numeric_collar(setup.ambient, s.grid, s.data, 4);
    const CollarReport rep = collar_consistency_check(num, s.data, 1e-7);
    CHECK(rep.pass);
    CHECK(rep.res1 < 1e-7);
    CHECK(rep.res2 < 1e-7);
}

TEST_CASE("stereographic round-sphere collar agrees with the chart pipeline")
{
    // Geodesic sphere of polar radius rho about the north pole of S^3,
    // computed (a) in the R^4 chart with the tube formula and (b) in
    // stereographic coordinates as the Euclidean sphere of radius
    // cot(rho/2) with the conformal metric 4 delta/(1+|x|^2)^2; inward
    // toward the pole maps to away from the chart origin.
    const double rho = 1.1;
    const BuiltSurface chart = build_preset(preset_geodesic_sphere(1.0, rho, 32, 16));
    const CollarJets a = spaceform_collar(chart.data, 1.0, 4);

    SurfaceSetup stereo;
    stereo.name = "stereo";
    stereo.ambient =
        AmbientSpec::conformal(3, ExprAst::parse("log(2/(1 + x^2 + y^2 + z^2))",
                                                  {"x", "y", "z"}));
    const double rad = 1.0 / std::tan(rho / 2.0);
    const std::string A = format_double(rad);
    stereo.embedding.push_back(ExprAst::parse(A + "*cos(u)*sin(v)", {"u", "v"}));
    stereo.embedding.push_back(ExprAst::parse(A + "*sin(u)*sin(v)", {"u", "v"}));
    stereo.embedding.push_back(ExprAst::parse(A + "*cos(v)", {"u", "v"}));
    stereo.grid = {2, 32, 16, Topology::Sphere};
    stereo.orientation.mode = OrientationSpec::Mode::AutoOutward;
    const BuiltSurface st = build_preset(stereo);
    const CollarJets b = numeric_collar(stereo.ambient, st.grid, st.data, 4);

    double worst = 0.0;
    for (std::size_t k = 0; k < chart.data.N; ++k)
        for (int m = 0; m <= 2; ++m)
            worst = std::max(worst, (a.h_jet(k, m) - b.h_jet(k, m)).norm() /
                                        std::max(1.0, a.h_jet(k, m).norm()));
    CHECK(worst < 1e-6);

    // scalar curvature along the geodesic, order 0: 6 for S^3
    double worstR = 0.0;
    for (std::size_t k = 0; k < st.data.N; ++k)
        worstR = std::max(worstR, std::abs(b.rbar[k * 2 + 0] - 6.0));
    CHECK(worstR < 1e-10);
}

TEST_CASE("numeric collar against the hyperbolic tube formula in the same chart")
{
    const double rho = 0.8;
    SurfaceSetup setup = preset_geodesic_sphere(-1.0, rho, 32, 16);
    const BuiltSurface s = build_preset(setup);
    const CollarJets tube = spaceform_collar(s.data, -1.0, 4);

    SurfaceSetup conf = setup;
    conf.ambient = AmbientSpec::conformal(
        3, ExprAst::parse("log(2/(1 - (x^2 + y^2 + z^2)))", {"x", "y", "z"}));
    const BuiltSurface s2 = build_preset(conf);
    const CollarJets num = numeric_collar(conf.ambient, s2.grid, s2.data, 4);

    double worst = 0.0;
    for (std::size_t k = 0; k < s.data.N; ++k)
        for (int m = 0; m <= 2; ++m)
            worst = std::max(worst, (tube.h_jet(k, m) - num.h_jet(k, m)).norm() /
                                        std::max(1.0, tube.h_jet(k, m).norm()));
    CHECK(worst < 1e-6);
}
