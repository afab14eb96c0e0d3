#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "syv/presets.hpp"
#include "syv/runner.hpp"

#include <cmath>

using namespace syv;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

PipelineResult pipeline_of(const SurfaceSetup& setup)
{
    RunConfig cfg;
    cfg.n = setup.grid.n;
    return run_pipeline(setup, cfg);
}

} // namespace

TEST_CASE("unit sphere volume data: v1 = v2 = -1/2, energy -2pi, c0 = 2pi, c1 = -2pi")
{
    const PipelineResult pr = pipeline_of(preset_sphere(1.0, 64, 32));
    double w1 = 0.0, w2 = 0.0, w0 = 0.0;
    for (std::size_t k = 0; k < pr.data.N; ++k) {
        w0 = std::max(w0, std::abs(pr.vol.v[0][k] - 1.0));
        w1 = std::max(w1, std::abs(pr.vol.v[1][k] + 0.5));
        w2 = std::max(w2, std::abs(pr.vol.v[2][k] + 0.5));
    }
    CHECK(w0 < 1e-14);
    CHECK(w1 < 1e-13);
    CHECK(w2 < 1e-12);
    CHECK(pr.vol.energy == doctest::Approx(-2.0 * M_PI).epsilon(1e-11));
    CHECK(pr.vol.c[0] == doctest::Approx(2.0 * M_PI).epsilon(1e-11));
    CHECK(pr.vol.c[1] == doctest::Approx(-2.0 * M_PI).epsilon(1e-11));
}

TEST_CASE("circle of any radius: v1 = 0, energy 0")
{
    for (double a : {0.5, 1.0, 2.0}) {
        const PipelineResult pr = pipeline_of(preset_circle(a, 32));
        double w1 = 0.0;
        for (std::size_t k = 0; k < pr.data.N; ++k)
            w1 = std::max(w1, std::abs(pr.vol.v[1][k]));
        CHECK(w1 < 1e-13);
        CHECK(std::abs(pr.vol.energy) < 1e-12);
    }
}

TEST_CASE("equatorial S^2 in S^3: v1 = 0, v2 = -1/2, energy -2pi")
{
    const HomogeneousResult hr = run_homogeneous(2, 1.0, M_PI / 2.0);
    CHECK(std::abs(hr.vol.v[1][0]) < 1e-14);
    CHECK(hr.vol.v[2][0] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(hr.vol.energy == doctest::Approx(-2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("closed-form v1, v2 against the series pipeline on the fleet")
{
    std::vector<SurfaceSetup> fleet = {
        preset_sphere(1.0, 32, 16),           preset_torus(2.0, 1.0, 32, 32),
        preset_ellipsoid(1.0, 1.3, 0.7, 32, 32),
        preset_geodesic_sphere(1.0, M_PI / 3.0, 32, 16),
        preset_geodesic_sphere(-1.0, 0.9, 32, 16),
    };
    for (const auto& setup : fleet) {
        const PipelineResult pr = pipeline_of(setup);
        const ClosedFormV12 cf = closed_form_v12(pr.data, 2);
        CHECK(max_diff(pr.vol.v[1], cf.v1) < 1e-12);
        CHECK(max_diff(pr.vol.v[2], cf.v2) < 1e-12);
    }
}

TEST_CASE("n = 2 closed form reduces to v2 = (|Lo|^2 - R)/4")
{
    const PipelineResult pr = pipeline_of(preset_ellipsoid(1.0, 1.3, 0.7, 32, 32));
    const ClosedFormV12 cf = closed_form_v12(pr.data, 2);
    double worst = 0.0;
    for (std::size_t k = 0; k < pr.data.N; ++k)
        worst = std::max(worst,
                         std::abs(cf.v2[k] - 0.25 * (pr.data.Lo2[k] - pr.data.R[k])));
    CHECK(worst < 1e-14);
}

TEST_CASE("n = 3 sphere of radius 1 in R^4: v1 = -1, v2 = -1/2")
{
    const HomogeneousResult hr = run_homogeneous(3, 0.0, 1.0);
    CHECK(hr.vol.v[1][0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(hr.vol.v[2][0] == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("stored volume data recomputes its own globals")
{
    const PipelineResult pr = pipeline_of(preset_torus(2.0, 1.0, 32, 32));
    for (int k = 0; k < 2; ++k)
        CHECK(std::abs(pr.vol.c[k] -
                       surface_integrate(pr.vol.v[k], pr.data) / (2 - k)) < 1e-13);
    CHECK(std::abs(pr.vol.energy - surface_integrate(pr.vol.v[2], pr.data)) < 1e-13);
}

TEST_CASE("energy split: sphere, Clifford-ratio torus, ellipsoid")
{
    {
        const PipelineResult pr = pipeline_of(preset_sphere(1.0, 64, 32));
        const EnergySplit s = energy_n2_split(pr.vol, pr.data);
        CHECK(s.chi == 2);
        CHECK(std::abs(s.willmore_part) < 1e-10);
        CHECK(s.energy == doctest::Approx(-2.0 * M_PI).epsilon(1e-10));
    }
    {
        const double t = std::sqrt(2.0);
        const PipelineResult pr = pipeline_of(preset_torus(t, 1.0, 64, 64));
        const EnergySplit s = energy_n2_split(pr.vol, pr.data);
        CHECK(s.chi == 0);
        CHECK(s.energy == doctest::Approx(M_PI * M_PI).epsilon(1e-9));
        CHECK(s.split_residual < 1e-10);
    }
    {
        const PipelineResult pr = pipeline_of(preset_ellipsoid(1.0, 1.3, 0.7, 64, 64));
        const EnergySplit s = energy_n2_split(pr.vol, pr.data);
        CHECK(s.chi == 2);
        CHECK(s.split_residual < 1e-6);
    }
}

TEST_CASE("scale covariance: v(k) -> lambda^{-k} v(k), energy invariant")
{
    const double lam = 1.7;
    const PipelineResult a = pipeline_of(preset_ellipsoid(1.0, 1.3, 0.7, 48, 48));
    const PipelineResult b =
        pipeline_of(preset_ellipsoid(lam * 1.0, lam * 1.3, lam * 0.7, 48, 48));
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k)
        for (std::size_t i = 0; i < a.data.N; ++i)
            worst = std::max(worst, std::abs(b.vol.v[k][i] -
                                             std::pow(lam, -k) * a.vol.v[k][i]));
    CHECK(worst < 1e-10);
    CHECK(b.vol.energy == doctest::Approx(a.vol.energy).epsilon(1e-10));
}

TEST_CASE("conformal invariance: geodesic spheres and round spheres share E = -2pi")
{
    for (double rho : {M_PI / 4.0, M_PI / 2.0, 2.0}) {
        const PipelineResult pr = pipeline_of(preset_geodesic_sphere(1.0, rho, 64, 32));
        CHECK(pr.vol.energy == doctest::Approx(-2.0 * M_PI).epsilon(1e-9));
        CHECK(pr.collar_kind == "spaceform");
    }
    const PipelineResult flat = pipeline_of(preset_sphere(1.0, 64, 32));
    CHECK(flat.vol.energy == doctest::Approx(-2.0 * M_PI).epsilon(1e-9));
    CHECK(flat.collar_kind == "euclidean");

    // hyperbolic geodesic spheres as well
    for (double rho : {0.5, 1.5}) {
        const PipelineResult pr = pipeline_of(preset_geodesic_sphere(-1.0, rho, 64, 32));
        CHECK(pr.vol.energy == doctest::Approx(-2.0 * M_PI).epsilon(1e-9));
    }
}

TEST_CASE("minimal-area comparison identities")
{
    {
        const PipelineResult pr = pipeline_of(preset_sphere(1.0, 64, 32));
        const MinimalAreaComparison cmp = minimal_area_compare(pr.vol, pr.data, 2);
        CHECK(cmp.e_min_area == doctest::Approx(-2.0 * M_PI).epsilon(1e-10));
        CHECK(cmp.pointwise_residual < 1e-10);
        CHECK(cmp.relation_residual < 1e-9);
    }
    {
        const PipelineResult pr = pipeline_of(preset_torus(2.0, 1.0, 64, 64));
        const MinimalAreaComparison cmp = minimal_area_compare(pr.vol, pr.data, 0);
        // chi = 0: E_min = -E exactly
        CHECK(cmp.e_min_area == doctest::Approx(-pr.vol.energy).epsilon(1e-9));
        CHECK(cmp.pointwise_residual < 1e-10);
    }
    {
        const PipelineResult pr = pipeline_of(preset_ellipsoid(1.0, 1.3, 0.7, 64, 64));
        const MinimalAreaComparison cmp = minimal_area_compare(pr.vol, pr.data, 2);
        CHECK(cmp.pointwise_residual < 1e-10);
        CHECK(cmp.relation_residual < 1e-6);
    }
    {
        // space form: Pbar = (c/2) g, identity still pointwise
        const PipelineResult pr = pipeline_of(preset_geodesic_sphere(1.0, 1.0, 32, 16));
        const MinimalAreaComparison cmp = minimal_area_compare(pr.vol, pr.data, 2);
        CHECK(cmp.pointwise_residual < 1e-10);
        CHECK(cmp.relation_residual < 1e-8);
    }
}

TEST_CASE("torus energies match the 1D closed-form oracle")
{
    for (double t : {1.3, std::sqrt(2.0), 2.0, 2.7}) {
        const PipelineResult pr = pipeline_of(preset_torus(t, 1.0, 64, 64));
        CHECK(pr.vol.energy == doctest::Approx(torus_energy_oracle(t)).epsilon(1e-9));
    }
}
