#pragma once

#include "syv/anomaly.hpp"
#include "syv/config.hpp"
#include "syv/presets.hpp"
#include "syv/probe.hpp"
#include "syv/variation.hpp"
#include "syv/volume.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace syv {

using Json = nlohmann::ordered_json;

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct PipelineResult {
    SurfaceGrid grid;
    HypersurfaceData data;
    CollarJets jets;
    YamabeExpansion yam;
    VolumeData vol;
    std::string collar_kind; // euclidean | spaceform | numeric | file
};

// Homogeneous pointwise pipeline for a geodesic sphere of polar radius rho in
// the space form of curvature c (c = 0: round sphere of radius rho).
struct HomogeneousResult {
    HypersurfaceData data;
    CollarJets jets;
    YamabeExpansion yam;
    VolumeData vol;
    double area = 0.0;
};

SurfaceSetup setup_from_config(const RunConfig& cfg);
PipelineResult run_pipeline(const SurfaceSetup& setup, const RunConfig& cfg);
double pipeline_energy(const SurfaceGrid& grid, const AmbientSpec& ambient,
                       const OrientationSpec& orient);
HomogeneousResult run_homogeneous(int n, double c, double rho);

// Closed-form energy of the torus with ring/tube ratio t (chi = 0):
// E(t) = pi^2 t^2 / (2 sqrt(t^2 - 1)).
double torus_energy_oracle(double ratio);

std::vector<CheckResult> verify_surface(const SurfaceSetup& setup, const PipelineResult& pr,
                                        double tol_scale, unsigned seed);

void save_collar_json(const CollarJets& jets, const std::string& path);
CollarJets load_collar_json(const std::string& path);

struct RunOutcome {
    int exit_code = 0;
    Json record;
    std::vector<CheckResult> checks;
};

// Executes a full command; writes JSON/CSV artifacts when configured.
RunOutcome run(const RunConfig& cfg);

} // namespace syv
