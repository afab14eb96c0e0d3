#pragma once

#include <map>
#include <string>
#include <vector>

namespace syv {

// Declarative run configuration, serialized as sectioned key = value text
// with quoted expression strings. Parsing the canonical serialization gives
// back an identical structure.
struct RunConfig {
    std::string command = "compute"; // compute | verify | anomaly | vary | probe | sweep
    int n = 2;
    std::string mode = "grid";       // grid | homogeneous

    // [ambient]
    std::string ambient_kind = "euclidean"; // euclidean | spaceform | conformal
    double curvature = 0.0;
    std::string ambient_omega;       // conformal factor expression

    // [surface]
    std::string preset = "sphere";   // sphere | ellipsoid | torus | circle | ellipse |
                                     // geodesic-sphere | parametric
    double pa = 1.0, pb = 1.0, pc = 1.0;
    std::vector<std::string> embedding; // parametric components
    std::string topology = "sphere";
    std::string orientation = "auto-inward"; // auto-inward | auto-outward | parametric+ |
                                             // parametric- | toward-point
    std::vector<double> orientation_point;

    // [grid]
    int nu = 64, nv = 32;

    // [collar]
    int collar_order = 0;            // 0 = n+2
    std::string collar_file;         // inject external collar jets
    bool emit_collar = false;

    // [anomaly]
    std::string omega;

    // [vary]
    std::string f = "1";
    double t0 = 0.0;                 // 0 = default

    // [probe]
    std::string model = "hyperbolic-ball";
    double eps_min = 1e-3, eps_max = 1e-1;
    int samples = 16;

    // [sweep]
    std::string sweep_parameter = "torus-ratio";
    double sweep_from = 1.1, sweep_to = 3.0;
    int sweep_steps = 40;

    // [output]
    std::string out_json, out_csv;

    // [tolerances]
    double tol_scale = 1.0;

    int threads = 0;
    unsigned seed = 12345;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

} // namespace syv
