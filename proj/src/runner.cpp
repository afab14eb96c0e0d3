#include "syv/runner.hpp"

#include "syv/parallel.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace syv {

namespace {

double sphere_volume_factor(int n)
{
    // |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
    return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

struct CSfuncs {
    double C, S;
};
CSfuncs cs_at(double c, double r)
{
    if (c > 0) {
        const double q = std::sqrt(c);
        return {std::cos(q * r), std::sin(q * r) / q};
    }
    if (c < 0) {
        const double q = std::sqrt(-c);
        return {std::cosh(q * r), std::sinh(q * r) / q};
    }
    return {1.0, r};
}

} // namespace

SurfaceSetup setup_from_config(const RunConfig& cfg)
{
    SurfaceSetup s;
    if (cfg.preset == "sphere")
        s = preset_sphere(cfg.pa, cfg.nu, cfg.nv);
    else if (cfg.preset == "ellipsoid")
        s = preset_ellipsoid(cfg.pa, cfg.pb, cfg.pc, cfg.nu, cfg.nv);
    else if (cfg.preset == "torus")
        s = preset_torus(cfg.pa, cfg.pb, cfg.nu, cfg.nv);
    else if (cfg.preset == "circle")
        s = preset_circle(cfg.pa, cfg.nu);
    else if (cfg.preset == "ellipse")
        s = preset_ellipse(cfg.pa, cfg.pb, cfg.nu);
    else if (cfg.preset == "geodesic-sphere")
        s = preset_geodesic_sphere(cfg.curvature != 0 ? cfg.curvature : cfg.pb, cfg.pa,
                                   cfg.nu, cfg.nv);
    else if (cfg.preset == "random")
        s = preset_random_surface(cfg.seed, cfg.nu, cfg.nv);
    else if (cfg.preset == "parametric") {
        // ambient from config
        if (cfg.ambient_kind == "euclidean")
            s.ambient = AmbientSpec::euclidean(cfg.n + 1);
        else if (cfg.ambient_kind == "spaceform")
            s.ambient = AmbientSpec::space_form(cfg.n + 1, cfg.curvature);
        else if (cfg.ambient_kind == "conformal") {
            const std::vector<std::string> vars =
                cfg.n == 1 ? std::vector<std::string>{"x", "y"}
                           : std::vector<std::string>{"x", "y", "z"};
            s.ambient = AmbientSpec::conformal(cfg.n + 1,
                                               ExprAst::parse(cfg.ambient_omega, vars));
        } else
            throw std::runtime_error("unknown ambient kind " + cfg.ambient_kind);

        for (const auto& comp : cfg.embedding)
            s.embedding.push_back(
                ExprAst::parse(comp, cfg.n == 1 ? std::vector<std::string>{"u"}
                                                : std::vector<std::string>{"u", "v"}));
        Topology topo = Topology::Sphere;
        if (cfg.topology == "torus") topo = Topology::Torus;
        else if (cfg.topology == "circle") topo = Topology::Circle;
        s.grid = {cfg.n, cfg.nu, cfg.nv, topo};
        s.name = "parametric";

        if (cfg.orientation == "auto-inward")
            s.orientation.mode = OrientationSpec::Mode::AutoInward;
        else if (cfg.orientation == "auto-outward")
            s.orientation.mode = OrientationSpec::Mode::AutoOutward;
        else if (cfg.orientation == "parametric+")
            s.orientation.mode = OrientationSpec::Mode::ParametricPlus;
        else if (cfg.orientation == "parametric-")
            s.orientation.mode = OrientationSpec::Mode::ParametricMinus;
        else if (cfg.orientation == "toward-point") {
            s.orientation.mode = OrientationSpec::Mode::TowardPoint;
            s.orientation.point = AVec::Zero(static_cast<int>(cfg.orientation_point.size()));
            for (std::size_t i = 0; i < cfg.orientation_point.size(); ++i)
                s.orientation.point[static_cast<int>(i)] = cfg.orientation_point[i];
        } else
            throw std::runtime_error("unknown orientation " + cfg.orientation);
    } else
        throw std::runtime_error("unknown preset " + cfg.preset);

    // global grid overrides
    s.grid.nu = cfg.nu;
    if (s.grid.n == 2) s.grid.nv = cfg.nv;
    return s;
}

PipelineResult run_pipeline(const SurfaceSetup& setup, const RunConfig& cfg)
{
    PipelineResult pr;
    pr.grid = build_surface(setup.ambient, setup.embedding, setup.grid);
    pr.data = fundamental_forms(pr.grid, setup.ambient, setup.orientation);

    const int n = setup.grid.n;
    const int K = cfg.collar_order > 0 ? cfg.collar_order : n + 2;

    if (!cfg.collar_file.empty()) {
        pr.jets = load_collar_json(cfg.collar_file);
        pr.collar_kind = "file";
        if (pr.jets.N != pr.data.N || pr.jets.n != n)
            throw std::runtime_error("injected collar does not match the surface grid");
    } else if (setup.ambient.euclidean_route()) {
        pr.jets = euclidean_collar(pr.data, K);
        pr.collar_kind = "euclidean";
    } else if (setup.ambient.kind == AmbientSpec::Kind::SpaceForm) {
        pr.jets = spaceform_collar(pr.data, setup.ambient.c, K);
        pr.collar_kind = "spaceform";
    } else {
        pr.jets = numeric_collar(setup.ambient, pr.grid, pr.data, std::min(K, 4));
        pr.collar_kind = "numeric";
    }

    pr.yam = solve_yamabe(pr.jets, pr.data, &pr.grid, YamabeMode::Grid);
    pr.vol = volume_coefficients(pr.yam, pr.jets, pr.data);
    return pr;
}

double pipeline_energy(const SurfaceGrid& grid, const AmbientSpec& ambient,
                       const OrientationSpec& orient)
{
    const HypersurfaceData data = fundamental_forms(grid, ambient, orient);
    const int K = grid.spec.n + 2;
    CollarJets jets;
    if (ambient.euclidean_route())
        jets = euclidean_collar(data, K);
    else if (ambient.kind == AmbientSpec::Kind::SpaceForm)
        jets = spaceform_collar(data, ambient.c, K);
    else
        jets = numeric_collar(ambient, grid, data, std::min(K, 4));
    const YamabeExpansion yam = solve_yamabe(jets, data, &grid, YamabeMode::Grid);
    return volume_coefficients(yam, jets, data).energy;
}

HomogeneousResult run_homogeneous(int n, double c, double rho)
{
    if (n < 1)
        throw std::invalid_argument("run_homogeneous: n must be >= 1");
    const CSfuncs cs = cs_at(c, rho);
    if (cs.S <= 0)
        throw std::invalid_argument("run_homogeneous: degenerate geodesic sphere");
    const double kappa = cs.C / cs.S;

    HomogeneousResult hr;
    HypersurfaceData& d = hr.data;
    d.n = n;
    d.N = 1;
    d.h.assign(1, SMat::Identity(n, n));
    d.hinv.assign(1, SMat::Identity(n, n));
    d.L.assign(1, SMat(kappa * SMat::Identity(n, n)));
    d.H.assign(1, n * kappa);
    d.L2.assign(1, n * kappa * kappa);
    d.Lo2.assign(1, 0.0);
    d.R.assign(1, n * (n - 1.0) * (c + kappa * kappa));
    d.sqrt_det_h.assign(1, 1.0);
    hr.area = sphere_volume_factor(n) * std::pow(cs.S, n);
    d.dA.assign(1, hr.area);
    d.rbar.assign(1, (n + 1.0) * n * c);
    d.rbar_nn.assign(1, c * n);
    d.rbar_0i0j.assign(1, SMat(c * SMat::Identity(n, n)));
    d.amb_trace.assign(1, c * n * (n - 1.0));
    d.schouten_tr.assign(1, 0.5 * c * n);
    d.min_curv_radius = kappa != 0.0 ? 1.0 / std::abs(kappa) : 1e30;

    const int K = n + 2;
    hr.jets = c == 0.0 ? euclidean_collar(d, K) : spaceform_collar(d, c, K);
    hr.yam = solve_yamabe(hr.jets, d, nullptr, YamabeMode::Homogeneous);
    hr.vol = volume_coefficients(hr.yam, hr.jets, d);
    return hr;
}

double torus_energy_oracle(double ratio)
{
    return M_PI * M_PI * ratio * ratio / (2.0 * std::sqrt(ratio * ratio - 1.0));
}

namespace {

void push_check(std::vector<CheckResult>& out, const std::string& name, double residual,
                double tol)
{
    out.push_back({name, residual, tol, residual <= tol});
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

std::vector<CheckResult> verify_surface(const SurfaceSetup& setup, const PipelineResult& pr,
                                        double tol_scale, unsigned seed)
{
    std::vector<CheckResult> out;
    const int n = setup.grid.n;
    const bool exact_collar = pr.collar_kind != "numeric";
    const double cls = exact_collar ? 1.0 : 1e4; // numeric-collar tolerance class

    const CollarReport rep = collar_consistency_check(
        pr.jets, pr.data, (exact_collar ? 1e-13 : 1e-7) * tol_scale);
    push_check(out, "collar-consistency", std::max(rep.res1, rep.res2), rep.tol);

    const ClosedFormPhis cf = closed_form_phis(pr.data, n);
    push_check(out, "phi0-closed-form", max_abs_diff(pr.yam.phi[0], cf.phi0),
               1e-11 * cls * tol_scale);
    if (n >= 2) {
        push_check(out, "phi1-closed-form", max_abs_diff(pr.yam.phi[1], cf.phi1),
                   1e-11 * cls * tol_scale);
        push_check(out, "phi1-two-routes", max_abs_diff(cf.phi1, cf.phi1_alt),
                   1e-11 * cls * tol_scale);
    }

    const ClosedFormV12 v12 = closed_form_v12(pr.data, n);
    push_check(out, "v1-closed-form", max_abs_diff(pr.vol.v[1], v12.v1),
               1e-11 * cls * tol_scale);
    if (n >= 2)
        push_check(out, "v2-closed-form", max_abs_diff(pr.vol.v[2], v12.v2),
                   1e-11 * cls * tol_scale);

    // stored-field invariants
    {
        double res = 0.0;
        for (int k = 0; k < n; ++k)
            res = std::max(res, std::abs(pr.vol.c[k] - surface_integrate(pr.vol.v[k], pr.data) /
                                                           (n - k)));
        res = std::max(res, std::abs(pr.vol.energy - surface_integrate(pr.vol.v[n], pr.data)));
        double v0res = 0.0;
        for (double x : pr.vol.v[0])
            v0res = std::max(v0res, std::abs(x - 1.0));
        push_check(out, "volume-recompute", std::max(res, v0res), 1e-13 * tol_scale);
    }

    // gauge independence of the obstruction at a few random nodes
    {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        std::uniform_int_distribution<std::size_t> pick(0, pr.data.N - 1);
        double worst = 0.0;
        for (int t = 0; t < 5; ++t)
            worst = std::max(worst, gauge_independence_residual(pr.yam, pr.jets, pick(rng),
                                                                unif(rng)));
        push_check(out, "obstruction-gauge-independence", worst, 1e-13 * tol_scale);
    }

    if (n == 1) {
        double obs = 0.0, v1 = 0.0;
        for (std::size_t k = 0; k < pr.data.N; ++k) {
            obs = std::max(obs, std::abs(pr.yam.obstruction[k]));
            v1 = std::max(v1, std::abs(pr.vol.v[1][k]));
        }
        push_check(out, "n1-obstruction-zero", obs, 1e-12 * tol_scale);
        push_check(out, "n1-v1-zero", v1, 1e-12 * tol_scale);
        push_check(out, "n1-energy-zero", std::abs(pr.vol.energy), 1e-12 * tol_scale);
    }

    if (n == 2) {
        const EnergySplit split = energy_n2_split(pr.vol, pr.data);
        push_check(out, "gauss-bonnet-residual", split.chi_residual, 1e-6 * tol_scale);
        push_check(out, "energy-split", split.split_residual, 1e-6 * tol_scale);
        const MinimalAreaComparison cmp = minimal_area_compare(pr.vol, pr.data, split.chi);
        push_check(out, "minimal-area-pointwise", cmp.pointwise_residual,
                   1e-10 * cls * tol_scale);
        push_check(out, "minimal-area-relation", cmp.relation_residual, 1e-6 * tol_scale);
    }

    // residual decay along collar normals
    {
        const ResidualScan scan = residual_scan(pr.yam, pr.jets, pr.data, &pr.grid,
                                                geometric_ladder(1e-3, 1e-1, 12));
        const double shortfall = scan.exact ? 0.0 : std::max(0.0, (n + 1.7) - scan.exponent);
        push_check(out, "residual-decay", shortfall, 1e-9);
    }

    // preset oracles
    if (setup.name == "ellipsoid" || setup.name == "torus" || setup.name == "ellipse" ||
        setup.name == "geodesic-sphere") {
        // nothing extra here beyond what the acceptance suite pins; the
        // closed-form cross-checks above already cover the preset fleet
    }

    return out;
}

void save_collar_json(const CollarJets& jets, const std::string& path)
{
    Json j;
    j["n"] = jets.n;
    j["K"] = jets.K;
    j["N"] = jets.N;
    Json nodes = Json::array();
    for (std::size_t k = 0; k < jets.N; ++k) {
        Json node;
        Json hj = Json::array();
        for (int m = 0; m <= jets.K; ++m) {
            Json mat = Json::array();
            for (int i = 0; i < jets.n; ++i)
                for (int jj = 0; jj < jets.n; ++jj)
                    mat.push_back(jets.h_jet(k, m)(i, jj));
            hj.push_back(mat);
        }
        node["h"] = hj;
        Json rb = Json::array();
        for (int m = 0; m < jets.n; ++m)
            rb.push_back(jets.rbar[k * jets.n + m]);
        node["rbar"] = rb;
        node["rbar_nn"] = jets.rbar_nn[k];
        nodes.push_back(node);
    }
    j["nodes"] = nodes;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write collar file " + path);
    out << j.dump(1) << "\n";
}

CollarJets load_collar_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open collar file " + path);
    Json j;
    in >> j;

    CollarJets jets;
    jets.n = j.at("n").get<int>();
    jets.K = j.at("K").get<int>();
    jets.N = j.at("N").get<std::size_t>();
    jets.hj.assign(jets.N * (jets.K + 1), SMat::Zero(jets.n, jets.n));
    jets.rbar.assign(jets.N * jets.n, 0.0);
    jets.rbar_nn.assign(jets.N, 0.0);

    const Json& nodes = j.at("nodes");
    if (nodes.size() != jets.N)
        throw std::runtime_error("collar file node count mismatch");
    for (std::size_t k = 0; k < jets.N; ++k) {
        const Json& node = nodes[k];
        const Json& hj = node.at("h");
        for (int m = 0; m <= jets.K; ++m) {
            const Json& mat = hj.at(m);
            for (int i = 0; i < jets.n; ++i)
                for (int jj = 0; jj < jets.n; ++jj)
                    jets.h_jet(k, m)(i, jj) = mat.at(i * jets.n + jj).get<double>();
        }
        const Json& rb = node.at("rbar");
        for (int m = 0; m < jets.n; ++m)
            jets.rbar[k * jets.n + m] = rb.at(m).get<double>();
        jets.rbar_nn[k] = node.at("rbar_nn").get<double>();
    }
    return jets;
}

namespace {

Json checks_to_json(const std::vector<CheckResult>& checks)
{
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j;
        j["name"] = c.name;
        j["residual"] = c.residual;
        j["tol"] = c.tol;
        j["pass"] = c.pass;
        arr.push_back(j);
    }
    return arr;
}

void write_outputs(const RunConfig& cfg, const Json& record, const std::string& csv)
{
    if (!cfg.out_json.empty()) {
        std::ofstream out(cfg.out_json);
        if (!out)
            throw std::runtime_error("cannot write " + cfg.out_json);
        out << record.dump(1) << "\n";
    }
    if (!cfg.out_csv.empty() && !csv.empty()) {
        std::ofstream out(cfg.out_csv);
        if (!out)
            throw std::runtime_error("cannot write " + cfg.out_csv);
        out << csv;
    }
}

Json fields_to_json(const PipelineResult& pr)
{
    Json fields;
    fields["H"] = pr.data.H;
    fields["Lo2"] = pr.data.Lo2;
    fields["R"] = pr.data.R;
    for (int k = 0; k < pr.yam.n; ++k)
        fields["phi" + std::to_string(k)] = pr.yam.phi[k];
    fields["obstruction"] = pr.yam.obstruction;
    for (int k = 0; k <= pr.vol.n; ++k)
        fields["v" + std::to_string(k)] = pr.vol.v[k];
    return fields;
}

} // namespace

RunOutcome run(const RunConfig& cfg)
{
    if (cfg.threads > 0)
        par::set_max_threads(cfg.threads);

    RunOutcome out;
    Json& rec = out.record;
    rec["config_echo"] = serialize_config(cfg);
    rec["fields"] = Json::object();
    rec["globals"] = Json::object();
    std::string csv;

    const bool homogeneous = cfg.mode == "homogeneous";

    if (cfg.command == "compute" || cfg.command == "verify") {
        if (homogeneous) {
            const double c = cfg.ambient_kind == "spaceform" ? cfg.curvature : 0.0;
            const HomogeneousResult hr = run_homogeneous(cfg.n, c, cfg.pa);
            rec["globals"]["area"] = hr.area;
            rec["globals"]["energy"] = hr.vol.energy;
            for (int k = 0; k < hr.vol.n; ++k)
                rec["globals"]["c" + std::to_string(k)] = hr.vol.c[k];
            Json fields;
            for (int k = 0; k < cfg.n; ++k)
                fields["phi" + std::to_string(k)] = hr.yam.phi[k];
            fields["obstruction"] = hr.yam.obstruction;
            for (int k = 0; k <= cfg.n; ++k)
                fields["v" + std::to_string(k)] = hr.vol.v[k];
            rec["fields"] = fields;

            if (cfg.command == "verify") {
                const ClosedFormPhis cf = closed_form_phis(hr.data, cfg.n);
                push_check(out.checks, "phi0-closed-form",
                           max_abs_diff(hr.yam.phi[0], cf.phi0), 1e-12 * cfg.tol_scale);
                if (cfg.n >= 2)
                    push_check(out.checks, "phi1-closed-form",
                               max_abs_diff(hr.yam.phi[1], cf.phi1), 1e-12 * cfg.tol_scale);
                const ClosedFormV12 v12 = closed_form_v12(hr.data, cfg.n);
                push_check(out.checks, "v1-closed-form", max_abs_diff(hr.vol.v[1], v12.v1),
                           1e-12 * cfg.tol_scale);
                if (cfg.n >= 2)
                    push_check(out.checks, "v2-closed-form", max_abs_diff(hr.vol.v[2], v12.v2),
                               1e-12 * cfg.tol_scale);
            }
        } else {
            const SurfaceSetup setup = setup_from_config(cfg);
            const PipelineResult pr = run_pipeline(setup, cfg);
            rec["fields"] = fields_to_json(pr);
            for (int k = 0; k < pr.vol.n; ++k)
                rec["globals"]["c" + std::to_string(k)] = pr.vol.c[k];
            rec["globals"]["energy"] = pr.vol.energy;
            rec["globals"]["area"] = surface_integrate(pr.vol.v[0], pr.data);
            rec["globals"]["collar"] = pr.collar_kind;
            if (cfg.n == 2) {
                const EulerChar e = euler_characteristic(pr.data);
                rec["globals"]["chi"] = e.chi;
                rec["globals"]["chi_residual"] = e.residual;
            }
            if (cfg.emit_collar && !cfg.out_json.empty())
                save_collar_json(pr.jets, cfg.out_json + ".collar.json");

            if (cfg.command == "verify")
                out.checks = verify_surface(setup, pr, cfg.tol_scale, cfg.seed);
        }
    } else if (cfg.command == "anomaly") {
        const SurfaceSetup setup = setup_from_config(cfg);
        const PipelineResult pr = run_pipeline(setup, cfg);
        const ExprAst omega = ExprAst::parse(cfg.omega, {"x", "y", "z", "r"});
        const ConformalJets cj = conformal_jets(omega, pr.grid, pr.data, setup.ambient);
        const double a_b = anomaly_route_b(cj, pr.vol, pr.data);
        const double a_closed = anomaly_route_closed(cj, pr.data);
        rec["globals"]["anomaly_route_b"] = a_b;
        rec["globals"]["anomaly_route_closed"] = a_closed;
        rec["globals"]["route_difference"] = std::abs(a_b - a_closed);
        rec["globals"]["minimal_area_anomaly"] = minimal_area_anomaly(cj, pr.data);
        rec["globals"]["energy"] = pr.vol.energy;
        push_check(out.checks, "anomaly-two-routes", std::abs(a_b - a_closed),
                   1e-9 * cfg.tol_scale);
    } else if (cfg.command == "vary") {
        const SurfaceSetup setup = setup_from_config(cfg);
        const PipelineResult pr = run_pipeline(setup, cfg);
        const ExprAst fexpr = ExprAst::parse(cfg.f, {"u", "v", "x", "y", "z"});
        const SurfaceField f = eval_surface_field(fexpr, pr.grid);
        const auto energy_of = [&](const SurfaceGrid& g) {
            return pipeline_energy(g, setup.ambient, setup.orientation);
        };
        const FdVariation fd =
            energy_variation_fd(energy_of, pr.grid, pr.data, f, cfg.t0);
        const double rhs = variation_rhs(f.val, pr.yam, pr.data);
        const double gap = std::abs(fd.estimate - rhs) / std::max(std::abs(rhs), 1e-6);
        rec["globals"]["fd_estimate"] = fd.estimate;
        rec["globals"]["fd_error_indicator"] = fd.error_indicator;
        rec["globals"]["theorem_rhs"] = rhs;
        rec["globals"]["relative_gap"] = gap;
        rec["globals"]["energy"] = pr.vol.energy;
        push_check(out.checks, "variation-theorem", gap, 2e-3 * cfg.tol_scale);
    } else if (cfg.command == "probe") {
        const ProbeModel model = make_probe_model(cfg.model);
        const double model_res = verify_probe_model(model, cfg.seed);
        push_check(out.checks, "probe-model-exactness", model_res, 1e-10 * cfg.tol_scale);

        const std::vector<double> ladder =
            geometric_ladder(cfg.eps_min, cfg.eps_max, cfg.samples);
        const ExpansionFit fit = fit_expansion(model, ladder);
        for (std::size_t k = 0; k < fit.c.size(); ++k)
            rec["globals"]["c" + std::to_string(k)] = fit.c[k];
        rec["globals"]["energy_fit"] = fit.energy;
        rec["globals"]["V_fit"] = fit.V;
        rec["globals"]["fit_residual"] = fit.residual;
        rec["globals"]["fit_condition"] = fit.condition;

        csv = "eps,volume\n";
        for (double e : ladder)
            csv += format_double(e) + "," + format_double(probe_volume(model, e)) + "\n";
    } else if (cfg.command == "sweep") {
        if (cfg.sweep_parameter != "torus-ratio")
            throw std::runtime_error("unknown sweep parameter " + cfg.sweep_parameter);
        csv = "ratio,energy,oracle,abs_diff\n";
        double worst = 0.0;
        const auto energy_at = [&](double t) {
            RunConfig c2 = cfg;
            c2.preset = "torus";
            c2.pa = t;
            c2.pb = 1.0;
            const SurfaceSetup setup = setup_from_config(c2);
            return run_pipeline(setup, c2).vol.energy;
        };
        std::vector<double> ratios(cfg.sweep_steps);
        for (int i = 0; i < cfg.sweep_steps; ++i)
            ratios[i] = cfg.sweep_from +
                        (cfg.sweep_to - cfg.sweep_from) * i / (cfg.sweep_steps - 1);
        double best_t = ratios[0], best_e = 1e300;
        for (double t : ratios) {
            const double e = energy_at(t);
            const double oracle = torus_energy_oracle(t);
            worst = std::max(worst, std::abs(e - oracle));
            if (e < best_e) { best_e = e; best_t = t; }
            csv += format_double(t) + "," + format_double(e) + "," + format_double(oracle) +
                   "," + format_double(std::abs(e - oracle)) + "\n";
        }
        // parabolic refinement of the minimum
        double a = best_t - (ratios[1] - ratios[0]);
        double b = best_t + (ratios[1] - ratios[0]);
        a = std::max(a, 1.01);
        for (int it = 0; it < 40; ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (energy_at(m1) < energy_at(m2)) b = m2;
            else a = m1;
            if (b - a < 1e-5) break;
        }
        const double tmin = 0.5 * (a + b);
        rec["globals"]["sweep_worst_oracle_diff"] = worst;
        rec["globals"]["min_ratio"] = tmin;
        rec["globals"]["min_energy"] = energy_at(tmin);
        push_check(out.checks, "sweep-oracle-match", worst, 1e-6 * cfg.tol_scale);
    } else {
        throw std::runtime_error("unknown command " + cfg.command);
    }

    rec["checks"] = checks_to_json(out.checks);
    bool all_pass = true;
    for (const auto& c : out.checks)
        all_pass = all_pass && c.pass;
    out.exit_code = all_pass ? 0 : 1;
    write_outputs(cfg, rec, csv);
    return out;
}

} // namespace syv
