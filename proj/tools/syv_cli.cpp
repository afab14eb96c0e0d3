#include "syv/runner.hpp"
#include "syv/yamabe.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"singular Yamabe asymptotics laboratory"};

    std::string config_path;
    std::string out_dir;
    double tol_scale = 0.0;
    int threads = 0;
    long long seed = -1;

    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory for artifacts");
    app.add_option("--tol-scale", tol_scale, "scale factor on all check tolerances");
    app.add_option("--threads", threads, "worker thread cap");
    app.add_option("--seed", seed, "seed for randomized verification fleets");

    CLI11_PARSE(app, argc, argv);

    try {
        syv::verify_indicial_identities(6);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 2;
    }

    try {
        syv::RunConfig cfg = syv::load_config(config_path);
        if (tol_scale > 0) cfg.tol_scale = tol_scale;
        if (threads > 0) cfg.threads = threads;
        if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            if (!cfg.out_json.empty())
                cfg.out_json = (std::filesystem::path(out_dir) / cfg.out_json).string();
            if (!cfg.out_csv.empty())
                cfg.out_csv = (std::filesystem::path(out_dir) / cfg.out_csv).string();
        }

        const syv::RunOutcome outcome = syv::run(cfg);

        for (const auto& c : outcome.checks)
            std::printf("[%s] %-32s residual %.3e  tol %.3e\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), c.residual, c.tol);
        if (outcome.record.contains("globals"))
            for (auto& [key, value] : outcome.record["globals"].items())
                std::cout << key << " = " << value.dump() << "\n";

        if (outcome.exit_code != 0) {
            double worst = 0.0;
            std::string worst_name;
            for (const auto& c : outcome.checks)
                if (!c.pass && c.residual / std::max(c.tol, 1e-300) > worst) {
                    worst = c.residual / std::max(c.tol, 1e-300);
                    worst_name = c.name;
                }
            std::cerr << "check failure: worst offender '" << worst_name << "'\n";
        }
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
