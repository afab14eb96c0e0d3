// Times the node-parallel kernels against the serial reference on a large
// torus grid and prints the speedup table.

#include "syv/collar.hpp"
#include "syv/parallel.hpp"
#include "syv/presets.hpp"
#include "syv/runner.hpp"
#include "syv/volume.hpp"

#include <chrono>
#include <cstdio>

namespace {

template <typename F>
double time_ms(F&& fn)
{
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv)
{
    int nu = 256, nv = 256;
    if (argc > 2) {
        nu = std::atoi(argv[1]);
        nv = std::atoi(argv[2]);
    }

    const syv::SurfaceSetup setup = syv::preset_torus(2.0, 1.0, nu, nv);

    struct Stage {
        const char* name;
        double serial_ms = 0.0;
        double parallel_ms = 0.0;
    };
    Stage stages[] = {{"build_surface"}, {"fundamental_forms"}, {"euclidean_collar"},
                      {"solve_yamabe"},  {"volume_coefficients"}};

    for (int pass = 0; pass < 2; ++pass) {
        const bool serial = pass == 0;
        syv::par::set_max_threads(serial ? 1 : 0);

        syv::SurfaceGrid grid;
        syv::HypersurfaceData data;
        syv::CollarJets jets;
        syv::YamabeExpansion yam;

        double* slot = serial ? &stages[0].serial_ms : &stages[0].parallel_ms;
        auto record = [&](int i, double ms) {
            (serial ? stages[i].serial_ms : stages[i].parallel_ms) = ms;
        };
        (void)slot;

        record(0, time_ms([&] { grid = syv::build_surface(setup.ambient, setup.embedding,
                                                          setup.grid); }));
        record(1, time_ms([&] { data = syv::fundamental_forms(grid, setup.ambient,
                                                              setup.orientation); }));
        record(2, time_ms([&] { jets = syv::euclidean_collar(data, 4); }));
        record(3, time_ms([&] { yam = syv::solve_yamabe(jets, data, &grid,
                                                        syv::YamabeMode::Grid); }));
        record(4, time_ms([&] { (void)syv::volume_coefficients(yam, jets, data); }));

        if (!serial) {
            std::printf("grid %dx%d, threads: serial=1 parallel=%d\n", nu, nv,
                        syv::par::max_threads());
        }
    }

    std::printf("%-22s %12s %12s %9s\n", "stage", "serial ms", "parallel ms", "speedup");
    for (const auto& s : stages)
        std::printf("%-22s %12.2f %12.2f %8.2fx\n", s.name, s.serial_ms, s.parallel_ms,
                    s.serial_ms / (s.parallel_ms > 0 ? s.parallel_ms : 1.0));
    return 0;
}
