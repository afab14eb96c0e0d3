#include "syv/volume.hpp"

#include "syv/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace syv {

VolumeData volume_coefficients(const YamabeExpansion& exp, const CollarJets& jets,
                               const HypersurfaceData& data)
{
    const int n = exp.n;
    const int K = n + 2;
    if (jets.K < n)
        throw std::invalid_argument("volume_coefficients: collar jets order too low");

    VolumeData vol;
    vol.n = n;
    vol.N = data.N;
    vol.v.assign(n + 1, std::vector<double>(data.N, 0.0));

    std::vector<std::string> node_error(data.N);
    par::for_each(data.N, [&](std::size_t node) {
        try {
            LogSeries phi(K);
            for (int k = 0; k < n; ++k)
                phi.a(k) = exp.phi[k][node];
            phi.b(n) = exp.obstruction[node];

            const LogSeries density =
                LogSeries::mul(phi.shifted(1).one_plus_pow(-(n + 1.0)),
                               sqrt_det_ratio(jets.taylor(node, K)));

            for (int k = 0; k <= n; ++k) {
                if (std::abs(density.b(k)) > 1e-9)
                    throw std::runtime_error("nonvanishing log slot at order " +
                                             std::to_string(k));
                vol.v[k][node] = density.a(k);
            }
        } catch (const std::exception& e) {
            node_error[node] = e.what();
        }
    });
    for (std::size_t k = 0; k < data.N; ++k)
        if (!node_error[k].empty())
            throw std::runtime_error("volume_coefficients: node " + std::to_string(k) + ": " +
                                     node_error[k]);

    vol.c.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
        vol.c[k] = surface_integrate(vol.v[k], data) / (n - k);
    vol.energy = surface_integrate(vol.v[n], data);
    return vol;
}

ClosedFormV12 closed_form_v12(const HypersurfaceData& data, int n)
{
    ClosedFormV12 out;
    out.v1.assign(data.N, 0.0);
    for (std::size_t k = 0; k < data.N; ++k)
        out.v1[k] = (1.0 - n) / (2.0 * n) * data.H[k];
    if (n >= 2) {
        out.v2.assign(data.N, 0.0);
        for (std::size_t k = 0; k < data.N; ++k)
            out.v2[k] = (n - 5.0) / (12.0 * (n - 1.0)) * (data.R[k] - data.Lo2[k]) +
                        (n - 2.0) / (24.0 * n * n) *
                            ((n - 3.0) * data.H[k] * data.H[k] - 2.0 * n * data.rbar[k]);
    }
    return out;
}

EnergySplit energy_n2_split(const VolumeData& vol, const HypersurfaceData& data)
{
    if (vol.n != 2)
        throw std::invalid_argument("energy_n2_split needs n = 2");
    EnergySplit s;
    s.energy = vol.energy;
    s.willmore_part = 0.25 * surface_integrate(data.Lo2, data);
    const EulerChar e = euler_characteristic(data);
    s.chi = e.chi;
    s.chi_residual = e.residual;
    s.topological_part = -M_PI * e.chi;
    s.split_residual = std::abs(s.energy - (s.willmore_part + s.topological_part));
    return s;
}

MinimalAreaComparison minimal_area_compare(const VolumeData& vol, const HypersurfaceData& data,
                                           int chi)
{
    if (vol.n != 2)
        throw std::invalid_argument("minimal_area_compare needs n = 2");
    MinimalAreaComparison cmp;
    std::vector<double> integrand(data.N, 0.0);
    for (std::size_t k = 0; k < data.N; ++k) {
        const double lhs = data.H[k] * data.H[k] + 4.0 * data.schouten_tr[k];
        integrand[k] = lhs;
        cmp.pointwise_residual =
            std::max(cmp.pointwise_residual, std::abs(lhs - 2.0 * (data.Lo2[k] + data.R[k])));
    }
    cmp.e_min_area = -0.125 * surface_integrate(integrand, data);
    cmp.relation_residual = std::abs(cmp.e_min_area - (-vol.energy - 2.0 * M_PI * chi));
    return cmp;
}

} // namespace syv
