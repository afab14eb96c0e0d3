#pragma once

#include "syv/yamabe.hpp"

namespace syv {

// Renormalized-volume data: the per-node coefficients of
// (1 + r phi)^{-n-1} sqrt(det h_r / det h_0) through order n, the divergent
// coefficients c_k = (1/(n-k)) int v^{(k)}, and the energy int v^{(n)}.
struct VolumeData {
    int n = 2;
    std::size_t N = 0;
    std::vector<std::vector<double>> v; // v[k][node], k = 0..n
    std::vector<double> c;              // c_0..c_{n-1}
    double energy = 0.0;
};

VolumeData volume_coefficients(const YamabeExpansion& exp, const CollarJets& jets,
                               const HypersurfaceData& data);

// Closed forms: v^{(1)} = (1-n)/(2n) H and
// v^{(2)} = (n-5)/(12(n-1)) (R - |Lo|^2) + (n-2)/(24 n^2) ((n-3) H^2 - 2n Rbar).
struct ClosedFormV12 {
    std::vector<double> v1;
    std::vector<double> v2; // empty for n = 1
};
ClosedFormV12 closed_form_v12(const HypersurfaceData& data, int n);

// n = 2: the energy decomposes as (1/4) int |Lo|^2 - pi chi.
struct EnergySplit {
    double energy = 0.0;            // int v^{(2)}
    double willmore_part = 0.0;     // (1/4) int |Lo|^2
    double topological_part = 0.0;  // -pi chi
    int chi = 0;
    double chi_residual = 0.0;
    double split_residual = 0.0;    // |energy - (willmore + topological)|
};
EnergySplit energy_n2_split(const VolumeData& vol, const HypersurfaceData& data);

// n = 2 comparison with the minimal-area renormalization:
// E_min = -(1/8) int (H^2 + 4 h^{ij} Pbar_{ij}),
// pointwise H^2 + 4 h^{ij} Pbar_{ij} = 2(|Lo|^2 + R),
// globally E_min = -E - 2 pi chi.
struct MinimalAreaComparison {
    double e_min_area = 0.0;
    double pointwise_residual = 0.0;
    double relation_residual = 0.0;
};
MinimalAreaComparison minimal_area_compare(const VolumeData& vol, const HypersurfaceData& data,
                                           int chi);

} // namespace syv
