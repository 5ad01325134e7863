#pragma once

// Large-nbar decomposition of the evolved state into three branches
// |D_k(t)> (x) |Phi_k(t)>, k in {-1, 0, +1}, where each field branch is a
// coherent state rotating at omega + k lambda / sqrt(nbar).

#include <array>
#include <vector>

#include "tavis/hilbert.hpp"

namespace tavis {

struct GeaBranch {
    int k = 0;
    // Unnormalized qubit state in {gg, ge, eg, ee} order, with the printed
    // 1/4, 1/2, 1/4 prefactors.
    std::array<cplx, 4> qubit_state{};
    // Coherent amplitude exp(-i (omega + k lambda / sqrt(nbar)) t) alpha.
    cplx field_alpha{};
    // exp(-i k lambda sqrt(nbar) t).
    cplx global_phase{1.0, 0.0};

    double weight() const;  // squared norm of qubit_state
};

// Requires symmetric resonant parameters and nbar > 0.
std::array<GeaBranch, 3> branches(const SystemParams& params, const CoherentPrep& prep, double t);

// Relative phase phi = 2 (theta + pi/2 + omega t) mod 2 pi of the state
// (|gg> + exp(-i phi)|ee>)/sqrt(2) heralded by the central peak.
double predicted_phase(const SystemParams& params, const CoherentPrep& prep, double t);

struct BlobMarker {
    int k;
    cplx alpha;
    double x;  // 2 Re(alpha), the quadrature position of the blob
};

std::array<BlobMarker, 3> blob_markers(const SystemParams& params, const CoherentPrep& prep, double t);

// sum_k |D_k> (x) |Phi_k> expanded in the prep's Fock truncation.
JointState reconstruct_state(const SystemParams& params, const CoherentPrep& prep, double t);

}  // namespace tavis
