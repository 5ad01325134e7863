#pragma once

// Time evolution under the rotating-wave two-qubit Hamiltonian
//
//   H = omega (a^dag a + 1/2) + E1 sz1 + E2 sz2 + sum_i lambda_i (a s_i^+ + a^dag s_i^-).
//
// H conserves the total excitation N = (#excited qubits) + n, so it splits
// into blocks of dimension <= 4 that are diagonalized independently.

#include <utility>
#include <vector>

#include "tavis/hermitian.hpp"
#include "tavis/hilbert.hpp"

namespace tavis {

struct BasisState {
    QubitLabel label;
    int n;
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

struct ExcitationBlock {
    int total_excitation = 0;
    std::vector<BasisState> basis;  // descending photon number
    SmallMatrix h_matrix;
    // Common diagonal shift removed before diagonalization; the block's
    // energies are shift + eigenvalues[k].
    double shift = 0.0;
    std::array<double, SmallMatrix::kMaxDim> eigenvalues{};
    SmallMatrix eigenvectors;

    int dim() const noexcept { return static_cast<int>(basis.size()); }
    double energy(int k) const { return shift + eigenvalues[static_cast<std::size_t>(k)]; }
};

// Block of fixed total excitation N. With n_max >= 0, basis states whose
// photon number exceeds n_max are dropped (Hermitian projection onto the
// truncated space); n_max < 0 means no truncation.
ExcitationBlock build_block(const SystemParams& params, int total_excitation, int n_max = -1);

// Cached eigendecompositions for every block touching a truncation. Built
// once, then evolve() is O(n_max) small matrix-vector products and safe to
// call concurrently.
class Propagator {
public:
    Propagator(const SystemParams& params, int n_max);

    const SystemParams& params() const noexcept { return params_; }
    int n_max() const noexcept { return n_max_; }
    const std::vector<ExcitationBlock>& blocks() const noexcept { return blocks_; }

    JointState evolve(const JointState& state, double t) const;

    // <psi|H|psi>.
    double energy(const JointState& state) const;

    // Probability of each total excitation N in [0, n_max + 2].
    std::vector<double> excitation_distribution(const JointState& state) const;

private:
    SystemParams params_;
    int n_max_;
    std::vector<ExcitationBlock> blocks_;
};

// Exact evolution by block diagonalization, for any parameters and state.
JointState evolve_numeric(const SystemParams& params, const JointState& state, double t);

// Closed-form evolution of |gg> (x) |alpha> in the symmetric resonant case.
// Throws PreconditionError otherwise.
JointState evolve_analytic(const SystemParams& params, const CoherentPrep& prep, double t);

}  // namespace tavis
