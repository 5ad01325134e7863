#pragma once

// Truncated joint Hilbert space of two qubits and one resonator mode.
//
// Basis states are |r, n> with r one of the four qubit labels and n a Fock
// index in [0, n_max]. Units are hbar = 1.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tavis {

using cplx = std::complex<double>;

// Canonical ordering gg < ge < eg < ee. The first letter is qubit 1.
enum class QubitLabel : int { gg = 0, ge = 1, eg = 2, ee = 3 };

inline constexpr std::array<QubitLabel, 4> kQubitLabels = {
    QubitLabel::gg, QubitLabel::ge, QubitLabel::eg, QubitLabel::ee};

constexpr int index(QubitLabel r) noexcept { return static_cast<int>(r); }

// Number of excited qubits in a label.
constexpr int excitations(QubitLabel r) noexcept {
    return (r == QubitLabel::gg) ? 0 : (r == QubitLabel::ee) ? 2 : 1;
}

// sigma_z eigenvalue (+1 excited, -1 ground) of qubit 1 or 2.
constexpr int sigma_z(QubitLabel r, int qubit) noexcept {
    const int bits = index(r);  // ge -> qubit 2 excited, eg -> qubit 1 excited
    const bool excited = (qubit == 1) ? (bits & 2) != 0 : (bits & 1) != 0;
    return excited ? 1 : -1;
}

std::string_view to_string(QubitLabel r) noexcept;

struct SystemParams {
    double omega = 1.0;
    double e1 = 0.5;
    double e2 = 0.5;
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    // Equal couplings and both qubit gaps 2E on resonance with omega.
    static SystemParams symmetric_resonant(double omega, double lambda) {
        return {omega, omega / 2, omega / 2, lambda, lambda};
    }

    bool is_symmetric_resonant() const noexcept {
        return e1 == e2 && e1 == omega / 2 && lambda1 == lambda2;
    }

    // Throws PreconditionError unless omega > 0 and couplings are >= 0.
    void validate() const;
};

// Coherent field preparation alpha = sqrt(nbar) * exp(-i theta).
class CoherentPrep {
public:
    // n_max defaults to the truncation policy of default_n_max().
    // Throws TruncationError when the Poisson tail beyond n_max exceeds
    // kMaxTailMass, PreconditionError when nbar < 0.
    explicit CoherentPrep(double nbar, double theta = 0.0,
                          std::optional<int> n_max = std::nullopt);

    double nbar() const noexcept { return nbar_; }
    double theta() const noexcept { return theta_; }
    int n_max() const noexcept { return n_max_; }
    cplx alpha() const noexcept;
    double tail_mass() const noexcept { return tail_mass_; }

    static constexpr double kMaxTailMass = 1e-12;

private:
    double nbar_;
    double theta_;
    int n_max_;
    double tail_mass_;
};

// Smallest truncation satisfying both n_max >= nbar + 10 sqrt(nbar) and a
// Poisson tail mass below CoherentPrep::kMaxTailMass.
int default_n_max(double nbar);

// Sum_{n > n_max} Poisson(nbar; n), evaluated term by term in log space.
double poisson_tail_mass(double nbar, int n_max);

// C_n = exp(-nbar/2) alpha^n / sqrt(n!) for n in [0, n_max], in log space.
std::vector<cplx> coherent_coefficients(const CoherentPrep& prep);

// Fock amplitudes <n|beta> for an arbitrary complex beta, n in [0, n_max].
// Anchored at the Poisson mode so it neither overflows nor underflows there.
std::vector<cplx> coherent_amplitudes(cplx beta, int n_max);

// Amplitudes over {gg,ge,eg,ee} x {0..n_max}, stored label-major.
class JointState {
public:
    JointState() = default;
    explicit JointState(int n_max);

    int n_max() const noexcept { return n_max_; }
    std::size_t fock_dim() const noexcept { return static_cast<std::size_t>(n_max_) + 1; }

    cplx& operator()(QubitLabel r, int n) { return amps_[offset(r, n)]; }
    const cplx& operator()(QubitLabel r, int n) const { return amps_[offset(r, n)]; }

    std::span<cplx> row(QubitLabel r) {
        return {amps_.data() + offset(r, 0), fock_dim()};
    }
    std::span<const cplx> row(QubitLabel r) const {
        return {amps_.data() + offset(r, 0), fock_dim()};
    }

    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::span<cplx> amplitudes() noexcept { return amps_; }

    double norm_squared() const noexcept;
    double norm() const noexcept;
    cplx inner(const JointState& other) const;  // <this|other>

    // Copy into a larger truncation (zero padding).
    JointState padded(int n_max) const;

private:
    std::size_t offset(QubitLabel r, int n) const noexcept {
        return static_cast<std::size_t>(index(r)) * fock_dim() + static_cast<std::size_t>(n);
    }

    int n_max_ = 0;
    std::vector<cplx> amps_;
};

// |gg> (x) sum_n C_n |n>.
JointState initial_state(const SystemParams& params, const CoherentPrep& prep);

}  // namespace tavis
