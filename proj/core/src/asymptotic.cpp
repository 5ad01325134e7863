#include "tavis/asymptotic.hpp"

#include <cmath>
#include <numbers>

#include "tavis/errors.hpp"

namespace tavis {

namespace {

void require_symmetric(const SystemParams& params, const CoherentPrep& prep) {
    params.validate();
    if (!params.is_symmetric_resonant()) {
        throw PreconditionError("branch decomposition requires symmetric resonant parameters");
    }
    if (!(prep.nbar() > 0.0)) throw PreconditionError("branch decomposition requires nbar > 0");
}

cplx phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

double GeaBranch::weight() const {
    double w = 0.0;
    for (const auto& a : qubit_state) w += std::norm(a);
    return w;
}

std::array<GeaBranch, 3> branches(const SystemParams& params, const CoherentPrep& prep, double t) {
    require_symmetric(params, prep);
    const double omega = params.omega;
    const double lambda = params.lambda1;
    const double root = std::sqrt(prep.nbar());
    const double theta = prep.theta();

    std::array<GeaBranch, 3> out;
    for (int k = -1; k <= 1; ++k) {
        GeaBranch& b = out[static_cast<std::size_t>(k + 1)];
        b.k = k;
        const double freq = omega + k * lambda / root;
        b.field_alpha = phase(-freq * t) * prep.alpha();
        b.global_phase = phase(-k * lambda * root * t);
        if (k == 0) {
            b.qubit_state[index(QubitLabel::gg)] = 0.5;
            b.qubit_state[index(QubitLabel::ee)] =
                0.5 * phase(-2.0 * (theta + std::numbers::pi / 2 + omega * t));
        } else {
            const cplx u = phase(-freq * t - theta);
            b.qubit_state[index(QubitLabel::gg)] = 0.25;
            b.qubit_state[index(QubitLabel::ge)] = 0.25 * static_cast<double>(k) * u;
            b.qubit_state[index(QubitLabel::eg)] = 0.25 * static_cast<double>(k) * u;
            b.qubit_state[index(QubitLabel::ee)] = 0.25 * u * u;
        }
    }
    return out;
}

double predicted_phase(const SystemParams& params, const CoherentPrep& prep, double t) {
    const double two_pi = 2.0 * std::numbers::pi;
    double phi = std::fmod(2.0 * (prep.theta() + std::numbers::pi / 2 + params.omega * t), two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi -= two_pi;
    return phi;
}

std::array<BlobMarker, 3> blob_markers(const SystemParams& params, const CoherentPrep& prep, double t) {
    params.validate();
    const double root = std::sqrt(prep.nbar());
    std::array<BlobMarker, 3> out{};
    for (int k = -1; k <= 1; ++k) {
        // With nbar = 0 every branch sits at the origin.
        const double freq = params.omega + (root > 0.0 ? k * params.lambda1 / root : 0.0);
        const cplx a = phase(-freq * t) * prep.alpha();
        out[static_cast<std::size_t>(k + 1)] = {k, a, 2.0 * a.real()};
    }
    return out;
}

JointState reconstruct_state(const SystemParams& params, const CoherentPrep& prep, double t) {
    JointState psi(prep.n_max());
    for (const auto& b : branches(params, prep, t)) {
        const auto field = coherent_amplitudes(b.field_alpha, prep.n_max());
        for (auto r : kQubitLabels) {
            const cplx q = b.qubit_state[static_cast<std::size_t>(index(r))] * b.global_phase;
            if (q == cplx{}) continue;
            auto row = psi.row(r);
            for (std::size_t n = 0; n < row.size(); ++n) row[n] += q * field[n];
        }
    }
    return psi;
}

}  // namespace tavis
