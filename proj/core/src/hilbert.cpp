#include "tavis/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tavis/errors.hpp"

namespace tavis {

std::string_view to_string(QubitLabel r) noexcept {
    switch (r) {
        case QubitLabel::gg: return "gg";
        case QubitLabel::ge: return "ge";
        case QubitLabel::eg: return "eg";
        case QubitLabel::ee: return "ee";
    }
    return "?";
}

void SystemParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw PreconditionError("omega must be positive and finite");
    }
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) ||
        !std::isfinite(lambda2)) {
        throw PreconditionError("couplings lambda1, lambda2 must be non-negative");
    }
    if (!std::isfinite(e1) || !std::isfinite(e2)) {
        throw PreconditionError("charging energies must be finite");
    }
}

namespace {

double log_poisson(double nbar, int n) {
    return -nbar + n * std::log(nbar) - std::lgamma(n + 1.0);
}

}  // namespace

double poisson_tail_mass(double nbar, int n_max) {
    if (nbar == 0.0) return 0.0;
    double tail = 0.0;
    for (int n = n_max + 1;; ++n) {
        const double term = std::exp(log_poisson(nbar, n));
        tail += term;
        // Past the mode the terms decay at least geometrically.
        if (n > nbar && (term < 1e-40 || term < tail * 1e-17)) break;
    }
    return tail;
}

int default_n_max(double nbar) {
    if (nbar <= 0.0) return 0;
    int n_max = static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar)));
    while (poisson_tail_mass(nbar, n_max) >= CoherentPrep::kMaxTailMass) ++n_max;
    return n_max;
}

CoherentPrep::CoherentPrep(double nbar, double theta, std::optional<int> n_max)
    : nbar_(nbar), theta_(theta) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw PreconditionError("nbar must be non-negative and finite");
    }
    n_max_ = n_max.value_or(default_n_max(nbar));
    if (n_max_ < 0) throw PreconditionError("n_max must be non-negative");
    tail_mass_ = poisson_tail_mass(nbar, n_max_);
    if (tail_mass_ >= kMaxTailMass) {
        throw TruncationError("Fock truncation n_max=" + std::to_string(n_max_) +
                                  " leaves coherent tail mass " + std::to_string(tail_mass_),
                              tail_mass_);
    }
}

cplx CoherentPrep::alpha() const noexcept {
    return std::polar(std::sqrt(nbar_), -theta_);
}

std::vector<cplx> coherent_coefficients(const CoherentPrep& prep) {
    std::vector<cplx> c(static_cast<std::size_t>(prep.n_max()) + 1, cplx{});
    const double nbar = prep.nbar();
    if (nbar == 0.0) {
        c[0] = 1.0;
        return c;
    }
    const double log_abs_alpha = 0.5 * std::log(nbar);
    for (int n = 0; n <= prep.n_max(); ++n) {
        const double mag = std::exp(-0.5 * nbar + n * log_abs_alpha - 0.5 * std::lgamma(n + 1.0));
        c[static_cast<std::size_t>(n)] = std::polar(mag, -n * prep.theta());
    }
    return c;
}

std::vector<cplx> coherent_amplitudes(cplx beta, int n_max) {
    std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1, cplx{});
    const double r2 = std::norm(beta);
    if (r2 == 0.0) {
        c[0] = 1.0;
        return c;
    }
    const double r = std::sqrt(r2);
    const double phase = std::arg(beta);
    const int anchor = std::clamp(static_cast<int>(r2), 0, n_max);
    const double log_mag = -0.5 * r2 + anchor * std::log(r) - 0.5 * std::lgamma(anchor + 1.0);
    const auto a = static_cast<std::size_t>(anchor);
    c[a] = std::polar(std::exp(log_mag), anchor * phase);
    for (std::size_t n = a; n < static_cast<std::size_t>(n_max); ++n) {
        c[n + 1] = c[n] * beta / std::sqrt(static_cast<double>(n + 1));
    }
    for (std::size_t n = a; n > 0; --n) {
        c[n - 1] = c[n] * std::sqrt(static_cast<double>(n)) / beta;
    }
    return c;
}

JointState::JointState(int n_max)
    : n_max_(n_max), amps_(4 * (static_cast<std::size_t>(n_max) + 1), cplx{}) {
    if (n_max < 0) throw PreconditionError("n_max must be non-negative");
}

double JointState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double JointState::norm() const noexcept { return std::sqrt(norm_squared()); }

cplx JointState::inner(const JointState& other) const {
    if (other.n_max_ != n_max_) throw PreconditionError("inner product of mismatched truncations");
    cplx s{};
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
}

JointState JointState::padded(int n_max) const {
    if (n_max < n_max_) throw PreconditionError("padded() cannot shrink a state");
    JointState out(n_max);
    for (auto r : kQubitLabels) {
        auto src = row(r);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

JointState initial_state(const SystemParams& params, const CoherentPrep& prep) {
    params.validate();
    JointState s(prep.n_max());
    auto c = coherent_coefficients(prep);
    std::copy(c.begin(), c.end(), s.row(QubitLabel::gg).begin());
    return s;
}

}  // namespace tavis
