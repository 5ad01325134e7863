#include "tavis/dynamics.hpp"

#include <cmath>

#include "tavis/errors.hpp"

namespace tavis {

namespace {

double bare_energy(const SystemParams& p, BasisState s) {
    return p.omega * (s.n + 0.5) + p.e1 * sigma_z(s.label, 1) + p.e2 * sigma_z(s.label, 2);
}

// <to| H_int |from> for single-excitation hops between basis states of one block.
double coupling(const SystemParams& p, BasisState from, BasisState to) {
    if (from.n == to.n + 1) {
        // a s_i^+ : qubit i goes g -> e, one photon absorbed.
        for (int qubit = 1; qubit <= 2; ++qubit) {
            const int other = 3 - qubit;
            if (sigma_z(from.label, qubit) == -1 && sigma_z(to.label, qubit) == 1 &&
                sigma_z(from.label, other) == sigma_z(to.label, other)) {
                return (qubit == 1 ? p.lambda1 : p.lambda2) * std::sqrt(static_cast<double>(from.n));
            }
        }
    } else if (to.n == from.n + 1) {
        return coupling(p, to, from);
    }
    return 0.0;
}

}  // namespace

ExcitationBlock build_block(const SystemParams& params, int total_excitation, int n_max) {
    if (total_excitation < 0) throw PreconditionError("total excitation must be non-negative");
    ExcitationBlock b;
    b.total_excitation = total_excitation;
    for (auto r : kQubitLabels) {
        const int n = total_excitation - excitations(r);
        if (n < 0 || (n_max >= 0 && n > n_max)) continue;
        b.basis.push_back({r, n});
    }
    // kQubitLabels order already yields descending n: gg, ge, eg, ee.

    const int d = b.dim();
    b.h_matrix = SmallMatrix(d);
    double diag_sum = 0.0;
    for (int i = 0; i < d; ++i) {
        const auto bi = b.basis[static_cast<std::size_t>(i)];
        b.h_matrix(i, i) = bare_energy(params, bi);
        diag_sum += bare_energy(params, bi);
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            b.h_matrix(i, j) = coupling(params, b.basis[static_cast<std::size_t>(j)], bi);
        }
    }
    b.shift = d > 0 ? diag_sum / d : 0.0;

    SmallMatrix shifted = b.h_matrix;
    for (int i = 0; i < d; ++i) shifted(i, i) -= b.shift;
    if (d > 0) {
        const EigenSystem es = jacobi_eigensolve(shifted);
        b.eigenvalues = es.values;
        b.eigenvectors = es.vectors;
    } else {
        b.eigenvectors = SmallMatrix(0);
    }
    return b;
}

Propagator::Propagator(const SystemParams& params, int n_max) : params_(params), n_max_(n_max) {
    params.validate();
    if (n_max < 0) throw PreconditionError("n_max must be non-negative");
    blocks_.reserve(static_cast<std::size_t>(n_max) + 3);
    for (int total = 0; total <= n_max + 2; ++total) {
        blocks_.push_back(build_block(params, total, n_max));
    }
}

JointState Propagator::evolve(const JointState& state, double t) const {
    if (state.n_max() != n_max_) throw PreconditionError("state truncation does not match propagator");
    JointState out(n_max_);
    std::array<cplx, SmallMatrix::kMaxDim> in{}, coeff{};
    for (const auto& b : blocks_) {
        const int d = b.dim();
        bool any = false;
        for (int i = 0; i < d; ++i) {
            const auto& bs = b.basis[static_cast<std::size_t>(i)];
            in[static_cast<std::size_t>(i)] = state(bs.label, bs.n);
            any = any || in[static_cast<std::size_t>(i)] != cplx{};
        }
        if (!any) continue;
        const cplx global = std::polar(1.0, -b.shift * t);
        // coeff = diag(exp(-i e_k t)) V^dagger in
        for (int k = 0; k < d; ++k) {
            cplx s{};
            for (int i = 0; i < d; ++i) s += std::conj(b.eigenvectors(i, k)) * in[static_cast<std::size_t>(i)];
            coeff[static_cast<std::size_t>(k)] = s * std::polar(1.0, -b.eigenvalues[static_cast<std::size_t>(k)] * t);
        }
        for (int i = 0; i < d; ++i) {
            cplx s{};
            for (int k = 0; k < d; ++k) s += b.eigenvectors(i, k) * coeff[static_cast<std::size_t>(k)];
            const auto& bs = b.basis[static_cast<std::size_t>(i)];
            out(bs.label, bs.n) = global * s;
        }
    }
    return out;
}

double Propagator::energy(const JointState& state) const {
    if (state.n_max() != n_max_) throw PreconditionError("state truncation does not match propagator");
    double e = 0.0;
    for (const auto& b : blocks_) {
        const int d = b.dim();
        for (int i = 0; i < d; ++i) {
            const auto& bi = b.basis[static_cast<std::size_t>(i)];
            cplx hv{};
            for (int j = 0; j < d; ++j) {
                const auto& bj = b.basis[static_cast<std::size_t>(j)];
                hv += b.h_matrix(i, j) * state(bj.label, bj.n);
            }
            e += (std::conj(state(bi.label, bi.n)) * hv).real();
        }
    }
    return e;
}

std::vector<double> Propagator::excitation_distribution(const JointState& state) const {
    std::vector<double> p(blocks_.size(), 0.0);
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        for (const auto& bs : blocks_[k].basis) p[k] += std::norm(state(bs.label, bs.n));
    return p;
}

JointState evolve_numeric(const SystemParams& params, const JointState& state, double t) {
    return Propagator(params, state.n_max()).evolve(state, t);
}

JointState evolve_analytic(const SystemParams& params, const CoherentPrep& prep, double t) {
    params.validate();
    if (!params.is_symmetric_resonant()) {
        throw PreconditionError("analytic evolution requires symmetric resonant parameters");
    }
    const double omega = params.omega;
    const double lambda = params.lambda1;
    const auto c = coherent_coefficients(prep);
    JointState out(prep.n_max());

    for (int n = 0; n <= prep.n_max(); ++n) {
        const cplx cn = c[static_cast<std::size_t>(n)];
        if (cn == cplx{}) continue;
        const cplx pref = std::polar(1.0, -0.5 * omega * (2.0 * n - 1.0) * t) * cn;
        if (n == 0) {
            // |gg,0> is decoupled; the bracket reduces to 1.
            out(QubitLabel::gg, 0) += pref;
            continue;
        }
        const double m = 2.0 * n - 1.0;
        const double arg = lambda * t * std::sqrt(2.0 * m);
        const double cs = std::cos(arg);
        const double sn = std::sin(arg);
        out(QubitLabel::gg, n) += pref * ((n * cs + (n - 1.0)) / m);
        const cplx side = pref * cplx(0.0, -std::sqrt(n / (2.0 * m)) * sn);
        out(QubitLabel::eg, n - 1) += side;
        out(QubitLabel::ge, n - 1) += side;
        if (n >= 2) {
            out(QubitLabel::ee, n - 2) += pref * (std::sqrt(n * (n - 1.0)) / m * (cs - 1.0));
        }
    }
    return out;
}

}  // namespace tavis
