#include "tavis/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tavis/errors.hpp"

namespace tavis {

QubitDensityMatrix::QubitDensityMatrix(const SmallMatrix& rho) : rho_(rho) {
    if (rho.dim != 4) throw PreconditionError("qubit density matrix must be 4x4");
}

QubitDensityMatrix QubitDensityMatrix::from_pure(const std::array<cplx, 4>& v) {
    double nrm = 0.0;
    for (const auto& a : v) nrm += std::norm(a);
    if (!(nrm > 0.0)) throw ZeroProbabilityError("cannot normalize a zero qubit vector");
    SmallMatrix rho(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho(i, j) = v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]) / nrm;
    return QubitDensityMatrix(rho);
}

double QubitDensityMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < 4; ++i) t += rho_(i, i).real();
    return t;
}

double QubitDensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    double p = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p += std::norm(rho_(i, j));
    return p;
}

std::array<double, 4> QubitDensityMatrix::eigenvalues() const {
    const auto es = jacobi_eigensolve(rho_);
    return {es.values[0], es.values[1], es.values[2], es.values[3]};
}

double QubitDensityMatrix::expectation(const std::array<cplx, 4>& v) const {
    cplx s{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            s += std::conj(v[static_cast<std::size_t>(i)]) * rho_(i, j) * v[static_cast<std::size_t>(j)];
    return s.real();
}

QubitDensityMatrix reduce_to_qubits(const JointState& state) {
    SmallMatrix rho(4);
    for (auto r : kQubitLabels) {
        const auto ar = state.row(r);
        for (auto s : kQubitLabels) {
            if (index(s) < index(r)) continue;
            const auto as = state.row(s);
            cplx acc{};
            for (std::size_t n = 0; n < ar.size(); ++n) acc += ar[n] * std::conj(as[n]);
            rho(index(r), index(s)) = acc;
            rho(index(s), index(r)) = std::conj(acc);
        }
    }
    return QubitDensityMatrix(rho);
}

JointState evolve_coherent(const SystemParams& params, const CoherentPrep& prep, double t) {
    if (params.is_symmetric_resonant()) return evolve_analytic(params, prep, t);
    return evolve_numeric(params, initial_state(params, prep), t);
}

std::vector<double> p_gg_trace(const SystemParams& params, const CoherentPrep& prep,
                               std::span<const double> t_grid) {
    std::vector<double> out;
    out.reserve(t_grid.size());
    auto population = [](const JointState& s) {
        double p = 0.0;
        for (const auto& a : s.row(QubitLabel::gg)) p += std::norm(a);
        return std::clamp(p, 0.0, 1.0);
    };
    if (params.is_symmetric_resonant()) {
        for (double t : t_grid) out.push_back(population(evolve_analytic(params, prep, t)));
    } else {
        const Propagator prop(params, prep.n_max());
        const JointState psi0 = initial_state(params, prep);
        for (double t : t_grid) out.push_back(population(prop.evolve(psi0, t)));
    }
    return out;
}

PhaseSpaceGrid PhaseSpaceGrid::covering(double nbar, int points) {
    PhaseSpaceGrid g;
    g.half_width = std::sqrt(nbar) + 6.0;
    g.points = points;
    return g;
}

double QFunction::integral() const {
    const double h = grid.spacing();
    double s = 0.0;
    for (double q : values) s += q;
    return s * h * h;
}

QFunction q_function(const JointState& state, const PhaseSpaceGrid& grid) {
    if (grid.points < 2) throw PreconditionError("phase-space grid needs at least 2 points per axis");
    QFunction q;
    q.grid = grid;
    const auto np = static_cast<std::size_t>(grid.points);
    q.values.assign(np * np, 0.0);
    const int n_max = state.n_max();
    for (int j = 0; j < grid.points; ++j) {
        for (int i = 0; i < grid.points; ++i) {
            const auto coh = coherent_amplitudes(q.alpha(i, j), n_max);
            double total = 0.0;
            for (auto r : kQubitLabels) {
                const auto a = state.row(r);
                cplx s{};
                for (std::size_t n = 0; n < a.size(); ++n) s += std::conj(coh[n]) * a[n];
                total += std::norm(s);
            }
            q.values[static_cast<std::size_t>(j) * np + static_cast<std::size_t>(i)] = total;
        }
    }
    return q;
}

std::vector<double> hermite_functions(double x, int n_max) {
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    constexpr double kRescale = 1e150;
    const double log_kRescale = std::log(kRescale);
    // Values are carried as v_n * exp(log_scale).
    double log_scale = -0.25 * x * x - 0.25 * std::log(2.0 * std::numbers::pi);
    double factor = std::exp(log_scale);
    double prev = 0.0;
    double cur = 1.0;
    out[0] = cur * factor;
    for (int n = 0; n < n_max; ++n) {
        double next = (x * cur - std::sqrt(static_cast<double>(n)) * prev) / std::sqrt(n + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += log_kRescale;
            factor = std::exp(log_scale);
        }
        out[static_cast<std::size_t>(n) + 1] = cur * factor;
    }
    return out;
}

double QuadratureBasis::minimum_half_range(int n_max) {
    return 2.0 * std::sqrt(static_cast<double>(n_max)) + 8.0;
}

QuadratureBasis::QuadratureBasis(int n_max, double half_range, double dx) : n_max_(n_max), dx_(dx) {
    if (n_max < 0) throw PreconditionError("n_max must be non-negative");
    if (!(dx > 0.0) || dx > 0.1) throw PreconditionError("quadrature spacing must satisfy 0 < dx <= 0.1");
    if (half_range < minimum_half_range(n_max) - 1e-12) {
        throw PreconditionError("quadrature grid must span at least +-(2 sqrt(n_max) + 8)");
    }
    const auto k = static_cast<long>(std::ceil(half_range / dx - 1e-9));
    grid_.reserve(static_cast<std::size_t>(2 * k + 1));
    for (long i = -k; i <= k; ++i) grid_.push_back(static_cast<double>(i) * dx);
    psi_.resize(grid_.size() * fock_dim());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const auto h = hermite_functions(grid_[i], n_max);
        std::copy(h.begin(), h.end(), psi_.begin() + static_cast<std::ptrdiff_t>(i * fock_dim()));
    }
}

std::shared_ptr<const QuadratureBasis> build_quadrature_basis(int n_max, double dx) {
    return build_quadrature_basis(n_max, QuadratureBasis::minimum_half_range(n_max), dx);
}

std::shared_ptr<const QuadratureBasis> build_quadrature_basis(int n_max, double half_range,
                                                              double dx) {
    return std::make_shared<const QuadratureBasis>(n_max, half_range, dx);
}

std::array<cplx, 4> qubit_amplitudes_at(const JointState& state, double x) {
    const auto psi = hermite_functions(x, state.n_max());
    std::array<cplx, 4> c{};
    for (auto r : kQubitLabels) {
        const auto a = state.row(r);
        cplx s{};
        for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * psi[n];
        c[static_cast<std::size_t>(index(r))] = s;
    }
    return c;
}

QuadratureSlice::QuadratureSlice(double t, JointState state,
                                 std::shared_ptr<const QuadratureBasis> basis)
    : t_(t), state_(std::move(state)), basis_(std::move(basis)) {
    if (!basis_) throw PreconditionError("quadrature slice needs a basis");
    if (basis_->n_max() < state_.n_max()) {
        throw PreconditionError("quadrature basis truncation is smaller than the state's");
    }
    const std::size_t nf = state_.fock_dim();

    // Interleave (re, im) of the four rows so the inner loop is a dense
    // 8-wide multiply-add over n.
    std::vector<double> coef(nf * 8);
    std::size_t lo = nf, hi = 0;
    for (std::size_t n = 0; n < nf; ++n) {
        bool nonzero = false;
        for (auto r : kQubitLabels) {
            const cplx a = state_.row(r)[n];
            const auto k = static_cast<std::size_t>(index(r));
            coef[n * 8 + 2 * k] = a.real();
            coef[n * 8 + 2 * k + 1] = a.imag();
            nonzero = nonzero || a != cplx{};
        }
        if (nonzero) {
            lo = std::min(lo, n);
            hi = n + 1;
        }
    }

    const std::size_t nx = basis_->size();
    amps_.assign(nx, {});
    p_total_.assign(nx, 0.0);
    if (lo >= hi) return;
    for (std::size_t i = 0; i < nx; ++i) {
        const double* psi = basis_->wavefunctions(i).data();
        double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        for (std::size_t n = lo; n < hi; ++n) {
            const double p = psi[n];
            const double* c = &coef[n * 8];
            for (int k = 0; k < 8; ++k) acc[k] += p * c[k];
        }
        double total = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            amps_[i][k] = cplx(acc[2 * k], acc[2 * k + 1]);
            total += std::norm(amps_[i][k]);
        }
        p_total_[i] = total;
    }
}

std::vector<double> QuadratureSlice::channel(QubitLabel r) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = density(r, i);
    return out;
}

double QuadratureSlice::total_probability() const {
    double s = 0.0;
    for (double p : p_total_) s += p;
    return s * dx();
}

double QuadratureSlice::channel_probability(QubitLabel r) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += density(r, i);
    return s * dx();
}

QuadratureSlice quadrature_slice(const JointState& state, double t,
                                 std::shared_ptr<const QuadratureBasis> basis) {
    return QuadratureSlice(t, state, std::move(basis));
}

}  // namespace tavis
