#pragma once

// Quantities measured or plotted from a joint state: the reduced qubit
// density matrix, P_gg(t), the Husimi Q-function, and qubit-resolved
// distributions of the field quadrature x = a + a^dag.

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "tavis/dynamics.hpp"
#include "tavis/hermitian.hpp"
#include "tavis/hilbert.hpp"

namespace tavis {

// 4x4 density matrix in the canonical {gg, ge, eg, ee} ordering.
class QubitDensityMatrix {
public:
    QubitDensityMatrix() : rho_(4) {}
    explicit QubitDensityMatrix(const SmallMatrix& rho);

    // |v><v| / <v|v>.
    static QubitDensityMatrix from_pure(const std::array<cplx, 4>& v);

    const SmallMatrix& matrix() const noexcept { return rho_; }
    cplx operator()(QubitLabel r, QubitLabel s) const { return rho_(index(r), index(s)); }

    double population(QubitLabel r) const { return rho_(index(r), index(r)).real(); }
    double trace() const;
    double purity() const;
    std::array<double, 4> eigenvalues() const;
    // <v|rho|v> for a normalized v.
    double expectation(const std::array<cplx, 4>& v) const;

private:
    SmallMatrix rho_;
};

// rho_Q[r,s] = sum_n A_{r,n} conj(A_{s,n}).
QubitDensityMatrix reduce_to_qubits(const JointState& state);

// Evolve |gg> (x) |alpha> to time t: closed form when the parameters are
// symmetric resonant, block propagator otherwise.
JointState evolve_coherent(const SystemParams& params, const CoherentPrep& prep, double t);

// P_gg(t) on each grid time.
std::vector<double> p_gg_trace(const SystemParams& params, const CoherentPrep& prep,
                               std::span<const double> t_grid);

// Square grid in the complex alpha plane.
struct PhaseSpaceGrid {
    cplx center{};
    double half_width = 1.0;
    int points = 301;

    // Centered at 0 with half width sqrt(nbar) + 6.
    static PhaseSpaceGrid covering(double nbar, int points = 301);

    double spacing() const { return 2.0 * half_width / (points - 1); }
    double coordinate(int i) const { return -half_width + i * spacing(); }
};

struct QFunction {
    PhaseSpaceGrid grid;
    std::vector<double> values;  // row-major: values[j * points + i], i along Re, j along Im

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.points) +
                      static_cast<std::size_t>(i)];
    }
    cplx alpha(int i, int j) const {
        return grid.center + cplx(grid.coordinate(i), grid.coordinate(j));
    }
    // Sum Q dA over the grid (pi for a normalized state on a covering grid).
    double integral() const;
};

// Q(alpha) = <alpha| rho_F |alpha>, without a 1/pi factor.
QFunction q_function(const JointState& state, const PhaseSpaceGrid& grid);

// Normalized position-basis Fock wavefunctions psi_n(x) for n in [0, n_max]
// in the convention x = a + a^dag, computed by the upward three-term
// recurrence with running rescaling (no overflow for large n).
std::vector<double> hermite_functions(double x, int n_max);

class QuadratureBasis {
public:
    // Grid x_i = i * dx for |x_i| <= half_range (rounded outward to a whole
    // number of cells). Requires 0 < dx <= 0.1 and
    // half_range >= 2 sqrt(n_max) + 8.
    QuadratureBasis(int n_max, double half_range, double dx);

    int n_max() const noexcept { return n_max_; }
    double dx() const noexcept { return dx_; }
    std::size_t size() const noexcept { return grid_.size(); }
    std::span<const double> grid() const noexcept { return grid_; }
    double x(std::size_t i) const { return grid_[i]; }

    // psi_n(x_i) for n in [0, n_max].
    std::span<const double> wavefunctions(std::size_t i) const {
        return {psi_.data() + i * fock_dim(), fock_dim()};
    }
    double psi(std::size_t i, int n) const { return psi_[i * fock_dim() + static_cast<std::size_t>(n)]; }

    static double minimum_half_range(int n_max);

private:
    std::size_t fock_dim() const noexcept { return static_cast<std::size_t>(n_max_) + 1; }

    int n_max_;
    double dx_;
    std::vector<double> grid_;
    std::vector<double> psi_;  // x-major
};

inline constexpr double kDefaultQuadratureDx = 0.02;

// Basis with the default span +-(2 sqrt(n_max) + 8).
std::shared_ptr<const QuadratureBasis> build_quadrature_basis(int n_max,
                                                              double dx = kDefaultQuadratureDx);
std::shared_ptr<const QuadratureBasis> build_quadrature_basis(int n_max, double half_range,
                                                              double dx);

// Unnormalized qubit amplitudes c_r(x) = sum_n A_{r,n} psi_n(x) at an
// arbitrary point.
std::array<cplx, 4> qubit_amplitudes_at(const JointState& state, double x);

class QuadratureSlice {
public:
    QuadratureSlice(double t, JointState state, std::shared_ptr<const QuadratureBasis> basis);

    double time() const noexcept { return t_; }
    const JointState& state() const noexcept { return state_; }
    const QuadratureBasis& basis() const noexcept { return *basis_; }
    std::shared_ptr<const QuadratureBasis> basis_ptr() const noexcept { return basis_; }

    std::size_t size() const noexcept { return basis_->size(); }
    double dx() const noexcept { return basis_->dx(); }
    double x(std::size_t i) const { return basis_->x(i); }

    // c_r(x_i) for the four labels.
    const std::array<cplx, 4>& amplitudes(std::size_t i) const { return amps_[i]; }

    // P_r(x_i, t).
    double density(QubitLabel r, std::size_t i) const { return std::norm(amps_[i][static_cast<std::size_t>(index(r))]); }
    // P(x_i, t) = sum_r P_r(x_i, t).
    double density(std::size_t i) const { return p_total_[i]; }
    std::span<const double> p_total() const noexcept { return p_total_; }
    std::vector<double> channel(QubitLabel r) const;

    // Riemann sums over the grid.
    double total_probability() const;
    double channel_probability(QubitLabel r) const;

private:
    double t_;
    JointState state_;
    std::shared_ptr<const QuadratureBasis> basis_;
    std::vector<std::array<cplx, 4>> amps_;
    std::vector<double> p_total_;
};

QuadratureSlice quadrature_slice(const JointState& state, double t,
                                 std::shared_ptr<const QuadratureBasis> basis);

}  // namespace tavis
