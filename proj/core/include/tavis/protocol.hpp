#pragma once

// Heralded entanglement by homodyne measurement of x = a + a^dag.
//
// A projective measurement with outcome x leaves the qubits in the pure
// state c(x) / |c(x)|, c_r(x) = sum_n A_{r,n} psi_n(x). The protocol
// succeeds when that state has fidelity above F_min with a target
// (|gg> + exp(-i phi)|ee>)/sqrt(2).

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tavis/observables.hpp"

namespace tavis {

struct TargetState {
    double phi = 0.0;

    // (|gg> + exp(-i phi)|ee>)/sqrt(2) in canonical order.
    std::array<cplx, 4> vector() const;

    // |<target|c>|^2 / |c|^2; zero for a vanishing c.
    double fidelity(const std::array<cplx, 4>& c) const;
    double fidelity(const QubitDensityMatrix& rho) const;
};

struct HeraldedOutcome {
    double t = 0.0;
    double x = 0.0;
    QubitDensityMatrix conditional_state;
    double fidelity = 0.0;
    bool success = false;
    double probability_density = 0.0;  // P(x, t), or the blurred density for blurred outcomes
};

// Projective outcome at an arbitrary x inside the slice grid. Throws
// ZeroProbabilityError when P(x, t) <= 1e-30 and PreconditionError when x
// lies outside the grid.
HeraldedOutcome conditional_state(const QuadratureSlice& slice, double x, const TargetState& target,
                                  double f_min);

// Outcome y of a measurement with Gaussian imprecision sigma_m:
// rho(y) ~ sum_i G(y - x_i; sigma_m) c(x_i) c(x_i)^dagger dx.
// sigma_m = 0 is the projective case.
HeraldedOutcome blurred_outcome(const QuadratureSlice& slice, double y, double sigma_m,
                                const TargetState& target, double f_min);

// Per-grid-point density and conditional fidelity of one slice.
struct FidelityProfile {
    double dx = 0.0;
    std::vector<double> density;
    std::vector<double> fidelity;
};

FidelityProfile fidelity_profile(const QuadratureSlice& slice, const TargetState& target);

// Plain Riemann sum: P_s = sum_i P(x_i) dx Theta(F(x_i) - F_min), strict.
double success_probability(const FidelityProfile& profile, double f_min);

inline constexpr int kDefaultRefinement = 16;

// Riemann sum in which every cell whose neighbourhood comes close to the
// threshold is split into `refine` sub-intervals. Amplitudes there are
// evaluated exactly and the crossing is located by linear interpolation of
// |<target|c>|^2 - F_min |c|^2. refine = 1 gives the plain sum.
double success_probability(const QuadratureSlice& slice, const FidelityProfile& profile,
                           const TargetState& target, double f_min, int refine = kDefaultRefinement);
double success_probability(const QuadratureSlice& slice, const TargetState& target, double f_min,
                           int refine = kDefaultRefinement);

struct SuccessCurve {
    std::vector<double> t_grid;
    std::vector<double> p_s;
    double f_min = 0.0;
    TargetState target;
};

struct SuccessQuery {
    TargetState target;
    double f_min = 0.9;
};

// One sweep over t_grid, evaluating every query on the same slices.
std::vector<SuccessCurve> success_curves(const SystemParams& params, const CoherentPrep& prep,
                                         std::span<const SuccessQuery> queries,
                                         std::span<const double> t_grid,
                                         std::shared_ptr<const QuadratureBasis> basis);

SuccessCurve success_probability(const SystemParams& params, const CoherentPrep& prep,
                                 const TargetState& target, double f_min,
                                 std::span<const double> t_grid,
                                 std::shared_ptr<const QuadratureBasis> basis);

// Seeded 64-bit Mersenne twister; doubles built from the top 53 bits so
// streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Inverse-CDF sampler over the cell masses P(x_i) dx, uniform inside a cell.
class OutcomeSampler {
public:
    explicit OutcomeSampler(const QuadratureSlice& slice);

    double sample_x(Rng& rng) const;
    HeraldedOutcome sample(Rng& rng, const TargetState& target, double f_min) const;

    // Piecewise-linear CDF of the sampled distribution.
    double cdf(double x) const;

private:
    const QuadratureSlice* slice_;
    std::vector<double> cumulative_;  // cumulative_[i] = mass of cells 0..i
};

HeraldedOutcome sample_outcome(const QuadratureSlice& slice, std::uint64_t seed,
                               const TargetState& target, double f_min);

// arccos(2 F_min - 1) / omega.
double ideal_width(double f_min, double omega);

// Time of the plateau for target phase phi nearest to t_near.
double plateau_center(const SystemParams& params, const CoherentPrep& prep, double phi, double t_near);

// Revival time 2 pi sqrt(nbar) / lambda.
double revival_time(const SystemParams& params, const CoherentPrep& prep);

struct PlateauWidth {
    double width = 0.0;
    double height = 0.0;
    double t_left = 0.0;
    double t_right = 0.0;
    std::size_t grid_points = 0;
};

// Full width at half maximum of the P_s plateau nearest t_center. Regions
// above half the global maximum that touch either end of the grid are
// discarded. Throws UnresolvablePeakError when no region remains or the
// chosen one spans fewer than min_points grid points.
PlateauWidth measure_plateau_width(std::span<const double> t_grid, std::span<const double> p_s,
                                   double t_center, std::size_t min_points = 20);

struct WidthOptions {
    double dx = kDefaultQuadratureDx;
    int t_steps = 401;
    // Plateau nearest t_r/4 by default.
    std::optional<double> t_near;
};

struct WidthPoint {
    double nbar = 0.0;
    double f_min = 0.0;
    double width = 0.0;        // NaN when unresolved
    double ideal = 0.0;
    std::string status = "ok";
};

struct WidthFit {
    double f_min = 0.0;
    double ideal = 0.0;
    // Least squares of (width - ideal) = K / sqrt(nbar).
    double k = 0.0;
    // Ordinary least squares (width - ideal) = intercept + slope / sqrt(nbar).
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

struct WidthFitResult {
    std::vector<double> f_mins;
    std::vector<double> nbars;
    std::vector<WidthPoint> points;  // f_min-major
    std::vector<WidthFit> fits;      // one per f_min

    const WidthPoint& at(std::size_t f_index, std::size_t nbar_index) const {
        return points[f_index * nbars.size() + nbar_index];
    }
};

// Measures plateau widths over every (nbar, F_min) pair and fits the
// finite-size broadening. Unresolved plateaus are reported per point.
WidthFitResult width_analysis(const SystemParams& params, std::span<const CoherentPrep> preps,
                              std::span<const double> f_mins, const TargetState& target,
                              const WidthOptions& options = {});

}  // namespace tavis
