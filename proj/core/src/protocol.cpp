#include "tavis/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "tavis/errors.hpp"

namespace tavis {

namespace {

constexpr double kMinOutcomeDensity = 1e-30;

void check_in_grid(const QuadratureSlice& slice, double x) {
    const double half = 0.5 * slice.dx();
    if (!(x >= slice.x(0) - half && x <= slice.x(slice.size() - 1) + half)) {
        throw PreconditionError("measurement outcome lies outside the quadrature grid");
    }
}

// A cell is integrated on a finer sub-grid with exactly evaluated amplitudes
// when the fidelity in its five-point neighbourhood straddles F_min, or
// varies by more than kRefineSpread while coming within kRefineMargin of it.
constexpr double kRefineMargin = 0.5;
constexpr double kRefineSpread = 0.05;

// |<target|c>|^2 - F_min |c|^2; positive exactly where F > F_min.
double threshold_form(const std::array<cplx, 4>& c, const TargetState& target, double f_min) {
    double nrm = 0.0;
    for (const auto& a : c) nrm += std::norm(a);
    const cplx overlap = (c[0] + std::polar(1.0, target.phi) * c[3]) / std::numbers::sqrt2;
    return std::norm(overlap) - f_min * nrm;
}

// Integral of P(x) Theta(g(x)) over [a, a + h] with P and g linear between
// the endpoint samples.
double sub_interval_mass(double pa, double pb, double ga, double gb, double h) {
    if (ga > 0.0 && gb > 0.0) return 0.5 * h * (pa + pb);
    if (ga <= 0.0 && gb <= 0.0) return 0.0;
    const double s = ga / (ga - gb);
    if (ga > 0.0) return s * h * (pa + 0.5 * s * (pb - pa));
    return (1.0 - s) * h * (pb + 0.5 * (1.0 - s) * (pa - pb));
}

// Below this cell mass a cell never triggers refinement.
constexpr double kRefineMinCellMass = 1e-12;

// Qubit amplitudes c_r(x) at arbitrary x via the normalized Hermite
// recurrence, restricted to the occupied Fock range of the state.
class AmplitudeEvaluator {
public:
    explicit AmplitudeEvaluator(const JointState& state) {
        const std::size_t nf = state.fock_dim();
        lo_ = nf;
        for (std::size_t n = 0; n < nf; ++n) {
            for (auto r : kQubitLabels) {
                if (state(r, static_cast<int>(n)) != cplx{}) {
                    lo_ = std::min(lo_, n);
                    hi_ = std::max(hi_, n + 1);
                }
            }
        }
        if (lo_ >= hi_) lo_ = hi_ = 0;
        coef_.resize(hi_ * 8);
        for (std::size_t n = lo_; n < hi_; ++n)
            for (auto r : kQubitLabels) {
                const cplx v = state(r, static_cast<int>(n));
                coef_[n * 8 + 2 * static_cast<std::size_t>(index(r))] = v.real();
                coef_[n * 8 + 2 * static_cast<std::size_t>(index(r)) + 1] = v.imag();
            }
        sqrt_n_.resize(hi_ + 1);
        inv_sqrt_n_.resize(hi_ + 1);
        for (std::size_t n = 0; n <= hi_; ++n) {
            sqrt_n_[n] = std::sqrt(static_cast<double>(n));
            inv_sqrt_n_[n] = n > 0 ? 1.0 / sqrt_n_[n] : 0.0;
        }
    }

    std::array<cplx, 4> operator()(double x) const {
        constexpr double kRescale = 1e150;
        double log_scale = -0.25 * x * x - 0.25 * std::log(2.0 * std::numbers::pi);
        double prev = 0.0, cur = 1.0;
        double acc[8] = {};
        double chunk[8] = {};
        auto flush = [&] {
            const double f = std::exp(log_scale);
            for (int k = 0; k < 8; ++k) {
                acc[k] += chunk[k] * f;
                chunk[k] = 0.0;
            }
        };
        for (std::size_t n = 0; n < hi_; ++n) {
            if (n >= lo_) {
                const double* c = &coef_[n * 8];
                for (int k = 0; k < 8; ++k) chunk[k] += c[k] * cur;
            }
            const double next = (x * cur - sqrt_n_[n] * prev) * inv_sqrt_n_[n + 1];
            prev = cur;
            cur = next;
            if (std::abs(cur) > kRescale) {
                flush();
                cur /= kRescale;
                prev /= kRescale;
                log_scale += std::log(kRescale);
            }
        }
        flush();
        return {cplx(acc[0], acc[1]), cplx(acc[2], acc[3]), cplx(acc[4], acc[5]), cplx(acc[6], acc[7])};
    }

private:
    std::size_t lo_ = 0, hi_ = 0;
    std::vector<double> coef_;
    std::vector<double> sqrt_n_, inv_sqrt_n_;
};

double refined_cell_mass(const AmplitudeEvaluator& amplitudes, double lo, double dx, int m,
                         const TargetState& target, double f_min) {
    const double h = dx / m;
    double mass = 0.0;
    double pa = 0.0, ga = 0.0;
    for (int k = 0; k <= m; ++k) {
        const auto c = amplitudes(lo + k * h);
        double p = 0.0;
        for (const auto& a : c) p += std::norm(a);
        const double g = threshold_form(c, target, f_min);
        if (k > 0) mass += sub_interval_mass(pa, p, ga, g, h);
        pa = p;
        ga = g;
    }
    return mass;
}

}  // namespace

std::array<cplx, 4> TargetState::vector() const {
    const double h = 1.0 / std::numbers::sqrt2;
    return {cplx(h, 0.0), cplx{}, cplx{}, h * std::polar(1.0, -phi)};
}

double TargetState::fidelity(const std::array<cplx, 4>& c) const {
    double nrm = 0.0;
    for (const auto& a : c) nrm += std::norm(a);
    if (!(nrm > 0.0)) return 0.0;
    const cplx overlap = (c[0] + std::polar(1.0, phi) * c[3]) / std::numbers::sqrt2;
    return std::clamp(std::norm(overlap) / nrm, 0.0, 1.0);
}

double TargetState::fidelity(const QubitDensityMatrix& rho) const {
    return std::clamp(rho.expectation(vector()), 0.0, 1.0);
}

HeraldedOutcome conditional_state(const QuadratureSlice& slice, double x, const TargetState& target,
                                  double f_min) {
    check_in_grid(slice, x);
    const auto c = qubit_amplitudes_at(slice.state(), x);
    double p = 0.0;
    for (const auto& a : c) p += std::norm(a);
    if (!(p > kMinOutcomeDensity)) {
        throw ZeroProbabilityError("measurement outcome x=" + std::to_string(x) + " has zero probability");
    }
    HeraldedOutcome out;
    out.t = slice.time();
    out.x = x;
    out.conditional_state = QubitDensityMatrix::from_pure(c);
    out.fidelity = target.fidelity(c);
    out.success = out.fidelity > f_min;
    out.probability_density = p;
    return out;
}

HeraldedOutcome blurred_outcome(const QuadratureSlice& slice, double y, double sigma_m,
                                const TargetState& target, double f_min) {
    if (!(sigma_m >= 0.0)) throw PreconditionError("measurement imprecision must be non-negative");
    if (sigma_m == 0.0) return conditional_state(slice, y, target, f_min);

    SmallMatrix rho(4);
    double density = 0.0;
    const double norm = 1.0 / (sigma_m * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const double u = (y - slice.x(i)) / sigma_m;
        if (std::abs(u) > 40.0) continue;
        const double w = norm * std::exp(-0.5 * u * u) * slice.dx();
        const auto& c = slice.amplitudes(i);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                rho(a, b) += w * c[static_cast<std::size_t>(a)] * std::conj(c[static_cast<std::size_t>(b)]);
        density += w * slice.density(i);
    }
    if (!(density > kMinOutcomeDensity)) {
        throw ZeroProbabilityError("blurred outcome y=" + std::to_string(y) + " has zero probability");
    }
    for (auto& e : rho.m) e /= density;

    HeraldedOutcome out;
    out.t = slice.time();
    out.x = y;
    out.conditional_state = QubitDensityMatrix(rho);
    out.fidelity = target.fidelity(out.conditional_state);
    out.success = out.fidelity > f_min;
    out.probability_density = density;
    return out;
}

FidelityProfile fidelity_profile(const QuadratureSlice& slice, const TargetState& target) {
    FidelityProfile prof;
    prof.dx = slice.dx();
    prof.density.resize(slice.size());
    prof.fidelity.resize(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) {
        prof.density[i] = slice.density(i);
        prof.fidelity[i] = target.fidelity(slice.amplitudes(i));
    }
    return prof;
}

double success_probability(const FidelityProfile& profile, double f_min) {
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.fidelity.size(); ++i)
        if (profile.fidelity[i] > f_min) sum += profile.density[i];
    return std::clamp(sum * profile.dx, 0.0, 1.0);
}

double success_probability(const QuadratureSlice& slice, const FidelityProfile& profile,
                           const TargetState& target, double f_min, int refine) {
    if (refine < 1) throw PreconditionError("refinement factor must be positive");
    const auto& f = profile.fidelity;
    const std::size_t n = f.size();
    const double dx = profile.dx;
    std::optional<AmplitudeEvaluator> amplitudes;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i > 1 ? i - 2 : 0;
        const std::size_t b = std::min(i + 2, n - 1);
        double lo = f[i], hi = f[i], pmax = 0.0, bend = 0.0;
        for (std::size_t j = a; j <= b; ++j) {
            lo = std::min(lo, f[j]);
            hi = std::max(hi, f[j]);
            pmax = std::max(pmax, profile.density[j]);
            if (j > a && j < b) bend = std::max(bend, std::abs(f[j - 1] - 2.0 * f[j] + f[j + 1]));
        }
        // A smooth extremum can pass F_min between samples by up to bend / 8.
        const double slack = 0.25 * bend;
        const bool straddles = lo - slack <= f_min && hi + slack > f_min;
        const bool steep = hi - lo > kRefineSpread && hi > f_min - kRefineMargin && lo <= f_min + kRefineMargin;
        if (refine > 1 && pmax * dx > kRefineMinCellMass && (straddles || steep)) {
            if (!amplitudes) amplitudes.emplace(slice.state());
            sum += refined_cell_mass(*amplitudes, slice.x(i) - 0.5 * dx, dx, refine, target, f_min);
        } else if (f[i] > f_min) {
            const auto& p = profile.density;
            // Cell average from the midpoint value, fourth order in dx.
            const double curvature = (refine > 1 && i > 0 && i + 1 < n) ? (p[i - 1] - 2.0 * p[i] + p[i + 1]) / 24.0 : 0.0;
            sum += (p[i] + curvature) * dx;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

double success_probability(const QuadratureSlice& slice, const TargetState& target, double f_min, int refine) {
    return success_probability(slice, fidelity_profile(slice, target), target, f_min, refine);
}

std::vector<SuccessCurve> success_curves(const SystemParams& params, const CoherentPrep& prep,
                                         std::span<const SuccessQuery> queries,
                                         std::span<const double> t_grid,
                                         std::shared_ptr<const QuadratureBasis> basis) {
    for (const auto& q : queries) {
        if (!(q.f_min > 0.0 && q.f_min < 1.0)) throw PreconditionError("F_min must lie in (0, 1)");
    }
    std::vector<SuccessCurve> curves(queries.size());
    for (std::size_t k = 0; k < queries.size(); ++k) {
        curves[k].t_grid.assign(t_grid.begin(), t_grid.end());
        curves[k].p_s.assign(t_grid.size(), 0.0);
        curves[k].f_min = queries[k].f_min;
        curves[k].target = queries[k].target;
    }

    std::optional<Propagator> prop;
    JointState psi0;
    if (!params.is_symmetric_resonant()) {
        prop.emplace(params, prep.n_max());
        psi0 = initial_state(params, prep);
    }

    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        const double t = t_grid[j];
        JointState psi = prop ? prop->evolve(psi0, t) : evolve_analytic(params, prep, t);
        const QuadratureSlice slice(t, std::move(psi), basis);
        // Queries sharing a target reuse the fidelity profile.
        std::optional<FidelityProfile> profile;
        double profile_phi = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t k = 0; k < queries.size(); ++k) {
            if (!profile || queries[k].target.phi != profile_phi) {
                profile = fidelity_profile(slice, queries[k].target);
                profile_phi = queries[k].target.phi;
            }
            curves[k].p_s[j] = success_probability(slice, *profile, queries[k].target, queries[k].f_min);
        }
    }
    return curves;
}

SuccessCurve success_probability(const SystemParams& params, const CoherentPrep& prep,
                                 const TargetState& target, double f_min,
                                 std::span<const double> t_grid,
                                 std::shared_ptr<const QuadratureBasis> basis) {
    const SuccessQuery q{target, f_min};
    return std::move(success_curves(params, prep, std::span(&q, 1), t_grid, std::move(basis)).front());
}

OutcomeSampler::OutcomeSampler(const QuadratureSlice& slice) : slice_(&slice) {
    cumulative_.resize(slice.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < slice.size(); ++i) {
        acc += slice.density(i) * slice.dx();
        cumulative_[i] = acc;
    }
    if (!(acc > 0.0)) throw ZeroProbabilityError("quadrature slice carries no probability");
}

double OutcomeSampler::sample_x(Rng& rng) const {
    const double total = cumulative_.back();
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    // Skip empty cells so the interpolation below is well defined.
    while (it != cumulative_.begin() && *it == *(it - 1)) --it;
    const auto i = static_cast<std::size_t>(it - cumulative_.begin());
    const double before = i > 0 ? cumulative_[i - 1] : 0.0;
    const double mass = cumulative_[i] - before;
    const double frac = mass > 0.0 ? std::clamp((u - before) / mass, 0.0, 1.0) : 0.5;
    return slice_->x(i) + (frac - 0.5) * slice_->dx();
}

HeraldedOutcome OutcomeSampler::sample(Rng& rng, const TargetState& target, double f_min) const {
    return conditional_state(*slice_, sample_x(rng), target, f_min);
}

double OutcomeSampler::cdf(double x) const {
    const double dx = slice_->dx();
    const double lo = slice_->x(0) - 0.5 * dx;
    if (x <= lo) return 0.0;
    const double pos = (x - lo) / dx;
    const auto i = static_cast<std::size_t>(pos);
    if (i >= cumulative_.size()) return 1.0;
    const double before = i > 0 ? cumulative_[i - 1] : 0.0;
    return (before + (pos - static_cast<double>(i)) * (cumulative_[i] - before)) / cumulative_.back();
}

HeraldedOutcome sample_outcome(const QuadratureSlice& slice, std::uint64_t seed,
                               const TargetState& target, double f_min) {
    Rng rng(seed);
    return OutcomeSampler(slice).sample(rng, target, f_min);
}

double ideal_width(double f_min, double omega) {
    return std::acos(std::clamp(2.0 * f_min - 1.0, -1.0, 1.0)) / omega;
}

double revival_time(const SystemParams& params, const CoherentPrep& prep) {
    return 2.0 * std::numbers::pi * std::sqrt(prep.nbar()) / params.lambda1;
}

double plateau_center(const SystemParams& params, const CoherentPrep& prep, double phi, double t_near) {
    // phi = 2 (theta + pi/2 + omega t) mod 2 pi, so plateaus recur every pi / omega.
    const double period = std::numbers::pi / params.omega;
    const double t0 = (0.5 * phi - prep.theta() - 0.5 * std::numbers::pi) / params.omega;
    const double m = std::round((t_near - t0) / period);
    return t0 + m * period;
}

PlateauWidth measure_plateau_width(std::span<const double> t_grid, std::span<const double> p_s,
                                   double t_center, std::size_t min_points) {
    const std::size_t n = p_s.size();
    if (n != t_grid.size() || n < 3) throw PreconditionError("plateau search needs matching grids");
    const double global_max = *std::max_element(p_s.begin(), p_s.end());
    if (!(global_max > 0.0)) throw UnresolvablePeakError("P_s vanishes on the whole grid");
    const double level = 0.5 * global_max;

    struct Region {
        std::size_t lo, hi;  // inclusive
    };
    std::vector<Region> regions;
    for (std::size_t i = 0; i < n;) {
        if (p_s[i] < level) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && p_s[j + 1] >= level) ++j;
        if (i > 0 && j + 1 < n) regions.push_back({i, j});
        i = j + 1;
    }
    if (regions.empty()) throw UnresolvablePeakError("no interior P_s plateau on the time grid");

    auto distance = [&](const Region& r) {
        if (t_center >= t_grid[r.lo] && t_center <= t_grid[r.hi]) return 0.0;
        return std::min(std::abs(t_grid[r.lo] - t_center), std::abs(t_grid[r.hi] - t_center));
    };
    const Region best = *std::min_element(regions.begin(), regions.end(),
                                          [&](const Region& a, const Region& b) { return distance(a) < distance(b); });
    if (best.hi - best.lo + 1 < min_points) {
        throw UnresolvablePeakError("P_s plateau spans fewer than " + std::to_string(min_points) +
                                    " grid points");
    }

    std::size_t peak = best.lo;
    for (std::size_t i = best.lo; i <= best.hi; ++i)
        if (p_s[i] > p_s[peak]) peak = i;
    const double half = 0.5 * p_s[peak];

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double a = p_s[inside], b = p_s[outside];
        const double s = (a - half) / (a - b);
        return t_grid[inside] + s * (t_grid[outside] - t_grid[inside]);
    };
    std::size_t l = peak;
    while (l > 0 && p_s[l - 1] >= half) --l;
    std::size_t r = peak;
    while (r + 1 < n && p_s[r + 1] >= half) ++r;
    if (l == 0 || r + 1 == n) throw UnresolvablePeakError("P_s plateau half maximum not bracketed by the grid");

    PlateauWidth w;
    w.t_left = crossing(l, l - 1);
    w.t_right = crossing(r, r + 1);
    w.width = w.t_right - w.t_left;
    w.height = p_s[peak];
    w.grid_points = r - l + 1;
    return w;
}

WidthFitResult width_analysis(const SystemParams& params, std::span<const CoherentPrep> preps,
                              std::span<const double> f_mins, const TargetState& target,
                              const WidthOptions& options) {
    params.validate();
    if (options.t_steps < 3) throw PreconditionError("width analysis needs at least 3 time steps");
    WidthFitResult res;
    res.f_mins.assign(f_mins.begin(), f_mins.end());
    for (const auto& p : preps) res.nbars.push_back(p.nbar());
    res.points.resize(f_mins.size() * preps.size());

    std::vector<SuccessQuery> queries;
    for (double f : f_mins) queries.push_back({target, f});

    for (std::size_t j = 0; j < preps.size(); ++j) {
        const CoherentPrep& prep = preps[j];
        const double t_near = options.t_near.value_or(0.25 * revival_time(params, prep));
        const double center = plateau_center(params, prep, target.phi, t_near);
        const double half_window = 0.5 * std::numbers::pi / params.omega;
        std::vector<double> t_grid(static_cast<std::size_t>(options.t_steps));
        for (std::size_t s = 0; s < t_grid.size(); ++s) {
            t_grid[s] = center - half_window + 2.0 * half_window * static_cast<double>(s) /
                                                   static_cast<double>(t_grid.size() - 1);
        }
        const auto basis = build_quadrature_basis(prep.n_max(), options.dx);
        const auto curves = success_curves(params, prep, queries, t_grid, basis);
        for (std::size_t f = 0; f < f_mins.size(); ++f) {
            WidthPoint& pt = res.points[f * preps.size() + j];
            pt.nbar = prep.nbar();
            pt.f_min = f_mins[f];
            pt.ideal = ideal_width(f_mins[f], params.omega);
            try {
                pt.width = measure_plateau_width(t_grid, curves[f].p_s, center).width;
            } catch (const UnresolvablePeakError& e) {
                pt.width = std::numeric_limits<double>::quiet_NaN();
                pt.status = std::string("unresolvable: ") + e.what();
            }
        }
    }

    for (std::size_t f = 0; f < f_mins.size(); ++f) {
        WidthFit fit;
        fit.f_min = f_mins[f];
        fit.ideal = ideal_width(f_mins[f], params.omega);
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < preps.size(); ++j) {
            const auto& pt = res.points[f * preps.size() + j];
            if (pt.status != "ok" || !(pt.nbar > 0.0)) continue;
            xs.push_back(1.0 / std::sqrt(pt.nbar));
            ys.push_back(pt.width - pt.ideal);
        }
        fit.points = xs.size();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        fit.k = fit.slope = fit.intercept = fit.r_squared = nan;
        if (!xs.empty()) {
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxx += xs[i] * xs[i];
                sxy += xs[i] * ys[i];
            }
            fit.k = sxy / sxx;
        }
        if (xs.size() >= 2) {
            const double m = static_cast<double>(xs.size());
            double mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= m;
            my /= m;
            double cxx = 0.0, cxy = 0.0, cyy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                cxx += (xs[i] - mx) * (xs[i] - mx);
                cxy += (xs[i] - mx) * (ys[i] - my);
                cyy += (ys[i] - my) * (ys[i] - my);
            }
            if (cxx > 0.0) {
                fit.slope = cxy / cxx;
                fit.intercept = my - fit.slope * mx;
                fit.r_squared = cyy > 0.0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
            }
        }
        res.fits.push_back(fit);
    }
    return res;
}

}  // namespace tavis
