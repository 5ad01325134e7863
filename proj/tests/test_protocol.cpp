#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tavis/asymptotic.hpp"
#include "tavis/errors.hpp"
#include "tavis/protocol.hpp"

using namespace tavis;

namespace {

const SystemParams kResonant = SystemParams::symmetric_resonant(1.0, 1.0);
constexpr double kPi = std::numbers::pi;

struct Fixture {
    CoherentPrep prep;
    double t;
    QuadratureSlice slice;

    Fixture(double nbar, double time)
        : prep(nbar),
          t(time),
          slice(time, evolve_coherent(kResonant, prep, time), build_quadrature_basis(prep.n_max())) {}

    double marker(int k) const { return blob_markers(kResonant, prep, t)[static_cast<std::size_t>(k + 1)].x; }

    // Grid point of the density maximum within 2.5 of x.
    double peak_near(double x) const {
        double best = -1.0, at = x;
        for (std::size_t i = 0; i < slice.size(); ++i)
            if (std::abs(slice.x(i) - x) < 2.5 && slice.density(i) > best) {
                best = slice.density(i);
                at = slice.x(i);
            }
        return at;
    }
};

double best_phase_fidelity(const std::array<cplx, 4>& c) {
    return TargetState{std::arg(c[0]) - std::arg(c[3])}.fidelity(c);
}

double plateau_time(const CoherentPrep& p) {
    return plateau_center(kResonant, p, kPi, revival_time(kResonant, p) / 4);
}

}  // namespace

TEST(TargetState, VectorAndFidelity) {
    for (double phi : {0.0, 1.0, kPi, 5.0}) {
        const TargetState target{phi};
        const auto v = target.vector();
        double nrm = 0.0;
        for (const auto& a : v) nrm += std::norm(a);
        EXPECT_NEAR(nrm, 1.0, 1e-15);
        EXPECT_EQ(v[1], cplx{});
        EXPECT_EQ(v[2], cplx{});
        EXPECT_NEAR(target.fidelity(v), 1.0, 1e-15);
        EXPECT_NEAR(target.fidelity({cplx(3.0, 0), cplx{}, cplx{}, cplx{}}), 0.5, 1e-15);
        EXPECT_NEAR(target.fidelity(QubitDensityMatrix::from_pure(v)), 1.0, 1e-15);
        EXPECT_EQ(target.fidelity({cplx{}, cplx{}, cplx{}, cplx{}}), 0.0);
    }
    // Orthogonal phase.
    EXPECT_NEAR(TargetState{0.0}.fidelity(TargetState{kPi}.vector()), 0.0, 1e-15);
}

TEST(ConditionalState, InitialStateGivesHalf) {
    Fixture f(50.0, 0.0);
    for (double x : {f.marker(0) - 1.0, f.marker(0), f.marker(0) + 0.7}) {
        const auto o = conditional_state(f.slice, x, TargetState{0.3}, 0.9);
        EXPECT_NEAR(o.conditional_state.population(QubitLabel::gg), 1.0, 1e-12);
        EXPECT_NEAR(o.fidelity, 0.5, 1e-12);
        EXPECT_FALSE(o.success);
    }
}

TEST(ConditionalState, CentralPeakAtQuarterRevival) {
    const CoherentPrep p(200.0);
    const double t = revival_time(kResonant, p) / 4;
    Fixture f(200.0, t);
    const double x = f.peak_near(f.marker(0));
    const auto c = qubit_amplitudes_at(f.slice.state(), x);
    EXPECT_GT(best_phase_fidelity(c), 0.95);
}

TEST(ConditionalState, SidePeaksAreNotBellLike) {
    Fixture f(200.0, 3 * kPi / 2);
    for (int k : {-1, 1}) {
        const double x = f.peak_near(f.marker(k));
        const auto o = conditional_state(f.slice, x, TargetState{0.0}, 0.9);
        const auto c = qubit_amplitudes_at(f.slice.state(), x);
        EXPECT_LT(best_phase_fidelity(c), 0.9);
        EXPECT_GT(o.conditional_state.population(QubitLabel::ge) + o.conditional_state.population(QubitLabel::eg), 0.1);
    }
}

TEST(ConditionalState, DecompositionIdentityAndIdempotence) {
    Fixture f(200.0, 3 * kPi / 2);
    for (std::size_t i = 0; i < f.slice.size(); i += 131) {
        if (f.slice.density(i) < 1e-20) continue;
        const auto o = conditional_state(f.slice, f.slice.x(i), TargetState{1.0}, 0.9);
        EXPECT_NEAR(o.probability_density, f.slice.density(i), 1e-12);
        for (auto r : kQubitLabels) EXPECT_NEAR(o.conditional_state.population(r) * o.probability_density, f.slice.density(r, i), 1e-10);
        const SmallMatrix& rho = o.conditional_state.matrix();
        const SmallMatrix sq = rho * rho;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) EXPECT_LT(std::abs(sq(a, b) - rho(a, b)), 1e-12);
    }
}

TEST(ConditionalState, Errors) {
    Fixture f(50.0, 1.0);
    const double edge = f.slice.x(f.slice.size() - 1);
    EXPECT_THROW(conditional_state(f.slice, edge + 1.0, TargetState{}, 0.9), PreconditionError);
    EXPECT_THROW(conditional_state(f.slice, f.slice.x(0) - 1.0, TargetState{}, 0.9), PreconditionError);

    const CoherentPrep vac(0.0);
    const QuadratureSlice s(0.0, initial_state(kResonant, vac), build_quadrature_basis(vac.n_max(), 20.0, 0.02));
    EXPECT_THROW(conditional_state(s, 19.9, TargetState{}, 0.9), ZeroProbabilityError);
    EXPECT_NO_THROW(conditional_state(s, 3.0, TargetState{}, 0.9));
}

TEST(BlurredOutcome, ZeroWidthIsProjective) {
    Fixture f(200.0, 3 * kPi / 2);
    const TargetState target{predicted_phase(kResonant, f.prep, f.t)};
    for (double y : {f.marker(0), f.marker(1) + 0.3, -2.0}) {
        const auto a = blurred_outcome(f.slice, y, 0.0, target, 0.9);
        const auto b = conditional_state(f.slice, y, target, 0.9);
        EXPECT_NEAR(a.fidelity, b.fidelity, 1e-12);
        for (auto r : kQubitLabels)
            for (auto s : kQubitLabels) EXPECT_LT(std::abs(a.conditional_state(r, s) - b.conditional_state(r, s)), 1e-12);
    }
    EXPECT_THROW(blurred_outcome(f.slice, 0.0, -1.0, target, 0.9), PreconditionError);
}

TEST(BlurredOutcome, SmallImprecisionBarelyMatters) {
    Fixture f(200.0, 3 * kPi / 2);
    const TargetState target{predicted_phase(kResonant, f.prep, f.t)};
    const double y = f.peak_near(f.marker(0));
    const auto sharp = conditional_state(f.slice, y, target, 0.9);
    const auto blurred = blurred_outcome(f.slice, y, 0.5, target, 0.9);
    EXPECT_LT(sharp.fidelity - blurred.fidelity, 0.05);
    EXPECT_GE(blurred.conditional_state.purity(), 0.25);
    EXPECT_NEAR(blurred.conditional_state.trace(), 1.0, 1e-12);
}

TEST(BlurredOutcome, ImprecisionAtPeakSeparationDestroysHeralding) {
    Fixture f(200.0, 3 * kPi / 2);
    const double y = f.peak_near(f.marker(0));
    const double separation = std::abs(f.marker(1) - f.marker(0));
    const auto o = blurred_outcome(f.slice, y, separation, TargetState{0.0}, 0.9);
    double best = 0.0;
    for (int j = 0; j < 256; ++j) best = std::max(best, TargetState{2 * kPi * j / 256}.fidelity(o.conditional_state));
    EXPECT_LT(best, 0.75);
}

TEST(BlurredOutcome, ContinuousAtZeroWidth) {
    Fixture f(200.0, 3 * kPi / 2);
    const TargetState target{predicted_phase(kResonant, f.prep, f.t)};
    const double y = f.peak_near(f.marker(0));
    const double f0 = blurred_outcome(f.slice, y, 0.0, target, 0.9).fidelity;
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma : {0.2, 0.1, 0.05, 0.025}) {
        const double fs = blurred_outcome(f.slice, y, sigma, target, 0.9).fidelity;
        EXPECT_LT(std::abs(fs - f0) / sigma, 1.0) << sigma;
        EXPECT_LE(std::abs(fs - f0), std::abs(previous - f0) + 1e-12);
        previous = fs;
    }
}

TEST(SuccessProbability, StrictThreshold) {
    FidelityProfile prof;
    prof.dx = 0.1;
    prof.density = {1.0, 1.0, 1.0, 2.0};
    prof.fidelity = {0.9, 0.95, 0.5, 0.9000001};
    EXPECT_NEAR(success_probability(prof, 0.9), 0.1 + 0.2, 1e-15);
    EXPECT_NEAR(success_probability(prof, 0.4), 0.5, 1e-15);
}

TEST(SuccessProbability, ThresholdBelowTrivialFidelity) {
    Fixture f(200.0, 0.0);
    EXPECT_NEAR(success_probability(f.slice, TargetState{kPi}, 0.4), 1.0, 1e-6);
    EXPECT_NEAR(success_probability(f.slice, TargetState{kPi}, 0.6), 0.0, 1e-15);
}

TEST(SuccessProbability, UnrefinedEqualsPlainSum) {
    Fixture f(200.0, 15.7);
    const TargetState target{0.0};
    const auto prof = fidelity_profile(f.slice, target);
    EXPECT_DOUBLE_EQ(success_probability(f.slice, prof, target, 0.9, 1), success_probability(prof, 0.9));
}

TEST(SuccessProbability, PlateauHeight) {
    const CoherentPrep p(200.0);
    Fixture f(200.0, plateau_time(p));
    const double ps = success_probability(f.slice, TargetState{kPi}, 0.9);
    EXPECT_GE(ps, 0.40);
    EXPECT_LE(ps, 0.52);
}

TEST(SuccessProbability, MonotoneInThresholdAndBounded) {
    const CoherentPrep p(100.0);
    std::vector<double> t;
    for (int i = 0; i <= 40; ++i) t.push_back(5.0 + 0.25 * i);
    std::vector<SuccessQuery> q;
    for (double fm : {0.3, 0.5, 0.7, 0.8, 0.9, 0.97}) q.push_back({TargetState{kPi}, fm});
    const auto curves = success_curves(kResonant, p, q, t, build_quadrature_basis(p.n_max()));
    for (std::size_t j = 0; j < t.size(); ++j) {
        for (std::size_t k = 0; k < curves.size(); ++k) {
            EXPECT_GE(curves[k].p_s[j], 0.0);
            EXPECT_LE(curves[k].p_s[j], 1.0);
            if (k > 0) EXPECT_LE(curves[k].p_s[j], curves[k - 1].p_s[j] + 1e-12) << t[j];
        }
    }
}

TEST(SuccessProbability, RejectsThresholdOutsideUnitInterval) {
    const CoherentPrep p(10.0);
    const std::vector<double> t{1.0};
    const auto basis = build_quadrature_basis(p.n_max());
    EXPECT_THROW(success_probability(kResonant, p, TargetState{}, 0.0, t, basis), PreconditionError);
    EXPECT_THROW(success_probability(kResonant, p, TargetState{}, 1.0, t, basis), PreconditionError);
}

TEST(SuccessProbability, NumericPathForAsymmetricParameters) {
    const SystemParams detuned{1.0, 0.52, 0.5, 1.0, 1.0};
    const CoherentPrep p(50.0);
    const std::vector<double> t{0.0, 3.0, 10.0};
    const auto c = success_probability(detuned, p, TargetState{kPi}, 0.4, t, build_quadrature_basis(p.n_max()));
    EXPECT_NEAR(c.p_s[0], 1.0, 1e-6);
    for (double v : c.p_s) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(SuccessProbability, DeadZonesFourPerCycle) {
    const CoherentPrep p(200.0);
    const double t0 = revival_time(kResonant, p) / 4 - kPi;
    const auto basis = build_quadrature_basis(p.n_max());
    std::vector<TargetState> targets;
    for (int j = 0; j < 64; ++j) targets.push_back({2 * kPi * j / 64});
    const int steps = 400;
    std::vector<bool> dead;
    double lowest = 1.0;
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + 2 * kPi * i / steps;
        const QuadratureSlice s(t, evolve_coherent(kResonant, p, t), basis);
        double best = 0.0;
        for (const auto& target : targets) best = std::max(best, success_probability(s, fidelity_profile(s, target), target, 0.9, 1));
        lowest = std::min(lowest, best);
        dead.push_back(best < 0.05);
    }
    // Count dead windows on the periodic grid.
    int windows = 0;
    for (int i = 0; i < steps; ++i)
        if (dead[static_cast<std::size_t>(i)] && !dead[static_cast<std::size_t>((i + steps - 1) % steps)]) ++windows;
    EXPECT_EQ(windows, 4) << "lowest best-phase P_s " << lowest;
}

TEST(PhaseCoverage, BestPhaseAdvancesAtTwiceOmega) {
    const CoherentPrep p(200.0);
    const double tc = plateau_time(p);
    const auto basis = build_quadrature_basis(p.n_max());
    auto best_phi = [&](double t) {
        const QuadratureSlice s(t, evolve_coherent(kResonant, p, t), basis);
        const double x = blob_markers(kResonant, p, t)[1].x;
        double best = -1.0, arg = 0.0;
        for (int j = 0; j < 720; ++j) {
            const double phi = 2 * kPi * j / 720;
            const double fid = conditional_state(s, x, TargetState{phi}, 0.9).fidelity;
            if (fid > best) {
                best = fid;
                arg = phi;
            }
        }
        return arg;
    };
    const double a = best_phi(tc - 0.2), b = best_phi(tc + 0.2);
    double advance = std::fmod(b - a + 4 * kPi, 2 * kPi);
    EXPECT_NEAR(advance, 0.8, 2 * kPi / 720 + 0.02);
}

TEST(Sampler, DeterministicForSeed) {
    Fixture f(200.0, 3 * kPi / 2);
    const auto a = sample_outcome(f.slice, 1234, TargetState{0.0}, 0.9);
    const auto b = sample_outcome(f.slice, 1234, TargetState{0.0}, 0.9);
    const auto c = sample_outcome(f.slice, 1235, TargetState{0.0}, 0.9);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.fidelity, b.fidelity);
    EXPECT_NE(a.x, c.x);

    Rng r1(9), r2(9);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(r1.uniform(), r2.uniform());
}

TEST(Sampler, MatchesSliceDistribution) {
    Fixture f(200.0, 3 * kPi / 2);
    const OutcomeSampler sampler(f.slice);
    Rng rng(77);
    const int n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = sampler.sample_x(rng);
    std::sort(xs.begin(), xs.end());

    // Oracle CDF straight from the slice: cells [x_i - dx/2, x_i + dx/2]
    // with mass P(x_i) dx, uniform inside.
    std::vector<double> cum(f.slice.size() + 1, 0.0);
    for (std::size_t i = 0; i < f.slice.size(); ++i) cum[i + 1] = cum[i] + f.slice.density(i) * f.slice.dx();
    auto cdf = [&](double x) {
        const double pos = (x - (f.slice.x(0) - 0.5 * f.slice.dx())) / f.slice.dx();
        if (pos <= 0) return 0.0;
        const auto i = static_cast<std::size_t>(pos);
        if (i >= f.slice.size()) return 1.0;
        return (cum[i] + (pos - static_cast<double>(i)) * (cum[i + 1] - cum[i])) / cum.back();
    };
    double ks = 0.0;
    for (int k = 0; k < n; ++k) {
        const double c = cdf(xs[static_cast<std::size_t>(k)]);
        ks = std::max({ks, std::abs(c - static_cast<double>(k) / n), std::abs(c - static_cast<double>(k + 1) / n)});
    }
    EXPECT_LT(ks, 0.01);
    EXPECT_NEAR(sampler.cdf(f.slice.x(0) - 1.0), 0.0, 0.0);
    EXPECT_NEAR(sampler.cdf(f.slice.x(f.slice.size() - 1) + 1.0), 1.0, 0.0);
}

TEST(Sampler, SuccessFrequencyMatchesPs) {
    const CoherentPrep p(200.0);
    Fixture f(200.0, plateau_time(p));
    const TargetState target{kPi};
    const double ps = success_probability(f.slice, target, 0.9);
    const OutcomeSampler sampler(f.slice);
    Rng rng(2024);
    const int n = 20000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto o = sampler.sample(rng, target, 0.9);
        if (o.success) {
            ++hits;
            ASSERT_GT(o.fidelity, 0.9);
        }
    }
    const double sigma = std::sqrt(ps * (1 - ps) / n);
    EXPECT_LT(std::abs(static_cast<double>(hits) / n - ps), 3 * sigma);
}

TEST(Width, IdealLaw) {
    EXPECT_NEAR(ideal_width(0.5, 1.0), kPi / 2, 1e-15);
    EXPECT_NEAR(ideal_width(0.5, 2.0), kPi / 4, 1e-15);
    EXPECT_NEAR(ideal_width(1.0, 1.0), 0.0, 1e-15);
    EXPECT_LT(ideal_width(0.999999, 1.0), 3e-3);
    EXPECT_NEAR(ideal_width(0.75, 1.0), std::acos(0.5), 1e-15);
}

TEST(Width, PlateauCenterMatchesPredictedPhase) {
    const CoherentPrep p(200.0, 0.3);
    for (double phi : {0.0, kPi / 2, kPi, 5.0}) {
        const double tc = plateau_center(kResonant, p, phi, 22.0);
        EXPECT_LE(std::abs(tc - 22.0), kPi / 2 + 1e-12);
        const double d = std::fmod(predicted_phase(kResonant, p, tc) - phi + 4 * kPi, 2 * kPi);
        EXPECT_LT(std::min(d, 2 * kPi - d), 1e-9);
    }
}

TEST(Width, MeasureOnSyntheticPeak) {
    std::vector<double> t, ps;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(0.01 * i);
        // Triangle from 1 to 3 with apex 0.5 at 2: FWHM 1.
        ps.push_back(std::max(0.0, 0.5 - 0.5 * std::abs(t.back() - 2.0)));
    }
    const auto w = measure_plateau_width(t, ps, 2.0);
    EXPECT_NEAR(w.width, 1.0, 1e-9);
    EXPECT_NEAR(w.t_left, 1.5, 1e-9);
    EXPECT_NEAR(w.height, 0.5, 1e-12);
}

TEST(Width, UnresolvablePeaks) {
    std::vector<double> t, edge, narrow;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.01 * i);
        edge.push_back(1.0 - t.back());
        narrow.push_back(std::abs(t.back() - 0.5) < 0.05 ? 1.0 : 0.0);
    }
    EXPECT_THROW(measure_plateau_width(t, edge, 0.2), UnresolvablePeakError);
    EXPECT_THROW(measure_plateau_width(t, narrow, 0.5), UnresolvablePeakError);
    EXPECT_NO_THROW(measure_plateau_width(t, narrow, 0.5, 5));
    EXPECT_THROW(measure_plateau_width(t, std::vector<double>(t.size(), 0.0), 0.5), UnresolvablePeakError);
}

TEST(Width, AnalysisReportsPerPointStatus) {
    const std::vector<CoherentPrep> preps{CoherentPrep(100.0), CoherentPrep(300.0)};
    const std::vector<double> f_mins{0.75};
    WidthOptions coarse;
    coarse.t_steps = 25;
    const auto bad = width_analysis(kResonant, preps, f_mins, TargetState{kPi}, coarse);
    for (const auto& pt : bad.points) {
        EXPECT_NE(pt.status, "ok");
        EXPECT_TRUE(std::isnan(pt.width));
        EXPECT_EQ(pt.ideal, ideal_width(0.75, 1.0));
    }

    WidthOptions fine;
    fine.t_steps = 201;
    const auto res = width_analysis(kResonant, preps, f_mins, TargetState{kPi}, fine);
    ASSERT_EQ(res.points.size(), 2u);
    ASSERT_EQ(res.fits.size(), 1u);
    for (const auto& pt : res.points) {
        EXPECT_EQ(pt.status, "ok");
        EXPECT_NEAR(pt.width, pt.ideal, 0.15 * pt.ideal);
    }
    EXPECT_GE(res.at(0, 0).width, res.at(0, 1).width - kPi / 200);
    EXPECT_EQ(res.fits[0].points, 2u);
    EXPECT_TRUE(std::isfinite(res.fits[0].k));
}

TEST(Width, NeverNarrowerThanIdeal) {
    std::vector<CoherentPrep> preps;
    for (double nbar : {25.0, 50.0, 100.0, 200.0, 300.0}) preps.emplace_back(nbar);
    const std::vector<double> f_mins{0.55, 0.65, 0.75, 0.85, 0.95};
    const WidthOptions options;
    const auto res = width_analysis(kResonant, preps, f_mins, TargetState{kPi}, options);
    const double resolution = kPi / (options.t_steps - 1);
    for (const auto& pt : res.points) {
        ASSERT_EQ(pt.status, "ok");
        EXPECT_GE(pt.width, pt.ideal - resolution) << "nbar=" << pt.nbar << " F_min=" << pt.f_min;
    }
}
