#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tavis/errors.hpp"
#include "tavis/hilbert.hpp"
#include "tavis/observables.hpp"

using namespace tavis;

TEST(QubitLabel, CanonicalOrdering) {
    EXPECT_EQ(index(QubitLabel::gg), 0);
    EXPECT_EQ(index(QubitLabel::ge), 1);
    EXPECT_EQ(index(QubitLabel::eg), 2);
    EXPECT_EQ(index(QubitLabel::ee), 3);
    EXPECT_EQ(kQubitLabels.size(), 4u);
    EXPECT_EQ(to_string(QubitLabel::eg), "eg");
}

TEST(QubitLabel, ExcitationsAndSigmaZ) {
    EXPECT_EQ(excitations(QubitLabel::gg), 0);
    EXPECT_EQ(excitations(QubitLabel::ge), 1);
    EXPECT_EQ(excitations(QubitLabel::ee), 2);
    // First letter is qubit 1.
    EXPECT_EQ(sigma_z(QubitLabel::eg, 1), 1);
    EXPECT_EQ(sigma_z(QubitLabel::eg, 2), -1);
    EXPECT_EQ(sigma_z(QubitLabel::ge, 1), -1);
    EXPECT_EQ(sigma_z(QubitLabel::ge, 2), 1);
}

TEST(SystemParams, SymmetricResonantFlag) {
    EXPECT_TRUE(SystemParams::symmetric_resonant(1.0, 1.0).is_symmetric_resonant());
    EXPECT_TRUE(SystemParams::symmetric_resonant(2.0, 0.3).is_symmetric_resonant());
    EXPECT_FALSE((SystemParams{1.0, 0.5, 0.4, 1.0, 1.0}).is_symmetric_resonant());
    EXPECT_FALSE((SystemParams{1.0, 0.5, 0.5, 1.0, 0.9}).is_symmetric_resonant());
    EXPECT_FALSE((SystemParams{1.0, 0.6, 0.6, 1.0, 1.0}).is_symmetric_resonant());
}

TEST(SystemParams, Validation) {
    EXPECT_NO_THROW(SystemParams{}.validate());
    EXPECT_THROW((SystemParams{0.0, 0.5, 0.5, 1, 1}).validate(), PreconditionError);
    EXPECT_THROW((SystemParams{1.0, 0.5, 0.5, -1, 1}).validate(), PreconditionError);
}

TEST(CoherentPrep, DefaultTruncationPolicy) {
    for (double nbar : {0.0, 0.5, 1.0, 5.0, 30.0, 200.0, 500.0}) {
        const CoherentPrep p(nbar);
        EXPECT_GE(p.n_max(), nbar + 10.0 * std::sqrt(nbar)) << nbar;
        EXPECT_LT(p.tail_mass(), CoherentPrep::kMaxTailMass) << nbar;
    }
    EXPECT_EQ(CoherentPrep(200.0).n_max(), 342);
}

TEST(CoherentPrep, Errors) {
    EXPECT_THROW(CoherentPrep(-1.0), PreconditionError);
    EXPECT_THROW(CoherentPrep(30.0, 0.0, 40), TruncationError);
    try {
        CoherentPrep(30.0, 0.0, 40);
    } catch (const TruncationError& e) {
        EXPECT_GT(e.tail_mass(), 1e-12);
    }
}

TEST(CoherentPrep, Alpha) {
    const CoherentPrep p(4.0, std::numbers::pi / 3);
    EXPECT_NEAR(std::abs(p.alpha() - std::polar(2.0, -std::numbers::pi / 3)), 0.0, 1e-15);
}

TEST(PoissonTail, MatchesComplementOfDirectSum) {
    for (double nbar : {1.0, 10.0, 50.0}) {
        for (int n_max : {5, 20, 60}) {
            double head = 0.0;
            for (int n = 0; n <= n_max; ++n) head += oracle::poisson_pmf(nbar, n);
            const double tail = poisson_tail_mass(nbar, n_max);
            if (1.0 - head > 1e-10) EXPECT_NEAR(tail / (1.0 - head), 1.0, 1e-6) << nbar << " " << n_max;
            else EXPECT_LT(tail, 1e-10);
        }
    }
}

TEST(CoherentCoefficients, Vacuum) {
    for (double theta : {0.0, 1.0, 4.0}) {
        const auto c = coherent_coefficients(CoherentPrep(0.0, theta));
        ASSERT_FALSE(c.empty());
        EXPECT_EQ(c[0], cplx(1.0, 0.0));
        for (std::size_t n = 1; n < c.size(); ++n) EXPECT_EQ(c[n], cplx{});
    }
}

TEST(CoherentCoefficients, PoissonAgainstLogGammaOracle) {
    const auto c = coherent_coefficients(CoherentPrep(200.0));
    // e^-200 200^200 / 200!, log factorial by explicit summation.
    const double expected = std::exp(-200.0 + 200.0 * std::log(200.0) - oracle::log_factorial(200));
    EXPECT_NEAR(std::norm(c[200]) / expected, 1.0, 1e-11);
    for (int n : {100, 150, 250, 300}) {
        const double pmf = std::exp(-200.0 + n * std::log(200.0) - oracle::log_factorial(n));
        EXPECT_NEAR(std::norm(c[static_cast<std::size_t>(n)]) / pmf, 1.0, 1e-10) << n;
    }
}

TEST(CoherentCoefficients, PhaseAccumulation) {
    const auto c = coherent_coefficients(CoherentPrep(30.0, std::numbers::pi / 2));
    EXPECT_NEAR(std::arg(c[1]), -std::numbers::pi / 2, 1e-12);
    EXPECT_NEAR(std::abs(std::arg(c[2])), std::numbers::pi, 1e-12);
}

TEST(CoherentCoefficients, NormWithinTail) {
    for (double nbar : {0.3, 2.0, 30.0, 200.0, 600.0}) {
        const CoherentPrep p(nbar, 0.7);
        double s = 0.0;
        for (const auto& v : coherent_coefficients(p)) s += std::norm(v);
        EXPECT_LE(s, 1.0 + 1e-13);
        EXPECT_GE(s, 1.0 - 1e-12);
    }
}

TEST(CoherentCoefficients, RatioRecurrence) {
    const CoherentPrep p(500.0, 2.1);
    const auto c = coherent_coefficients(p);
    for (std::size_t n = 0; n + 1 < c.size(); ++n) {
        if (std::abs(c[n]) < 1e-300 || std::abs(c[n + 1]) < 1e-300) continue;
        const cplx expected = p.alpha() / std::sqrt(static_cast<double>(n) + 1.0);
        EXPECT_LT(std::abs(c[n + 1] / c[n] / expected - 1.0), 1e-12) << n;
    }
}

TEST(CoherentAmplitudes, AgreesWithCoefficients) {
    const CoherentPrep p(80.0, -0.4);
    const auto a = coherent_coefficients(p);
    const auto b = coherent_amplitudes(p.alpha(), p.n_max());
    ASSERT_EQ(a.size(), b.size());
    EXPECT_LT(oracle::max_deviation(a, b), 1e-14);
}

TEST(CoherentAmplitudes, LargeAmplitudeStaysFinite) {
    const auto b = coherent_amplitudes(std::polar(std::sqrt(3000.0), 0.3), 3800);
    double s = 0.0;
    for (const auto& v : b) {
        ASSERT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
        s += std::norm(v);
    }
    EXPECT_NEAR(s, 1.0, 1e-10);
}

TEST(InitialState, ProductWithGroundQubits) {
    const auto params = SystemParams::symmetric_resonant(1, 1);
    const CoherentPrep p(30.0, 0.2);
    const auto psi = initial_state(params, p);
    const auto c = coherent_coefficients(p);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    for (int n = 0; n <= p.n_max(); ++n) {
        EXPECT_EQ(psi(QubitLabel::gg, n), c[static_cast<std::size_t>(n)]);
        EXPECT_EQ(psi(QubitLabel::ge, n), cplx{});
        EXPECT_EQ(psi(QubitLabel::eg, n), cplx{});
        EXPECT_EQ(psi(QubitLabel::ee, n), cplx{});
    }
    const auto rho = reduce_to_qubits(psi);
    EXPECT_NEAR(rho.population(QubitLabel::gg), 1.0, 1e-12);
    for (auto r : kQubitLabels)
        for (auto s : kQubitLabels)
            if (r != QubitLabel::gg || s != QubitLabel::gg) EXPECT_EQ(rho(r, s), cplx{});
}

TEST(InitialState, Vacuum) {
    const auto psi = initial_state(SystemParams{}, CoherentPrep(0.0));
    EXPECT_EQ(psi(QubitLabel::gg, 0), cplx(1.0, 0.0));
    EXPECT_DOUBLE_EQ(psi.norm_squared(), 1.0);
}

TEST(JointState, InnerProductAndPadding) {
    std::mt19937_64 rng(7);
    const auto a = oracle::to_joint(oracle::random_state(rng, 4 * 6), 5);
    const auto b = oracle::to_joint(oracle::random_state(rng, 4 * 6), 5);
    cplx expected{};
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
        expected += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    EXPECT_LT(std::abs(a.inner(b) - expected), 1e-15);
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);

    const auto big = a.padded(9);
    EXPECT_EQ(big.n_max(), 9);
    EXPECT_NEAR(big.norm_squared(), a.norm_squared(), 1e-15);
    for (auto r : kQubitLabels) {
        for (int n = 0; n <= 5; ++n) EXPECT_EQ(big(r, n), a(r, n));
        for (int n = 6; n <= 9; ++n) EXPECT_EQ(big(r, n), cplx{});
    }
}
