#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "sqcl/closed_form.hpp"
#include "sqcl/errors.hpp"
#include "sqcl/phase_space.hpp"
#include "test_support.hpp"

// Reference values come from tests/reference_values.py (30-digit mpmath).

namespace sqcl {
namespace {

using closed::pnd_closed_form;

TEST(Propagator, ReferenceValues) {
    const PhasePoint zero{0.0, 0.0};
    const cplx k = closed::propagator(zero, zero, zero, zero, params_from_tau(1.0, 0.0));
    EXPECT_NEAR(k.real(), 0.648054273663885, 1e-14);
    EXPECT_NEAR(k.imag(), 0.0, 1e-15);

    const cplx k2 = closed::propagator({0.5, 0.35}, {-0.4, 0.25}, {0.3, 0.1}, {-0.2, 0.25}, params_from_tau(0.7, 0.0));
    EXPECT_NEAR(k2.real(), 0.61060287501396664, 1e-14);
    EXPECT_NEAR(k2.imag(), -0.066096935260076549, 1e-14);
}

TEST(Propagator, ReducesToCoherentOverlapAtZeroTime) {
    const PhasePoint a{0.4, -0.3}, b{0.1, 0.9}, g{-0.2, 0.5}, e{0.7, 0.0};
    const cplx k = closed::propagator(a, b, g, e, params_from_tau(0.0, 0.0));
    auto ov = [](PhasePoint x, PhasePoint y) {
        return std::exp(-0.5 * x.norm2() - 0.5 * y.norm2() + std::conj(x.value()) * y.value());
    };
    const cplx expected = ov(a, g) * ov(b, e);
    EXPECT_NEAR(std::abs(k - expected), 0.0, 1e-15);
}

TEST(Propagator, BoundedByOne) {
    for (const auto& p : test::random_params(50, 11))
        for (double x : {-1.0, 0.0, 0.6})
            EXPECT_LE(std::abs(closed::propagator({x, 0.2}, {0.3, x}, {0.1, -x}, {x, x}, p)), 1.0 + 1e-12);
}

TEST(QFunctions, ReferenceValues) {
    const PhasePoint zero{0.0, 0.0};
    EXPECT_NEAR(closed::q_joint(zero, zero, params_from_tau(1.0, 0.5)), 0.0377361808833097, 1e-15);
    EXPECT_NEAR(closed::q_joint({0.3, 0.2}, {-0.1, 0.4}, params_from_tau(0.8, 0.5)), 0.031742876595391684, 1e-15);
    EXPECT_NEAR(closed::q_cavity(zero, params_from_tau(1.0, 0.5)), 0.118551708637541, 1e-14);
    EXPECT_NEAR(closed::q_cavity({1.0, 0.0}, params_from_tau(1.0, 0.0)), 0.0878375767730249, 1e-14);
    EXPECT_NEAR(closed::q_atomic(zero, params_from_tau(0.5, 0.5)), 0.238295366666962, 1e-14);
    EXPECT_NEAR(closed::q_cavity(zero, params_from_tau(0.0, 0.0)), 1.0 / closed::kPi, 1e-16);
}

TEST(QFunctions, SpecialCasesMatchGeneralForms) {
    for (const auto& p : test::random_params(40, 3)) {
        for (PhasePoint z : {PhasePoint{0.0, 0.0}, PhasePoint{0.8, -0.4}, PhasePoint{-1.5, 1.1}}) {
            ModelParams p0 = p;
            p0.t = 0.0;
            EXPECT_NEAR(closed::q_cavity(z, p0), closed::q_cavity_uncoupled(z, p.r), 1e-15);
            ModelParams chaotic = p;
            chaotic.r = 0.0;
            EXPECT_NEAR(closed::q_cavity(z, chaotic), closed::q_chaotic(z, chaotic), 1e-15);
            EXPECT_NEAR(closed::q_atomic(z, chaotic), closed::q_chaotic(z, chaotic), 1e-15);
        }
    }
}

TEST(QFunctions, AtomicMarginalIsVacuumAtZeroTime) {
    for (double r : {0.0, 0.5, 1.5})
        EXPECT_NEAR(closed::q_atomic({0.6, 0.3}, params_from_tau(0.0, r)), std::exp(-0.45) / closed::kPi, 1e-15);
}

TEST(QFunctions, MarginalsNormalizeOnLattice) {
    for (const auto& p : test::lattice()) {
        const PhaseGrid g = normalization_grid(p);
        EXPECT_NEAR(integrate(g, [&](PhasePoint z) { return closed::q_cavity(z, p); }), 1.0, 1e-4)
            << "r=" << p.r << " tau=" << p.tau();
        EXPECT_NEAR(integrate(g, [&](PhasePoint z) { return closed::q_atomic(z, p); }), 1.0, 1e-4)
            << "r=" << p.r << " tau=" << p.tau();
    }
}

TEST(QFunctions, JointIntegratesToCavityMarginal) {
    const ModelParams p = params_from_tau(0.6, 0.4);
    const PhaseGrid g{7.0, 141};
    for (PhasePoint a : {PhasePoint{0.0, 0.0}, PhasePoint{0.5, -0.7}}) {
        const double m = integrate(g, [&](PhasePoint b) { return closed::q_joint(a, b, p); });
        EXPECT_NEAR(m, closed::q_cavity(a, p), 1e-9);
    }
}

TEST(Moments, ReferenceValues) {
    EXPECT_NEAR(closed::cavity_moments(params_from_tau(0.0, 1.0)).n_a, 1.38109784554182, 1e-13);
    const ModelParams p = params_from_tau(1.0, 0.5);
    const MomentSet m = closed::closed_form_moments(p);
    EXPECT_NEAR(m.n_a, 2.027661910298845, 1e-13);
    EXPECT_NEAR(m.n_b, 1.7561215928912231, 1e-13);
    EXPECT_NEAR(m.sq_a.real(), -1.3991345151317129, 1e-13);
    EXPECT_NEAR(closed::cavity_anti_normal_number(p), 3.027661910298845, 1e-13);
    const auto v = closed::quadrature_variances(p);
    EXPECT_NEAR(v.plus, 2.2570547903342642, 1e-13);
    EXPECT_NEAR(v.minus, 7.8535928508611159, 1e-13);
    EXPECT_NEAR(closed::squeezed_photon_number(p), 0.271540317407622, 1e-14);
}

// The published <b^2>, <ab> and Duan sum are kept as printed; the exact
// values below are the ones the oracles reproduce.
TEST(Moments, PrintedAtomicSqMomentHasWrongSign) {
    const ModelParams p = params_from_tau(1.0, 0.5);
    EXPECT_NEAR(closed::atomic_moments(p).sq_b.real(), 0.81153391830981219, 1e-13);
    const double exact = -0.81153391830981219;
    EXPECT_NEAR(closed::atomic_moments(p).sq_b.real(), -exact, 1e-13);
}

TEST(Moments, PrintedCrossCorrelationReferenceValues) {
    EXPECT_NEAR(closed::cross_correlation(params_from_tau(0.5, 0.0)), 0.40981422166474499, 1e-14);
    EXPECT_NEAR(closed::cross_correlation(params_from_tau(0.5, 0.5)), 0.47884616865192925, 1e-14);
    EXPECT_NEAR(closed::cross_correlation(params_from_tau(1.0, 0.5)), 0.50394532380922026, 1e-14);
    // exact <ab> = cosh sinh cosh^2 r
    EXPECT_NEAR(std::sinh(0.5) * std::cosh(0.5), 0.587600596821901, 1e-14);
}

TEST(Moments, PrintedDuanReferenceValues) {
    EXPECT_EQ(closed::duan_sum(params_from_tau(0.0, 0.0)).sum, 2.0);
    EXPECT_FALSE(closed::duan_sum(params_from_tau(0.0, 0.0)).entangled);
    EXPECT_NEAR(closed::duan_sum(params_from_tau(0.5, 0.0)).sum, 1.4469043829715076, 1e-13);
    EXPECT_NEAR(closed::duan_sum(params_from_tau(1.0, 0.5)).sum, 7.5517857111432552, 1e-13);
    EXPECT_NEAR(closed::duan_sum(params_from_tau(0.0, 0.5)).sum, 2.54308063481524, 1e-13);
}

TEST(Moments, ConservedPhotonDifference) {
    for (const auto& p : test::random_params(200, 17)) {
        const auto m = closed::closed_form_moments(p);
        EXPECT_REL(m.n_a - m.n_b, closed::squeezed_photon_number(p), 1e-12);
    }
}

TEST(Moments, SqueezingAtZeroTime) {
    for (double r : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        const auto v = closed::quadrature_variances(validate_params(0.5, r, 0.0));
        EXPECT_REL(v.plus, std::exp(-2.0 * r), 1e-12);
        EXPECT_REL(v.minus, std::exp(2.0 * r), 1e-12);
    }
}

TEST(Moments, DependOnlyOnLambdaTimesT) {
    for (const auto& p : test::random_params(50, 5)) {
        const ModelParams q = validate_params(2.0 * p.lambda, p.r, 0.5 * p.t);
        EXPECT_REL(closed::closed_form_moments(q).n_a, closed::closed_form_moments(p).n_a, 1e-14);
        EXPECT_REL(closed::quadrature_variances(q).plus, closed::quadrature_variances(p).plus, 1e-14);
        EXPECT_REL(closed::duan_sum(q).sum, closed::duan_sum(p).sum, 1e-13);
    }
}

TEST(Moments, VariancesSatisfyUncertainty) {
    for (const auto& p : test::random_params(200, 23)) {
        const auto v = closed::quadrature_variances(p);
        EXPECT_GE(v.plus * v.minus, 1.0 - 1e-12);
    }
}

TEST(Moments, VariancesMatchAntiNormalExpansion) {
    for (const auto& p : test::random_params(100, 29)) {
        const auto direct = closed::quadrature_variances(p);
        const auto expanded = quadrature_variances_from_moments(closed::cavity_moments(p));
        EXPECT_REL(expanded.plus, direct.plus, 1e-12);
        EXPECT_REL(expanded.minus, direct.minus, 1e-12);
    }
}

TEST(PhotonStatistics, ReferenceValues) {
    const ModelParams p = params_from_tau(1.0, 0.5);
    const double ref[] = {0.37244117692621717, 0.21602543885667611, 0.13231448531581433, 0.084882614386016216,
                          0.056511586450172601};
    for (std::size_t n = 0; n < 5; ++n) EXPECT_NEAR(pnd_closed_form(n, p), ref[n], 1e-14) << n;
    EXPECT_NEAR(pnd_closed_form(2, params_from_tau(0.0, 0.5)), 0.09469109156021773, 1e-15);
    EXPECT_NEAR(pnd_closed_form(3, params_from_tau(1.0, 0.0)), 0.081952909223800599, 1e-15);
    EXPECT_NEAR(pnd_closed_form(40, params_from_tau(1.5, 1.0)), 0.0033925110167127315, 1e-15);
}

TEST(PhotonStatistics, VacuumAndSqueezedLimits) {
    EXPECT_EQ(pnd_closed_form(0, params_from_tau(0.0, 0.0)), 1.0);
    for (std::size_t n = 1; n < 10; ++n) EXPECT_EQ(pnd_closed_form(n, params_from_tau(0.0, 0.0)), 0.0);
    // Squeezed vacuum: odd photon numbers never occur.
    for (std::size_t n = 1; n < 30; n += 2) EXPECT_EQ(pnd_closed_form(n, params_from_tau(0.0, 0.8)), 0.0);
}

TEST(PhotonStatistics, GeometricAtZeroSqueezing) {
    for (double tau : {0.25, 1.0, 2.5}) {
        const ModelParams p = params_from_tau(tau, 0.0);
        const double sh2 = std::sinh(tau) * std::sinh(tau), ch2 = std::cosh(tau) * std::cosh(tau);
        for (std::size_t n = 0; n < 60; ++n) {
            const double geo = std::pow(sh2, static_cast<double>(n)) / std::pow(ch2, static_cast<double>(n) + 1.0);
            EXPECT_NEAR(closed::pnd_chaotic(n, p), geo, 1e-12 * std::max(1.0, geo));
            EXPECT_NEAR(pnd_closed_form(n, p), geo, 1e-12);
        }
    }
}

TEST(PhotonStatistics, NormalizationAndMeanOnLattice) {
    for (const auto& p : test::lattice()) {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t n = 0; n <= 1000; ++n) {
            const double pn = pnd_closed_form(n, p, 1000);
            ASSERT_GE(pn, 0.0);
            s0 += pn;
            s1 += static_cast<double>(n) * pn;
        }
        EXPECT_NEAR(s0, 1.0, 1e-8) << "r=" << p.r << " tau=" << p.tau();
        EXPECT_NEAR(s1, closed::cavity_moments(p).n_a, 1e-6) << "r=" << p.r << " tau=" << p.tau();
    }
}

TEST(PhotonStatistics, LargeArgumentsStayFinite) {
    const ModelParams p = params_from_tau(3.0, 2.0);
    for (std::size_t n : {0u, 1u, 500u, 1999u, 2000u}) {
        const double pn = pnd_closed_form(n, p);
        EXPECT_TRUE(std::isfinite(pn));
        EXPECT_GE(pn, 0.0);
    }
}

TEST(PhotonStatistics, RejectsNAboveCap) {
    EXPECT_THROW(pnd_closed_form(11, params_from_tau(1.0, 0.5), 10), ParameterError);
    const auto range = closed::pnd_closed_form_range(5, params_from_tau(1.0, 0.5));
    ASSERT_EQ(range.size(), 6u);
    EXPECT_EQ(range[3].n, 3u);
}

}  // namespace
}  // namespace sqcl
