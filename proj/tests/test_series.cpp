#include <gtest/gtest.h>

#include <hardy/benchmark.hpp>
#include <hardy/series.hpp>

#include "oracles.hpp"

using namespace hardy;

namespace {

const Problem& bench() {
    static const Problem P(benchmark_problem(0.5, 20));
    return P;
}

std::vector<SweepRow> synthetic_rows(double l, double C) {
    std::vector<SweepRow> rows;
    for (int i = 0; i < 20; ++i) {
        const double s = std::pow(10.0, -4.0 + 3.0 * i / 19);
        SweepRow r;
        r.mu = s - 1.0;
        r.M0sq = C / s * std::pow(std::abs(std::log(s)), -l);
        rows.push_back(r);
    }
    return rows;
}

} // namespace

TEST(ComputeXi0, VanishesWhenDataEqualsInterpolant) {
    ProblemSpec s = benchmark_problem(0.5, 12);
    const Interpolant psi = kernel_interpolant(s.data, s.Q);
    s.f = BoundaryFn{[psi](double t) { return psi.on_circle(t); }, 512};
    s.h = s.f;
    EXPECT_LT(compute_xi0(s, psi, BlaschkeProduct(s.data.points)).norm(), 1e-14);
}

TEST(ComputeXi0, SingleModeOnI) {
    // psi = 0, b = 1, h = 0, f = e^{it}: xi0 = A P+(chi_I e^{it}).
    ProblemSpec s;
    s.f = BoundaryFn{[](double t) { return std::polar(1.0, t); }, 512};
    s.h = BoundaryFn{[](double) { return cplx(0.0); }, 512};
    s.theta0 = 1.1;
    s.Q = 6;
    const VectorC xi = compute_xi0(s, kernel_interpolant({}, 6), BlaschkeProduct(std::vector<cplx>{}));
    const double t0 = s.theta0;
    VectorC p(6);
    for (int k = 0; k < 6; ++k)
        p[k] = oracle::coeff(s.f.eval, k, t0, 2 * pi - t0);
    for (int k = 0; k < 6; ++k) {
        cplx ref = 0.0;
        for (int m = 0; m < 6; ++m)
            ref += oracle::coeff([m](double t) { return std::polar(1.0, m * t); }, k, -t0, t0) * p[m];
        EXPECT_NEAR(std::abs(xi[k] - ref), 0.0, 1e-12);
    }
}

TEST(ComputeXi0, BenchmarkIsNonzeroAndConsistent) {
    const VectorC a = compute_xi0(bench());
    EXPECT_GT(a.norm(), 0.0);
    const VectorC b = compute_xi0(bench().spec(), bench().psi(), bench().blaschke());
    EXPECT_LT((a - b).norm(), 1e-14);
}

TEST(Series, ExactAtExpansionPoint) {
    const MomentTable t = moment_table(bench(), 20);
    const SolveResult r = bench().solve(0.0);
    EXPECT_EQ(m0_series(t, 0.0), t.M0sq0);
    EXPECT_EQ(e_series(t, 0.0), t.e0);
    EXPECT_EQ(t.e0, r.e);
    EXPECT_NEAR(t.M0sq0, r.M0 * r.M0, 1e-15);
    for (int S = 0; S <= 20; ++S) {
        EXPECT_EQ(m0_series(t, 0.0, S), t.M0sq0);
        EXPECT_EQ(e_series(t, 0.0, S), t.e0);
    }
}

TEST(Series, FirstDerivativesMatchFiniteDifferences) {
    const MomentTable t = moment_table(bench(), 4);
    const double h = 1e-5;
    const SolveResult a = bench().solve(h), b = bench().solve(-h);
    const double dm = (a.M0 * a.M0 - b.M0 * b.M0) / (2 * h);
    const double de = (a.e - b.e) / (2 * h);
    EXPECT_NEAR(dm, -2 * t.F[0], 1e-6 * t.F[0]);
    EXPECT_NEAR(de, 2 * t.F[0], 1e-6 * t.F[0]);
    EXPECT_EQ(m0_series_coeffs(t, 1)[1], -2 * t.F[0]);
    EXPECT_EQ(e_series_coeffs(t, 1)[1], 2 * t.F[0]);
}

TEST(Series, BenchmarkAgreementAtOrderTen) {
    const MomentTable t = moment_table(bench(), 10);
    const SolveResult rm = bench().solve(-0.5);
    EXPECT_LT(std::abs(m0_series(t, -0.5) - rm.M0 * rm.M0) / (rm.M0 * rm.M0), 0.05);
    const SolveResult rp = bench().solve(0.5);
    EXPECT_LT(std::abs(e_series(t, 0.5) - rp.e) / rp.e, 0.05);
}

TEST(Series, RadiusGuard) {
    const MomentTable t = moment_table(bench(), 5);
    for (double mu : {1.0, -1.0, 1.5, -3.0}) {
        EXPECT_THROW(m0_series(t, mu), out_of_domain);
        EXPECT_THROW(e_series(t, mu), out_of_domain);
    }
    EXPECT_THROW(m0_series(t, 0.2, 6), invalid_argument);
}

TEST(Series, MomentInvariants) {
    const MomentTable t = moment_table(bench(), 50);
    EXPECT_NEAR(t.F[0], t.xi0.squaredNorm(), 1e-10);
    for (std::size_t k = 0; k < t.F.size(); ++k) {
        EXPECT_GE(t.F[k], 0.0);
        if (k > 0) {
            EXPECT_LE(t.F[k], t.F[k - 1]);
        }
    }
}

TEST(Series, TermStructureIdentity) {
    // Integrating de = -(1 + mu) dM0^2 from 0: e(mu) = e(0) - int_0^mu (1 + s) M0^2'(s) ds.
    // Both truncations keep powers up to S, so the coefficients agree one by one.
    std::mt19937_64 rng(40);
    const MomentTable t = moment_table(bench(), 20);
    const int S = 20;
    const auto m = m0_series_coeffs(t, S);
    std::vector<double> e(S + 1, 0.0);
    e[0] = t.e0;
    for (int j = 1; j <= S; ++j)
        e[j] = -m[j] - (j >= 2 ? (j - 1) * m[j - 1] / j : 0.0);
    const auto direct = e_series_coeffs(t, S);
    for (int j = 0; j <= S; ++j)
        EXPECT_NEAR(direct[j], e[j], 1e-12 * std::max(1.0, std::abs(direct[j]))) << j;
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
        const double mu = u(rng);
        double rebuilt = 0.0;
        for (int j = S; j >= 0; --j)
            rebuilt = rebuilt * mu + e[j];
        EXPECT_NEAR(e_series(t, mu, S), rebuilt, 1e-10);
    }
}

TEST(Series, TermStructureOnRandomMoments) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        MomentTable t;
        double F = 1.0 + u(rng);
        for (int k = 0; k <= 20; ++k) {
            t.F.push_back(F);
            F *= u(rng);
        }
        t.e0 = u(rng);
        t.M0sq0 = u(rng);
        const auto m = m0_series_coeffs(t, 20);
        const auto e = e_series_coeffs(t, 20);
        for (int j = 1; j <= 20; ++j) {
            const double rebuilt = -m[j] - (j >= 2 ? (j - 1) * m[j - 1] / j : 0.0);
            EXPECT_NEAR(e[j], rebuilt, 1e-12 * std::max(1.0, std::abs(e[j])));
        }
    }
}

TEST(Calibrate, ZeroNeedsNoTerms) {
    const Calibration c = calibrate(bench(), 0.0, 1e-12);
    EXPECT_EQ(c.S, 0);
    EXPECT_EQ(c.relative_error, 0.0);
}

TEST(Calibrate, BenchmarkOrderIsSmall) {
    const Calibration c = calibrate(bench(), -0.5, 0.05);
    EXPECT_LE(c.S, 10);
    EXPECT_LE(c.relative_error, 0.05);
    EXPECT_EQ(c.table.order(), c.S);
}

TEST(Calibrate, NearMinusOneFailsOrNeedsManyTerms) {
    try {
        const Calibration c = calibrate(bench(), -0.99, 1e-12);
        EXPECT_GT(c.S, 10);
    } catch (const calibration_failure& e) {
        EXPECT_GT(e.best_relative_error(), 1e-12);
        EXPECT_GE(e.best_order(), 0);
    }
}

TEST(Calibrate, RejectsBadArguments) {
    EXPECT_THROW(calibrate(bench(), -1.0, 0.1), invalid_argument);
    EXPECT_THROW(calibrate(bench(), 0.2, 0.1), invalid_argument);
    EXPECT_THROW(calibrate(bench(), -0.5, 0.0), invalid_argument);
}

TEST(FitBlowup, RecoversSyntheticExponent) {
    EXPECT_NEAR(fit_blowup_exponent(synthetic_rows(2.0, 3.0)), 2.0, 0.05);
    EXPECT_NEAR(fit_blowup_exponent(synthetic_rows(0.5, 0.1)), 0.5, 0.05);
}

TEST(FitBlowup, RejectsConstantAndShortInput) {
    auto rows = synthetic_rows(2.0, 1.0);
    for (auto& r : rows)
        r.M0sq = 4.0;
    EXPECT_THROW(fit_blowup_exponent(rows), degenerate_data);
    rows.resize(5);
    EXPECT_THROW(fit_blowup_exponent(rows), invalid_argument);
}

TEST(FitBlowup, BenchmarkIsReportOnly) {
    const auto rows = mu_sweep(bench(), log_mu_grid(1e-4, 1e-1, 12));
    EXPECT_TRUE(std::isfinite(fit_blowup_exponent(rows)));
}
