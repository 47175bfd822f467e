// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <hardy/analysis.hpp>
#include <hardy/benchmark.hpp>

using namespace hardy;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s  %s: %s\n", id, ok ? "PASS" : "FAIL", title, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string num(double x, int digits = 3) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

double max_grid_difference(const std::function<cplx(cplx)>& u, const std::function<cplx(cplx)>& v) {
    double worst = 0.0;
    for (int j = 0; j < 256; ++j) {
        const cplx z = std::polar(1.0, two_pi * j / 256);
        worst = std::max(worst, std::abs(u(z) - v(z)));
    }
    return worst;
}

/// 60 points, log-spaced in 1 + mu, in (-0.999, 3].
std::vector<double> acceptance_grid() {
    auto g = log_mu_grid(1e-3, 4.0, 61);
    g.erase(g.begin());
    return g;
}

void table1() {
    const std::vector<cplx> expected{{0.9852, 0.3752}, {1.0097, -0.1897}, {0.7811, 0.2362},
                                     {0.8328, -0.1852}, {1.9069, -0.3584}};
    const auto pts = table1_points();
    std::vector<double> times;
    std::vector<cplx> got;
    for (int rep = 0; rep < 101; ++rep) {
        const auto t = std::chrono::steady_clock::now();
        got = table1_oracle(pts);
        times.push_back(seconds_since(t));
    }
    std::sort(times.begin(), times.end());
    double worst = 0.0;
    for (std::size_t j = 0; j < expected.size(); ++j)
        worst = std::max({worst, std::abs(got[j].real() - expected[j].real()),
                          std::abs(got[j].imag() - expected[j].imag())});
    const double median = times[times.size() / 2];
    report(1, "Table 1 reproduction", worst <= 5e-5 + 1e-12 && median < 1e-3,
           "max component error " + num(worst, 6) + " (4 decimals: <= 5e-5), median runtime " + num(median) + " s");
}

void kernel_interpolant_check() {
    const auto pts = table1_points();
    const InterpolationData d{pts, table1_oracle(pts)};
    const Interpolant k = kernel_interpolant(d, 20);
    const Interpolant l = lagrange_interpolant(d, 20);
    double worst = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
        worst = std::max(worst, std::abs(k(pts[j]) - d.values[j]));
    const double nk = k.trace().norm(), nl = l.trace().norm();
    report(2, "kernel interpolant", worst < 1e-9 && nk <= nl,
           "max |psi(z_j) - w_j| = " + num(worst) + ", ||psi_kernel|| = " + num(nk) + " <= ||psi_lagrange|| = " +
               num(nl));
}

void toeplitz_spectrum() {
    bool ok = true;
    double lo = 1.0, gap = 1.0, dlo = 1.0, dhi = 0.0;
    for (double t0 : {pi / 6, pi / 3, pi / 2, 3 * pi / 4})
        for (int Q : {8, 20, 50}) {
            const Spectrum s = spectrum(ToeplitzMatrix(t0, Q));
            ok = ok && s.interior && s.lambda_min_double >= -1e-10 && s.lambda_max_double <= 1 + 1e-10;
            lo = std::min(lo, s.lambda_min);
            gap = std::min(gap, s.gap_top);
            dlo = std::min(dlo, s.lambda_min_double);
            dhi = std::max(dhi, s.lambda_max_double);
        }
    report(3, "Toeplitz spectrum", ok,
           "extended precision: min lambda_min = " + num(lo) + ", min (1 - lambda_max) = " + num(gap) +
               "; double eigensolve range [" + num(dlo) + ", 1 + " + num(dhi - 1) + "]");
}

void monotonicity() {
    const auto t = std::chrono::steady_clock::now();
    const auto rows = mu_sweep(benchmark_problem(0.5, 20), acceptance_grid());
    const double elapsed = seconds_since(t);
    bool ok = rows.size() == 60;
    int bad = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok()) {
            ++bad;
            continue;
        }
        if (i > 0 && !(rows[i].e > rows[i - 1].e && rows[i].M0sq < rows[i - 1].M0sq))
            ++bad;
    }
    ok = ok && bad == 0 && elapsed < 5.0;
    report(4, "monotonicity", ok,
           "60 rows, " + std::to_string(bad) + " violations, e from " + num(rows.front().e) + " to " +
               num(rows.back().e) + ", M0^2 from " + num(rows.front().M0sq) + " to " + num(rows.back().M0sq) +
               ", sweep " + num(elapsed) + " s");
}

void differential_identity(const Problem& P) {
    const double h = 1e-4;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double mu = -0.5 + 1.5 * (i + 0.5) / 10;
        const SolveResult a = P.solve(mu + h), b = P.solve(mu - h);
        const double de = (a.e - b.e) / (2 * h);
        const double dm = (a.M0 * a.M0 - b.M0 * b.M0) / (2 * h);
        worst = std::max(worst, std::abs(de + (1 + mu) * dm) / std::abs(de));
    }
    report(5, "differential identity", worst < 1e-3, "max relative residual " + num(worst) + " at 10 points");
}

void saturation(const Problem& P, double M) {
    const SolveResult r = tune_mu(P, M);
    const double rel = std::abs(r.M0 - M) / M;
    report(6, "constraint saturation", rel < 1e-6 && r.mu < 0.0,
           "mu* = " + num(r.mu, 9) + ", |M0 - M|/M = " + num(rel));
}

void interpolant_invariance(double M) {
    ProblemSpec s = benchmark_problem(0.5, 20);
    s.M = M;
    const SolveResult k = tune_mu(s);
    s.interpolant = InterpolantKind::lagrange;
    const SolveResult l = tune_mu(s);
    const double dmu = std::abs(k.mu - l.mu);
    const double dg = max_grid_difference(k.gtilde, l.gtilde);
    report(7, "interpolant invariance", dmu < 1e-6 && dg < 1e-7,
           "|mu_kernel - mu_lagrange| = " + num(dmu) + ", max grid |delta g~| = " + num(dg));
}

void series_agreement(const Problem& P) {
    const Calibration c = calibrate(P, -0.5, 0.05);
    double worst_e = 0.0, worst_m = 0.0;
    for (int i = 0; i <= 28; ++i) {
        const double mu = -0.5 + 0.05 * i;
        const SolveResult r = P.solve(mu);
        worst_e = std::max(worst_e, std::abs(e_series(c.table, mu) - r.e) / r.e);
        worst_m = std::max(worst_m, std::abs(m0_series(c.table, mu) - r.M0 * r.M0) / (r.M0 * r.M0));
    }
    const SolveResult r0 = P.solve(0.0);
    const bool exact0 = e_series(c.table, 0.0) == r0.e && m0_series(c.table, 0.0) == P.discrepancy2_J(r0.g.coeffs());
    report(8, "series agreement", worst_e < 0.05 && worst_m < 0.05 && exact0,
           "calibrated S = " + std::to_string(c.S) + ", max relative error on [-0.5, 0.9]: e " + num(worst_e) +
               ", M0^2 " + num(worst_m) + "; exact at mu = 0: " + (exact0 ? "yes" : "no"));
}

void moment_structure() {
    const Problem P(benchmark_problem(0.5, 50));
    const MomentTable t = moment_table(P, 50);
    bool ok = std::abs(t.F[0] - t.xi0.squaredNorm()) < 1e-10;
    for (std::size_t k = 0; k < t.F.size(); ++k)
        ok = ok && t.F[k] >= 0.0 && (k == 0 || t.F[k] <= t.F[k - 1]);
    report(9, "moment structure", ok,
           "F(0) = " + num(t.F[0]) + ", F(50) = " + num(t.F[50]) + ", 50 F(50) = " + num(50 * t.F[50]));
}

void q_stability() {
    const auto grid = acceptance_grid();
    const auto a = mu_sweep(benchmark_problem(0.5, 20), grid);
    const auto b = mu_sweep(benchmark_problem(0.5, 50), grid);
    double worst_e = 0.0, worst_m = 0.0, mu_e = 0.0, mu_m = 0.0;
    std::vector<bool> within(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double re = std::abs(a[i].e - b[i].e) / b[i].e;
        const double rm = std::abs(a[i].M0sq - b[i].M0sq) / b[i].M0sq;
        if (re > worst_e) {
            worst_e = re;
            mu_e = grid[i];
        }
        if (rm > worst_m) {
            worst_m = rm;
            mu_m = grid[i];
        }
        within[i] = re < 1e-2 && rm < 1e-2;
    }
    // contiguous window of grid points around mu = 0 where the tolerance holds
    std::size_t c = 0;
    while (c + 1 < grid.size() && std::abs(grid[c + 1]) < std::abs(grid[c]))
        ++c;
    std::size_t lo = c, hi = c;
    while (lo > 0 && within[lo - 1])
        --lo;
    while (hi + 1 < grid.size() && within[hi + 1])
        ++hi;
    const std::string window =
        within[c] ? "tolerance holds on [" + num(grid[lo]) + ", " + num(grid[hi]) + "]" : "tolerance fails at mu = 0";
    report(10, "Q-stability Q=20 vs Q=50", worst_e < 1e-2 && worst_m < 1e-2,
           "max relative difference e " + num(worst_e) + " (mu = " + num(mu_e) + "), M0^2 " + num(worst_m) +
               " (mu = " + num(mu_m) + "); " + window);
}

void companion(const Problem& P) {
    const double dg = max_grid_difference(companion_mu0(P), P.solve(0.0).gtilde);
    const double M0sq = P.discrepancy2_J(P.rhs(0.0));
    const double target = 1.01 * M0sq;
    const CompanionCorrection c = companion_first_order(P, 0.01 * M0sq);
    const double before = std::abs(discrepancy2_of(P, companion_mu0(P)) - target);
    const double after = std::abs(discrepancy2_of(P, c.evaluator) - target);
    report(11, "companion consistency", dg < 1e-8 && after < before,
           "max grid |companion - direct| = " + num(dg) + "; |M0^2 - target| " + num(before) + " -> " + num(after));
}

void stability_bounds(double M) {
    ProblemSpec s = benchmark_problem(0.5, 20);
    s.M = M;
    bool ok = true;
    std::string detail = "max measured/bound:";
    for (auto kind : {PerturbationKind::f, PerturbationKind::h, PerturbationKind::omega, PerturbationKind::z}) {
        const auto rows = perturbation_experiment(s, kind, {1e-4, 1e-5});
        double worst = 0.0;
        for (const auto& r : rows) {
            ok = ok && r.valid && r.measured_deviation <= r.bound;
            worst = std::max(worst, r.valid ? r.ratio : std::numeric_limits<double>::infinity());
        }
        detail += std::string(" ") + to_string(kind) + " " + num(worst);
    }
    report(12, "stability bounds", ok, detail);
}

void carleman() {
    const BoundaryFn f{[](double t) { return std::polar(1.0, 2 * t) + 1.0; }, 512};
    const Arc arc(pi / 3);
    bool ok = true;
    std::string detail = "error at alpha = 64:";
    for (cplx z : {cplx(0.0), cplx(0.2), cplx(0.0, 0.3)}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double alpha : {1.0, 4.0, 16.0, 64.0}) {
            const double err = std::abs(carleman_extrapolate(f, arc, 2.0, alpha, z) - (z * z + 1.0));
            ok = ok && err < prev;
            prev = err;
        }
        ok = ok && prev < 1e-2;
        detail += " z = " + num(z.real()) + (z.imag() != 0.0 ? "+" + num(z.imag()) + "i" : "") + ": " + num(prev);
    }
    report(13, "Carleman recovery", ok, detail);
}

template <class F>
void guarded(int id, const char* title, F&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

} // namespace

int main() {
    const Problem P(benchmark_problem(0.5, 20));
    const double M = 2 * P.solve(0.0).M0;
    guarded(1, "Table 1 reproduction", table1);
    guarded(2, "kernel interpolant", kernel_interpolant_check);
    guarded(3, "Toeplitz spectrum", toeplitz_spectrum);
    guarded(4, "monotonicity", monotonicity);
    guarded(5, "differential identity", [&] { differential_identity(P); });
    guarded(6, "constraint saturation", [&] { saturation(P, M); });
    guarded(7, "interpolant invariance", [&] { interpolant_invariance(M); });
    guarded(8, "series agreement", [&] { series_agreement(P); });
    guarded(9, "moment structure", moment_structure);
    guarded(10, "Q-stability Q=20 vs Q=50", q_stability);
    guarded(11, "companion consistency", [&] { companion(P); });
    guarded(12, "stability bounds", [&] { stability_bounds(M); });
    guarded(13, "Carleman recovery", carleman);
    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
