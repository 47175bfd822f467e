#pragma once

#include <vector>

#include "solver.hpp"

namespace hardy {

/// Moments F(k) = <A^k xi0, xi0> with the expansion anchors e(0), M0^2(0).
struct MomentTable {
    std::vector<double> F;
    VectorC xi0;
    double e0 = 0.0;
    double M0sq0 = 0.0;

    int order() const { return static_cast<int>(F.size()) - 1; }
};

/// xi0 = A g(0) - s_J, where g(0) = P+(conj(b)(f - psi) v conj(b)(h - psi)).
inline VectorC compute_xi0(const Problem& P) { return P.xi(P.rhs(0.0)); }

inline VectorC compute_xi0(const ProblemSpec& spec, const Interpolant& psi, const BlaschkeProduct& b) {
    const Arc arc(spec.theta0);
    const auto I = detail::sample_region(spec.f, psi, b, arc, Region::I, spec.Q, spec.quad_points);
    const auto J = detail::sample_region(spec.h, psi, b, arc, Region::J, spec.Q, spec.quad_points);
    const VectorC sI = project_plus_region(I.w, I.rule, spec.Q);
    const VectorC sJ = project_plus_region(J.w, J.rule, spec.Q);
    return hardy::apply(ToeplitzMatrix(spec.theta0, spec.Q), VectorC(sI + sJ)) - sJ;
}

inline MomentTable moment_table(const Problem& P, int S) {
    MomentTable t;
    const VectorC g0 = P.rhs(0.0);
    t.xi0 = P.xi(g0);
    t.F = power_moments(P.toeplitz(), t.xi0, S);
    t.e0 = P.error_I(g0);
    t.M0sq0 = P.discrepancy2_J(g0);
    return t;
}

namespace detail {

inline void check_series(const MomentTable& t, double mu, int S) {
    if (!(std::abs(mu) < 1.0))
        throw out_of_domain("series evaluation requires |mu| < 1, got " + std::to_string(mu));
    if (S < 0 || S > t.order())
        throw invalid_argument("series order " + std::to_string(S) + " outside the table (0.." +
                               std::to_string(t.order()) + ")");
}

inline double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

} // namespace detail

/// Polynomial coefficients (index = power of mu) of the M0^2 expansion up to mu^S.
inline std::vector<double> m0_series_coeffs(const MomentTable& t, int S) {
    std::vector<double> c(S + 1, 0.0);
    c[0] = t.M0sq0;
    for (int k = 0; k < S; ++k)
        c[k + 1] = -(k % 2 == 0 ? 1.0 : -1.0) * (k + 2) * t.F[k];
    return c;
}

/// Polynomial coefficients of the e expansion up to mu^S.
inline std::vector<double> e_series_coeffs(const MomentTable& t, int S) {
    std::vector<double> c(S + 1, 0.0);
    c[0] = t.e0;
    for (int k = 0; k < S; ++k) {
        const double sgn = k % 2 == 0 ? 1.0 : -1.0;
        const double jump = k == 0 ? 0.0 : k * (t.F[k] - t.F[k - 1]);
        c[k + 1] = sgn * (2.0 * t.F[k] + jump);
    }
    return c;
}

inline double m0_series(const MomentTable& t, double mu, int S) {
    detail::check_series(t, mu, S);
    if (mu == 0.0)
        return t.M0sq0;
    return detail::horner(m0_series_coeffs(t, S), mu);
}

inline double e_series(const MomentTable& t, double mu, int S) {
    detail::check_series(t, mu, S);
    if (mu == 0.0)
        return t.e0;
    return detail::horner(e_series_coeffs(t, S), mu);
}

/// Series of the table's full order: S is the highest retained power of mu.
inline double m0_series(const MomentTable& t, double mu) { return m0_series(t, mu, t.order()); }
inline double e_series(const MomentTable& t, double mu) { return e_series(t, mu, t.order()); }

struct Calibration {
    int S = 0;
    double relative_error = 0.0;
    double e_direct = 0.0;
    MomentTable table;  // truncated to order S
};

inline constexpr int default_S_max = 512;

/// Smallest S with |e_series(S, mu0) - e(mu0)| <= tol e(mu0).
inline Calibration calibrate(const Problem& P, double mu0, double tol, int S_max = default_S_max) {
    if (!(mu0 > -1.0 && mu0 <= 0.0))
        throw invalid_argument("calibrate: mu0 must lie in (-1, 0], got " + std::to_string(mu0));
    if (!(tol > 0.0))
        throw invalid_argument("calibrate: tol must be positive");
    if (S_max < 0)
        throw invalid_argument("calibrate: S_max must be >= 0");
    MomentTable t = moment_table(P, S_max);
    const VectorC g = P.solve_coeffs(mu0);
    const double e_dir = P.error_I(g);
    int best_S = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int S = 0; S <= S_max; ++S) {
        const double rel = std::abs(e_series(t, mu0, S) - e_dir) / e_dir;
        if (rel < best) {
            best = rel;
            best_S = S;
        }
        if (rel <= tol) {
            t.F.resize(S + 1);
            return Calibration{S, rel, e_dir, std::move(t)};
        }
    }
    throw calibration_failure("calibration did not reach tol " + std::to_string(tol) + " within S_max = " +
                                  std::to_string(S_max) + "; best relative error " + std::to_string(best) +
                                  " at S = " + std::to_string(best_S),
                              best_S, best);
}

/// Least-squares l in M0^2 ~ C (1 + mu)^{-1} |log(1 + mu)|^{-l}, using rows with 1 + mu in [1e-4, 1e-1].
inline double fit_blowup_exponent(const std::vector<SweepRow>& rows) {
    std::vector<double> x, y, m;
    for (const auto& r : rows) {
        const double s = 1.0 + r.mu;
        if (!r.ok() || s < 1e-4 || s > 1e-1 || !(r.M0sq > 0.0))
            continue;
        x.push_back(std::log(std::abs(std::log(s))));
        y.push_back(std::log(r.M0sq * s));
        m.push_back(r.M0sq);
    }
    if (x.size() < 8)
        throw invalid_argument("fit_blowup_exponent: need at least 8 rows with 1 + mu in [1e-4, 1e-1], got " +
                               std::to_string(x.size()));
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    if (*hi - *lo <= 1e-12 * *hi)
        throw degenerate_data("fit_blowup_exponent: M0^2 is constant, no blow-up to fit");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw degenerate_data("fit_blowup_exponent: abscissae coincide");
    return -sxy / sxx;
}

} // namespace hardy
