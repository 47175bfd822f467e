#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blaschke.hpp"
#include "interpolant.hpp"
#include "toeplitz.hpp"

namespace hardy {

/// One instance of the bounded extremal problem.
struct ProblemSpec {
    BoundaryFn f;  // data on I
    BoundaryFn h;  // data on J
    InterpolationData data;
    double theta0 = pi / 3;
    double M = 0.0;
    int Q = 20;
    int quad_points = 512;
    double phase = 0.0;
    InterpolantKind interpolant = InterpolantKind::kernel;

    void validate() const {
        (void)Arc(theta0);
        if (Q < 1)
            throw invalid_argument("Q: must be >= 1, got " + std::to_string(Q));
        if (static_cast<std::size_t>(Q) < data.size())
            throw invalid_argument("Q: must be >= number of interpolation points (" + std::to_string(data.size()) +
                                   "), got " + std::to_string(Q));
        if (quad_points < 4 * Q)
            throw invalid_argument("quad_points: must be >= 4Q (" + std::to_string(4 * Q) + "), got " +
                                   std::to_string(quad_points));
        if (!std::isfinite(M) || M < 0.0)
            throw invalid_argument("M: must be a finite nonnegative number");
        if (!f.eval || !h.eval)
            throw invalid_argument("f and h must both be provided");
        data.validate();
    }
};

struct SolveResult {
    FourierPoly g;
    double mu = 0.0;
    double e = 0.0;   // squared L2(I) error
    double M0 = 0.0;  // L2(J) discrepancy, not squared
    std::function<cplx(cplx)> gtilde;  // psi + b g
};

/// Right-hand side pieces <chi_I conj(b)(f - psi), z^k> and <chi_J conj(b)(h - psi), z^k>.
struct RhsParts {
    VectorC s_I;
    VectorC s_J;
};

namespace detail {

struct Samples {
    QuadRule rule;
    std::vector<cplx> w;  // conj(b)(data - psi) at the nodes
    MatrixC basis;        // row k: e^{ik theta_j}
};

inline Samples sample_region(const BoundaryFn& u, const Interpolant& psi, const BlaschkeProduct& b, const Arc& arc,
                             Region where, int Q, int quad_points) {
    Samples s;
    s.rule = region_rule(arc, where, quad_points);
    s.w.resize(s.rule.size());
    for (std::size_t j = 0; j < s.rule.size(); ++j) {
        const double t = s.rule.theta[j];
        const cplx v = u(t);
        if (!finite(v))
            throw numerical_error("boundary data is not finite at theta = " + std::to_string(t));
        s.w[j] = b.boundary_conj(t) * (v - psi.on_circle(t));
    }
    s.basis = conj_basis(s.rule, Q).conjugate();
    return s;
}

} // namespace detail

/// Discretised problem: quadrature samples, Toeplitz matrix and right-hand
/// side pieces are computed once; every solve afterwards is a Q x Q system.
class Problem {
public:
    explicit Problem(ProblemSpec spec)
        : spec_(std::move(spec)), arc_(spec_.theta0), A_(spec_.theta0, std::max(spec_.Q, 1)) {
        spec_.validate();
        psi_ = std::make_shared<Interpolant>(make_interpolant(spec_.interpolant, spec_.data, spec_.Q));
        b_ = std::make_shared<BlaschkeProduct>(spec_.data.points, spec_.phase);
        I_ = detail::sample_region(spec_.f, *psi_, *b_, arc_, Region::I, spec_.Q, spec_.quad_points);
        J_ = detail::sample_region(spec_.h, *psi_, *b_, arc_, Region::J, spec_.Q, spec_.quad_points);
        rhs_.s_I = project_plus_region(I_.w, I_.rule, spec_.Q);
        rhs_.s_J = project_plus_region(J_.w, J_.rule, spec_.Q);
        double nf = 0.0, nh = 0.0;
        for (std::size_t j = 0; j < I_.rule.size(); ++j)
            nf += I_.rule.weight[j] * std::norm(spec_.f(I_.rule.theta[j]));
        for (std::size_t j = 0; j < J_.rule.size(); ++j)
            nh += J_.rule.weight[j] * std::norm(spec_.h(J_.rule.theta[j]));
        norm_f_I_ = std::sqrt(nf);
        norm_h_J_ = std::sqrt(nh);
    }

    const ProblemSpec& spec() const { return spec_; }
    const Arc& arc() const { return arc_; }
    const ToeplitzMatrix& toeplitz() const { return A_; }
    const Interpolant& psi() const { return *psi_; }
    const BlaschkeProduct& blaschke() const { return *b_; }
    const RhsParts& rhs_parts() const { return rhs_; }
    int Q() const { return spec_.Q; }
    double norm_f_I() const { return norm_f_I_; }
    double norm_h_J() const { return norm_h_J_; }

    VectorC rhs(double mu) const {
        check_mu(mu);
        return rhs_.s_I + (1.0 + mu) * rhs_.s_J;
    }

    /// Solves (1 + mu A) g = s for a complex right-hand side.
    VectorC solve_system(double mu, const VectorC& s) const {
        check_mu(mu);
        const int Q = spec_.Q;
        const Eigen::MatrixXd K = Eigen::MatrixXd::Identity(Q, Q) + mu * A_.matrix();
        Eigen::MatrixXd rhs(Q, 2);
        rhs.col(0) = s.real();
        rhs.col(1) = s.imag();
        Eigen::MatrixXd x;
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        if (llt.info() == Eigen::Success) {
            x = llt.solve(rhs);
        } else {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
            if (ldlt.info() != Eigen::Success)
                throw numerical_error("linear solve failed at mu = " + std::to_string(mu));
            x = ldlt.solve(rhs);
        }
        VectorC g(Q);
        for (int k = 0; k < Q; ++k)
            g[k] = cplx(x(k, 0), x(k, 1));
        for (int k = 0; k < Q; ++k)
            if (!finite(g[k]))
                throw numerical_error("linear solve produced non-finite values at mu = " + std::to_string(mu));
        return g;
    }

    VectorC solve_coeffs(double mu) const { return solve_system(mu, rhs(mu)); }

    /// ||psi + b g - f||^2 on I.
    double error_I(const VectorC& g) const { return residual2(I_, g); }
    /// ||psi + b g - h||^2 on J.
    double discrepancy2_J(const VectorC& g) const { return residual2(J_, g); }

    std::function<cplx(cplx)> gtilde(const VectorC& g) const {
        auto psi = psi_;
        auto b = b_;
        FourierPoly gp(g);
        return [psi, b, gp](cplx z) { return (*psi)(z) + (*b)(z) * gp(z); };
    }

    SolveResult solve(double mu) const {
        VectorC g = solve_coeffs(mu);
        SolveResult r;
        r.mu = mu;
        r.e = error_I(g);
        r.M0 = std::sqrt(discrepancy2_J(g));
        r.gtilde = gtilde(g);
        r.g = FourierPoly(std::move(g));
        return r;
    }

    /// xi(mu) = A g - s_J = P+(chi_J (g - conj(b)(h - psi))).
    VectorC xi(const VectorC& g) const { return hardy::apply(A_, g) - rhs_.s_J; }

private:
    static void check_mu(double mu) {
        if (!(mu > -1.0) || !std::isfinite(mu))
            throw invalid_argument("mu must satisfy mu > -1, got " + std::to_string(mu));
    }

    double residual2(const detail::Samples& s, const VectorC& g) const {
        const VectorC gv = s.basis.transpose() * g;
        double acc = 0.0;
        for (std::size_t j = 0; j < s.rule.size(); ++j)
            acc += s.rule.weight[j] * std::norm(gv[static_cast<Eigen::Index>(j)] - s.w[j]);
        return acc;
    }

    ProblemSpec spec_;
    Arc arc_;
    ToeplitzMatrix A_;
    std::shared_ptr<Interpolant> psi_;
    std::shared_ptr<BlaschkeProduct> b_;
    detail::Samples I_, J_;
    RhsParts rhs_;
    double norm_f_I_ = 0.0, norm_h_J_ = 0.0;
};

/// s = <conj(b)(f - psi) on I, (1 + mu) conj(b)(h - psi) on J, z^k>.
inline VectorC assemble_rhs(const ProblemSpec& spec, double mu, const Interpolant& psi, const BlaschkeProduct& b) {
    if (!(mu > -1.0))
        throw invalid_argument("mu must satisfy mu > -1, got " + std::to_string(mu));
    const Arc arc(spec.theta0);
    const auto I = detail::sample_region(spec.f, psi, b, arc, Region::I, spec.Q, spec.quad_points);
    const auto J = detail::sample_region(spec.h, psi, b, arc, Region::J, spec.Q, spec.quad_points);
    return project_plus_region(I.w, I.rule, spec.Q) + (1.0 + mu) * project_plus_region(J.w, J.rule, spec.Q);
}

inline SolveResult solve_for_mu(const ProblemSpec& spec, double mu) {
    if (!(mu > -1.0))
        throw invalid_argument("mu must satisfy mu > -1, got " + std::to_string(mu));
    return Problem(spec).solve(mu);
}

struct TuneOptions {
    double rtol = 1e-6;
    double mu_lo = -0.99;
    double mu_hi = 1.0;
    double mu_floor = -1.0 + 1e-9;
    double mu_ceiling = 1e6;
    int max_iter = 400;
};

/// Bisection on log(1 + mu); M0 is strictly decreasing in mu.
inline SolveResult tune_mu(const Problem& P, double M, const TuneOptions& opt = {}) {
    if (!std::isfinite(M))
        throw invalid_argument("M: must be finite");
    auto M0 = [&](double mu) { return std::sqrt(P.discrepancy2_J(P.solve_coeffs(mu))); };
    if (M <= 0.0) {
        throw infeasible_constraint("M must be positive; M = 0 forces an exact fit on J", M0(opt.mu_ceiling),
                                    M0(opt.mu_floor));
    }
    double lo = opt.mu_lo, hi = opt.mu_hi;
    double flo = M0(lo), fhi = M0(hi);
    while (flo < M) {
        if (lo <= opt.mu_floor)
            throw infeasible_constraint("M = " + std::to_string(M) + " exceeds the attainable discrepancy " +
                                            std::to_string(flo) + " (attainable range [" +
                                            std::to_string(M0(opt.mu_ceiling)) + ", " + std::to_string(flo) + "])",
                                        M0(opt.mu_ceiling), flo);
        hi = lo;
        fhi = flo;
        lo = std::max(-1.0 + (lo + 1.0) / 10.0, opt.mu_floor);
        flo = M0(lo);
    }
    while (fhi > M) {
        if (hi >= opt.mu_ceiling)
            throw infeasible_constraint("M = " + std::to_string(M) + " is below the attainable discrepancy " +
                                            std::to_string(fhi) + " (attainable range [" + std::to_string(fhi) +
                                            ", " + std::to_string(M0(opt.mu_floor)) + "])",
                                        fhi, M0(opt.mu_floor));
        lo = hi;
        flo = fhi;
        hi = std::min(10.0 * hi, opt.mu_ceiling);
        fhi = M0(hi);
    }
    double tlo = std::log1p(lo), thi = std::log1p(hi);
    double best = flo, best_mu = lo;
    if (std::abs(fhi - M) < std::abs(best - M)) {
        best = fhi;
        best_mu = hi;
    }
    for (int it = 0; it < opt.max_iter && best != M && thi - tlo > 1e-13; ++it) {
        const double tm = 0.5 * (tlo + thi);
        const double mu = std::expm1(tm);
        const double fm = M0(mu);
        if (std::abs(fm - M) < std::abs(best - M)) {
            best = fm;
            best_mu = mu;
        }
        if (fm > M)
            tlo = tm;
        else
            thi = tm;
    }
    if (!(std::abs(best - M) < opt.rtol * M))
        throw numerical_error("tune_mu: bisection stalled with relative residual " +
                              std::to_string(std::abs(best - M) / M));
    return P.solve(best_mu);
}

inline SolveResult tune_mu(const ProblemSpec& spec, const TuneOptions& opt = {}) {
    return tune_mu(Problem(spec), spec.M, opt);
}

struct SweepRow {
    double mu = 0.0;
    double e = 0.0;
    double M0sq = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

/// One solve per grid point, rows ordered by mu; failures are recorded per row.
inline std::vector<SweepRow> mu_sweep(const Problem& P, std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double mu : grid) {
        SweepRow r;
        r.mu = mu;
        try {
            const VectorC g = P.solve_coeffs(mu);
            r.e = P.error_I(g);
            r.M0sq = P.discrepancy2_J(g);
        } catch (const error& ex) {
            r.error = ex.what();
            r.e = r.M0sq = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<SweepRow> mu_sweep(const ProblemSpec& spec, std::vector<double> grid) {
    return mu_sweep(Problem(spec), std::move(grid));
}

/// 1 + mu log-spaced from lo to hi.
inline std::vector<double> log_mu_grid(double lo = 1e-3, double hi = 4.0, int n = 60) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo))
        throw invalid_argument("mu grid: need n >= 1 and 0 < lo <= hi");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        g[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) - 1.0;
    }
    return g;
}

} // namespace hardy
