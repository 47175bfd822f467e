#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "series.hpp"

namespace hardy {

// ---------------------------------------------------------------------------
// Stability constants and perturbation experiments

struct StabilityConstants {
    double mu = 0.0;
    double M = 0.0;
    double m0 = 1.0;
    double m1 = 1.0;
    double xi_norm = 0.0;
    double K = 1.0;               // 1 + m1 M^2 / (m0 ||xi||^2)
    double C1 = 0.0;              // m1 (||f v h|| + |mu| ||h - psi||_J)
    double C2 = 1.0;              // 1 + |mu| m1
    double norm_fh = 0.0;         // ||f v h||_{L2(T)}
    double norm_h_minus_psi = 0.0;
    double companion_discrepancy = 0.0;  // ||psi - h + b P+(conj(b)(f v h))||_J
    std::optional<double> xi_lower_bound;
    double lagrange_norm_max = 0.0;      // max_j ||L_j||_{H2}
    double blaschke_factor = 0.0;        // ||delta b||_inf / ||delta z||_1
    double interpolant_factor = 0.0;     // ||delta psi|| / ||delta z||_1
};

enum class PerturbationKind { f, h, omega, z };

inline const char* to_string(PerturbationKind k) {
    switch (k) {
    case PerturbationKind::f:
        return "f";
    case PerturbationKind::h:
        return "h";
    case PerturbationKind::omega:
        return "omega";
    case PerturbationKind::z:
        return "z";
    }
    return "?";
}

inline PerturbationKind parse_perturbation_kind(const std::string& s) {
    if (s == "f")
        return PerturbationKind::f;
    if (s == "h")
        return PerturbationKind::h;
    if (s == "omega")
        return PerturbationKind::omega;
    if (s == "z")
        return PerturbationKind::z;
    throw invalid_argument("unknown perturbation kind '" + s + "' (expected f, h, omega or z)");
}

/// Projection of conj(b)(f v h) onto the first Q modes, by region quadrature.
inline VectorC companion_coeffs(const Problem& P) {
    const auto& s = P.spec();
    const auto& b = P.blaschke();
    const BoundaryFn bf{[&](double t) { return b.boundary_conj(t) * s.f(t); }, s.quad_points};
    const BoundaryFn bh{[&](double t) { return b.boundary_conj(t) * s.h(t); }, s.quad_points};
    const BoundaryFn bpsi{[&](double t) { return b.boundary_conj(t) * P.psi().on_circle(t); }, s.quad_points};
    VectorC g = project_plus_region(bf, P.arc(), Region::I, s.Q) + project_plus_region(bh, P.arc(), Region::J, s.Q);
    if (P.psi().kind() != InterpolantKind::kernel)
        g -= project_plus_region(bpsi, P.arc(), Region::I, s.Q) + project_plus_region(bpsi, P.arc(), Region::J, s.Q);
    return g;
}

/// ||u - h||^2 on J for an evaluator u defined in the closed disk.
inline double discrepancy2_of(const Problem& P, const std::function<cplx(cplx)>& u) {
    const BoundaryFn d{[&](double t) { return u(std::polar(1.0, t)) - P.spec().h(t); }, P.spec().quad_points};
    return inner_product_arc(d, d, P.arc(), Region::J).real();
}

inline StabilityConstants stability_constants(const Problem& P, const SolveResult& r) {
    const auto& s = P.spec();
    StabilityConstants c;
    c.mu = r.mu;
    c.M = r.M0;
    const double inv = 1.0 / (1.0 + r.mu);
    c.m0 = std::min(inv, 1.0);
    c.m1 = std::max(inv, 1.0);
    c.xi_norm = P.xi(r.g.coeffs()).norm();
    c.K = 1.0 + c.m1 * c.M * c.M / (c.m0 * c.xi_norm * c.xi_norm);
    c.norm_fh = std::hypot(P.norm_f_I(), P.norm_h_J());
    const BoundaryFn hp{[&](double t) { return s.h(t) - P.psi().on_circle(t); }, s.quad_points};
    c.norm_h_minus_psi = norm_arc(hp, P.arc(), Region::J);
    c.C1 = c.m1 * (c.norm_fh + std::abs(r.mu) * c.norm_h_minus_psi);
    c.C2 = 1.0 + std::abs(r.mu) * c.m1;

    const FourierPoly gc(companion_coeffs(P));
    const auto& psi = P.psi();
    const auto& b = P.blaschke();
    c.companion_discrepancy =
        std::sqrt(discrepancy2_of(P, [&](cplx z) { return psi(z) + b(z) * gc(z); }));
    if (c.companion_discrepancy < c.M && r.mu != 0.0)
        c.xi_lower_bound = (c.M - c.companion_discrepancy) / std::abs(r.mu);

    const auto& pts = s.data.points;
    const std::size_t N = pts.size();
    if (N > 0) {
        const MatrixC L = lagrange_basis(pts);
        double max_inv = 0.0, max_om = 0.0, max_node = 0.0, max_sum = 0.0;
        double min_prod = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < N; ++j) {
            c.lagrange_norm_max = std::max(c.lagrange_norm_max, L.col(static_cast<Eigen::Index>(j)).norm());
            max_inv = std::max(max_inv, 1.0 / (1.0 - std::abs(pts[j])));
            max_om = std::max(max_om, std::abs(s.data.values[j]));
            max_node = std::max(max_node, node_polynomial(pts, j).norm());
            double sum = 0.0, prod = 1.0;
            for (std::size_t k = 0; k < N; ++k)
                if (k != j) {
                    sum += 1.0 / std::abs(pts[j] - pts[k]);
                    prod *= std::abs(pts[j] - pts[k]);
                }
            max_sum = std::max(max_sum, sum);
            min_prod = std::min(min_prod, prod);
        }
        c.blaschke_factor = 2.0 * max_inv;
        c.interpolant_factor = 2.0 * max_om * max_node * max_sum / min_prod;
    }
    return c;
}

/// Right-hand side of the first-order estimate for a perturbation of size delta.
inline double stability_bound(const StabilityConstants& c, PerturbationKind kind, double delta) {
    switch (kind) {
    case PerturbationKind::f:
        return c.m1 * c.K * delta;
    case PerturbationKind::h:
        return ((1.0 + c.m1 * (1.0 + c.mu)) * c.K - 1.0) * delta;
    case PerturbationKind::omega:
        return c.C2 * c.K * c.lagrange_norm_max * delta;
    case PerturbationKind::z:
        return c.K * (c.C1 * c.blaschke_factor + c.C2 * c.interpolant_factor) * delta;
    }
    return 0.0;
}

struct PerturbationReport {
    PerturbationKind kind = PerturbationKind::f;
    double delta_magnitude = 0.0;
    double measured_deviation = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double mu = 0.0;
    StabilityConstants constants;
    bool valid = true;
    std::string note;
};

struct PerturbationOptions {
    std::uint64_t seed = 1;
    int grid = 256;
    /// Direction for kinds f and h; random trigonometric polynomial otherwise.
    std::optional<BoundaryFn> boundary_direction;
    /// Direction for kinds omega and z; random complex vector otherwise.
    std::optional<std::vector<cplx>> point_direction;
};

namespace detail {

inline double h2_distance(const std::function<cplx(cplx)>& u, const std::function<cplx(cplx)>& v, int n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx z = std::polar(1.0, two_pi * j / n);
        acc += std::norm(u(z) - v(z));
    }
    return std::sqrt(acc / n);
}

inline cplx gaussian_cplx(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

} // namespace detail

/// Perturbs one input along a fixed direction scaled to each magnitude
/// (L2 norm on the relevant arc for f and h, l1 norm for omega and z),
/// re-tunes mu at the same M and compares psi + b g on a uniform grid.
inline std::vector<PerturbationReport> perturbation_experiment(const ProblemSpec& spec, PerturbationKind kind,
                                                               const std::vector<double>& deltas,
                                                               const PerturbationOptions& opt = {}) {
    const Problem base(spec);
    const SolveResult r0 = tune_mu(base, spec.M);
    const StabilityConstants c = stability_constants(base, r0);
    const Arc arc(spec.theta0);
    std::mt19937_64 rng(opt.seed);

    BoundaryFn dir_fn;
    std::vector<cplx> dir_vec;
    if (kind == PerturbationKind::f || kind == PerturbationKind::h) {
        if (opt.boundary_direction) {
            dir_fn = *opt.boundary_direction;
        } else {
            std::vector<cplx> a(7);
            for (auto& x : a)
                x = detail::gaussian_cplx(rng);
            dir_fn = BoundaryFn{[a](double t) {
                                    cplx acc = 0.0;
                                    for (int n = 0; n < 7; ++n)
                                        acc += a[n] * std::polar(1.0, (n - 3) * t);
                                    return acc;
                                },
                                spec.quad_points};
        }
        const double nrm = norm_arc(dir_fn, arc, kind == PerturbationKind::f ? Region::I : Region::J);
        if (!(nrm > 0.0))
            throw invalid_argument("perturbation direction vanishes on the arc");
        auto inner = dir_fn.eval;
        dir_fn.eval = [inner, nrm](double t) { return inner(t) / nrm; };
    } else {
        const std::size_t N = spec.data.size();
        if (N == 0)
            throw invalid_argument("perturbation of interpolation data requires N >= 1");
        if (opt.point_direction) {
            dir_vec = *opt.point_direction;
            if (dir_vec.size() != N)
                throw invalid_argument("point_direction must have one entry per interpolation point");
        } else {
            dir_vec.resize(N);
            for (auto& x : dir_vec)
                x = detail::gaussian_cplx(rng);
        }
        double l1 = 0.0;
        for (const auto& x : dir_vec)
            l1 += std::abs(x);
        if (!(l1 > 0.0))
            throw invalid_argument("perturbation direction is zero");
        for (auto& x : dir_vec)
            x /= l1;
    }

    std::vector<PerturbationReport> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        PerturbationReport row;
        row.kind = kind;
        row.delta_magnitude = d;
        row.constants = c;
        row.bound = stability_bound(c, kind, d);
        try {
            ProblemSpec ps = spec;
            switch (kind) {
            case PerturbationKind::f: {
                auto f0 = spec.f.eval;
                auto u = dir_fn.eval;
                ps.f.eval = [f0, u, d](double t) { return f0(t) + d * u(t); };
                break;
            }
            case PerturbationKind::h: {
                auto h0 = spec.h.eval;
                auto u = dir_fn.eval;
                ps.h.eval = [h0, u, d](double t) { return h0(t) + d * u(t); };
                break;
            }
            case PerturbationKind::omega:
                for (std::size_t j = 0; j < dir_vec.size(); ++j)
                    ps.data.values[j] += d * dir_vec[j];
                break;
            case PerturbationKind::z:
                for (std::size_t j = 0; j < dir_vec.size(); ++j)
                    ps.data.points[j] += d * dir_vec[j];
                break;
            }
            const Problem P(ps);
            const SolveResult r = tune_mu(P, spec.M);
            row.mu = r.mu;
            row.measured_deviation = detail::h2_distance(r.gtilde, r0.gtilde, opt.grid);
            row.ratio = row.bound > 0.0 ? row.measured_deviation / row.bound : 0.0;
        } catch (const error& ex) {
            row.valid = false;
            row.note = ex.what();
            row.measured_deviation = row.ratio = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Carleman extrapolation from I

/// Outer function with |Phi| = rho on I and |Phi| = 1 on J:
/// log Phi(z) = (log rho / 2 pi) int_I (e^{it} + z) / (e^{it} - z) dt, in closed form.
class QuenchingFunction {
public:
    QuenchingFunction(double theta0, double rho) : a_(theta0), b_(two_pi - theta0), rho_(rho) {
        (void)Arc(theta0);
        if (!(rho > 1.0) || !std::isfinite(rho))
            throw invalid_argument("rho must be > 1, got " + std::to_string(rho));
        c_ = std::log(rho) / two_pi;
    }

    double rho() const { return rho_; }

    /// log Phi at an interior point.
    cplx log_interior(cplx z) const {
        if (!(std::abs(z) < 1.0))
            throw out_of_domain("quenching function: |z| must be < 1");
        const cplx r = (std::polar(1.0, b_) - z) / (std::polar(1.0, a_) - z);
        double darg = std::arg(r);
        if (darg < 0.0)
            darg += two_pi;
        return c_ * cplx(2.0 * darg - (b_ - a_), -2.0 * std::log(std::abs(r)));
    }

    /// Boundary value of log Phi at a point of I given by its distances to both endpoints.
    cplx log_boundary_I(double dist_a, double dist_b) const {
        return c_ * cplx(two_pi, -2.0 * std::log(std::sin(0.5 * dist_b) / std::sin(0.5 * dist_a)));
    }

    /// Boundary value at any theta off the endpoints.
    cplx log_boundary(double theta) const {
        double t = std::remainder(theta, two_pi);
        if (t < 0.0)
            t += two_pi;
        const double da = std::abs(std::sin(0.5 * (t - a_)));
        const double db = std::abs(std::sin(0.5 * (b_ - t)));
        const bool onI = t > a_ && t < b_;
        return c_ * cplx(onI ? two_pi : 0.0, -2.0 * std::log(db / da));
    }

    cplx operator()(cplx z) const { return std::exp(log_interior(z)); }

private:
    double a_, b_, rho_, c_;
};

struct CarlemanOptions {
    double r_max = 0.95;
    double s_max = 40.0;
    double panel = 0.5;
};

/// (1 / 2 pi i) int_I f(xi) / (xi - z) (Phi(xi) / Phi(z))^alpha dxi, with
/// Gauss-Legendre panels graded exponentially towards both endpoints of I.
inline cplx carleman_extrapolate(const BoundaryFn& f, const Arc& arc, double rho, double alpha, cplx z,
                                 const CarlemanOptions& opt = {}) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw invalid_argument("alpha must be positive, got " + std::to_string(alpha));
    if (!(opt.r_max < 1.0) || !(std::abs(z) <= opt.r_max))
        throw out_of_domain("carleman: |z| must not exceed r_max = " + std::to_string(opt.r_max));
    const QuenchingFunction phi(arc.theta0, rho);
    const double a = arc.theta0;
    const double len = two_pi - 2.0 * arc.theta0;
    const double half = 0.5 * len;
    const cplx lz = phi.log_interior(z);

    using gl = boost::math::quadrature::gauss<double, gl_order>;
    const auto& x = gl::abscissa();
    const auto& w = gl::weights();
    const int panels = static_cast<int>(std::ceil(opt.s_max / opt.panel));
    const double hw = 0.5 * opt.s_max / panels;

    cplx acc = 0.0;
    auto add = [&](double dist_a, double dist_b, double weight) {
        const double t = a + dist_a;
        const cplx xi = std::polar(1.0, t);
        const cplx q = std::exp(alpha * (phi.log_boundary_I(dist_a, dist_b) - lz));
        acc += weight * f(t) * xi / (xi - z) * q;
    };
    for (int p = 0; p < panels; ++p) {
        const double mid = (2 * p + 1) * hw;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (double sgn : {-1.0, 1.0}) {
                if (sgn > 0.0 && x[i] == 0.0)
                    continue;
                const double s = mid + sgn * hw * x[i];
                const double d = half * std::exp(-s);
                const double wt = hw * w[i] * d;
                add(d, len - d, wt);
                add(len - d, d, wt);
            }
        }
    }
    return acc / two_pi;
}

// ---------------------------------------------------------------------------
// Companion problem at mu = 0 and its first-order correction

/// psi + b P+(conj(b)(f v h)) (minus b P+(conj(b) psi) when psi is not the kernel interpolant).
inline std::function<cplx(cplx)> companion_mu0(const Problem& P) {
    auto gc = std::make_shared<FourierPoly>(companion_coeffs(P));
    const Interpolant psi = P.psi();
    const BlaschkeProduct b = P.blaschke();
    return [gc, psi, b](cplx z) { return psi(z) + b(z) * (*gc)(z); };
}

struct CompanionCorrection {
    std::function<cplx(cplx)> evaluator;
    double dM0sq_dmu = 0.0;  // -2 F(0)
    double delta_mu = 0.0;   // first-order change of mu
};

/// g ~ companion + b (dg/dmu)(0) (dmu/dM0^2) delta_M2, with dg/dmu(0) = -xi0.
inline CompanionCorrection companion_first_order(const Problem& P, double delta_M2) {
    const VectorC xi0 = compute_xi0(P);
    const double F0 = xi0.squaredNorm();
    const double scale = std::max(1.0, P.rhs(0.0).squaredNorm());
    if (!(F0 > 1e-14 * scale))
        throw degenerate_data("companion_first_order: dM0^2/dmu vanishes at mu = 0 (M0 = 0 case)");
    CompanionCorrection out;
    out.dM0sq_dmu = -2.0 * F0;
    out.delta_mu = delta_M2 / out.dM0sq_dmu;
    auto base = companion_mu0(P);
    auto corr = std::make_shared<FourierPoly>(VectorC(-xi0 * out.delta_mu));
    const BlaschkeProduct b = P.blaschke();
    out.evaluator = [base, corr, b](cplx z) { return base(z) + b(z) * (*corr)(z); };
    return out;
}

} // namespace hardy
