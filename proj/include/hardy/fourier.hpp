#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "common.hpp"

namespace hardy {

/// Truncated analytic polynomial g(z) = sum_{k=1}^{Q} c_k z^{k-1}.
class FourierPoly {
public:
    FourierPoly() : c_(VectorC::Zero(1)) {}

    explicit FourierPoly(VectorC coeffs) : c_(std::move(coeffs)) {
        if (c_.size() < 1)
            throw invalid_argument("FourierPoly: Q must be >= 1");
        for (Eigen::Index k = 0; k < c_.size(); ++k)
            if (!finite(c_[k]))
                throw numerical_error("FourierPoly: non-finite coefficient at index " + std::to_string(k));
    }

    static FourierPoly zero(int Q) { return FourierPoly(VectorC::Zero(Q)); }

    int size() const { return static_cast<int>(c_.size()); }
    const VectorC& coeffs() const { return c_; }
    cplx operator[](int k) const { return c_[k]; }

    cplx operator()(cplx z) const {
        cplx acc = 0.0;
        for (Eigen::Index k = c_.size() - 1; k >= 0; --k)
            acc = acc * z + c_[k];
        return acc;
    }

    cplx trace(double theta) const { return (*this)(std::polar(1.0, theta)); }

    /// Squared H2 norm by Parseval.
    double norm2() const { return c_.squaredNorm(); }
    double norm() const { return c_.norm(); }

private:
    VectorC c_;
};

/// Complex-valued 2*pi-periodic function on the circle.
struct BoundaryFn {
    std::function<cplx(double)> eval;
    int quad_points = 512;

    cplx operator()(double theta) const { return eval(theta); }
};

/// J = {theta in [-theta0, theta0]}; I is its complement.
struct Arc {
    double theta0;

    explicit Arc(double t0) : theta0(t0) {
        if (!(t0 > 0.0 && t0 < pi))
            throw invalid_argument("theta0 must lie in (0, pi), got " + std::to_string(t0));
    }
    double measure_J() const { return 2.0 * theta0; }
    double measure_I() const { return two_pi - 2.0 * theta0; }
};

enum class Region { full, J, I };

/// Nodes and weights on the circle; weights include the 1/(2 pi) normalisation.
struct QuadRule {
    std::vector<double> theta;
    std::vector<double> weight;

    std::size_t size() const { return theta.size(); }
};

inline constexpr int gl_order = 16;
inline constexpr double gl_panel_width = 0.05;

/// Uniform trapezoid on [0, 2 pi) containing theta = 0.
inline QuadRule trapezoid_rule(int n) {
    if (n < 1)
        throw invalid_argument("quad_points must be positive");
    QuadRule r;
    r.theta.resize(n);
    r.weight.assign(n, 1.0 / n);
    for (int j = 0; j < n; ++j)
        r.theta[j] = two_pi * j / n;
    return r;
}

/// Composite Gauss-Legendre on [a, b].
inline QuadRule gauss_legendre_rule(double a, double b, int quad_points) {
    if (!(b > a))
        throw invalid_argument("empty arc");
    using gl = boost::math::quadrature::gauss<double, gl_order>;
    const auto& x = gl::abscissa();
    const auto& w = gl::weights();
    const double len = b - a;
    const int by_width = static_cast<int>(std::ceil(len / gl_panel_width));
    const int by_count = static_cast<int>(std::ceil(quad_points * len / two_pi / gl_order));
    const int panels = std::max({1, by_width, by_count});
    const double hw = 0.5 * len / panels;

    QuadRule r;
    r.theta.reserve(panels * gl_order);
    r.weight.reserve(panels * gl_order);
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (2 * p + 1) * hw;
        for (std::size_t i = 0; i < x.size(); ++i) {
            r.theta.push_back(mid - hw * x[i]);
            r.weight.push_back(hw * w[i] / two_pi);
            if (x[i] != 0.0) {
                r.theta.push_back(mid + hw * x[i]);
                r.weight.push_back(hw * w[i] / two_pi);
            }
        }
    }
    return r;
}

inline QuadRule region_rule(const Arc& arc, Region where, int quad_points) {
    switch (where) {
    case Region::full:
        return trapezoid_rule(quad_points);
    case Region::J:
        return gauss_legendre_rule(-arc.theta0, arc.theta0, quad_points);
    case Region::I:
        return gauss_legendre_rule(arc.theta0, two_pi - arc.theta0, quad_points);
    }
    throw invalid_argument("unknown region");
}

namespace detail {

inline void check_projection(int Q, int quad_points) {
    if (Q < 1)
        throw invalid_argument("Q must be >= 1, got " + std::to_string(Q));
    if (quad_points < 4 * Q)
        throw invalid_argument("quad_points must be >= 4Q (" + std::to_string(4 * Q) + "), got " +
                               std::to_string(quad_points));
}

// Coefficients <u, z^k> for k = sign*0, sign*1, ... with exact node angles.
inline VectorC trapezoid_coeffs(const BoundaryFn& u, int Q, int first, int step) {
    const int n = u.quad_points;
    std::vector<cplx> vals(n);
    for (int j = 0; j < n; ++j)
        vals[j] = u(two_pi * j / n);
    VectorC out(Q);
    for (int q = 0; q < Q; ++q) {
        const long k = first + static_cast<long>(step) * q;
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) {
            long m = (k * j) % n;
            if (m < 0)
                m += n;
            acc += vals[j] * std::polar(1.0, -two_pi * static_cast<double>(m) / n);
        }
        out[q] = acc / static_cast<double>(n);
    }
    return out;
}

} // namespace detail

/// First Q nonnegative-index Fourier coefficients of u (uniform trapezoid).
inline FourierPoly project_plus(const BoundaryFn& u, int Q) {
    detail::check_projection(Q, u.quad_points);
    return FourierPoly(detail::trapezoid_coeffs(u, Q, 0, 1));
}

/// Coefficients of e^{-i theta}, ..., e^{-i Q theta} of u.
inline VectorC project_minus(const BoundaryFn& u, int Q) {
    detail::check_projection(Q, u.quad_points);
    return detail::trapezoid_coeffs(u, Q, -1, -1);
}

/// Samples of e^{-ik theta} at the nodes of a rule, row k.
inline MatrixC conj_basis(const QuadRule& r, int Q) {
    MatrixC E(Q, static_cast<Eigen::Index>(r.size()));
    for (std::size_t j = 0; j < r.size(); ++j) {
        const cplx step = std::polar(1.0, -r.theta[j]);
        cplx p = 1.0;
        for (int k = 0; k < Q; ++k) {
            E(k, j) = p;
            p *= step;
        }
    }
    return E;
}

/// <chi_region u, z^k>, k = 0..Q-1, via the region's rule.
inline VectorC project_plus_region(const std::vector<cplx>& samples, const QuadRule& r, int Q) {
    VectorC s = VectorC::Zero(Q);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const cplx step = std::polar(1.0, -r.theta[j]);
        cplx p = r.weight[j] * samples[j];
        for (int k = 0; k < Q; ++k) {
            s[k] += p;
            p *= step;
        }
    }
    return s;
}

inline VectorC project_plus_region(const BoundaryFn& u, const Arc& arc, Region where, int Q) {
    const QuadRule r = region_rule(arc, where, u.quad_points);
    std::vector<cplx> v(r.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        v[j] = u(r.theta[j]);
    return project_plus_region(v, r, Q);
}

/// (1/2 pi) int u conj(v) over the region.
inline cplx inner_product_arc(const BoundaryFn& u, const BoundaryFn& v, const Arc& arc, Region where) {
    const QuadRule r = region_rule(arc, where, std::max(u.quad_points, v.quad_points));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const cplx a = u(r.theta[j]);
        const cplx b = v(r.theta[j]);
        if (!finite(a) || !finite(b))
            throw numerical_error("inner_product_arc: non-finite value at theta = " + std::to_string(r.theta[j]));
        acc += r.weight[j] * a * std::conj(b);
    }
    return acc;
}

inline double norm_arc(const BoundaryFn& u, const Arc& arc, Region where) {
    return std::sqrt(std::max(0.0, inner_product_arc(u, u, arc, where).real()));
}

/// Inner product over an explicit interval [a, b] of angles.
inline cplx inner_product_interval(const BoundaryFn& u, const BoundaryFn& v, double a, double b) {
    if (!(b > a))
        throw invalid_argument("inner_product_arc: empty arc");
    const QuadRule r = gauss_legendre_rule(a, b, std::max(u.quad_points, v.quad_points));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j)
        acc += r.weight[j] * u(r.theta[j]) * std::conj(v(r.theta[j]));
    return acc;
}

inline BoundaryFn trace_of(const FourierPoly& g, int quad_points) {
    return BoundaryFn{[g](double t) { return g.trace(t); }, quad_points};
}

} // namespace hardy
