#pragma once

#include <vector>

#include "fourier.hpp"

namespace hardy {

inline constexpr double gram_condition_limit = 1e12;

struct InterpolationData {
    std::vector<cplx> points;
    std::vector<cplx> values;

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (points.size() != values.size())
            throw invalid_argument("interpolation: points and values differ in length");
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (!finite(points[j]) || std::abs(points[j]) >= 1.0)
                throw invalid_argument("interpolation: point " + std::to_string(j) + " must lie in the open disk");
            if (!finite(values[j]))
                throw invalid_argument("interpolation: value " + std::to_string(j) + " is not finite");
            for (std::size_t k = 0; k < j; ++k)
                if (points[j] == points[k])
                    throw invalid_argument("interpolation: duplicate points " + std::to_string(k) + " and " +
                                           std::to_string(j));
        }
    }
};

enum class InterpolantKind { kernel, lagrange };

inline const char* to_string(InterpolantKind k) { return k == InterpolantKind::kernel ? "kernel" : "lagrange"; }

/// Holomorphic function meeting psi(z_j) = omega_j, with its truncated trace.
class Interpolant {
public:
    Interpolant(InterpolantKind kind, InterpolationData data, VectorC weights, FourierPoly trace)
        : kind_(kind), data_(std::move(data)), w_(std::move(weights)), trace_(std::move(trace)) {}

    InterpolantKind kind() const { return kind_; }
    const InterpolationData& data() const { return data_; }
    /// Kernel weights (kernel) or polynomial coefficients (lagrange).
    const VectorC& weights() const { return w_; }
    const FourierPoly& trace() const { return trace_; }

    cplx operator()(cplx z) const {
        cplx acc = 0.0;
        if (kind_ == InterpolantKind::kernel) {
            for (std::size_t k = 0; k < data_.size(); ++k)
                acc += w_[k] / (1.0 - std::conj(data_.points[k]) * z);
        } else {
            for (Eigen::Index k = w_.size() - 1; k >= 0; --k)
                acc = acc * z + w_[k];
        }
        return acc;
    }

    cplx on_circle(double theta) const { return (*this)(std::polar(1.0, theta)); }

    /// Exact H2 norm squared (kernel: c^H G c; lagrange: Parseval on the polynomial).
    double h2_norm2() const {
        if (kind_ == InterpolantKind::lagrange)
            return w_.squaredNorm();
        cplx acc = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k)
            for (std::size_t j = 0; j < data_.size(); ++j)
                acc += w_[k] * std::conj(w_[j]) / (1.0 - std::conj(data_.points[k]) * data_.points[j]);
        return acc.real();
    }

private:
    InterpolantKind kind_;
    InterpolationData data_;
    VectorC w_;
    FourierPoly trace_;
};

/// G(k, j) = 1 / (1 - conj(z_k) z_j).
inline MatrixC gram_matrix(const std::vector<cplx>& pts) {
    InterpolationData d{pts, std::vector<cplx>(pts.size(), 0.0)};
    d.validate();
    const auto n = static_cast<Eigen::Index>(pts.size());
    MatrixC G(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index j = 0; j < n; ++j)
            G(k, j) = 1.0 / (1.0 - std::conj(pts[k]) * pts[j]);
    return G;
}

inline Interpolant kernel_interpolant(const InterpolationData& data, int Q) {
    data.validate();
    if (Q < 1)
        throw invalid_argument("Q must be >= 1");
    const auto n = static_cast<Eigen::Index>(data.size());
    VectorC c = VectorC::Zero(n);
    if (n > 0) {
        const MatrixC G = gram_matrix(data.points);
        // psi(z_j) = sum_k c_k G(k, j), i.e. G^T c = omega; G^T = conj(G) is Hermitian.
        Eigen::LLT<MatrixC> llt(G.transpose());
        const double rc = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
        const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        if (llt.info() != Eigen::Success || cond > gram_condition_limit)
            throw conditioning_error("Gram system is numerically singular (condition estimate " +
                                         std::to_string(cond) + "); interpolation points too close",
                                     cond);
        VectorC om(n);
        for (Eigen::Index j = 0; j < n; ++j)
            om[j] = data.values[j];
        c = llt.solve(om);
    }
    VectorC tr = VectorC::Zero(Q);
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx a = std::conj(data.points[k]);
        cplx p = c[k];
        for (int m = 0; m < Q; ++m) {
            tr[m] += p;
            p *= a;
        }
    }
    return Interpolant(InterpolantKind::kernel, data, std::move(c), FourierPoly(std::move(tr)));
}

/// Coefficients of prod_{m != j} (z - z_m), lowest degree first.
inline VectorC node_polynomial(const std::vector<cplx>& pts, std::size_t skip) {
    std::vector<cplx> p{1.0};
    for (std::size_t m = 0; m < pts.size(); ++m) {
        if (m == skip)
            continue;
        std::vector<cplx> q(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + 1] += p[i];
            q[i] -= pts[m] * p[i];
        }
        p.swap(q);
    }
    return Eigen::Map<VectorC>(p.data(), static_cast<Eigen::Index>(p.size()));
}

/// Coefficients of the Lagrange basis polynomials L_j, one per column.
inline MatrixC lagrange_basis(const std::vector<cplx>& pts) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    MatrixC L(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const VectorC p = node_polynomial(pts, static_cast<std::size_t>(j));
        cplx denom = 1.0;
        for (Eigen::Index m = 0; m < n; ++m)
            if (m != j)
                denom *= pts[j] - pts[m];
        L.col(j) = p / denom;
    }
    return L;
}

inline Interpolant lagrange_interpolant(const InterpolationData& data, int Q) {
    data.validate();
    const auto n = static_cast<Eigen::Index>(data.size());
    if (n < 1)
        throw invalid_argument("lagrange interpolant needs at least one point");
    if (Q < n)
        throw invalid_argument("Q must be >= N for the Lagrange interpolant");
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < j; ++k)
            if (std::abs(data.points[j] - data.points[k]) < 1e-12)
                throw conditioning_error("Lagrange nodes nearly coincide", std::numeric_limits<double>::infinity());
    VectorC om(n);
    for (Eigen::Index j = 0; j < n; ++j)
        om[j] = data.values[j];
    VectorC poly = lagrange_basis(data.points) * om;
    VectorC tr = VectorC::Zero(Q);
    tr.head(n) = poly;
    return Interpolant(InterpolantKind::lagrange, data, std::move(poly), FourierPoly(std::move(tr)));
}

inline Interpolant make_interpolant(InterpolantKind kind, const InterpolationData& data, int Q) {
    return kind == InterpolantKind::kernel ? kernel_interpolant(data, Q) : lagrange_interpolant(data, Q);
}

inline std::vector<cplx> table1_points() {
    return {{0.5, 0.4}, {-0.3, 0.3}, {0.2, 0.6}, {0.2, -0.5}, {0.8, -0.1}};
}

/// z^5 + z^2 + 1 at each point.
inline std::vector<cplx> table1_oracle(const std::vector<cplx>& pts) {
    std::vector<cplx> out;
    out.reserve(pts.size());
    for (const cplx& z : pts) {
        const cplx z2 = z * z;
        out.push_back(z2 * z2 * z + z2 + 1.0);
    }
    return out;
}

} // namespace hardy
