#pragma once

#include <random>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "fourier.hpp"

namespace hardy {

/// Compression of multiplication by chi_J to span{1, z, ..., z^{Q-1}}.
class ToeplitzMatrix {
public:
    ToeplitzMatrix(double theta0, int Q) : theta0_(theta0), A_(Q, Q) {
        if (!(theta0 > 0.0 && theta0 <= pi))
            throw invalid_argument("theta0 must lie in (0, pi]");
        if (Q < 1)
            throw invalid_argument("Q must be >= 1");
        for (int k = 0; k < Q; ++k)
            for (int m = 0; m < Q; ++m)
                A_(k, m) = entry(m - k);
    }

    double entry(int d) const {
        if (d == 0)
            return theta0_ / pi;
        return std::sin(d * theta0_) / (pi * d);
    }

    double theta0() const { return theta0_; }
    int size() const { return static_cast<int>(A_.rows()); }
    const Eigen::MatrixXd& matrix() const { return A_; }

private:
    double theta0_;
    Eigen::MatrixXd A_;
};

/// Full circle (theta0 = pi) is allowed here so that A = I can be exercised.
inline ToeplitzMatrix build_matrix(double theta0, int Q) { return ToeplitzMatrix(theta0, Q); }

inline VectorC apply(const ToeplitzMatrix& A, const VectorC& g) {
    if (g.size() != A.size())
        throw invalid_argument("apply: dimension mismatch (" + std::to_string(g.size()) + " vs " +
                               std::to_string(A.size()) + ")");
    return A.matrix().cast<cplx>() * g;
}

inline FourierPoly apply(const ToeplitzMatrix& A, const FourierPoly& g) { return FourierPoly(hardy::apply(A, g.coeffs())); }

/// F(k) = <A^k xi, xi>, k = 0..S, by repeated products.
inline std::vector<double> power_moments(const ToeplitzMatrix& A, const VectorC& xi, int S) {
    if (S < 0)
        throw invalid_argument("power_moments: S must be >= 0");
    if (xi.size() != A.size())
        throw invalid_argument("power_moments: dimension mismatch");
    std::vector<double> F;
    F.reserve(S + 1);
    VectorC v = xi;
    const Eigen::MatrixXcd Ac = A.matrix().cast<cplx>();
    for (int k = 0; k <= S; ++k) {
        F.push_back(xi.dot(v).real());
        if (k < S)
            v = Ac * v;
    }
    return F;
}

struct Spectrum {
    double lambda_min;       // extended precision
    double lambda_max;       // double precision eigensolve
    double gap_top;          // 1 - lambda_max in extended precision
    double lambda_min_double;
    double lambda_max_double;
    bool interior;           // certified 0 < lambda_min and lambda_max < 1
};

namespace detail {

using mp_real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>,
                                              boost::multiprecision::et_off>;
using MatrixMP = Eigen::Matrix<mp_real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorMP = Eigen::Matrix<mp_real, Eigen::Dynamic, 1>;

// Smallest eigenvalue of a symmetric positive definite B by inverse iteration
// on its Cholesky factor. Returns a negative value if B is not positive definite.
inline mp_real smallest_eigenvalue(const MatrixMP& B) {
    const Eigen::Index n = B.rows();
    MatrixMP L = MatrixMP::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        mp_real d = B(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            d -= L(j, k) * L(j, k);
        if (d <= 0)
            return mp_real(-1);
        L(j, j) = sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            mp_real s = B(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    // A symmetric Toeplitz matrix leaves the even and odd vectors invariant,
    // so the start vector must have components in both.
    VectorMP x(n);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = nd(rng);
    x /= x.norm();
    mp_real est = 0;
    for (int it = 0; it < 400; ++it) {
        VectorMP y = L.template triangularView<Eigen::Lower>().solve(x);
        y = L.transpose().template triangularView<Eigen::Upper>().solve(y);
        x = y / y.norm();
        const mp_real next = x.dot(B * x);
        if (it > 2 && abs(next - est) <= mp_real(1e-40) * next)
            return next;
        est = next;
    }
    return est;
}

} // namespace detail

/// Extreme eigenvalues of A. The double eigensolve cannot resolve eigenvalues
/// within machine epsilon of 0 or 1, so both ends are refined with 160 decimal digits
/// on the rebuilt matrix.
inline Spectrum spectrum(const ToeplitzMatrix& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numerical_error("spectrum: eigensolver did not converge");
    Spectrum s{};
    s.lambda_min_double = es.eigenvalues().minCoeff();
    s.lambda_max_double = es.eigenvalues().maxCoeff();

    using detail::mp_real;
    const int Q = A.size();
    const mp_real t0 = A.theta0();
    const mp_real mpi = boost::math::constants::pi<mp_real>();
    detail::MatrixMP B(Q, Q), C(Q, Q);
    for (int k = 0; k < Q; ++k)
        for (int m = 0; m < Q; ++m) {
            const int d = m - k;
            const mp_real a = d == 0 ? mp_real(t0 / mpi) : mp_real(sin(d * t0) / (mpi * d));
            B(k, m) = a;
            C(k, m) = (k == m ? mp_real(1) : mp_real(0)) - a;
        }
    const mp_real lo = detail::smallest_eigenvalue(B);
    const mp_real gap = detail::smallest_eigenvalue(C);
    s.lambda_min = static_cast<double>(lo);
    s.gap_top = static_cast<double>(gap);
    s.lambda_max = s.lambda_max_double;
    s.interior = lo > 0 && gap > 0;
    return s;
}

} // namespace hardy
