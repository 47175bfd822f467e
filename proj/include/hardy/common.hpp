#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hardy {

using cplx = std::complex<double>;
using VectorC = Eigen::VectorXcd;
using MatrixC = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class error_kind {
    invalid_argument,
    out_of_domain,
    infeasible,
    conditioning,
    numerical,
    calibration,
    degenerate
};

/// Base of every error thrown by the library; `kind()` drives CLI exit codes.
class error : public std::runtime_error {
public:
    error(error_kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

struct invalid_argument : error {
    explicit invalid_argument(const std::string& w) : error(error_kind::invalid_argument, w) {}
};

struct out_of_domain : error {
    explicit out_of_domain(const std::string& w) : error(error_kind::out_of_domain, w) {}
};

struct numerical_error : error {
    explicit numerical_error(const std::string& w) : error(error_kind::numerical, w) {}
};

struct degenerate_data : error {
    explicit degenerate_data(const std::string& w) : error(error_kind::degenerate, w) {}
};

class conditioning_error : public error {
public:
    conditioning_error(const std::string& w, double cond)
        : error(error_kind::conditioning, w), cond_(cond) {}
    double condition_estimate() const noexcept { return cond_; }

private:
    double cond_;
};

class infeasible_constraint : public error {
public:
    infeasible_constraint(const std::string& w, double lo, double hi)
        : error(error_kind::infeasible, w), lo_(lo), hi_(hi) {}
    /// Attainable range of M0 over the search bracket.
    double attainable_min() const noexcept { return lo_; }
    double attainable_max() const noexcept { return hi_; }

private:
    double lo_, hi_;
};

class calibration_failure : public error {
public:
    calibration_failure(const std::string& w, int best_S, double best_rel)
        : error(error_kind::calibration, w), best_S_(best_S), best_rel_(best_rel) {}
    int best_order() const noexcept { return best_S_; }
    double best_relative_error() const noexcept { return best_rel_; }

private:
    int best_S_;
    double best_rel_;
};

/// Exit code mapping used by the command line tool.
inline int exit_code(error_kind k) {
    switch (k) {
    case error_kind::invalid_argument:
    case error_kind::out_of_domain:
        return 2;
    case error_kind::infeasible:
        return 3;
    default:
        return 4;
    }
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace hardy
