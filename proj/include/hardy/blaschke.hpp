#pragma once

#include <vector>

#include "common.hpp"

namespace hardy {

/// b(z) = e^{i phase} prod (z - z_j) / (1 - conj(z_j) z).
class BlaschkeProduct {
public:
    BlaschkeProduct() = default;

    explicit BlaschkeProduct(std::vector<cplx> zeros, double phase = 0.0)
        : zeros_(std::move(zeros)), phase_(phase), rot_(std::polar(1.0, phase)) {
        if (!std::isfinite(phase))
            throw invalid_argument("Blaschke phase must be finite");
        for (std::size_t j = 0; j < zeros_.size(); ++j) {
            if (!finite(zeros_[j]) || std::abs(zeros_[j]) >= 1.0)
                throw invalid_argument("Blaschke zero " + std::to_string(j) + " must lie in the open disk");
            for (std::size_t k = 0; k < j; ++k)
                if (zeros_[j] == zeros_[k])
                    throw invalid_argument("Blaschke zeros " + std::to_string(k) + " and " + std::to_string(j) +
                                           " coincide");
        }
    }

    const std::vector<cplx>& zeros() const { return zeros_; }
    double phase() const { return phase_; }
    int degree() const { return static_cast<int>(zeros_.size()); }

    cplx operator()(cplx z) const {
        cplx r = rot_;
        for (const cplx& a : zeros_)
            r *= (z - a) / (1.0 - std::conj(a) * z);
        return r;
    }

    /// Single factor (z - z_j) / (1 - conj(z_j) z).
    cplx factor(std::size_t j, cplx z) const {
        const cplx a = zeros_.at(j);
        return (z - a) / (1.0 - std::conj(a) * z);
    }

    cplx on_circle(double theta) const { return (*this)(std::polar(1.0, theta)); }

    /// conj(b(e^{i theta})), which equals 1 / b there.
    cplx boundary_conj(double theta) const { return std::conj(on_circle(theta)); }

private:
    std::vector<cplx> zeros_;
    double phase_ = 0.0;
    cplx rot_{1.0, 0.0};
};

inline cplx eval(const BlaschkeProduct& b, cplx z) { return b(z); }
inline cplx boundary_conj(const BlaschkeProduct& b, double theta) { return b.boundary_conj(theta); }

} // namespace hardy
