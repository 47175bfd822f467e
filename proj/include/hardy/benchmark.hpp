#pragma once

#include "solver.hpp"

namespace hardy {

/// f = e^{5i t} + e^{2i t} + 1 + eps / (e^{i t} - 0.4 - 0.3i) on I.
inline BoundaryFn benchmark_f(double eps, int quad_points = 512) {
    return BoundaryFn{[eps](double t) {
                          const cplx z = std::polar(1.0, t);
                          return std::polar(1.0, 5.0 * t) + std::polar(1.0, 2.0 * t) + 1.0 +
                                 eps / (z - cplx(0.4, 0.3));
                      },
                      quad_points};
}

/// h = 1 / (e^{i t} - 0.5i) on J.
inline BoundaryFn benchmark_h(int quad_points = 512) {
    return BoundaryFn{[](double t) { return 1.0 / (std::polar(1.0, t) - cplx(0.0, 0.5)); }, quad_points};
}

/// theta0 = pi/3 with the five interior points and values of z^5 + z^2 + 1.
inline ProblemSpec benchmark_problem(double eps, int Q = 20, int quad_points = 512) {
    ProblemSpec s;
    s.f = benchmark_f(eps, quad_points);
    s.h = benchmark_h(quad_points);
    s.data.points = table1_points();
    s.data.values = table1_oracle(s.data.points);
    s.theta0 = pi / 3.0;
    s.Q = Q;
    s.quad_points = quad_points;
    return s;
}

} // namespace hardy
