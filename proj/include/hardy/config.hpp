#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "benchmark.hpp"

namespace hardy {

/// Shortest round-trip decimal form with 17 significant digits.
inline std::string fmt(double x) {
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_complex(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

inline cplx parse_complex(const std::string& s, const std::string& field) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) {
            std::size_t used = 0;
            const double re = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument(s);
            return {re, 0.0};
        }
        std::size_t u1 = 0, u2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double re = std::stod(a, &u1);
        const double im = std::stod(b, &u2);
        if (u1 != a.size() || u2 != b.size())
            throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::exception&) {
        throw invalid_argument(field + ": expected a complex number written as \"re,im\", got \"" + s + "\"");
    }
}

/// Serializable description of a boundary function.
struct FunctionSpec {
    std::string type = "zero";  // zero | benchmark_f | benchmark_h | polynomial | samples
    double eps = 0.0;
    std::vector<cplx> coeffs;   // polynomial: lowest degree first
    std::vector<cplx> samples;  // values at theta_n = 2 pi n / L, linear interpolation

    BoundaryFn build(int quad_points) const {
        if (type == "zero")
            return BoundaryFn{[](double) { return cplx(0.0); }, quad_points};
        if (type == "benchmark_f")
            return benchmark_f(eps, quad_points);
        if (type == "benchmark_h")
            return benchmark_h(quad_points);
        if (type == "polynomial") {
            const FourierPoly p{Eigen::Map<const VectorC>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()))};
            return trace_of(p, quad_points);
        }
        if (type == "samples") {
            const auto v = samples;
            return BoundaryFn{[v](double t) {
                                  const double L = static_cast<double>(v.size());
                                  double x = std::fmod(t, two_pi);
                                  if (x < 0.0)
                                      x += two_pi;
                                  const double pos = x / two_pi * L;
                                  const auto i0 = static_cast<std::size_t>(std::floor(pos)) % v.size();
                                  const std::size_t i1 = (i0 + 1) % v.size();
                                  const double w = pos - std::floor(pos);
                                  return (1.0 - w) * v[i0] + w * v[i1];
                              },
                              quad_points};
        }
        throw invalid_argument("unknown function type '" + type + "'");
    }
};

struct RunConfig {
    double theta0 = pi / 3.0;
    FunctionSpec f{"benchmark_f", 0.5, {}, {}};
    FunctionSpec h{"benchmark_h", 0.0, {}, {}};
    std::vector<cplx> points = table1_points();
    std::vector<cplx> values = table1_oracle(table1_points());
    std::optional<double> M;           // absolute constraint level
    std::optional<double> M_relative;  // M = M_relative * M0(0)
    int Q = 20;
    int quad_points = 512;
    double phase = 0.0;
    std::string interpolant = "kernel";

    // sweep
    std::vector<double> mu_grid;  // explicit grid; empty means the log grid below
    double grid_lo = 1e-3, grid_hi = 4.0;
    int grid_n = 60;

    // series
    std::optional<int> S;
    double calib_mu0 = -0.5;
    double calib_tol = 0.05;
    int S_max = default_S_max;
    int moments_K = 50;

    // stability
    std::vector<std::string> kinds{"f", "h", "omega", "z"};
    std::vector<double> deltas{1e-2, 1e-3, 1e-4, 1e-5};

    // carleman
    double rho = 2.0;
    std::vector<double> alphas{1.0, 4.0, 16.0, 64.0};
    std::vector<cplx> eval_points{{0.0, 0.0}, {0.2, 0.0}, {0.0, 0.3}};
    double r_max = 0.95;
    std::optional<FunctionSpec> exact;  // reference for Carleman errors

    std::uint64_t seed = 1;

    void validate() const;
    ProblemSpec problem() const;
    std::vector<double> grid() const { return mu_grid.empty() ? log_mu_grid(grid_lo, grid_hi, grid_n) : mu_grid; }
};

namespace detail {

using nlohmann::json;

inline void check_fn(const FunctionSpec& s, const std::string& field) {
    static const char* types[] = {"zero", "benchmark_f", "benchmark_h", "polynomial", "samples"};
    if (std::find(std::begin(types), std::end(types), s.type) == std::end(types))
        throw invalid_argument(field + ".type: unknown function type '" + s.type + "'");
    if (s.type == "polynomial" && s.coeffs.empty())
        throw invalid_argument(field + ".coeffs: polynomial needs at least one coefficient");
    if (s.type == "samples" && s.samples.size() < 2)
        throw invalid_argument(field + ".samples: need at least two samples");
    if (!std::isfinite(s.eps))
        throw invalid_argument(field + ".eps: must be finite");
}

inline json complex_list(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v)
        a.push_back(format_complex(z));
    return a;
}

inline std::vector<cplx> read_complex_list(const json& j, const std::string& field) {
    if (!j.is_array())
        throw invalid_argument(field + ": expected an array of \"re,im\" strings");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        if (j[i].is_number())
            out.emplace_back(j[i].get<double>(), 0.0);
        else if (j[i].is_string())
            out.push_back(parse_complex(j[i].get<std::string>(), f));
        else
            throw invalid_argument(f + ": expected \"re,im\"");
    }
    return out;
}

inline json fn_to_json(const FunctionSpec& s) {
    json j{{"type", s.type}};
    if (s.type == "benchmark_f")
        j["eps"] = s.eps;
    if (s.type == "polynomial")
        j["coeffs"] = complex_list(s.coeffs);
    if (s.type == "samples")
        j["samples"] = complex_list(s.samples);
    return j;
}

inline FunctionSpec fn_from_json(const json& j, const std::string& field) {
    if (!j.is_object())
        throw invalid_argument(field + ": expected an object with a 'type' key");
    FunctionSpec s;
    s.type = j.value("type", std::string{});
    if (j.contains("eps"))
        s.eps = j.at("eps").get<double>();
    if (j.contains("coeffs"))
        s.coeffs = read_complex_list(j.at("coeffs"), field + ".coeffs");
    if (j.contains("samples"))
        s.samples = read_complex_list(j.at("samples"), field + ".samples");
    check_fn(s, field);
    return s;
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& field) {
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw invalid_argument(field + "." + key + ": wrong type");
    }
}

} // namespace detail

inline void RunConfig::validate() const {
    if (!(theta0 > 0.0 && theta0 < pi))
        throw invalid_argument("problem.theta0: must lie in (0, pi), got " + fmt(theta0));
    if (Q < 1)
        throw invalid_argument("problem.Q: must be >= 1");
    if (static_cast<std::size_t>(Q) < points.size())
        throw invalid_argument("problem.Q: must be >= number of interpolation points (" +
                               std::to_string(points.size()) + ")");
    if (quad_points < 4 * Q)
        throw invalid_argument("problem.quad_points: must be >= 4Q = " + std::to_string(4 * Q));
    if (points.size() != values.size())
        throw invalid_argument("problem.values: need one value per point (" + std::to_string(points.size()) + ")");
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (!(std::abs(points[j]) < 1.0))
            throw invalid_argument("problem.points[" + std::to_string(j) + "]: |z| must be < 1");
        for (std::size_t k = 0; k < j; ++k)
            if (points[j] == points[k])
                throw invalid_argument("problem.points[" + std::to_string(j) + "]: duplicates problem.points[" +
                                       std::to_string(k) + "]");
    }
    if (M && (!std::isfinite(*M) || *M < 0.0))
        throw invalid_argument("problem.M: must be finite and nonnegative");
    if (M_relative && (!std::isfinite(*M_relative) || *M_relative < 0.0))
        throw invalid_argument("problem.M_relative: must be finite and nonnegative");
    if (M && M_relative)
        throw invalid_argument("problem.M: give either M or M_relative, not both");
    if (interpolant != "kernel" && interpolant != "lagrange")
        throw invalid_argument("problem.interpolant: expected 'kernel' or 'lagrange'");
    detail::check_fn(f, "problem.f");
    detail::check_fn(h, "problem.h");
    for (std::size_t i = 0; i < mu_grid.size(); ++i)
        if (!(mu_grid[i] > -1.0))
            throw invalid_argument("sweep.mu[" + std::to_string(i) + "]: must be > -1");
    if (mu_grid.empty() && (grid_n < 1 || !(grid_lo > 0.0) || !(grid_hi >= grid_lo)))
        throw invalid_argument("sweep: need n >= 1 and 0 < lo <= hi");
    if (S && *S < 0)
        throw invalid_argument("series.S: must be >= 0");
    if (!(calib_mu0 > -1.0 && calib_mu0 <= 0.0))
        throw invalid_argument("series.mu0: must lie in (-1, 0]");
    if (!(calib_tol > 0.0))
        throw invalid_argument("series.tol: must be positive");
    if (S_max < 0)
        throw invalid_argument("series.S_max: must be >= 0");
    if (moments_K < 0)
        throw invalid_argument("moments.K: must be >= 0");
    for (std::size_t i = 0; i < kinds.size(); ++i)
        if (kinds[i] != "f" && kinds[i] != "h" && kinds[i] != "omega" && kinds[i] != "z")
            throw invalid_argument("stability.kinds[" + std::to_string(i) + "]: unknown kind '" + kinds[i] + "'");
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (!(deltas[i] >= 0.0))
            throw invalid_argument("stability.deltas[" + std::to_string(i) + "]: must be >= 0");
    if (!(rho > 1.0))
        throw invalid_argument("carleman.rho: must be > 1");
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (!(alphas[i] > 0.0))
            throw invalid_argument("carleman.alphas[" + std::to_string(i) + "]: must be > 0");
    if (!(r_max > 0.0 && r_max < 1.0))
        throw invalid_argument("carleman.r_max: must lie in (0, 1)");
    for (std::size_t i = 0; i < eval_points.size(); ++i)
        if (!(std::abs(eval_points[i]) <= r_max))
            throw invalid_argument("carleman.points[" + std::to_string(i) + "]: |z| must not exceed r_max");
    if (exact) {
        detail::check_fn(*exact, "carleman.exact");
        if (exact->type != "polynomial")
            throw invalid_argument("carleman.exact.type: must be 'polynomial' (evaluated inside the disk)");
    }
}

/// Problem instance described by the config; M is left at 0 when M_relative is used.
inline ProblemSpec RunConfig::problem() const {
    validate();
    ProblemSpec s;
    s.f = f.build(quad_points);
    s.h = h.build(quad_points);
    s.data.points = points;
    s.data.values = values;
    s.theta0 = theta0;
    s.M = M.value_or(0.0);
    s.Q = Q;
    s.quad_points = quad_points;
    s.phase = phase;
    s.interpolant = interpolant == "kernel" ? InterpolantKind::kernel : InterpolantKind::lagrange;
    return s;
}

inline nlohmann::json to_json(const RunConfig& c) {
    using detail::complex_list;
    nlohmann::json p{{"theta0", c.theta0},
                     {"f", detail::fn_to_json(c.f)},
                     {"h", detail::fn_to_json(c.h)},
                     {"points", complex_list(c.points)},
                     {"values", complex_list(c.values)},
                     {"Q", c.Q},
                     {"quad_points", c.quad_points},
                     {"phase", c.phase},
                     {"interpolant", c.interpolant}};
    if (c.M)
        p["M"] = *c.M;
    if (c.M_relative)
        p["M_relative"] = *c.M_relative;
    nlohmann::json sweep{{"lo", c.grid_lo}, {"hi", c.grid_hi}, {"n", c.grid_n}};
    if (!c.mu_grid.empty())
        sweep["mu"] = c.mu_grid;
    nlohmann::json series{{"mu0", c.calib_mu0}, {"tol", c.calib_tol}, {"S_max", c.S_max}};
    if (c.S)
        series["S"] = *c.S;
    nlohmann::json carl{{"rho", c.rho},
                        {"alphas", c.alphas},
                        {"points", complex_list(c.eval_points)},
                        {"r_max", c.r_max}};
    if (c.exact)
        carl["exact"] = detail::fn_to_json(*c.exact);
    return {{"problem", p},
            {"sweep", sweep},
            {"series", series},
            {"moments", {{"K", c.moments_K}}},
            {"stability", {{"kinds", c.kinds}, {"deltas", c.deltas}}},
            {"carleman", carl},
            {"seed", c.seed}};
}

inline RunConfig from_json(const nlohmann::json& j) {
    using detail::read;
    if (!j.is_object())
        throw invalid_argument("config: top level must be an object");
    RunConfig c;
    if (j.contains("problem")) {
        const auto& p = j.at("problem");
        read(p, "theta0", c.theta0, "problem");
        if (p.contains("f"))
            c.f = detail::fn_from_json(p.at("f"), "problem.f");
        if (p.contains("h"))
            c.h = detail::fn_from_json(p.at("h"), "problem.h");
        if (p.contains("points"))
            c.points = detail::read_complex_list(p.at("points"), "problem.points");
        if (p.contains("values"))
            c.values = detail::read_complex_list(p.at("values"), "problem.values");
        else if (p.contains("points"))
            throw invalid_argument("problem.values: required when problem.points is given");
        double m = 0.0;
        if (p.contains("M")) {
            read(p, "M", m, "problem");
            c.M = m;
        }
        if (p.contains("M_relative")) {
            read(p, "M_relative", m, "problem");
            c.M_relative = m;
        }
        read(p, "Q", c.Q, "problem");
        read(p, "quad_points", c.quad_points, "problem");
        read(p, "phase", c.phase, "problem");
        read(p, "interpolant", c.interpolant, "problem");
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        read(s, "mu", c.mu_grid, "sweep");
        read(s, "lo", c.grid_lo, "sweep");
        read(s, "hi", c.grid_hi, "sweep");
        read(s, "n", c.grid_n, "sweep");
    }
    if (j.contains("series")) {
        const auto& s = j.at("series");
        if (s.contains("S")) {
            int S = 0;
            read(s, "S", S, "series");
            c.S = S;
        }
        read(s, "mu0", c.calib_mu0, "series");
        read(s, "tol", c.calib_tol, "series");
        read(s, "S_max", c.S_max, "series");
    }
    if (j.contains("moments"))
        read(j.at("moments"), "K", c.moments_K, "moments");
    if (j.contains("stability")) {
        read(j.at("stability"), "kinds", c.kinds, "stability");
        read(j.at("stability"), "deltas", c.deltas, "stability");
    }
    if (j.contains("carleman")) {
        const auto& s = j.at("carleman");
        read(s, "rho", c.rho, "carleman");
        read(s, "alphas", c.alphas, "carleman");
        read(s, "r_max", c.r_max, "carleman");
        if (s.contains("points"))
            c.eval_points = detail::read_complex_list(s.at("points"), "carleman.points");
        if (s.contains("exact"))
            c.exact = detail::fn_from_json(s.at("exact"), "carleman.exact");
    }
    read(j, "seed", c.seed, "config");
    c.validate();
    return c;
}

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_argument(std::string("config: parse error: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument(std::string("config: ") + e.what());
    }
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace hardy
