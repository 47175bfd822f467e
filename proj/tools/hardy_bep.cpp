// Command line front end: solve, sweep, calibrate, stability, moments, carleman.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include <hardy/config.hpp>

namespace {

using namespace hardy;

struct Options {
    std::string config;
    std::string output;
    int Q = 0;
    bool no_comments = false;
    bool calibrate = false;
};

class Output {
public:
    explicit Output(const Options& o) : comments_(!o.no_comments) {
        if (!o.output.empty()) {
            file_ = std::make_unique<std::ofstream>(o.output);
            if (!*file_)
                throw invalid_argument("output: cannot open '" + o.output + "'");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }
    void comment(const std::string& line) {
        if (comments_)
            os() << "# " << line << '\n';
    }

private:
    std::unique_ptr<std::ofstream> file_;
    bool comments_;
};

RunConfig load(const Options& o) {
    RunConfig cfg = load_config(o.config);
    if (o.Q > 0) {
        cfg.Q = o.Q;
        cfg.quad_points = std::max(cfg.quad_points, 4 * o.Q);
        cfg.validate();
    }
    return cfg;
}

double constraint_level(const RunConfig& cfg, const Problem& P) {
    if (cfg.M)
        return *cfg.M;
    if (cfg.M_relative)
        return *cfg.M_relative * P.solve(0.0).M0;
    throw invalid_argument("problem.M: required (give M or M_relative)");
}

void describe(Output& out, const RunConfig& cfg) {
    out.comment("theta0=" + fmt(cfg.theta0) + " Q=" + std::to_string(cfg.Q) +
                " quad_points=" + std::to_string(cfg.quad_points) + " N=" + std::to_string(cfg.points.size()) +
                " f=" + cfg.f.type + (cfg.f.type == "benchmark_f" ? "(eps=" + fmt(cfg.f.eps) + ")" : "") +
                " h=" + cfg.h.type + " interpolant=" + cfg.interpolant);
}

int cmd_solve(const Options& o) {
    const RunConfig cfg = load(o);
    const Problem P(cfg.problem());
    const double M = constraint_level(cfg, P);
    const SolveResult r = tune_mu(P, M);
    std::cerr << "mu*        " << fmt(r.mu) << '\n'
              << "M          " << fmt(M) << '\n'
              << "M0         " << fmt(r.M0) << '\n'
              << "|M0-M|/M   " << fmt(std::abs(r.M0 - M) / M) << '\n'
              << "e          " << fmt(r.e) << '\n'
              << "e/||f||_I  " << fmt(r.e / P.norm_f_I()) << '\n';
    nlohmann::json g = nlohmann::json::array();
    for (int k = 0; k < r.g.size(); ++k)
        g.push_back(format_complex(r.g[k]));
    nlohmann::json rec{{"mu", r.mu},        {"M", M},       {"M0", r.M0},
                       {"e", r.e},          {"Q", cfg.Q},   {"relative_saturation", std::abs(r.M0 - M) / M},
                       {"g", g}};
    Output out(o);
    out.os() << rec.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const Options& o) {
    const RunConfig cfg = load(o);
    const Problem P(cfg.problem());
    std::optional<MomentTable> table;
    int S = 0;
    if (o.calibrate) {
        Calibration c = calibrate(P, cfg.calib_mu0, cfg.calib_tol, cfg.S_max);
        S = c.S;
        table = std::move(c.table);
    } else if (cfg.S) {
        S = *cfg.S;
        table = moment_table(P, S);
    }
    const auto rows = mu_sweep(P, cfg.grid());
    Output out(o);
    describe(out, cfg);
    out.comment("e = ||psi + b g - f||^2 on I; M0sq = ||psi + b g - h||^2 on J");
    out.comment("e_rel = e / ||f||_I with ||f||_I = " + fmt(P.norm_f_I()) +
                "; M0sq_rel = M0sq / ||h||_J with ||h||_J = " + fmt(P.norm_h_J()));
    if (table)
        out.comment("series columns: highest power of mu S = " + std::to_string(S) + ", empty for |mu| >= 1");
    auto& os = out.os();
    os << "mu,e,e_rel,M0sq,M0sq_rel";
    if (table)
        os << ",e_series,M0sq_series";
    os << ",status\n";
    for (const auto& r : rows) {
        os << fmt(r.mu) << ',' << fmt(r.e) << ',' << fmt(r.e / P.norm_f_I()) << ',' << fmt(r.M0sq) << ','
           << fmt(r.M0sq / P.norm_h_J());
        if (table) {
            if (std::abs(r.mu) < 1.0)
                os << ',' << fmt(e_series(*table, r.mu, S)) << ',' << fmt(m0_series(*table, r.mu, S));
            else
                os << ",,";
        }
        os << ',' << (r.ok() ? std::string("ok") : "error: " + r.error) << '\n';
    }
    return 0;
}

int cmd_calibrate(const Options& o) {
    const RunConfig cfg = load(o);
    const Problem P(cfg.problem());
    Calibration c;
    try {
        c = calibrate(P, cfg.calib_mu0, cfg.calib_tol, cfg.S_max);
    } catch (const calibration_failure& e) {
        std::cerr << "calibration failed: best S = " << e.best_order()
                  << ", best relative error = " << fmt(e.best_relative_error()) << '\n';
        throw;
    }
    std::cerr << "S = " << c.S << ", relative error " << fmt(c.relative_error) << " at mu0 = " << fmt(cfg.calib_mu0)
              << '\n';
    Output out(o);
    describe(out, cfg);
    out.comment("mu0=" + fmt(cfg.calib_mu0) + " tol=" + fmt(cfg.calib_tol) + " S=" + std::to_string(c.S) +
                " relative_error=" + fmt(c.relative_error) + " e_direct=" + fmt(c.e_direct));
    out.os() << "k,F\n";
    for (std::size_t k = 0; k < c.table.F.size(); ++k)
        out.os() << k << ',' << fmt(c.table.F[k]) << '\n';
    return 0;
}

int cmd_stability(const Options& o) {
    const RunConfig cfg = load(o);
    ProblemSpec spec = cfg.problem();
    spec.M = constraint_level(cfg, Problem(spec));
    Output out(o);
    describe(out, cfg);
    out.comment("M=" + fmt(spec.M) + " seed=" + std::to_string(cfg.seed) +
                "; measured = ||delta(psi + b g)||_H2 on a 256-point grid");
    auto& os = out.os();
    os << "kind,delta,measured,bound,ratio,valid,mu,m0,m1,xi_norm,K,C1,C2,xi_lower_bound,note\n";
    PerturbationOptions po;
    po.seed = cfg.seed;
    for (const auto& k : cfg.kinds) {
        const auto rows = perturbation_experiment(spec, parse_perturbation_kind(k), cfg.deltas, po);
        for (const auto& r : rows) {
            const auto& c = r.constants;
            os << to_string(r.kind) << ',' << fmt(r.delta_magnitude) << ',' << fmt(r.measured_deviation) << ','
               << fmt(r.bound) << ',' << fmt(r.ratio) << ',' << (r.valid ? "true" : "false") << ',' << fmt(r.mu)
               << ',' << fmt(c.m0) << ',' << fmt(c.m1) << ',' << fmt(c.xi_norm) << ',' << fmt(c.K) << ','
               << fmt(c.C1) << ',' << fmt(c.C2) << ',' << (c.xi_lower_bound ? fmt(*c.xi_lower_bound) : "") << ",\"";
            for (char ch : r.note)
                os << (ch == '"' ? '\'' : ch);
            os << "\"\n";
        }
    }
    return 0;
}

int cmd_moments(const Options& o) {
    const RunConfig cfg = load(o);
    const Problem P(cfg.problem());
    const MomentTable t = moment_table(P, cfg.moments_K);
    Output out(o);
    describe(out, cfg);
    out.comment("F(k) = <A^k xi0, xi0>; ||xi0||^2 = " + fmt(t.xi0.squaredNorm()));
    out.os() << "k,F,kF\n";
    for (std::size_t k = 0; k < t.F.size(); ++k)
        out.os() << k << ',' << fmt(t.F[k]) << ',' << fmt(static_cast<double>(k) * t.F[k]) << '\n';
    return 0;
}

int cmd_carleman(const Options& o) {
    const RunConfig cfg = load(o);
    const BoundaryFn f = cfg.f.build(cfg.quad_points);
    std::optional<FourierPoly> exact_poly;
    if (cfg.exact)
        exact_poly = FourierPoly(Eigen::Map<const VectorC>(cfg.exact->coeffs.data(),
                                                          static_cast<Eigen::Index>(cfg.exact->coeffs.size())));
    const Arc arc(cfg.theta0);
    CarlemanOptions co;
    co.r_max = cfg.r_max;
    Output out(o);
    out.comment("theta0=" + fmt(cfg.theta0) + " rho=" + fmt(cfg.rho) + " f=" + cfg.f.type +
                (exact_poly ? "; exact = polynomial from carleman.exact" : "; no exact reference"));
    out.os() << "z_re,z_im,alpha,value_re,value_im,exact_re,exact_im,abs_error\n";
    for (const cplx& z : cfg.eval_points)
        for (double a : cfg.alphas) {
            const cplx v = carleman_extrapolate(f, arc, cfg.rho, a, z, co);
            out.os() << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(a) << ',' << fmt(v.real()) << ','
                     << fmt(v.imag());
            if (exact_poly) {
                const cplx ex = (*exact_poly)(z);
                out.os() << ',' << fmt(ex.real()) << ',' << fmt(ex.imag()) << ',' << fmt(std::abs(v - ex)) << '\n';
            } else {
                out.os() << ",,,\n";
            }
        }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded extremal problems in the Hardy space H2 of the disk"};
    app.require_subcommand(1);
    Options opt;
    int (*handler)(const Options&) = nullptr;

    auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--output", opt.output, "output file (default: stdout)");
        sub->add_option("--Q", opt.Q, "override the truncation order");
        sub->add_flag("--no-comments", opt.no_comments, "omit the '#' comment block");
        sub->callback([&handler, fn] { handler = fn; });
        return sub;
    };
    add("solve", "tune mu so that the constraint on J is saturated", cmd_solve);
    auto* sweep = add("sweep", "e and M0^2 over a grid of mu", cmd_sweep);
    sweep->add_flag("--calibrate", opt.calibrate, "add series columns with a calibrated order");
    add("calibrate", "choose the series order at mu0", cmd_calibrate);
    add("stability", "perturbation experiments against the first-order bounds", cmd_stability);
    add("moments", "moments F(k) = <A^k xi0, xi0>", cmd_moments);
    add("carleman", "Carleman extrapolation of f from I to interior points", cmd_carleman);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return handler(opt);
    } catch (const hardy::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hardy::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
