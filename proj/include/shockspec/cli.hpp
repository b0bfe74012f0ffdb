#pragma once

// Drivers behind the command-line tool: analyze a model file, scan a
// scenario family over its parameter, run the smoothing oracle on a
// crossing, and emit scenario/model fixtures. Pure functions of the config;
// identical configs produce byte-identical outputs.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "shockspec/errors.hpp"
#include "shockspec/model_io.hpp"
#include "shockspec/oracle.hpp"
#include "shockspec/rootfind.hpp"
#include "shockspec/scenarios.hpp"
#include "shockspec/spectral.hpp"
#include "shockspec/version.hpp"

namespace shockspec {

struct RunConfig {
    std::string command;  // analyze | scan | oracle-check | scenario
    std::string model_path;
    std::string scenario;      // scan/scenario: builtin name or file path
    std::string out_path;
    std::string model_out;     // scenario: optional instance model file
    double delta = 1e-4;
    std::optional<double> radius;
    std::string var = "s";     // scan variable: s | eps
    std::string grid;          // start:stop:steps[:log]
    int crossing = 0;          // oracle-check
    std::vector<double> mu_grid = {1e-2, 1e-3, 1e-4};
    std::uint64_t seed = 0;    // stirred into the report hash only
};

namespace cli {

// Output paths are not part of the hash: it identifies the analysis, not
// where the report lands.
inline std::string canonical_config(const RunConfig& c) {
    std::ostringstream o;
    o << c.command << '|' << c.model_path << '|' << c.scenario << '|'
      << io::format_number(c.delta) << '|'
      << (c.radius ? io::format_number(*c.radius) : std::string("auto")) << '|' << c.var << '|'
      << c.grid << '|' << c.crossing << '|';
    for (double mu : c.mu_grid) o << io::format_number(mu) << ',';
    o << '|' << c.seed;
    return o.str();
}

inline std::string config_hash(const RunConfig& c) {
    const std::string s = canonical_config(c);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

inline int max_threads() {
    if (const char* env = std::getenv("SHOCKSPEC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

/// Index-parallel loop with deterministic result placement.
template <class F>
inline void parallel_for(int n, F&& body) {
    const int nt = std::min(max_threads(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : spec) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else cur.push_back(ch);
    }
    parts.push_back(cur);
    if (parts.size() != 3 && parts.size() != 4)
        throw FormatError("grid: expected start:stop:steps[:log]");
    auto num = [&](const std::string& s, const char* what) {
        double v = 0;
        const char* b = s.data();
        auto [p, ec] = std::from_chars(b, b + s.size(), v);
        if (ec != std::errc() || p != b + s.size())
            throw FormatError(std::string("grid: bad ") + what + " '" + s + "'");
        return v;
    };
    const double start = num(parts[0], "start");
    const double stop = num(parts[1], "stop");
    const int steps = int(num(parts[2], "steps"));
    const bool log_spaced = parts.size() == 4 && parts[3] == "log";
    if (parts.size() == 4 && !log_spaced) throw FormatError("grid: trailing field must be 'log'");
    if (steps < 1) throw FormatError("grid: need at least one step");
    if (log_spaced && !(start > 0 && stop > 0))
        throw FormatError("grid: log spacing needs positive endpoints");
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i) {
        const double t = steps == 1 ? 0.0 : double(i) / (steps - 1);
        g[i] = log_spaced ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                          : start + t * (stop - start);
    }
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        if (g[i] == g[i + 1]) throw FormatError("grid: not strictly monotone");
    return g;
}

inline io::ScenarioFile builtin_scenario(const std::string& name) {
    io::ScenarioFile sc;
    if (name == "overcompressive") {
        sc.kind = "overcompressive";
    } else if (name == "overcompressive-unstable") {
        sc.kind = "overcompressive";
        sc.oc.u_plus = {20.0, 1.0};
        sc.oc.s = 21.0;
    } else if (name == "bifurcation") {
        sc.kind = "bifurcation";
        sc.bif.eps = 1e-3;
    } else if (name == "bifurcation-unstable") {
        sc.kind = "bifurcation";
        sc.bif.chi_state = -5.0;
        sc.bif.eps = 1e-3;
    } else {
        throw FormatError("unknown scenario '" + name + "'");
    }
    return sc;
}

inline io::ScenarioFile resolve_scenario(const std::string& name_or_path) {
    if (name_or_path.find('.') != std::string::npos || name_or_path.find('/') != std::string::npos)
        return io::parse_scenario(io::load_json_file(name_or_path));
    return builtin_scenario(name_or_path);
}

} // namespace cli

// ---------------------------------------------------------------------------
// analyze

/// Stability analysis of one model file. Returns the process exit code:
/// 0 stable, 2 unstable, 3 marginal (unrefined roots in the window).
inline int run_analyze(const RunConfig& config) {
    const io::ModelFile mf = io::load_model_file(config.model_path);
    const Heteroclinic het = build_heteroclinic(mf.model, mf.crossings);
    const bool two_region = mf.model.num_regions() == 2;

    AnalyticFn fn;
    if (two_region)
        fn = [&](cplx la) { return evans_det(mf.model, het, la); };
    else
        fn = [&](cplx la) { return theta_det(mf.model, het, la, true); };

    double radius;
    if (config.radius) radius = *config.radius;
    else if (two_region)
        radius = auto_radius(fn, evans_asymptotic_constant(mf.model, het), mf.model.dim());
    else radius = 1.0; // no large-radius asymptotics for the chain determinant

    const EigenvalueReport report = locate_eigenvalues(fn, HalfPlaneRegion{config.delta, radius});

    bool any_flagged = false;
    for (const auto& r : report.roots) any_flagged |= !r.converged;
    std::string verdict = "stable";
    int exit_code = 0;
    if (report.total_winding != 0) {
        verdict = any_flagged ? "marginal" : "unstable";
        exit_code = any_flagged ? 3 : 2;
    }

    io::json j;
    j["tool_version"] = version_string;
    j["config_hash"] = cli::config_hash(config);
    j["model"] = config.model_path;
    j["regions"] = mf.model.num_regions();
    j["compressivity_index"] = compressivity_index(mf.model, het);
    if (two_region) j["zero_multiplicity"] = zero_multiplicity(mf.model, het);
    else j["zero_multiplicity"] = nullptr;
    j["region"] = {{"delta", io::format_number(config.delta)},
                   {"radius", io::format_number(radius)}};
    j["total_winding"] = report.total_winding;
    j["strip_caveat"] = report.strip_caveat;
    j["roots"] = io::json::array();
    for (const auto& r : report.roots)
        j["roots"].push_back({{"re", io::format_number(r.lambda.real())},
                              {"im", io::format_number(r.lambda.imag())},
                              {"residual", io::format_number(r.residual)},
                              {"winding", r.winding},
                              {"converged", r.converged}});
    j["verdict"] = verdict;
    io::write_text_file(config.out_path, j.dump(2) + "\n");
    return exit_code;
}

// ---------------------------------------------------------------------------
// scan

namespace cli {

struct ScanRow {
    double param = 0;
    std::optional<cplx> leading;
    int d0_sign = 0;
    std::string flag;
};

struct ScanInstance {
    std::shared_ptr<const ShockInstance> shock;
    AnalyticFn fn;
    double radius = 0;
};

inline ScanInstance make_scan_instance(const io::ScenarioFile& sc, const std::string& var,
                                       double value, std::optional<double> radius_override) {
    ScanInstance out;
    if (sc.kind == "overcompressive") {
        if (var != "s") throw FormatError("scan: overcompressive scenarios scan over --var s");
        OvercompressiveParams p = sc.oc;
        p.s = value;
        auto inst = make_overcompressive(p);
        out.shock = std::make_shared<ShockInstance>(
            ShockInstance{std::move(inst.model), std::move(inst.het)});
        auto sp = out.shock;
        out.fn = [sp](cplx la) { return evans_det(sp->model, sp->het, la); };
        out.radius = radius_override
                         ? *radius_override
                         : auto_radius(out.fn,
                                       evans_asymptotic_constant(sp->model, sp->het),
                                       sp->model.dim());
    } else {
        if (var != "eps") throw FormatError("scan: bifurcation scenarios scan over --var eps");
        BifurcationParams p = sc.bif;
        p.eps = value;
        auto inst = make_bifurcation(p);
        if (!inst.connected)
            throw ModelGeometryError("scan: eps = 0 has no connected heteroclinic");
        out.shock = std::make_shared<ShockInstance>(std::move(*inst.connected));
        auto sp = out.shock;
        out.fn = [sp](cplx la) { return theta_det(sp->model, sp->het, la, true); };
        out.radius = radius_override ? *radius_override : 1.0;
    }
    return out;
}

} // namespace cli

/// Scan a scenario family over its parameter; one CSV row per grid point
/// plus a summary row per detected imaginary-axis crossing.
inline int run_scan(const RunConfig& config) {
    const io::ScenarioFile sc = cli::resolve_scenario(config.scenario);
    const std::vector<double> grid = cli::parse_grid(config.grid);

    std::vector<cli::ScanRow> rows(grid.size());
    cli::parallel_for(int(grid.size()), [&](int i) {
        cli::ScanRow& row = rows[std::size_t(i)];
        row.param = grid[std::size_t(i)];
        try {
            auto inst = cli::make_scan_instance(sc, config.var, row.param, config.radius);
            const cplx probe = (sc.kind == "overcompressive") ? cplx(0.0, 0.0) : cplx(1e-9, 0.0);
            const double d0 = inst.fn(probe).real();
            row.d0_sign = (d0 > 0) - (d0 < 0);
            auto rep = locate_eigenvalues(inst.fn, HalfPlaneRegion{config.delta, inst.radius});
            const LocatedRoot* lead = nullptr;
            for (const auto& r : rep.roots) {
                if (!r.converged) row.flag = "flagged";
                if (!lead || r.lambda.real() > lead->lambda.real()) lead = &r;
            }
            if (lead) row.leading = lead->lambda;
            else if (row.flag.empty()) row.flag = "no-root";
        } catch (const FormatError&) {
            throw;
        } catch (const Error&) {
            row.flag = "invalid";
        }
    });

    // crossing refinement between a rootless point and a rooted neighbor
    std::vector<BranchTrace::Crossing> crossings;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const bool left_root = rows[i].leading.has_value();
        const bool right_root = rows[i + 1].leading.has_value();
        if (left_root == right_root) continue;
        if (!rows[i].flag.empty() && rows[i].flag != "no-root") continue;
        if (!rows[i + 1].flag.empty() && rows[i + 1].flag != "no-root") continue;
        const std::size_t from = left_root ? i : i + 1;
        const std::size_t to = left_root ? i + 1 : i;
        ParamFamily family = [&](double v, cplx la) {
            auto inst = cli::make_scan_instance(sc, config.var, v, config.radius);
            return inst.fn(la);
        };
        TraceOptions opts;
        opts.throw_on_loss = false;
        auto trace = trace_branch(family, rows[from].param, rows[to].param, *rows[from].leading,
                                  opts);
        if (trace.lost && trace.crossings.empty()) {
            rows[from].flag = "trace-lost";
            continue;
        }
        for (const auto& c : trace.crossings) crossings.push_back(c);
    }

    std::ostringstream csv;
    csv << "# shockspec " << version_string << " config " << cli::config_hash(config) << "\n";
    csv << "param,re_lambda,im_lambda,lambda_over_param,d0_sign,flag\n";
    auto emit = [&](double param, std::optional<cplx> lam, int d0, const std::string& flag) {
        csv << io::format_number(param) << ',';
        if (lam) {
            csv << io::format_number(lam->real()) << ',' << io::format_number(lam->imag()) << ','
                << io::format_number(lam->real() / param);
        } else {
            csv << ",,";
        }
        csv << ',' << d0 << ',' << flag << "\n";
    };
    for (const auto& row : rows) emit(row.param, row.leading, row.d0_sign, row.flag);
    for (const auto& c : crossings) emit(c.s, c.lambda, 0, "crossing");
    io::write_text_file(config.out_path, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// oracle-check

/// Convergence report of the jump relation at one crossing of a model file.
/// Exit 0 when the fitted order is inside [0.8, 1.2] (or the jump is zero),
/// 3 otherwise.
inline int run_oracle_check(const RunConfig& config) {
    const io::ModelFile mf = io::load_model_file(config.model_path);
    const Heteroclinic het = build_heteroclinic(mf.model, mf.crossings);
    if (config.crossing < 0 || config.crossing >= mf.model.num_crossings())
        throw FormatError("oracle-check: crossing index out of range");

    const int n = mf.model.dim();
    const Vec fpre = het.field_before(config.crossing);
    CVec v0(n), z0(n, cplx(0));
    const double fnorm = norm2(fpre);
    for (int i = 0; i < n; ++i) v0[i] = fpre[i] / fnorm + 0.25 / std::sqrt(double(n));

    std::vector<double> mu = config.mu_grid;
    std::sort(mu.begin(), mu.end(), std::greater<double>());
    const ConvergenceFit fit =
        jump_convergence_fit(mf.model, het, cplx(0.3, 0.0), v0, z0, mu, config.crossing);

    const bool pass = fit.skipped || (fit.slope >= 0.8 && fit.slope <= 1.2);
    io::json j;
    j["tool_version"] = version_string;
    j["config_hash"] = cli::config_hash(config);
    j["model"] = config.model_path;
    j["crossing"] = config.crossing;
    j["mu"] = io::json::array();
    j["errors"] = io::json::array();
    j["normal_errors"] = io::json::array();
    for (std::size_t i = 0; i < fit.mu_grid.size(); ++i) {
        j["mu"].push_back(io::format_number(fit.mu_grid[i]));
        j["errors"].push_back(io::format_number(fit.errors[i]));
        j["normal_errors"].push_back(io::format_number(fit.normal_errors[i]));
    }
    if (fit.skipped) {
        j["slope"] = nullptr;
        j["note"] = "skipped: zero jump";
    } else {
        j["slope"] = io::format_number(fit.slope);
    }
    j["band"] = {io::format_number(0.8), io::format_number(1.2)};
    j["pass"] = pass;
    io::write_text_file(config.out_path, j.dump(2) + "\n");
    return pass ? 0 : 3;
}

// ---------------------------------------------------------------------------
// scenario fixtures

/// Write a scenario family file, and optionally the model file of its
/// concrete instance (for analyze / oracle-check).
inline int run_scenario(const RunConfig& config) {
    const io::ScenarioFile sc = cli::resolve_scenario(config.scenario);
    io::json j = io::scenario_to_json(sc);
    j["tool_version"] = version_string;
    io::write_text_file(config.out_path, j.dump(2) + "\n");

    if (!config.model_out.empty()) {
        if (sc.kind == "overcompressive") {
            auto inst = make_overcompressive(sc.oc);
            io::write_text_file(config.model_out,
                                io::model_to_json(inst.model, inst.het.crossings).dump(2) + "\n");
        } else {
            auto inst = make_bifurcation(sc.bif);
            if (!inst.connected)
                throw FormatError("scenario: eps = 0 splits into two sub-shocks; "
                                  "pick eps > 0 for a single model file");
            io::write_text_file(
                config.model_out,
                io::model_to_json(inst.connected->model, inst.connected->het.crossings).dump(2) +
                    "\n");
        }
    }
    return 0;
}

} // namespace shockspec
