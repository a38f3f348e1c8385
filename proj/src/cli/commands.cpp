#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/config.hpp"
#include "cli/families.hpp"
#include "cli/output.hpp"
#include "exactflow/streamtrace.hpp"
#include "exactflow/verify.hpp"

namespace exactflow::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string seeds_path;
    unsigned threads = 0;
    bool literal_e5 = false;
};

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

// Runs f(i) for i in [0, n) across workers. Results must be written by index.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    const unsigned workers = worker_count(threads, n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) f(i);
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

void emit_error(std::ostream& err, const std::string& type, const std::string& message) {
    json doc;
    doc["error"] = {{"type", type}, {"message", message}};
    err << doc.dump() << '\n';
}

class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return path_.empty() ? fallback_ : file_; }

private:
    std::string path_;
    std::ostream& fallback_;
    std::ofstream file_;
};

std::vector<std::string> sample_header(const RunConfig& cfg) {
    if (cfg.is_axisym()) return {"z", "r", "u", "v", "rho", "p"};
    return {"x", "y", "z", "u", "v", "w", "rho", "p"};
}

std::vector<double> sample_row(const RunConfig& cfg, const Point3& p, const FlowState& s) {
    if (cfg.is_axisym()) return {p.x, p.y, s.u(), s.v(), s.rho(), s.p()};
    return {p.x, p.y, p.z, s.u(), s.v(), s.w(), s.rho(), s.p()};
}

int cmd_sample(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load_config(opt.config_path);
    if (opt.format != "csv" && opt.format != "vtk" && opt.format != "json")
        throw ConfigError("unknown format '" + opt.format + "'");
    const Family fam = build_family(cfg, opt.literal_e5);
    const std::size_t n = cfg.grid.size();
    std::vector<std::optional<FlowState>> states(n);
    std::vector<std::string> errors(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        try {
            states[i] = fam.field(grid_point(cfg, i));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!states[i]) {
            const Point3 p = grid_point(cfg, i);
            std::ostringstream msg;
            msg << "field undefined at grid point (" << format_number(p.x) << ", " << format_number(p.y)
                << (cfg.is_axisym() ? "" : ", " + format_number(p.z)) << "): " << errors[i];
            throw ConfigError(msg.str());
        }
    }
    OutputTarget target(opt.out_path, out);
    if (opt.format == "vtk") {
        std::vector<FlowState> flat;
        flat.reserve(n);
        for (auto& s : states) flat.push_back(*s);
        write_vtk(target.stream(), cfg, flat);
    } else {
        std::vector<std::vector<double>> rows;
        rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i) rows.push_back(sample_row(cfg, grid_point(cfg, i), *states[i]));
        if (opt.format == "csv")
            write_csv(target.stream(), sample_header(cfg), rows);
        else
            write_json_rows(target.stream(), sample_header(cfg), rows);
    }
    if (!opt.out_path.empty()) write_meta(opt.out_path, "sample", opt.format, cfg.raw, n);
    return kExitPass;
}

std::vector<std::size_t> spread(std::size_t total, std::size_t count) {
    std::vector<std::size_t> out;
    if (total == 0 || count == 0) return out;
    if (count >= total) {
        for (std::size_t i = 0; i < total; ++i) out.push_back(i);
        return out;
    }
    for (std::size_t k = 0; k < count; ++k) out.push_back(count == 1 ? total / 2 : k * (total - 1) / (count - 1));
    return out;
}

json point_json(const RunConfig& cfg, const Point3& p) {
    if (cfg.is_axisym()) return json::array({p.x, p.y});
    return json::array({p.x, p.y, p.z});
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json verify_residuals(const RunConfig& cfg, const Family& fam, unsigned threads, bool& passed) {
    const auto picks = spread(cfg.grid.size(), static_cast<std::size_t>(cfg.verify.max_points));
    const double h_min = *std::min_element(cfg.verify.spacings.begin(), cfg.verify.spacings.end());
    std::vector<json> points(picks.size());
    std::vector<char> ok(picks.size(), 0);
    parallel_for(picks.size(), threads, [&](std::size_t k) {
        const Point3 p = grid_point(cfg, picks[k]);
        json entry;
        entry["point"] = point_json(cfg, p);
        try {
            const ConvergenceResult conv =
                convergence_order([&](double h) { return fam.residual(p, h).magnitude; }, cfg.verify.spacings);
            const double normalized = fam.residual(p, h_min).normalized;
            entry["residuals"] = conv.residuals;
            entry["saturated"] = conv.saturated;
            entry["slope"] = conv.slope ? json(*conv.slope) : json(nullptr);
            entry["normalized"] = normalized;
            const bool slope_ok =
                conv.saturated || (*conv.slope >= cfg.verify.slope_lo && *conv.slope <= cfg.verify.slope_hi);
            ok[k] = slope_ok && normalized <= cfg.verify.normalized_tol;
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        entry["passed"] = static_cast<bool>(ok[k]);
        points[k] = std::move(entry);
    });
    json section;
    section["spacings"] = cfg.verify.spacings;
    section["slope_range"] = {cfg.verify.slope_lo, cfg.verify.slope_hi};
    section["normalized_tol"] = cfg.verify.normalized_tol;
    section["points"] = points;
    const bool all = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    section["passed"] = all;
    passed = passed && all;
    return section;
}

json verify_sonic(const RunConfig& cfg, const Family& fam, unsigned threads, bool& passed) {
    const std::size_t n = cfg.grid.size();
    std::vector<double> err(n, 0.0);
    std::vector<char> bad(n, 0);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            const FlowState s = fam.field(grid_point(cfg, i));
            const double c2 = sound_speed_squared(*fam.law, s);
            err[i] = std::fabs(s.speed_squared() - c2) / c2;
        } catch (const std::exception&) {
            bad[i] = 1;
        }
    });
    const double worst = *std::max_element(err.begin(), err.end());
    const bool any_bad = std::any_of(bad.begin(), bad.end(), [](char c) { return c != 0; });
    const bool ok = !any_bad && worst <= cfg.verify.sonic_tol;
    passed = passed && ok;
    return {{"max_relative_error", worst}, {"tolerance", cfg.verify.sonic_tol}, {"failed_points", any_bad}, {"passed", ok}};
}

json verify_integrals(const RunConfig& cfg, const Family& fam, bool& passed) {
    json section;
    bool ok = true;
    try {
        const IntegralCheck check = fam.integrals(cfg.verify);
        json drift = json::object();
        for (const auto& [label, value] : check.drift) {
            drift[label] = nullable(value);
            ok = ok && value <= cfg.verify.integral_tol;
        }
        section["drift"] = drift;
        section["span"] = check.span;
        section["steps"] = check.steps;
        section["termination"] = check.termination;
        ok = ok && check.termination == "reached_end";
        if (check.closed_form_error) {
            section["closed_form_error"] = nullable(*check.closed_form_error);
            ok = ok && *check.closed_form_error <= cfg.verify.integral_tol;
        }
    } catch (const std::exception& e) {
        section["error"] = e.what();
        ok = false;
    }
    section["tolerance"] = cfg.verify.integral_tol;
    section["passed"] = ok;
    passed = passed && ok;
    return section;
}

json verify_streamlines(const RunConfig& cfg, const Family& fam, unsigned threads, bool& passed) {
    const auto picks = spread(std::min<std::size_t>(cfg.grid.size(), static_cast<std::size_t>(cfg.verify.max_points)),
                              static_cast<std::size_t>(cfg.verify.streamline_seeds));
    const auto subset = spread(cfg.grid.size(), static_cast<std::size_t>(cfg.verify.max_points));
    std::vector<json> curves(picks.size());
    std::vector<char> ok(picks.size(), 0);
    TraceOptions topt;
    topt.arclength = cfg.trace.arclength;
    topt.policy = StepPolicy::fixed(cfg.trace.step);
    parallel_for(picks.size(), threads, [&](std::size_t k) {
        const Point3 seed = grid_point(cfg, subset[picks[k]]);
        json entry;
        entry["seed"] = point_json(cfg, seed);
        try {
            const StreamCurve curve = fam.axisym
                ? trace_axisym([&](double z, double r) { return fam.field({z, r, 0.0}); }, seed.x, seed.y,
                               {cfg.trace.t0, cfg.trace.t1}, topt)
                : trace(fam.field, seed, {cfg.trace.t0, cfg.trace.t1}, topt);
            std::vector<FlowState> states;
            for (const Point3& p : curve.points) states.push_back(fam.field(p));
            const InvariantDrift d = invariants_along_curve(states, fam.gamma);
            entry["samples"] = curve.points.size();
            entry["termination"] = std::string(to_string(curve.reason));
            entry["entropy_drift"] = nullable(d.entropy);
            entry["bernoulli_drift"] = nullable(d.bernoulli);
            ok[k] = curve.points.size() >= 3 && d.max() <= cfg.verify.invariant_tol;
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        entry["passed"] = static_cast<bool>(ok[k]);
        curves[k] = std::move(entry);
    });
    const bool all = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    passed = passed && all;
    return {{"curves", curves}, {"tolerance", cfg.verify.invariant_tol}, {"passed", all}};
}

int cmd_verify(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load_config(opt.config_path);
    if (opt.format != "json" && opt.format != "csv") throw ConfigError("verify reports are JSON");
    const Family fam = build_family(cfg, opt.literal_e5);
    bool passed = true;
    json report;
    report["family"] = cfg.family;
    report["config_hash"] = "fnv1a64:" + config_hash(cfg.raw);
    report["literal_e5"] = opt.literal_e5;
    report["residual"] = verify_residuals(cfg, fam, opt.threads, passed);
    if (fam.chaplygin) report["sonic"] = verify_sonic(cfg, fam, opt.threads, passed);
    if (fam.integrals) report["first_integrals"] = verify_integrals(cfg, fam, passed);
    if (!fam.chaplygin) report["streamlines"] = verify_streamlines(cfg, fam, opt.threads, passed);
    report["passed"] = passed;
    OutputTarget target(opt.out_path, out);
    target.stream() << report.dump(2) << '\n';
    if (!opt.out_path.empty()) write_meta(opt.out_path, "verify", "json", cfg.raw, 1);
    return passed ? kExitPass : kExitVerifyFail;
}

std::vector<std::array<double, 3>> read_seeds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open seeds file '" + path + "'");
    std::vector<std::array<double, 3>> seeds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::array<double, 3> p{0.0, 0.0, 0.0};
        int count = 0;
        double v;
        while (count < 3 && ss >> v) p[count++] = v;
        if (count == 0) continue;  // header
        if (count < 2) throw ConfigError("seeds file: each line needs at least two coordinates");
        seeds.push_back(p);
    }
    return seeds;
}

int cmd_trace(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load_config(opt.config_path);
    if (opt.format != "csv" && opt.format != "json") throw ConfigError("trace output is csv or json");
    const Family fam = build_family(cfg, opt.literal_e5);
    const auto seeds = opt.seeds_path.empty() ? cfg.trace.seeds : read_seeds(opt.seeds_path);
    if (seeds.empty()) throw ConfigError("no seeds: pass --seeds or set trace.seeds");

    TraceOptions topt;
    topt.arclength = cfg.trace.arclength;
    topt.policy = StepPolicy::fixed(cfg.trace.step);
    std::vector<StreamCurve> curves(seeds.size());
    parallel_for(seeds.size(), opt.threads, [&](std::size_t k) {
        const Point3 seed{seeds[k][0], seeds[k][1], seeds[k][2]};
        try {
            curves[k] = fam.axisym ? trace_axisym([&](double z, double r) { return fam.field({z, r, 0.0}); }, seed.x,
                                                  seed.y, {cfg.trace.t0, cfg.trace.t1}, topt)
                                   : trace(fam.field, seed, {cfg.trace.t0, cfg.trace.t1}, topt);
        } catch (const SingularityError& e) {
            curves[k] = {{cfg.trace.t0}, {seed}, TraceEnd::stagnation, e.what()};
        } catch (const std::exception& e) {
            curves[k] = {{cfg.trace.t0}, {seed}, TraceEnd::domain_exit, e.what()};
        }
    });

    OutputTarget target(opt.out_path, out);
    std::ostream& os = target.stream();
    std::size_t records = 0;
    if (opt.format == "csv") {
        os << (fam.axisym ? "curve,parameter,z,r,status\n" : "curve,parameter,x,y,z,status\n");
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const StreamCurve& c = curves[k];
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                os << k << ',' << format_number(c.parameter[i]) << ',' << format_number(c.points[i].x) << ','
                   << format_number(c.points[i].y);
                if (!fam.axisym) os << ',' << format_number(c.points[i].z);
                os << ',' << to_string(c.reason) << '\n';
                ++records;
            }
        }
    } else {
        json doc = json::array();
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const StreamCurve& c = curves[k];
            json pts = json::array();
            for (const Point3& p : c.points) pts.push_back(fam.axisym ? json::array({p.x, p.y}) : json::array({p.x, p.y, p.z}));
            doc.push_back({{"curve", k}, {"status", std::string(to_string(c.reason))}, {"detail", c.detail},
                           {"parameter", c.parameter}, {"points", pts}});
            records += c.points.size();
        }
        os << doc.dump(2) << '\n';
    }
    if (!opt.out_path.empty()) write_meta(opt.out_path, "trace", opt.format, cfg.raw, records);
    return kExitPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact stationary gas-dynamics solutions: sampling, verification and streamline tracing"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub, const std::string& default_format) {
        sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
        sub->add_option("--out", opt.out_path, "output path (stdout when omitted)");
        sub->add_option("--format", opt.format, "csv, vtk or json")->default_val(default_format);
        sub->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        sub->add_flag("--debug-literal-e5", opt.literal_e5, "use the uncorrected energy equation (regression only)");
    };
    CLI::App* sample = app.add_subcommand("sample", "sample the physical field on the grid");
    CLI::App* verify = app.add_subcommand("verify", "run residual, integral and invariant checks");
    CLI::App* tracecmd = app.add_subcommand("trace", "trace streamlines from seed points");
    add_common(sample, "csv");
    add_common(verify, "json");
    add_common(tracecmd, "csv");
    tracecmd->add_option("--seeds", opt.seeds_path, "file with one seed point per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "UsageError", e.what());
        return kExitUsage;
    }

    try {
        if (*sample) return cmd_sample(opt, out);
        if (*verify) return cmd_verify(opt, out);
        return cmd_trace(opt, out);
    } catch (const ConfigError& e) {
        emit_error(err, "ConfigError", e.what());
    } catch (const Error& e) {
        emit_error(err, "InvalidParameters", e.what());
    } catch (const json::exception& e) {
        emit_error(err, "ConfigError", e.what());
    } catch (const std::exception& e) {
        emit_error(err, "Error", e.what());
    }
    return kExitUsage;
}

}  // namespace exactflow::cli
