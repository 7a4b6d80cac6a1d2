#include "freezing/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "freezing/dynamics.hpp"
#include "freezing/finfree.hpp"
#include "freezing/stats.hpp"
#include "freezing/stochastic.hpp"

#ifndef FREEZING_VERSION
#define FREEZING_VERSION "0.0.0"
#endif

namespace freezing {

namespace {

using json = nlohmann::json;

constexpr const char* kTool = "freezing-dyson";

std::string format_number(double v) {
    if (v == 0.0) {
        v = 0.0; // drops the sign of -0
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_row(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += format_number(values[i]);
    }
    return line;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

RootTuple read_tuple(const std::string& path, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidParameter("cannot read tuple file '" + path + "'");
    }
    std::string line;
    std::vector<double> values;
    bool found = false;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        if (found) {
            throw InvalidParameter("'" + path + "' holds more than one tuple row; give one comma-separated row");
        }
        found = true;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(field, &used));
                if (field.find_first_not_of(" \t\r", used) != std::string::npos) {
                    throw std::invalid_argument(field);
                }
            } catch (const std::exception&) {
                throw InvalidParameter("bad number '" + field + "' in '" + path + "'");
            }
        }
    }
    if (!found) {
        throw InvalidParameter("no tuple found in '" + path + "'");
    }
    if (!std::is_sorted(values.begin(), values.end())) {
        err << "warning: " << path << " is not in ascending order; re-sorted\n";
    }
    return RootTuple(std::move(values));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream fields(text);
    std::string field;
    while (std::getline(fields, field, ',')) {
        try {
            values.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw InvalidParameter("bad number '" + field + "' in list");
        }
    }
    return values;
}

// Flags given on the command line win over the --config file; every bound
// value is echoed into the output metadata.
class Binder {
public:
    explicit Binder(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* option(const std::string& flag, T& var, const std::string& key, const std::string& help) {
        CLI::Option* opt = app_->add_option(flag, var, help);
        bind(opt, var, key);
        return opt;
    }

    CLI::Option* flag(const std::string& flag, bool& var, const std::string& key, const std::string& help) {
        CLI::Option* opt = app_->add_flag(flag, var, help);
        bind(opt, var, key);
        return opt;
    }

    void apply(const json& file) const {
        for (const auto& f : fill_) {
            f(file);
        }
    }

    json resolved() const {
        json r = json::object();
        for (const auto& e : echo_) {
            e(r);
        }
        return r;
    }

private:
    template <class T>
    void bind(CLI::Option* opt, T& var, const std::string& key) {
        fill_.push_back([opt, &var, key](const json& file) {
            if (opt->count() == 0 && file.contains(key)) {
                var = file.at(key).get<T>();
            }
        });
        echo_.push_back([&var, key](json& r) { r[key] = var; });
    }

    CLI::App* app_;
    std::vector<std::function<void(const json&)>> fill_;
    std::vector<std::function<void(json&)>> echo_;
};

struct Params {
    std::string config;
    std::string out;
    std::string format = "csv";

    std::string family = "hermite";
    std::string kind = "gaussian";
    std::size_t n = 0;
    double alpha = 1.0;
    double beta = 1.0;
    double t = 1.0;
    double dt = 1e-3;
    std::size_t paths = 1000;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::string initial;
    std::string record;
    std::string summary;
    bool verify_ode = false;
    bool closed_form = false;
    double rel_tol = 0.05;
    std::size_t max_order = 10;
    std::string a_file;
    std::string b_file;
};

class Output {
public:
    Output(std::string command, const Params& p, json config)
        : command_(std::move(command)), format_(p.format), path_(p.out) {
        config["command"] = command_;
        config_ = std::move(config);
    }

    bool csv() const { return format_ == "csv"; }

    json metadata() const { return json{{"tool", kTool}, {"version", FREEZING_VERSION}, {"config", config_}}; }

    void header() {
        body_ << "# " << kTool << ' ' << FREEZING_VERSION << '\n';
        body_ << "# config: " << config_.dump() << '\n';
    }

    std::ostringstream& body() { return body_; }

    void write_json(json doc) {
        json full = json::object();
        full["metadata"] = metadata();
        for (auto& [k, v] : doc.items()) {
            full[k] = v;
        }
        body_ << full.dump(2) << '\n';
    }

    void flush(std::ostream& out) const {
        if (path_.empty()) {
            out << body_.str();
            return;
        }
        std::ofstream file(path_);
        if (!file) {
            throw InvalidParameter("cannot write '" + path_ + "'");
        }
        file << body_.str();
    }

private:
    std::string command_;
    std::string format_;
    std::string path_;
    json config_;
    std::ostringstream body_;
};

void emit_tuple(Output& o, const std::string& field, const RootTuple& r) {
    if (o.csv()) {
        o.header();
        o.body() << csv_row(r.values()) << '\n';
    } else {
        o.write_json(json{{field, r.vector()}});
    }
}

RootTuple initial_tuple(const Params& p, std::ostream& err) {
    if (!p.initial.empty()) {
        RootTuple r = read_tuple(p.initial, err);
        if (p.n != 0 && p.n != r.size()) {
            throw DimensionMismatch();
        }
        return r;
    }
    if (p.n == 0) {
        throw InvalidParameter("give --initial or --n (zero initial tuple)");
    }
    return RootTuple::zeros(p.n);
}

ProcessKind parse_kind(const std::string& kind) {
    return kind == "laguerre" ? ProcessKind::laguerre : ProcessKind::gaussian;
}

void cmd_zeros(const Params& p, Output& o) {
    const RootTuple r = p.family == "hermite" ? hermite_roots(p.n, p.t) : laguerre_roots(p.n, p.alpha, p.t);
    emit_tuple(o, "roots", r);
}

void cmd_convolve(const Params& p, Output& o, std::ostream& err) {
    const RootTuple a = read_tuple(p.a_file, err);
    const RootTuple b = read_tuple(p.b_file, err);
    if (a.size() != b.size()) {
        throw DimensionMismatch();
    }
    emit_tuple(o, "roots", boxplus(a, b));
}

// Returns the exit code: 3 if the route cross-check disagrees.
int cmd_limit(const Params& p, Output& o, std::ostream& err) {
    const RootTuple a = initial_tuple(p, err);
    const double nd = static_cast<double>(a.size());
    RootTuple result;
    std::optional<double> discrepancy;
    if (parse_kind(p.kind) == ProcessKind::gaussian) {
        result = gaussian_limit_closed(a, p.t);
        if (p.verify_ode) {
            discrepancy = result.max_distance(limit_roots(gaussian_gk(a), p.t));
        }
    } else {
        const bool closed_ok = p.alpha > nd - 0.5;
        if ((p.closed_form || p.verify_ode) && !closed_ok) {
            throw InvalidParameter("the closed-form Laguerre route needs alpha > N - 1/2 (N = " +
                                   format_number(nd) + ", alpha = " + format_number(p.alpha) + ")");
        }
        const RootTuple ode = limit_roots(laguerre_gk(a, p.alpha), p.t);
        if (p.closed_form || p.verify_ode) {
            const RootTuple closed = laguerre_limit_closed(a, p.alpha, p.t);
            result = p.closed_form ? closed : ode;
            if (p.verify_ode) {
                discrepancy = ode.max_distance(closed);
            }
        } else {
            result = ode;
        }
    }
    if (o.csv()) {
        o.header();
        if (discrepancy) {
            o.body() << "# max route discrepancy: " << format_number(*discrepancy) << '\n';
        }
        o.body() << csv_row(result.values()) << '\n';
    } else {
        json doc{{"roots", result.vector()}};
        if (discrepancy) {
            doc["max_route_discrepancy"] = *discrepancy;
        }
        o.write_json(doc);
    }
    if (discrepancy && !(*discrepancy < 1e-8)) {
        err << "error: routes disagree by " << format_number(*discrepancy) << '\n';
        return 3;
    }
    return 0;
}

json simulation_summary(const PathEnsemble& ens, const json& metadata) {
    json drift = json::array();
    bool pass = true;
    for (const auto& d : ek_drift_report(ens)) {
        drift.push_back({{"time", d.time},
                         {"k", d.k},
                         {"mean", d.mean},
                         {"stderr", d.stderr_},
                         {"target", d.target},
                         {"budget", d.budget},
                         {"pass", d.pass}});
        pass = pass && d.pass;
    }
    const MomentProcessEstimate mom = moment_process_estimate(ens, 4);
    json moments{{"times", mom.times}, {"s_hat", mom.s_hat}, {"stderr", mom.stderr_}};
    const auto& init = ens.config.initial;
    if (ens.kind == ProcessKind::gaussian && std::all_of(init.begin(), init.end(), [](double v) { return v == 0.0; })) {
        const MomentSequence u = moment_sequence(ens.n(), 4);
        json targets = json::array();
        for (double t : mom.times) {
            std::vector<double> row;
            for (std::size_t k = 0; k <= 4; ++k) {
                row.push_back(u.m(k, t));
            }
            targets.push_back(row);
        }
        moments["target"] = targets;
    }
    return json{{"metadata", metadata},
                {"gap_clamps", ens.gap_clamps},
                {"steps", ens.steps},
                {"ek_drift", drift},
                {"moments", moments},
                {"pass", pass}};
}

void cmd_simulate(Params p, Output& o, std::ostream& err) {
    const ProcessKind kind = parse_kind(p.kind);
    SimConfig cfg;
    cfg.initial = initial_tuple(p, err);
    cfg.n = cfg.initial.size();
    cfg.beta = p.beta;
    cfg.alpha = p.alpha;
    cfg.t_end = p.t;
    cfg.dt = p.dt;
    cfg.seed = p.seed;
    cfg.paths = p.paths;
    if (p.record.empty()) {
        for (int k = 1; k <= 5; ++k) {
            cfg.record_times.push_back(p.t * k / 5.0);
        }
    } else {
        cfg.record_times = parse_list(p.record);
    }
    const PathEnsemble ens = simulate(kind, cfg);
    const json summary = simulation_summary(ens, o.metadata());

    if (o.csv()) {
        o.header();
        o.body() << "# columns: path,time";
        for (std::size_t i = 1; i <= cfg.n; ++i) {
            o.body() << ",x" << i;
        }
        o.body() << '\n';
        for (std::size_t path = 0; path < ens.paths(); ++path) {
            for (std::size_t r = 0; r < ens.times(); ++r) {
                o.body() << path << ',' << format_number(cfg.record_times[r]) << ','
                         << csv_row(ens.at(path, r)) << '\n';
            }
        }
        std::string target = p.summary;
        if (target.empty() && !p.out.empty()) {
            target = p.out + ".summary.json";
        }
        if (target.empty()) {
            err << summary.dump(2) << '\n';
        } else {
            std::ofstream file(target);
            if (!file) {
                throw InvalidParameter("cannot write '" + target + "'");
            }
            file << summary.dump(2) << '\n';
        }
    } else {
        json paths = json::array();
        for (std::size_t path = 0; path < ens.paths(); ++path) {
            json rows = json::array();
            for (std::size_t r = 0; r < ens.times(); ++r) {
                const auto x = ens.at(path, r);
                rows.push_back(std::vector<double>(x.begin(), x.end()));
            }
            paths.push_back(rows);
        }
        json doc = summary;
        doc.erase("metadata");
        doc["record_times"] = cfg.record_times;
        doc["paths"] = paths;
        o.write_json(doc);
    }
}

void cmd_clt(const Params& p, Output& o) {
    const ProcessKind kind = parse_kind(p.kind);
    const CovarianceReport cov =
        kind == ProcessKind::gaussian ? clt_covariance_gaussian(p.beta, p.n, p.samples, p.seed, p.rel_tol)
                                      : clt_covariance_laguerre(p.beta, p.n, p.alpha, p.samples, p.seed, p.rel_tol);
    const PrimitiveReport prim = primitive_clt_check(kind, p.beta, p.n, p.alpha, p.samples, p.seed + 1, p.rel_tol);
    if (o.csv()) {
        o.header();
        o.body() << "# rotated covariance\n";
        for (Eigen::Index r = 0; r < cov.rotated.rows(); ++r) {
            const Eigen::VectorXd row = cov.rotated.row(r);
            o.body() << csv_row(std::span<const double>(row.data(), static_cast<std::size_t>(row.size()))) << '\n';
        }
        o.body() << "# target diagonal\n" << csv_row(cov.target_diag) << '\n';
        o.body() << "# primitive variances\n";
        const Eigen::VectorXd var = prim.covariance.diagonal();
        o.body() << csv_row(std::span<const double>(var.data(), static_cast<std::size_t>(var.size()))) << '\n';
        o.body() << "# primitive targets\n" << csv_row(prim.target_var) << '\n';
        o.body() << "# pass: " << (cov.passed() && prim.passed() ? "true" : "false") << '\n';
        return;
    }
    json covj{{"sigma_hat", matrix_json(cov.sigma_hat)},
              {"rotated", matrix_json(cov.rotated)},
              {"mc_stderr", matrix_json(cov.mc_stderr)},
              {"target_diag", cov.target_diag},
              {"diag_rel_err", cov.diag_rel_err},
              {"off_diag_max", cov.off_diag_max},
              {"off_diag_max_z", cov.off_diag_max_z},
              {"samples", cov.samples},
              {"diag_pass", cov.diag_pass},
              {"off_diag_pass", cov.off_diag_pass}};
    json primj{{"covariance", matrix_json(prim.covariance)},
               {"stderr", matrix_json(prim.stderr_)},
               {"target_var", prim.target_var},
               {"var_rel_err", prim.var_rel_err},
               {"var_pass", prim.var_pass},
               {"cross_pass", prim.cross_pass}};
    o.write_json(json{{"covariance", covj}, {"primitive", primj}, {"pass", cov.passed() && prim.passed()}});
}

void cmd_moments(const Params& p, Output& o) {
    const MomentSequence u = moment_sequence(p.n, p.max_order);
    if (o.csv()) {
        o.header();
        o.body() << csv_row(u.u) << '\n';
    } else {
        o.write_json(json{{"u", u.u}});
    }
}

json load_config(const std::string& path) {
    if (path.empty()) {
        return json::object();
    }
    std::ifstream in(path);
    if (!in) {
        throw InvalidParameter("cannot read config '" + path + "'");
    }
    json cfg = json::parse(in);
    if (!cfg.is_object()) {
        throw InvalidParameter("config file must hold a JSON object");
    }
    return cfg;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite free convolution, freezing limits and beta-ensemble Monte Carlo", kTool};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kTool) + " " + FREEZING_VERSION);

    Params p;
    std::vector<std::pair<CLI::App*, std::unique_ptr<Binder>>> commands;
    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto binder = std::make_unique<Binder>(sub);
        sub->add_option("--config", p.config, "JSON file with parameter values");
        binder->option("--out", p.out, "out", "output file (default stdout)");
        binder->option("--format", p.format, "format", "csv or json")->check(CLI::IsMember({"csv", "json"}));
        Binder* raw = binder.get();
        commands.emplace_back(sub, std::move(binder));
        return raw;
    };
    const auto kinds = CLI::IsMember({"gaussian", "laguerre"});

    Binder* zeros = add("zeros", "zeros of Hermite or Laguerre polynomials");
    zeros->option("--family", p.family, "family", "hermite or laguerre")
        ->check(CLI::IsMember({"hermite", "laguerre"}));
    zeros->option("--n", p.n, "n", "degree");
    zeros->option("--alpha", p.alpha, "alpha", "Laguerre parameter");
    zeros->option("--t", p.t, "t", "scale");

    Binder* convolve = add("convolve", "finite free convolution of two tuples");
    convolve->option("a", p.a_file, "a", "CSV file with the first tuple")->required();
    convolve->option("b", p.b_file, "b", "CSV file with the second tuple")->required();

    Binder* limit = add("limit", "freezing limit at time t");
    limit->option("--kind", p.kind, "kind", "gaussian or laguerre")->check(kinds);
    limit->option("--initial", p.initial, "initial", "CSV file with the initial tuple");
    limit->option("--n", p.n, "n", "size of the zero initial tuple");
    limit->option("--t", p.t, "t", "time");
    limit->option("--alpha", p.alpha, "alpha", "Laguerre parameter");
    limit->flag("--verify-ode", p.verify_ode, "verify_ode", "compare the ODE and closed-form routes");
    limit->flag("--closed-form", p.closed_form, "closed_form", "use the closed-form Laguerre route");

    Binder* simulate_cmd = add("simulate", "Euler-Maruyama paths of the beta Dyson or Laguerre process");
    simulate_cmd->option("--kind", p.kind, "kind", "gaussian or laguerre")->check(kinds);
    simulate_cmd->option("--n", p.n, "n", "number of particles (zero initial tuple)");
    simulate_cmd->option("--initial", p.initial, "initial", "CSV file with the initial tuple");
    simulate_cmd->option("--beta", p.beta, "beta", "inverse temperature (>= 1)");
    simulate_cmd->option("--alpha", p.alpha, "alpha", "Laguerre parameter");
    simulate_cmd->option("--t", p.t, "t", "horizon");
    simulate_cmd->option("--dt", p.dt, "dt", "time step");
    simulate_cmd->option("--paths", p.paths, "paths", "number of paths");
    simulate_cmd->option("--seed", p.seed, "seed", "random seed");
    simulate_cmd->option("--record", p.record, "record", "comma-separated record times (default t*k/5)");
    simulate_cmd->option("--summary", p.summary, "summary", "summary JSON path");

    Binder* clt = add("clt", "static CLT covariance checks");
    clt->option("--kind", p.kind, "kind", "gaussian or laguerre")->check(kinds);
    clt->option("--n", p.n, "n", "number of particles");
    clt->option("--beta", p.beta, "beta", "inverse temperature");
    clt->option("--alpha", p.alpha, "alpha", "Laguerre parameter");
    clt->option("--samples", p.samples, "samples", "number of samples");
    clt->option("--seed", p.seed, "seed", "random seed");
    clt->option("--rel-tol", p.rel_tol, "rel_tol", "relative tolerance for variances");

    Binder* moments = add("moments", "limiting moment coefficients u_0..u_max");
    moments->option("--n", p.n, "n", "number of particles");
    moments->option("--max", p.max_order, "max", "largest order");

    std::vector<std::string> argv_store{kTool};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) {
        argv.push_back(s.data());
    }

    // clt has a larger default beta; set before parsing so flags still win.
    if (std::find(args.begin(), args.end(), "clt") != args.end()) {
        p.beta = 1e4;
        p.n = 2;
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, binder] : commands) {
            if (!sub->parsed()) {
                continue;
            }
            binder->apply(load_config(p.config));
            const std::string name = sub->get_name();
            Output o(name, p, binder->resolved());
            int code = 0;
            if (name == "zeros") {
                cmd_zeros(p, o);
            } else if (name == "convolve") {
                cmd_convolve(p, o, err);
            } else if (name == "limit") {
                code = cmd_limit(p, o, err);
            } else if (name == "simulate") {
                cmd_simulate(p, o, err);
            } else if (name == "clt") {
                cmd_clt(p, o);
            } else if (name == "moments") {
                cmd_moments(p, o);
            }
            o.flush(out);
            return code;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.numerical() ? 3 : 2;
    } catch (const json::exception& e) {
        err << "error: config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

} // namespace freezing
