#include "dnls/checks.hpp"
#include "dnls/errors.hpp"
#include "dnls/evolve.hpp"
#include "dnls/hierarchy.hpp"
#include "dnls/scattering.hpp"
#include "dnls/sobolev.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dnls;
using nlohmann::json;

namespace {

// Exit codes
constexpr int ok = 0;
constexpr int failed = 1;
constexpr int usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    Eigen::Index grid = 0; // 0: command default
    double domain = 0.0;
    std::vector<std::string> lambda_sq;
    std::vector<double> rho;
    double s = 0.5;
    double R = 0.0;
    double dt = 1e-3;
    double t_final = 1.0;
    double dealias = 2.0 / 3.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    bool quick = false;
};

cplx parse_complex(const std::string& text)
{
    auto comma = text.find(',');
    try {
        if (comma == std::string::npos)
            return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("cannot read '" + text + "' as re,im");
    }
}

std::vector<cplx> lambda_points(const Flags& f)
{
    std::vector<cplx> pts;
    for (const auto& s : f.lambda_sq)
        pts.push_back(parse_complex(s));
    return pts;
}

std::string timestamp()
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

// Options that were set explicitly, on the command line or in the config file.
json overrides(const CLI::App& app)
{
    json o = json::object();
    for (const CLI::Option* opt : app.get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help" || opt->get_name() == "--config")
            continue;
        auto res = opt->results();
        o[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
    }
    return o;
}

json header(const std::string& command, const CLI::App& app)
{
    json h;
    h["command"] = command;
    h["timestamp"] = timestamp();
    h["overrides"] = overrides(app);
    return h;
}

void emit(const std::string& text, const std::string& out)
{
    if (out.empty()) {
        std::cout << text << '\n';
        return;
    }
    if (auto dir = fs::path(out).parent_path(); !dir.empty())
        fs::create_directories(dir);
    std::ofstream f(out);
    if (!f)
        throw std::runtime_error("cannot write " + out);
    f << text << '\n';
}

GridFunction load_input(const std::string& input, bool demo, const Flags& f, Eigen::Index n_default,
                        double l_default, GridFunction (*profile)(Eigen::Index, double))
{
    Eigen::Index n = f.grid > 0 ? f.grid : n_default;
    double length = f.domain > 0 ? f.domain : l_default;
    if (demo)
        return profile(n, length);
    if (input.empty())
        throw UsageError("no input profile (give a file or --demo)");
    if (!fs::exists(input))
        throw UsageError("input not found: " + input);
    GridFunction u = read_grid_function(input, length);
    warn_if_not_localized(u, input);
    return u;
}

int cmd_generate_energies(int j_max, const std::string& out_dir)
{
    if (j_max < 0 || j_max > energy_cap())
        throw UsageError("j_max must lie in [0, " + std::to_string(energy_cap()) + "]");
    std::vector<EnergyFunctional> es;
    for (int j = 0; j <= j_max; ++j) {
        es.push_back(energy(j));
        std::cout << "E_" << j << ": " << es.back().density.size() << " monomials\n";
    }
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    std::ofstream f(dir / "energies.json");
    if (!f)
        throw std::runtime_error("cannot write " + (dir / "energies.json").string());
    f << energies_to_json(es) << '\n';
    std::cout << "wrote " << (dir / "energies.json").string() << '\n';
    return ok;
}

int cmd_verify(const std::string& suite, const Flags& f, bool anchors, const CLI::App& app)
{
    auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "unknown suite '" << suite << "'\n";
        return usage;
    }
    CheckOptions opt = f.quick ? quick_options() : CheckOptions{};
    opt.seed = f.seed;
    if (f.grid > 0)
        opt.grid = f.grid;
    if (f.domain > 0)
        opt.domain = f.domain;
    opt.lambda_sq = lambda_points(f);
    opt.rho = f.rho;
    opt.dealias = f.dealias;
    if (app.count("--dt"))
        opt.dt = f.dt;
    if (app.count("--t-final"))
        opt.t_final = f.t_final;
    auto results = run_suite(suite, opt);
    bool pass = true;
    for (const auto& r : results) {
        pass = pass && r.pass;
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "  (" << r.seconds << " s)\n";
        if (anchors)
            std::cerr << "     checks: " << r.anchor << '\n';
    }
    json report = header("verify", app);
    report["seed"] = f.seed;
    report["verdict"] = json::parse(results_to_json(suite, results, anchors));
    emit(report.dump(1), f.out);
    if (!pass)
        for (const auto& r : results)
            if (!r.pass)
                std::cerr << "failed: " << r.name << '\n';
    return pass ? ok : failed;
}

int cmd_evolve(const GridFunction& u0, const Flags& f, const std::vector<std::string>& wanted, int phi_level,
               const std::string& snapshot_dir, double snapshot_every, const CLI::App& app)
{
    EvolutionConfig cfg;
    cfg.dt = f.dt;
    cfg.t_final = f.t_final;
    cfg.dealias = f.dealias;
    cfg.monitor_stride = std::max(1, int(std::lround(0.1 / f.dt)));
    std::vector<Monitor> monitors;
    std::vector<std::string> names = wanted.empty() ? std::vector<std::string>{"M", "P", "E"} : wanted;
    for (const auto& m : names) {
        if (m == "M" || m == "mass")
            monitors.push_back(mass_monitor());
        else if (m == "P" || m == "momentum")
            monitors.push_back(momentum_monitor());
        else if (m == "E" || m == "energy")
            monitors.push_back(energy_monitor());
        else if (m.size() > 1 && m[0] == 'E' && std::all_of(m.begin() + 1, m.end(), ::isdigit)) {
            int j = std::stoi(m.substr(1));
            if (j > energy_cap())
                throw UsageError("hierarchy monitor beyond E_" + std::to_string(energy_cap()));
            monitors.push_back(hierarchy_monitor(j));
        } else if (m == "a_u") {
            auto pts = lambda_points(f);
            if (pts.empty())
                pts.push_back({0.0, 4.0});
            for (auto z : pts)
                monitors.push_back(transmission_monitor(z));
        } else if (m == "phi") {
            auto rhos = f.rho;
            if (rhos.empty())
                rhos.push_back(series_threshold_R0(u0));
            for (double r : rhos)
                monitors.push_back(phi_monitor(r, phi_level));
        } else if (m == "hs")
            monitors.push_back(sobolev_monitor(f.s));
        else
            throw UsageError("unknown monitor '" + m + "'");
    }
    SnapshotSink sink;
    double next_snapshot = 0.0;
    if (!snapshot_dir.empty()) {
        fs::create_directories(snapshot_dir);
        sink = [&](double t, const GridFunction& u) {
            if (t + 0.5 * f.dt < next_snapshot)
                return;
            std::ostringstream name;
            name << "u_t" << std::fixed;
            name.precision(4);
            name << t << ".bin";
            write_binary(u, (fs::path(snapshot_dir) / name.str()).string());
            next_snapshot = t + snapshot_every;
        };
    }
    MonitorSeries series = evolve(u0, cfg, monitors, sink);
    if (f.format == "csv") {
        emit(series.to_csv(), f.out);
    } else {
        json report = header("evolve", app);
        report["grid"] = u0.size();
        report["domain"] = u0.domain_length();
        report["dt"] = cfg.dt;
        report["t_final"] = cfg.t_final;
        report["dealias"] = cfg.dealias;
        report["series"] = json::parse(series.to_json());
        emit(report.dump(1), f.out);
    }
    for (const auto& n : series.names)
        std::cerr << n << ": relative drift " << series.relative_drift(n) << '\n';
    return ok;
}

int cmd_compare_hs(const GridFunction& u, const Flags& f, bool use_r0, const CLI::App& app)
{
    double R = use_r0 ? series_threshold_R0(u) : f.R;
    ComparisonReport rep = compare_hs(u, f.s, R);
    json report = header("compare-hs", app);
    report["report"] = json::parse(to_json(rep));
    emit(report.dump(1), f.out);
    return rep.pass ? ok : failed;
}

int cmd_transmission(const GridFunction& u, const Flags& f, int modes, const CLI::App& app)
{
    auto pts = lambda_points(f);
    for (double r : f.rho)
        pts.push_back({0.0, r});
    if (pts.empty())
        throw UsageError("give at least one --lambda-sq or --rho");
    std::vector<ScatteringRow> rows;
    for (auto z : pts) {
        auto lam = SpectralParameter::from_lambda_sq(z);
        cplx a = jost_transmission(u, lam);
        rows.push_back({z, a, "jost", 0.0});
        if (modes > 0) {
            cplx d = perturbation_determinant(u, lam, modes);
            rows.push_back({z, d, "determinant", std::abs(d - a * a) / std::abs(a * a)});
        }
    }
    if (f.format == "csv") {
        emit(rows_to_csv(rows), f.out);
    } else {
        json report = header("transmission", app);
        report["rows"] = json::parse(rows_to_json(rows));
        emit(report.dump(1), f.out);
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DNLS hierarchy, scattering and Sobolev comparison tools"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.fallthrough();

    Flags f;
    app.add_option("--grid", f.grid, "grid size N (power of two)");
    app.add_option("--domain", f.domain, "period length L");
    app.add_option("--lambda-sq", f.lambda_sq, "spectral point re,im (repeatable)")->delimiter(';');
    app.add_option("--rho", f.rho, "rho on lambda^2 = i rho (repeatable)");
    app.add_option("--s", f.s, "Sobolev order");
    app.add_option("--R", f.R, "lower limit of the rho-integral");
    app.add_option("--dt", f.dt, "time step");
    app.add_option("--t-final", f.t_final, "final time");
    app.add_option("--dealias", f.dealias, "retained fraction of the spectrum");
    app.add_option("--seed", f.seed, "seed for randomized checks");
    app.add_option("--out", f.out, "output path (stdout when absent)");
    app.add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));

    int j_max = 2;
    auto* gen = app.add_subcommand("generate-energies", "write energies.json for E_0..E_jmax");
    gen->add_option("j_max", j_max, "highest j")->required();

    std::string suite;
    bool anchors = false;
    auto* verify = app.add_subcommand("verify", "run a property suite");
    verify->add_option("suite", suite, "symbolic | scattering | evolution | sobolev | all")->required();
    verify->add_flag("--paper-anchor", anchors, "print the identity each check exercises");
    verify->add_flag("--quick", f.quick, "smaller grids and shorter runs");

    std::string input;
    bool demo = false;
    std::vector<std::string> monitors;
    int phi_level = 1;
    std::string snapshot_dir;
    double snapshot_every = 1.0;
    auto* ev = app.add_subcommand("evolve", "integrate the DNLS flow and record monitors");
    ev->add_option("input", input, "profile (.bin or .csv)");
    ev->add_flag("--demo", demo, "use the Gaussian benchmark profile");
    ev->add_option("--monitor", monitors, "M, P, E, E<j>, a_u, phi, hs (repeatable)");
    ev->add_option("--phi-level", phi_level, "L for phi monitors");
    ev->add_option("--snapshots", snapshot_dir, "directory for binary snapshots");
    ev->add_option("--snapshot-every", snapshot_every, "time between snapshots");

    bool use_r0 = false;
    auto* cmp = app.add_subcommand("compare-hs", "Sobolev norm against the rho-integral of phi");
    cmp->add_option("input", input, "profile (.bin or .csv)");
    cmp->add_flag("--demo", demo, "use the Gaussian scattering profile");
    cmp->add_flag("--R0", use_r0, "take R from the series threshold");

    int modes = 0;
    auto* tr = app.add_subcommand("transmission", "a_u(lambda) at the given spectral points");
    tr->add_option("input", input, "profile (.bin or .csv)");
    tr->add_flag("--demo", demo, "use the Gaussian scattering profile");
    tr->add_option("--modes", modes, "also compute det(I - T^2) with this many modes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*gen)
            return cmd_generate_energies(j_max, f.out);
        if (*verify)
            return cmd_verify(suite, f, anchors, app);
        if (*ev)
            return cmd_evolve(load_input(input, demo, f, 1024, 200.0, evolution_gaussian), f, monitors, phi_level,
                              snapshot_dir, snapshot_every, app);
        if (*cmp)
            return cmd_compare_hs(load_input(input, demo, f, 1024, 40.0, scattering_gaussian), f, use_r0, app);
        if (*tr)
            return cmd_transmission(load_input(input, demo, f, 2048, 20.0, scattering_gaussian), f, modes, app);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const StabilityError& e) {
        std::cerr << "unstable: " << e.what() << '\n';
        return failed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    }
    return usage;
}
