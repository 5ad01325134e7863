#include "cli/app.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "tavis/errors.hpp"

namespace tavis::cli {

namespace {

struct Subcommand {
    Command command;
    const char* description;
};

constexpr Subcommand kSubcommands[] = {
    {Command::revival, "P_gg(t) collapse and revival trace"},
    {Command::qfunc, "Husimi Q function of the field at one time"},
    {Command::xdist, "x-quadrature distribution per qubit channel"},
    {Command::ps, "heralding success probability P_s(t)"},
    {Command::herald, "Monte Carlo heralded homodyne shots"},
    {Command::width, "P_s plateau width versus F_min and nbar"},
};

void add_angle(CLI::App* sub, const std::string& flag, std::optional<double>& target, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&target](const std::string& s) { target = parse_angle(s); }, help);
}

template <class T>
void add_value(CLI::App* sub, const std::string& flag, std::optional<T>& target, const std::string& help) {
    sub->add_option_function<T>(flag, [&target](const T& v) { target = v; }, help);
}

void add_common_options(CLI::App* sub, RawConfig& raw, std::string& config_path) {
    add_value(sub, "--nbar", raw.nbar, "mean photon number of the coherent field");
    add_angle(sub, "--theta", raw.theta, "coherent state phase (alpha = sqrt(nbar) e^{-i theta})");
    add_value(sub, "--omega", raw.omega, "cavity frequency");
    add_value(sub, "--lambda", raw.lambda, "common qubit-cavity coupling");
    add_value(sub, "--e1", raw.e1, "qubit 1 energy (default omega/2)");
    add_value(sub, "--e2", raw.e2, "qubit 2 energy (default omega/2)");
    add_value(sub, "--lambda1", raw.lambda1, "qubit 1 coupling");
    add_value(sub, "--lambda2", raw.lambda2, "qubit 2 coupling");
    add_value(sub, "--tmin", raw.tmin, "start of the time grid");
    add_value(sub, "--tmax", raw.tmax, "end of the time grid");
    add_value(sub, "--tsteps", raw.tsteps, "number of time grid points");
    add_angle(sub, "--time", raw.time, "evaluation time for single-time commands");
    sub->add_option_function<std::vector<std::string>>(
           "--phi",
           [&raw](const std::vector<std::string>& v) {
               raw.phi.clear();
               for (const auto& s : v) raw.phi.push_back(parse_angle(s));
           },
           "target phase(s), comma separated")
        ->delimiter(',');
    add_value(sub, "--fmin", raw.fmin, "fidelity threshold");
    sub->add_option_function<std::vector<double>>(
           "--fmins", [&raw](const std::vector<double>& v) { raw.fmins = v; }, "fidelity thresholds for width")
        ->delimiter(',');
    sub->add_option_function<std::vector<double>>(
           "--nbars", [&raw](const std::vector<double>& v) { raw.nbars = v; }, "mean photon numbers for width")
        ->delimiter(',');
    add_value(sub, "--dx", raw.dx, "quadrature grid spacing");
    add_value(sub, "--xmax", raw.xmax, "quadrature half range");
    add_value(sub, "--nmax", raw.nmax, "Fock truncation");
    add_value(sub, "--qgrid", raw.qgrid, "Q-function grid points per axis");
    add_value(sub, "--sigma", raw.sigma, "homodyne imprecision for herald");
    add_value(sub, "--seed", raw.seed, "random seed");
    add_value(sub, "--shots", raw.shots, "number of heralding shots");
    add_value(sub, "--format", raw.format, "csv, json or svg");
    add_value(sub, "--out", raw.out, "output path ('-' for stdout)");
    sub->add_option("--config", config_path, "key=value file; flags take precedence");
}

struct Parser {
    CLI::App app{"Two-qubit Tavis-Cummings simulator"};
    RawConfig raw;
    std::string config_path;
    std::vector<std::pair<CLI::App*, Command>> subs;

    Parser() {
        app.require_subcommand(1);
        for (const auto& s : kSubcommands) {
            auto* sub = app.add_subcommand(to_string(s.command), s.description);
            add_common_options(sub, raw, config_path);
            subs.emplace_back(sub, s.command);
        }
    }

    Command selected() const {
        for (const auto& [sub, cmd] : subs)
            if (sub->parsed()) return cmd;
        throw ConfigError("no subcommand given");
    }
};

template <class T>
void overlay(std::optional<T>& base, const std::optional<T>& top) {
    if (top) base = top;
}

void overlay(std::vector<double>& base, const std::vector<double>& top) {
    if (!top.empty()) base = top;
}

RawConfig merge(RawConfig base, const RawConfig& top) {
    overlay(base.nbar, top.nbar);
    overlay(base.theta, top.theta);
    overlay(base.omega, top.omega);
    overlay(base.lambda, top.lambda);
    overlay(base.e1, top.e1);
    overlay(base.e2, top.e2);
    overlay(base.lambda1, top.lambda1);
    overlay(base.lambda2, top.lambda2);
    overlay(base.tmin, top.tmin);
    overlay(base.tmax, top.tmax);
    overlay(base.time, top.time);
    overlay(base.fmin, top.fmin);
    overlay(base.dx, top.dx);
    overlay(base.xmax, top.xmax);
    overlay(base.sigma, top.sigma);
    overlay(base.tsteps, top.tsteps);
    overlay(base.nmax, top.nmax);
    overlay(base.qgrid, top.qgrid);
    overlay(base.seed, top.seed);
    overlay(base.shots, top.shots);
    overlay(base.phi, top.phi);
    overlay(base.fmins, top.fmins);
    overlay(base.nbars, top.nbars);
    overlay(base.format, top.format);
    overlay(base.out, top.out);
    return base;
}

RawConfig parse_config_file(Command command, const std::string& path) {
    std::vector<std::string> tokens{"tavis", to_string(command)};
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "config") throw ConfigError("config files cannot include other config files");
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    Parser p;
    std::vector<const char*> argv;
    for (const auto& t : tokens) argv.push_back(t.c_str());
    try {
        p.app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return p.raw;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Parser p;
    try {
        p.app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << p.app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << p.app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const Command command = p.selected();
        RawConfig raw = p.raw;
        if (!p.config_path.empty()) raw = merge(parse_config_file(command, p.config_path), p.raw);
        const RunConfig config = resolve(command, raw);
        const Report report = run_command(config);
        write_report(report, config, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const tavis::Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace tavis::cli
