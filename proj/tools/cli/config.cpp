#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tavis/errors.hpp"

namespace tavis::cli {

std::string to_string(Command c) {
    switch (c) {
        case Command::revival: return "revival";
        case Command::qfunc: return "qfunc";
        case Command::xdist: return "xdist";
        case Command::ps: return "ps";
        case Command::herald: return "herald";
        case Command::width: return "width";
    }
    return "?";
}

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        case OutputFormat::svg: return "svg";
    }
    return "?";
}

std::vector<double> RunConfig::t_grid() const {
    std::vector<double> g(static_cast<std::size_t>(tsteps));
    for (int i = 0; i < tsteps; ++i) g[static_cast<std::size_t>(i)] = tmin + (tmax - tmin) * i / (tsteps - 1);
    return g;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = to_string(command);
    j["nbar"] = nbar;
    j["theta"] = theta;
    j["omega"] = omega;
    j["e1"] = e1;
    j["e2"] = e2;
    j["lambda1"] = lambda1;
    j["lambda2"] = lambda2;
    j["tmin"] = tmin;
    j["tmax"] = tmax;
    j["tsteps"] = tsteps;
    j["time"] = time;
    j["fmin"] = fmin;
    j["phi"] = phi;
    j["fmins"] = fmins;
    j["nbars"] = nbars;
    j["dx"] = dx;
    j["xmax"] = xmax ? nlohmann::json(*xmax) : nlohmann::json(nullptr);
    j["nmax"] = nmax ? nlohmann::json(*nmax) : nlohmann::json(nullptr);
    j["qgrid"] = qgrid;
    j["sigma"] = sigma;
    j["seed"] = seed;
    j["shots"] = shots;
    j["format"] = to_string(format);
    j["out"] = out;
    return j;
}

double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s.empty()) throw ConfigError("empty angle");
    double sign = 1.0;
    if (s[0] == '-' || s[0] == '+') {
        if (s[0] == '-') sign = -1.0;
        s.erase(0, 1);
    }
    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse angle '" + text + "'");
        }
        if (used != s.size()) throw ConfigError("cannot parse angle '" + text + "'");
        return sign * v;
    }
    double factor = 1.0;
    std::string head = s.substr(0, pos);
    std::string tail = s.substr(pos + 2);
    if (!head.empty()) {
        if (head.back() == '*') head.pop_back();
        try {
            factor = std::stod(head);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse angle '" + text + "'");
        }
    }
    if (!tail.empty()) {
        if (tail[0] != '/') throw ConfigError("cannot parse angle '" + text + "'");
        try {
            factor /= std::stod(tail.substr(1));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse angle '" + text + "'");
        }
    }
    return sign * factor * std::numbers::pi;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key[0] == '-') key.erase(0, 1);
        entries[key] = trim(line.substr(eq + 1));
    }
    return entries;
}

namespace {

struct CommandDefaults {
    double nbar;
    double tmin, tmax;
    int tsteps;
};

CommandDefaults defaults_for(Command c) {
    switch (c) {
        case Command::revival: return {30.0, 0.0, 45.0, 901};
        case Command::ps: return {200.0, 0.0, 30.0, 601};
        case Command::width: return {200.0, 0.0, 45.0, 401};
        default: return {200.0, 0.0, 45.0, 901};
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

RunConfig resolve(Command command, const RawConfig& raw) {
    const auto d = defaults_for(command);
    RunConfig c;
    c.command = command;
    c.nbar = raw.nbar.value_or(d.nbar);
    c.theta = raw.theta.value_or(0.0);
    c.omega = raw.omega.value_or(1.0);
    const double lambda = raw.lambda.value_or(1.0);
    c.e1 = raw.e1.value_or(c.omega / 2);
    c.e2 = raw.e2.value_or(c.omega / 2);
    c.lambda1 = raw.lambda1.value_or(lambda);
    c.lambda2 = raw.lambda2.value_or(lambda);
    c.tmin = raw.tmin.value_or(d.tmin);
    c.tmax = raw.tmax.value_or(d.tmax);
    c.tsteps = raw.tsteps.value_or(d.tsteps);
    c.fmin = raw.fmin.value_or(0.9);
    c.phi = raw.phi.empty() ? std::vector<double>{std::numbers::pi} : raw.phi;
    c.fmins = raw.fmins.empty() ? std::vector<double>{0.55, 0.65, 0.75, 0.85, 0.95} : raw.fmins;
    c.nbars = raw.nbars.empty() ? std::vector<double>{25, 50, 100, 200, 300} : raw.nbars;
    c.dx = raw.dx.value_or(0.02);
    c.xmax = raw.xmax;
    c.nmax = raw.nmax;
    c.qgrid = raw.qgrid.value_or(301);
    c.sigma = raw.sigma.value_or(0.0);
    c.seed = raw.seed.value_or(1);
    c.shots = raw.shots.value_or(10000);
    c.out = raw.out.value_or("-");

    const std::string fmt = raw.format.value_or("csv");
    if (fmt == "csv") c.format = OutputFormat::csv;
    else if (fmt == "json") c.format = OutputFormat::json;
    else if (fmt == "svg") c.format = OutputFormat::svg;
    else throw ConfigError("unknown output format '" + fmt + "' (expected csv, json or svg)");

    require(std::isfinite(c.nbar) && c.nbar >= 0.0, "--nbar must be non-negative");
    require(std::isfinite(c.omega) && c.omega > 0.0, "--omega must be positive");
    require(c.lambda1 >= 0.0 && c.lambda2 >= 0.0, "couplings must be non-negative");
    require(std::isfinite(c.tmin) && std::isfinite(c.tmax) && c.tmax >= c.tmin, "--tmax must not be below --tmin");
    require(c.tsteps >= 2, "--tsteps must be at least 2");
    require(c.fmin > 0.0 && c.fmin < 1.0, "--fmin must lie in (0, 1)");
    for (double f : c.fmins) require(f > 0.0 && f < 1.0, "--fmins entries must lie in (0, 1)");
    for (double n : c.nbars) require(n > 0.0, "--nbars entries must be positive");
    require(c.dx > 0.0 && c.dx <= 0.1, "--dx must lie in (0, 0.1]");
    require(!c.nmax || *c.nmax >= 0, "--nmax must be non-negative");
    require(c.qgrid >= 2, "--qgrid must be at least 2");
    require(c.sigma >= 0.0, "--sigma must be non-negative");
    require(c.shots >= 1, "--shots must be at least 1");

    // Time of interest: Fig-style snapshot at 3 pi/(2 omega) unless given;
    // herald defaults to the phi plateau nearest a quarter revival time.
    if (raw.time) {
        c.time = *raw.time;
    } else if (command == Command::herald) {
        const double lambda_eff = c.lambda1 > 0.0 ? c.lambda1 : 1.0;
        const double t_near = 0.5 * std::numbers::pi * std::sqrt(c.nbar) / lambda_eff;
        const double period = std::numbers::pi / c.omega;
        const double t0 = (0.5 * c.phi.front() - c.theta - 0.5 * std::numbers::pi) / c.omega;
        c.time = t0 + std::round((t_near - t0) / period) * period;
    } else {
        c.time = 1.5 * std::numbers::pi / c.omega;
    }
    return c;
}

}  // namespace tavis::cli
