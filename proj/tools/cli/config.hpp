#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tavis/hilbert.hpp"

namespace tavis::cli {

enum class Command { revival, qfunc, xdist, ps, herald, width };
enum class OutputFormat { csv, json, svg };

std::string to_string(Command c);
std::string to_string(OutputFormat f);

// Invalid command-line or config-file input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Values as given on the command line or in a config file; unset fields
// fall back to the per-command defaults in resolve().
struct RawConfig {
    std::optional<double> nbar, theta, omega, lambda, e1, e2, lambda1, lambda2;
    std::optional<double> tmin, tmax, time, fmin, dx, xmax, sigma;
    std::optional<int> tsteps, nmax, qgrid;
    std::optional<std::uint64_t> seed;
    std::optional<long> shots;
    std::vector<double> phi, fmins, nbars;
    std::optional<std::string> format, out;
};

// Fully resolved configuration; every default is materialized.
struct RunConfig {
    Command command = Command::revival;

    double nbar = 30.0;
    double theta = 0.0;
    double omega = 1.0;
    double e1 = 0.5;
    double e2 = 0.5;
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    double tmin = 0.0;
    double tmax = 45.0;
    int tsteps = 901;
    double time = 0.0;

    double fmin = 0.9;
    std::vector<double> phi;
    std::vector<double> fmins;
    std::vector<double> nbars;

    double dx = 0.02;
    std::optional<double> xmax;  // quadrature half range override
    std::optional<int> nmax;     // Fock truncation override
    int qgrid = 301;
    double sigma = 0.0;          // homodyne imprecision for herald

    std::uint64_t seed = 1;
    long shots = 10000;

    OutputFormat format = OutputFormat::csv;
    std::string out = "-";

    SystemParams params() const { return {omega, e1, e2, lambda1, lambda2}; }
    CoherentPrep prep() const { return CoherentPrep(nbar, theta, nmax); }
    CoherentPrep prep(double other_nbar) const { return CoherentPrep(other_nbar, theta, nmax); }
    std::vector<double> t_grid() const;

    nlohmann::json to_json() const;
};

// Applies per-command defaults and validates. Throws ConfigError.
RunConfig resolve(Command command, const RawConfig& raw);

// Reads a flat key=value file ('#' starts a comment). Keys are long flag
// names without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Parses "pi", "-pi/2", "3*pi/4", "1.5" and similar phase expressions.
double parse_angle(const std::string& text);

}  // namespace tavis::cli
