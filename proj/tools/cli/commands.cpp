#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

#include "cli/svg.hpp"
#include "tavis/asymptotic.hpp"
#include "tavis/errors.hpp"
#include "tavis/observables.hpp"
#include "tavis/protocol.hpp"

namespace tavis::cli {

namespace {

constexpr double kPi = std::numbers::pi;

Report base_report(const RunConfig& c, const CoherentPrep& prep) {
    Report r;
    r.config = c.to_json();
    r.diagnostics["n_max"] = prep.n_max();
    r.diagnostics["truncation_tail_mass"] = prep.tail_mass();
    return r;
}

std::shared_ptr<const QuadratureBasis> basis_for(const RunConfig& c, int n_max, double dx) {
    const double half = c.xmax ? std::max(*c.xmax, QuadratureBasis::minimum_half_range(n_max))
                               : QuadratureBasis::minimum_half_range(n_max);
    return build_quadrature_basis(n_max, half, dx);
}

std::string phi_label(double phi) { return "p_s_phi=" + format_number(phi); }

}  // namespace

Report run_revival(const RunConfig& c) {
    const auto params = c.params();
    const auto prep = c.prep();
    Report r = base_report(c, prep);
    const auto t = c.t_grid();
    const auto p = p_gg_trace(params, prep, t);

    Table table{"revival", {"t", "p_gg"}, {}};
    for (std::size_t i = 0; i < t.size(); ++i) table.add_row({t[i], p[i]});
    r.tables.push_back(std::move(table));

    r.diagnostics["evolution"] = params.is_symmetric_resonant() ? "analytic" : "numeric";
    if (params.lambda1 > 0.0) {
        const double tr = revival_time(params, prep);
        r.diagnostics["revival_time"] = tr;
        svg::LinePlot plot{"P_gg(t), nbar=" + format_number(c.nbar), "t", "P_gg", {{"P_gg", t, p, false}}, {tr / 2, tr}};
        r.svg = svg::render(plot);
    } else {
        r.svg = svg::render(svg::LinePlot{"P_gg(t)", "t", "P_gg", {{"P_gg", t, p, false}}, {}});
    }
    return r;
}

Report run_qfunc(const RunConfig& c) {
    const auto params = c.params();
    const auto prep = c.prep();
    Report r = base_report(c, prep);
    const auto psi = evolve_coherent(params, prep, c.time);
    const auto grid = PhaseSpaceGrid::covering(c.nbar, c.qgrid);
    const auto q = q_function(psi, grid);

    Table table{"qfunc", {"re_alpha", "im_alpha", "q"}, {}};
    for (int j = 0; j < grid.points; ++j)
        for (int i = 0; i < grid.points; ++i) {
            const cplx a = q.alpha(i, j);
            table.add_row({a.real(), a.imag(), q.at(i, j)});
        }
    r.tables.push_back(std::move(table));

    Table markers{"markers", {"k", "re_alpha", "im_alpha", "x"}, {}};
    svg::Heatmap map;
    if (prep.nbar() > 0.0 && params.is_symmetric_resonant()) {
        for (const auto& m : blob_markers(params, prep, c.time)) {
            markers.add_row({static_cast<double>(m.k), m.alpha.real(), m.alpha.imag(), m.x});
            map.markers.emplace_back(2.0 * m.alpha.real(), 2.0 * m.alpha.imag());
        }
    }
    r.tables.push_back(std::move(markers));

    r.diagnostics["q_integral"] = q.integral();
    r.diagnostics["q_integral_over_pi"] = q.integral() / kPi;

    map.title = "Q(alpha), t=" + format_number(c.time);
    map.x_label = "x = alpha + alpha*";
    map.y_label = "y = (alpha - alpha*)/i";
    for (int i = 0; i < grid.points; ++i) {
        map.x.push_back(2.0 * grid.coordinate(i) + 2.0 * grid.center.real());
        map.y.push_back(2.0 * grid.coordinate(i) + 2.0 * grid.center.imag());
    }
    map.values = q.values;
    r.svg = svg::render(map);
    return r;
}

Report run_xdist(const RunConfig& c) {
    const auto params = c.params();
    const auto prep = c.prep();
    Report r = base_report(c, prep);
    const auto psi = evolve_coherent(params, prep, c.time);
    const auto basis = basis_for(c, prep.n_max(), c.dx);
    const QuadratureSlice slice(c.time, psi, basis);

    std::array<double, 3> mx{std::nan(""), std::nan(""), std::nan("")};
    if (prep.nbar() > 0.0) {
        const auto markers = blob_markers(params, prep, c.time);
        for (std::size_t k = 0; k < 3; ++k) mx[k] = markers[k].x;
    }

    Table table{"xdist", {"x", "p_gg", "p_ee", "p_sym", "p_total", "x_m1", "x_0", "x_p1"}, {}};
    std::vector<double> xs, pgg, pee, psym, ptot;
    double max_anti = 0.0;
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const auto& a = slice.amplitudes(i);
        const double sym = std::norm((a[1] + a[2]) / std::numbers::sqrt2);
        max_anti = std::max(max_anti, std::norm((a[1] - a[2]) / std::numbers::sqrt2));
        table.add_row({slice.x(i), slice.density(QubitLabel::gg, i), slice.density(QubitLabel::ee, i), sym,
                       slice.density(i), mx[0], mx[1], mx[2]});
        xs.push_back(slice.x(i));
        pgg.push_back(slice.density(QubitLabel::gg, i));
        pee.push_back(slice.density(QubitLabel::ee, i));
        psym.push_back(sym);
        ptot.push_back(slice.density(i));
    }
    r.tables.push_back(std::move(table));

    const QuadratureSlice fine(c.time, psi, basis_for(c, prep.n_max(), c.dx / 2));
    r.diagnostics["total_probability"] = slice.total_probability();
    r.diagnostics["grid_convergence_delta"] = std::abs(slice.total_probability() - fine.total_probability());
    r.diagnostics["max_antisymmetric_density"] = max_anti;

    svg::LinePlot plot{"x-quadrature distribution, t=" + format_number(c.time), "x", "P(x)",
                       {{"gg", xs, pgg, false}, {"ee", xs, pee, false}, {"(ge+eg)/sqrt2", xs, psym, false}, {"total", xs, ptot, false}},
                       {}};
    for (double m : mx)
        if (std::isfinite(m)) plot.vertical_lines.push_back(m);
    r.svg = svg::render(plot);
    return r;
}

Report run_ps(const RunConfig& c) {
    const auto params = c.params();
    const auto prep = c.prep();
    Report r = base_report(c, prep);
    const auto t = c.t_grid();
    const auto basis = basis_for(c, prep.n_max(), c.dx);

    std::vector<SuccessQuery> queries;
    for (double phi : c.phi) queries.push_back({TargetState{phi}, c.fmin});
    const auto curves = success_curves(params, prep, queries, t, basis);

    Table table{"ps", {"t"}, {}};
    for (double phi : c.phi) table.columns.push_back(phi_label(phi));
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<Cell> row{t[i]};
        for (const auto& cv : curves) row.emplace_back(cv.p_s[i]);
        table.add_row(std::move(row));
    }
    r.tables.push_back(std::move(table));

    // Re-evaluate a few grid times at half the quadrature spacing.
    const auto fine = basis_for(c, prep.n_max(), c.dx / 2);
    std::vector<double> probe;
    const std::size_t stride = std::max<std::size_t>(1, t.size() / 5);
    for (std::size_t i = 0; i < t.size(); i += stride) probe.push_back(t[i]);
    const auto fine_curves = success_curves(params, prep, queries, probe, fine);
    double delta = 0.0;
    for (std::size_t k = 0; k < curves.size(); ++k)
        for (std::size_t j = 0; j < probe.size(); ++j)
            delta = std::max(delta, std::abs(fine_curves[k].p_s[j] - curves[k].p_s[j * stride]));
    r.diagnostics["grid_convergence_delta"] = delta;
    nlohmann::json maxima = nlohmann::json::array();
    for (const auto& cv : curves) maxima.push_back(*std::max_element(cv.p_s.begin(), cv.p_s.end()));
    r.diagnostics["p_s_max"] = maxima;

    svg::LinePlot plot{"P_s(t), F_min=" + format_number(c.fmin), "t", "P_s", {}, {}};
    for (std::size_t k = 0; k < curves.size(); ++k) plot.series.push_back({"phi=" + format_number(c.phi[k]), t, curves[k].p_s, false});
    r.svg = svg::render(plot);
    return r;
}

Report run_herald(const RunConfig& c) {
    const auto params = c.params();
    const auto prep = c.prep();
    Report r = base_report(c, prep);
    const auto basis = basis_for(c, prep.n_max(), c.dx);
    const QuadratureSlice slice(c.time, evolve_coherent(params, prep, c.time), basis);
    const TargetState target{c.phi.front()};

    const OutcomeSampler sampler(slice);
    Rng rng(c.seed);
    Table shots{"herald", {"shot", "x", "fidelity", "success"}, {}};
    long successes = 0;
    double fid_sum = 0.0;
    std::vector<double> xs, fs;
    for (long s = 0; s < c.shots; ++s) {
        HeraldedOutcome o;
        if (c.sigma > 0.0) {
            const double x = sampler.sample_x(rng);
            // Box-Muller; 1 - u keeps the log argument in (0, 1].
            const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
            const double y = x + c.sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            o = blurred_outcome(slice, y, c.sigma, target, c.fmin);
        } else {
            o = sampler.sample(rng, target, c.fmin);
        }
        if (o.success) {
            ++successes;
            fid_sum += o.fidelity;
        }
        shots.add_row({static_cast<double>(s), o.x, o.fidelity, o.success ? 1.0 : 0.0});
        xs.push_back(o.x);
        fs.push_back(o.fidelity);
    }
    r.tables.push_back(std::move(shots));

    const double n = static_cast<double>(c.shots);
    const double rate = successes / n;
    const double expected = success_probability(slice, target, c.fmin);
    Table summary{"summary",
                  {"shots", "successes", "success_rate", "binomial_sigma", "p_s_projective", "mean_success_fidelity"},
                  {}};
    summary.add_row({n, static_cast<double>(successes), rate, std::sqrt(expected * (1.0 - expected) / n), expected,
                     successes ? fid_sum / successes : std::nan("")});
    r.tables.push_back(std::move(summary));
    r.diagnostics["success_rate"] = rate;
    r.diagnostics["p_s_projective"] = expected;
    r.diagnostics["total_probability"] = slice.total_probability();

    svg::LinePlot plot{"heralded shots, t=" + format_number(c.time), "x", "fidelity", {{"shots", xs, fs, true}}, {}};
    r.svg = svg::render(plot);
    return r;
}

Report run_width(const RunConfig& c) {
    const auto params = c.params();
    std::vector<CoherentPrep> preps;
    for (double nb : c.nbars) preps.push_back(c.prep(nb));
    Report r;
    r.config = c.to_json();
    nlohmann::json tails = nlohmann::json::array();
    for (const auto& p : preps) tails.push_back(p.tail_mass());
    r.diagnostics["truncation_tail_mass"] = tails;

    WidthOptions opts;
    opts.dx = c.dx;
    opts.t_steps = c.tsteps;
    const auto res = width_analysis(params, preps, c.fmins, TargetState{c.phi.front()}, opts);

    Table table{"width", {"nbar", "f_min", "width", "ideal_width", "excess", "k_fit", "r_squared", "status"}, {}};
    for (std::size_t f = 0; f < res.f_mins.size(); ++f)
        for (std::size_t j = 0; j < res.nbars.size(); ++j) {
            const auto& pt = res.at(f, j);
            table.add_row({pt.nbar, pt.f_min, pt.width, pt.ideal, pt.width - pt.ideal, res.fits[f].k,
                           res.fits[f].r_squared, pt.status});
        }
    r.tables.push_back(std::move(table));

    Table fits{"fits", {"f_min", "ideal_width", "k", "slope", "intercept", "r_squared", "points"}, {}};
    for (const auto& fit : res.fits)
        fits.add_row({fit.f_min, fit.ideal, fit.k, fit.slope, fit.intercept, fit.r_squared, static_cast<double>(fit.points)});
    r.tables.push_back(std::move(fits));

    svg::LinePlot plot{"P_s plateau FWHM", "F_min", "width", {}, {}};
    std::vector<double> ideal;
    for (double f : res.f_mins) ideal.push_back(ideal_width(f, params.omega));
    plot.series.push_back({"ideal", res.f_mins, ideal, false});
    for (std::size_t j = 0; j < res.nbars.size(); ++j) {
        std::vector<double> w;
        for (std::size_t f = 0; f < res.f_mins.size(); ++f) w.push_back(res.at(f, j).width);
        plot.series.push_back({"nbar=" + format_number(res.nbars[j]), res.f_mins, w, false});
    }
    r.svg = svg::render(plot);
    return r;
}

Report run_command(const RunConfig& c) {
    switch (c.command) {
        case Command::revival: return run_revival(c);
        case Command::qfunc: return run_qfunc(c);
        case Command::xdist: return run_xdist(c);
        case Command::ps: return run_ps(c);
        case Command::herald: return run_herald(c);
        case Command::width: return run_width(c);
    }
    throw std::logic_error("unknown command");
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write output file '" + path.string() + "'");
    return os;
}

}  // namespace

void write_report(const Report& report, const RunConfig& c, std::ostream& stdout_stream) {
    const bool to_stdout = c.out == "-";
    std::ofstream file;
    if (!to_stdout) file = open_output(c.out);
    std::ostream& os = to_stdout ? stdout_stream : file;

    switch (c.format) {
        case OutputFormat::json:
            os << to_json(report).dump(2) << '\n';
            break;
        case OutputFormat::svg:
            os << report.svg;
            break;
        case OutputFormat::csv: {
            write_csv(os, report.tables.front());
            for (std::size_t k = 1; k < report.tables.size(); ++k) {
                if (to_stdout) {
                    os << '\n';
                    write_csv(os, report.tables[k]);
                } else {
                    std::filesystem::path side(c.out);
                    side.replace_extension();
                    side += "." + report.tables[k].name + ".csv";
                    auto sf = open_output(side);
                    write_csv(sf, report.tables[k]);
                }
            }
            break;
        }
    }
}

}  // namespace tavis::cli
