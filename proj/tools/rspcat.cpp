// rspcat: batch front end for the remote cat-state preparation model.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rspcat/analysis.hpp"
#include "rspcat/io.hpp"
#include "rspcat/parallel.hpp"
#include "rspcat/protocol.hpp"
#include "rspcat/tomography.hpp"

using json = nlohmann::ordered_json;
using namespace rspcat;

namespace {

struct ConfigCli {
    std::string config_path;
    std::optional<double> squeezing_db, v_s, v_a, eta_a, eta_b, theta_rad, window_dx;
    std::optional<double> grid_extent, click_rate_hz;
    std::optional<int> n_subtract, cutoff, grid_points;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value config file");
        app->add_option("--squeezing-db", squeezing_db, "pure-source squeezing level (dB)");
        app->add_option("--v-s", v_s, "squeezed variance of the source TMSS");
        app->add_option("--v-a", v_a, "antisqueezed variance of the source TMSS");
        app->add_option("--eta-a", eta_a, "Alice channel transmission");
        app->add_option("--eta-b", eta_b, "Bob channel transmission");
        app->add_option("--n-subtract", n_subtract, "subtracted photon count");
        app->add_option("--theta-rad", theta_rad, "homodyne projection angle");
        app->add_option("--window-dx", window_dx, "selection half-width (0 = exact)");
        app->add_option("--cutoff", cutoff, "Fock cutoff");
        app->add_option("--grid-extent", grid_extent, "Wigner grid extent");
        app->add_option("--grid-points", grid_points, "Wigner grid points per axis");
        app->add_option("--seed", seed, "RNG seed");
        app->add_option("--click-rate-hz", click_rate_hz, "heralding click rate for rate output");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (squeezing_db) {
            cfg.squeezing_db = squeezing_db;
            cfg.v_s.reset();
            cfg.v_a.reset();
        }
        if (v_s || v_a) {
            if (v_s) cfg.v_s = v_s;
            if (v_a) cfg.v_a = v_a;
            cfg.squeezing_db.reset();
        }
        if (eta_a) cfg.eta_a = *eta_a;
        if (eta_b) cfg.eta_b = *eta_b;
        if (n_subtract) cfg.n_subtract = *n_subtract;
        if (theta_rad) cfg.theta_rad = *theta_rad;
        if (window_dx) cfg.window_dx = *window_dx;
        if (cutoff) cfg.cutoff = cutoff;
        if (grid_extent) cfg.grid_extent = *grid_extent;
        if (grid_points) cfg.grid_points = *grid_points;
        if (seed) cfg.seed = *seed;
        if (click_rate_hz) cfg.click_rate_hz = click_rate_hz;
        cfg.validate();
        return cfg;
    }
};

struct Prepared {
    DensityMatrix rho;
    Parity parity = Parity::Odd;
    std::optional<double> success_prob;
};

Prepared prepare_state(const ExperimentConfig& cfg) {
    Prepared out;
    out.parity = cfg.n_subtract % 2 ? Parity::Odd : Parity::Even;
    const int cutoff = cfg.resolve_cutoff();
    if (cfg.n_subtract >= 2) {
        if (!cfg.pure_lossless()) {
            throw ConfigError(
                "config: n_subtract >= 2 requires a pure lossless source "
                "(eta_a = eta_b = 1, v_s*v_a = 1/4)");
        }
        if (cfg.window_dx != 0.0) {
            throw ConfigError("config: window_dx > 0 is only modeled for n_subtract = 1");
        }
        const auto [vs, va] = cfg.source_variances();
        const double r = -0.5 * std::log(2.0 * vs);
        const FockVector psi =
            bob_pure_conditional(r, cfg.n_subtract, ProjectionSpec::exact(cfg.theta_rad), cutoff);
        out.rho.elems = psi.amps * psi.amps.adjoint();
        out.rho.weight = 1.0;
        return out;
    }
    const auto [vs, va] = cfg.source_variances();
    const EffectiveParams p = effective_params(lossy_cm(tmss_cm(vs, va), cfg.eta_a, cfg.eta_b));
    if (cfg.window_dx > 0.0) {
        const auto spec = ProjectionSpec::windowed(cfg.theta_rad, cfg.window_dx);
        out.rho = bob_windowed(p, spec, cutoff);
        out.success_prob = success_probability(p, spec);
    } else {
        out.rho = bob_mixed_conditional(p, ProjectionSpec::exact(cfg.theta_rad), cutoff);
    }
    return out;
}

json prepare_record(const ExperimentConfig& cfg, const Prepared& prep) {
    const CatFit fit = best_amplitude(prep.rho, prep.parity, 4.5);
    json rec;
    rec["W00"] = w_origin(prep.rho);
    rec["fidelity"] = fit.fidelity;
    rec["alpha_star"] = fit.alpha_star;
    rec["parity"] = prep.parity == Parity::Odd ? "odd" : "even";
    if (prep.success_prob) {
        rec["success_prob"] = *prep.success_prob;
        if (cfg.click_rate_hz) rec["rate_hz"] = *cfg.click_rate_hz * *prep.success_prob;
    }
    return rec;
}

int cmd_prepare(const ConfigCli& ccli, const std::string& wigner_out,
                const std::string& wigner_format) {
    const ExperimentConfig cfg = ccli.resolve();
    const Prepared prep = prepare_state(cfg);
    std::cout << prepare_record(cfg, prep).dump() << "\n";
    if (!wigner_out.empty()) {
        const WignerGrid grid = wigner_grid(prep.rho, {cfg.grid_extent, cfg.grid_points});
        if (wigner_format == "bin") {
            write_wigner_binary(wigner_out, grid);
        } else {
            write_wigner_csv(wigner_out, grid);
        }
    }
    return 0;
}

int cmd_sweep(const ConfigCli& ccli, const std::string& axis, double from, double to, double step,
              const std::string& out_path) {
    const ExperimentConfig base = ccli.resolve();
    if (!(step > 0.0) || to < from) throw ConfigError("sweep: need from <= to and step > 0");
    std::vector<double> values;
    for (double v = from; v <= to + 1e-12; v += step) values.push_back(v);

    CsvTable table;
    table.header = {"axis_value", "W00", "neg_volume", "fidelity", "alpha_star", "success_prob"};
    table.rows.resize(values.size());
    std::vector<std::string> failures(values.size());
    parallel_for(static_cast<int>(values.size()), [&](int i) {
        try {
            ExperimentConfig cfg = base;
            const double v = values[i];
            if (axis == "eta_a") {
                cfg.eta_a = v;
            } else if (axis == "eta_b") {
                cfg.eta_b = v;
            } else if (axis == "squeezing_db") {
                cfg.squeezing_db = v;
                cfg.v_s.reset();
                cfg.v_a.reset();
            } else if (axis == "window_dx") {
                cfg.window_dx = v;
            } else if (axis == "n_subtract") {
                cfg.n_subtract = static_cast<int>(std::lround(v));
            }
            cfg.validate();
            const Prepared prep = prepare_state(cfg);
            const CatFit fit = best_amplitude(prep.rho, prep.parity, 4.5);
            const double neg = negativity_volume(prep.rho, {cfg.grid_extent, cfg.grid_points});
            table.rows[i] = {v, w_origin(prep.rho), neg, fit.fidelity, fit.alpha_star,
                             prep.success_prob.value_or(0.0)};
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (const auto& f : failures) {
        if (!f.empty()) throw Error("sweep point failed: " + f);
    }
    const std::string csv = to_csv(table);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_csv(out_path, table);
    }
    return 0;
}

int cmd_optimum(int n, const std::string& scheme_name, double s_from, double s_to, double s_step,
                const std::string& out_path) {
    if (scheme_name != "tmss" && scheme_name != "smss") {
        throw ConfigError("optimum: scheme must be tmss or smss");
    }
    const Scheme scheme = scheme_name == "tmss" ? Scheme::TMSS : Scheme::SMSS;
    if (n < 1) throw ConfigError("optimum: n must be >= 1");
    if (!(s_step > 0.0) || s_to < s_from) throw ConfigError("optimum: bad squeezing grid");

    std::vector<double> svals;
    for (double s = s_from; s <= s_to + 1e-9; s += s_step) svals.push_back(s);
    CsvTable table;
    table.header = {"s_db", "alpha_star", "fidelity"};
    table.rows.resize(svals.size());
    parallel_for(static_cast<int>(svals.size()), [&](int i) {
        const CatFit fit = scheme_best_fit(scheme, n, svals[i]);
        table.rows[i] = {svals[i], fit.alpha_star, fit.fidelity};
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i][2] > table.rows[best][2]) best = i;
    }
    if (!out_path.empty()) write_csv(out_path, table);
    json rec;
    rec["n"] = n;
    rec["scheme"] = scheme_name;
    rec["s_star_db"] = table.rows[best][0];
    rec["alpha_star"] = table.rows[best][1];
    rec["f_star"] = table.rows[best][2];
    std::cout << rec.dump() << "\n";
    return 0;
}

int cmd_tomography(const ConfigCli& ccli, const std::string& samples_path, bool generate,
                   int angles, int count, int recon_cutoff, int max_iters, double tol,
                   const std::string& rho_out, const std::string& samples_out) {
    std::vector<QuadratureSample> samples;
    std::optional<DensityMatrix> truth;
    if (!samples_path.empty()) {
        samples = read_samples_csv(samples_path);
        if (samples.empty()) throw ConfigError(samples_path + ": no samples");
    } else if (generate) {
        const ExperimentConfig cfg = ccli.resolve();
        truth = prepare_state(cfg).rho;
        std::vector<double> schedule;
        for (int k = 0; k < angles; ++k) schedule.push_back(k * M_PI / angles);
        samples = sample(*truth, schedule, count / angles + (count % angles ? 1 : 0), cfg.seed);
        if (!samples_out.empty()) write_samples_csv(samples_out, samples);
    } else {
        throw ConfigError("tomography: pass --samples PATH or --generate");
    }

    MaxlikOptions opts;
    opts.max_iters = max_iters;
    opts.tol = tol;
    const MaxlikResult result = maxlik_reconstruct(samples, recon_cutoff, opts);
    json rec;
    rec["converged"] = result.converged;
    rec["iterations"] = result.iterations;
    rec["log_likelihood"] = result.log_likelihood;
    rec["samples"] = samples.size();
    if (truth) rec["fidelity"] = fidelity_mixed(*truth, result.rho);
    std::cout << rec.dump() << "\n";
    if (!rho_out.empty()) write_density_csv(rho_out, result.rho);
    return result.converged ? 0 : 1;
}

int cmd_wigner_grid(const ConfigCli& ccli, const std::string& out_path,
                    const std::string& format) {
    const ExperimentConfig cfg = ccli.resolve();
    const Prepared prep = prepare_state(cfg);
    const WignerGrid grid = wigner_grid(prep.rho, {cfg.grid_extent, cfg.grid_points});
    if (format == "bin") {
        write_wigner_binary(out_path, grid);
    } else {
        write_wigner_csv(out_path, grid);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"remote preparation of optical cat states: model pipelines and sweeps"};
    app.require_subcommand(1);

    ConfigCli ccli;

    auto* prepare = app.add_subcommand("prepare", "figures of merit for one operating point");
    ccli.attach(prepare);
    std::string wigner_out, wigner_format = "csv";
    prepare->add_option("--wigner-out", wigner_out, "also write the Wigner grid here");
    prepare->add_option("--wigner-format", wigner_format, "csv or bin")
        ->check(CLI::IsMember({"csv", "bin"}));

    auto* sweep = app.add_subcommand("sweep", "sweep one axis, one CSV row per point");
    ConfigCli ccli_sweep;
    ccli_sweep.attach(sweep);
    std::string axis, sweep_out;
    double s_from = 0, s_to = 0, s_step = 0;
    sweep->add_option("--axis", axis, "eta_a|eta_b|squeezing_db|window_dx|n_subtract")
        ->required()
        ->check(CLI::IsMember({"eta_a", "eta_b", "squeezing_db", "window_dx", "n_subtract"}));
    sweep->add_option("--from", s_from)->required();
    sweep->add_option("--to", s_to)->required();
    sweep->add_option("--step", s_step)->required();
    sweep->add_option("--out", sweep_out, "CSV path (stdout when omitted)");

    auto* optimum = app.add_subcommand("optimum", "optimal squeezing for n-photon subtraction");
    int opt_n = 1;
    std::string scheme = "tmss", opt_out;
    double os_from = 6.0, os_to = 10.0, os_step = 0.1;
    optimum->add_option("--n", opt_n, "subtracted photons")->required();
    optimum->add_option("--scheme", scheme, "tmss or smss")
        ->check(CLI::IsMember({"tmss", "smss"}));
    optimum->add_option("--s-from", os_from, "grid start (dB)");
    optimum->add_option("--s-to", os_to, "grid end (dB)");
    optimum->add_option("--s-step", os_step, "grid step (dB)");
    optimum->add_option("--out", opt_out, "per-point CSV path");

    auto* tomo = app.add_subcommand("tomography", "maximum-likelihood round trip");
    ConfigCli ccli_tomo;
    ccli_tomo.attach(tomo);
    std::string samples_path, rho_out, samples_out;
    bool generate = false;
    int angles = 12, count = 100000, recon_cutoff = 15, max_iters = 2000;
    double tol = 1e-10;
    tomo->add_option("--samples", samples_path, "input samples CSV (theta_rad, x)");
    tomo->add_flag("--generate", generate, "sample from the configured state instead");
    tomo->add_option("--angles", angles, "uniform angle count for --generate");
    tomo->add_option("--count", count, "total sample count for --generate");
    tomo->add_option("--recon-cutoff", recon_cutoff, "reconstruction Fock cutoff");
    tomo->add_option("--max-iters", max_iters);
    tomo->add_option("--tol", tol, "relative log-likelihood stopping gain");
    tomo->add_option("--rho-out", rho_out, "write reconstructed density matrix CSV");
    tomo->add_option("--samples-out", samples_out, "write generated samples CSV");

    auto* wgrid = app.add_subcommand("wigner-grid", "Wigner grid of the prepared state");
    ConfigCli ccli_wigner;
    ccli_wigner.attach(wgrid);
    std::string grid_out, grid_format = "csv";
    wgrid->add_option("--out", grid_out, "output path")->required();
    wgrid->add_option("--format", grid_format, "csv or bin")
        ->check(CLI::IsMember({"csv", "bin"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (prepare->parsed()) return cmd_prepare(ccli, wigner_out, wigner_format);
        if (sweep->parsed()) return cmd_sweep(ccli_sweep, axis, s_from, s_to, s_step, sweep_out);
        if (optimum->parsed()) return cmd_optimum(opt_n, scheme, os_from, os_to, os_step, opt_out);
        if (tomo->parsed()) {
            return cmd_tomography(ccli_tomo, samples_path, generate, angles, count, recon_cutoff,
                                  max_iters, tol, rho_out, samples_out);
        }
        if (wgrid->parsed()) return cmd_wigner_grid(ccli_wigner, grid_out, grid_format);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
