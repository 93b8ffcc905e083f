#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "dqca/config.hpp"
#include "dqca/errors.hpp"
#include "dqca/evolution.hpp"
#include "dqca/io.hpp"
#include "dqca/kernels.hpp"
#include "dqca/observables.hpp"
#include "dqca/scattering.hpp"
#include "dqca/spectral.hpp"
#include "dqca/state.hpp"
#include "dqca/version.hpp"
#include "dqca/wavepacket.hpp"

namespace {

using dqca::AutomatonParams;
using dqca::Config;
using dqca::cplx;
namespace io = dqca::io;

constexpr double pi = std::numbers::pi;

struct validation_failure {};

struct RunContext {
    std::string experiment;
    std::string out_dir;
    std::string format;
    std::vector<std::pair<std::string, io::Table>> tables;
    std::vector<std::string> warnings;
};

// Typed reads that write the effective value back, so the manifest's config
// echo is the full round-trippable setting list.
struct Fields {
    Config& cfg;

    double num(const std::string& key, double def) {
        const double v = cfg.get_double(key, def);
        cfg.set(key, io::format_double(v));
        return v;
    }
    std::int64_t integer(const std::string& key, std::int64_t def) {
        const std::int64_t v = cfg.get_int(key, def);
        cfg.set(key, std::to_string(v));
        return v;
    }
    std::string str(const std::string& key, const std::string& def) {
        const std::string v = cfg.get_string(key, def);
        cfg.set(key, v);
        return v;
    }
};

std::vector<double> parse_mass_list(Config& cfg, const std::string& raw) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= raw.size()) {
        const std::size_t comma = raw.find(',', start);
        const std::string item =
            raw.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            if (!(v > 0.0) || !(v <= 1.0))
                cfg.fail("m", "mass out of (0,1]: " + item);
            else
                out.push_back(v);
        } catch (const std::exception&) {
            cfg.fail("m", "cannot parse mass '" + item + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) cfg.fail("m", "mass list is empty");
    return out;
}

void finish_validation(const Config& cfg, const RunContext& ctx) {
    if (cfg.errors().empty()) {
        for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
        return;
    }
    for (const auto& e : cfg.errors()) std::cerr << "config error: " << e << "\n";
    throw validation_failure{};
}

void select_kernel(Fields& f) {
    const std::string kernel = f.str("kernel", "auto");
    if (kernel == "auto") return;
    if (kernel == "scalar" || kernel == "avx2") {
        const auto b = kernel == "scalar" ? dqca::kernels::Backend::scalar
                                          : dqca::kernels::Backend::avx2;
        if (dqca::kernels::available(b))
            dqca::kernels::force(b);
        else
            f.cfg.fail("kernel", "backend '" + kernel + "' unavailable on this CPU");
    } else {
        f.cfg.fail("kernel", "expected auto, scalar or avx2, got '" + kernel + "'");
    }
}

std::vector<std::string> common_keys() { return {"experiment", "out", "format", "kernel"}; }

// Shared packet/evolution block for the free-evolve and zitter experiments.
struct PacketSetup {
    AutomatonParams params{0.0, 1.0};
    std::size_t sites = 0;
    std::size_t steps = 0;
    std::size_t stride = 1;
    dqca::WavepacketSpec packet;
    dqca::EvolveOptions evolve;
};

PacketSetup read_packet_setup(Fields& f, RunContext& ctx, double def_mass, double def_k0,
                              double def_sigma, cplx def_cp, cplx def_cm,
                              std::int64_t def_sites, std::int64_t def_steps,
                              std::vector<std::string>& keys) {
    Config& cfg = f.cfg;
    PacketSetup s;
    const double m = f.num("m", def_mass);
    const std::int64_t sites = f.integer("sites", def_sites);
    const std::int64_t steps = f.integer("steps", def_steps);
    const std::int64_t stride = f.integer("stride", 1);
    const double k0 = f.num("k0", def_k0);
    const double sigma = f.num("sigma", def_sigma);
    const double x0 = f.num("x0", double(sites / 2));
    const cplx cp{f.num("c_plus_re", def_cp.real()), f.num("c_plus_im", def_cp.imag())};
    const cplx cm{f.num("c_minus_re", def_cm.real()), f.num("c_minus_im", def_cm.imag())};
    const std::string backend = f.str("backend", "stencil");
    const double guard_threshold = f.num("guard_threshold", 1e-8);
    const double guard_fraction = f.num("guard_fraction", 0.05);
    keys.insert(keys.end(),
                {"m", "sites", "steps", "stride", "k0", "sigma", "x0", "c_plus_re", "c_plus_im",
                 "c_minus_re", "c_minus_im", "backend", "guard_threshold", "guard_fraction"});

    if (!(m > 0.0) || !(m <= 1.0)) cfg.fail("m", "mass out of (0,1]");
    if (sites < 4 || sites % 2 != 0) cfg.fail("sites", "ring size must be even and >= 4");
    if (steps < 0) cfg.fail("steps", "step count must be non-negative");
    if (stride < 1) cfg.fail("stride", "observer stride must be >= 1");
    cfg.require_range("k0", k0, -pi, pi);
    cfg.require_positive("sigma", sigma);
    if (sites >= 4 && sigma > 0.0 && sigma < 8.0 * (2.0 * pi / double(sites)))
        cfg.fail("sigma", "packet needs at least 8 momentum-grid spacings; enlarge sites or sigma");
    if (x0 < 0.0 || x0 >= double(sites)) cfg.fail("x0", "packet center must lie inside the ring");
    const double pop = std::norm(cp) + std::norm(cm);
    if (!(pop > 0.0)) cfg.fail("c_plus_re", "branch weights are all zero");
    if (backend != "stencil" && backend != "spectral")
        cfg.fail("backend", "expected stencil or spectral, got '" + backend + "'");
    cfg.require_range("guard_fraction", guard_fraction, 0.0, 0.5);
    cfg.require_positive("guard_threshold", guard_threshold);
    select_kernel(f);

    if (cfg.errors().empty() && std::abs(std::sin(k0)) < 1e-12 &&
        std::abs(std::norm(cp) - std::norm(cm)) > 1e-12)
        ctx.warnings.push_back("k0 sits at a band edge: group velocity and drift vanish there");

    s.params = AutomatonParams{m, std::sqrt(1.0 - m * m)};
    s.sites = std::size_t(sites);
    s.steps = std::size_t(steps);
    s.stride = std::size_t(stride);
    const double norm = std::sqrt(pop);
    s.packet = dqca::WavepacketSpec{k0, sigma, cp / norm, cm / norm, x0};
    s.evolve.backend =
        backend == "stencil" ? dqca::EvolveBackend::stencil : dqca::EvolveBackend::spectral;
    s.evolve.observe_stride = s.stride;
    s.evolve.guard_threshold = guard_threshold;
    s.evolve.guard_fraction = guard_fraction;
    return s;
}

void run_dispersion_table(Fields& f, RunContext& ctx) {
    Config& cfg = f.cfg;
    const std::string mass_raw = f.str("m", "0.15");
    const std::int64_t sites = f.integer("sites", 4096);
    const std::vector<double> masses = parse_mass_list(cfg, mass_raw);
    if (sites < 4 || sites % 2 != 0) cfg.fail("sites", "ring size must be even and >= 4");
    select_kernel(f);
    auto keys = common_keys();
    keys.insert(keys.end(), {"m", "sites"});
    cfg.check_known_keys(keys);
    finish_validation(cfg, ctx);

    io::Table table;
    table.columns = {"m", "k", "omega", "v"};
    const dqca::MomentumGrid grid{std::size_t(sites)};
    std::vector<double> ks = grid.points();
    std::sort(ks.begin(), ks.end());
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        for (const double k : ks)
            table.add_row({m, k, dqca::dispersion(k, p), dqca::group_velocity(k, p)});
    }
    ctx.tables.emplace_back("dispersion_table", std::move(table));
}

void run_free_evolve(Fields& f, RunContext& ctx) {
    Config& cfg = f.cfg;
    auto keys = common_keys();
    const PacketSetup s =
        read_packet_setup(f, ctx, 0.15, 0.5, 0.05, 1.0, 0.0, 1024, 256, keys);
    cfg.check_known_keys(keys);
    finish_validation(cfg, ctx);

    dqca::FieldState state = dqca::build_packet(s.sites, s.params, s.packet);
    io::Table trace;
    trace.columns = {"t", "x_mean", "p_mean", "norm"};
    const auto observer = [&](std::size_t t, const dqca::FieldState& st) {
        trace.add_row({double(t),
                       dqca::position_mean(st, s.evolve.guard_threshold, s.evolve.guard_fraction),
                       dqca::momentum_mean(st), st.norm()});
    };
    dqca::evolve(state, s.params, dqca::PotentialProfile::zero(s.sites), s.steps, s.evolve,
                 {observer});
    ctx.tables.emplace_back("free_evolve_trace", std::move(trace));
}

void run_zitter(Fields& f, RunContext& ctx) {
    Config& cfg = f.cfg;
    auto keys = common_keys();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const PacketSetup s = read_packet_setup(f, ctx, 0.15, 0.0, 0.025, inv_sqrt2,
                                            cplx{0.0, inv_sqrt2}, 4096, 3000, keys);
    const double fit_t_min = f.num("fit_t_min", 100.0);
    const double fit_t_max = f.num("fit_t_max", 2000.0);
    const double noise_floor = f.num("noise_floor", 1e-6);
    keys.insert(keys.end(), {"fit_t_min", "fit_t_max", "noise_floor"});
    if (!(fit_t_min >= 0.0) || !(fit_t_max > fit_t_min))
        cfg.fail("fit_t_max", "fit window must satisfy 0 <= fit_t_min < fit_t_max");
    cfg.require_positive("noise_floor", noise_floor);
    cfg.check_known_keys(keys);
    finish_validation(cfg, ctx);

    const dqca::ZitterPrediction pred = dqca::zitter_predict(s.sites, s.params, s.packet);
    dqca::FieldState state = dqca::build_packet(s.sites, s.params, s.packet);
    dqca::TrajectoryTrace tr;
    const auto observer = [&](std::size_t t, const dqca::FieldState& st) {
        tr.t.push_back(double(t));
        tr.x_mean.push_back(
            dqca::position_mean(st, s.evolve.guard_threshold, s.evolve.guard_fraction));
        tr.p_mean.push_back(dqca::momentum_mean(st));
    };
    dqca::evolve(state, s.params, dqca::PotentialProfile::zero(s.sites), s.steps, s.evolve,
                 {observer});

    const dqca::ZitterMeasurement meas =
        dqca::zitter_measure(tr, pred.drift, fit_t_min, fit_t_max, noise_floor);
    const dqca::BoundCheck bound = dqca::zitter_bound_check(tr, pred.drift, pred.amplitude_bound);

    io::Table trace;
    trace.columns = {"t", "x_mean", "p_mean", "residual"};
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        trace.add_row({tr.t[i], tr.x_mean[i], tr.p_mean[i],
                       tr.x_mean[i] - tr.x_mean[0] - pred.drift * (tr.t[i] - tr.t[0])});
    ctx.tables.emplace_back("zitter_trace", std::move(trace));

    io::Table summary;
    summary.columns = {"shift_predicted",     "shift_measured",     "frequency_predicted",
                       "frequency_measured",  "drift_predicted",    "decay_exponent",
                       "oscillation_amplitude", "amplitude_bound",  "max_residual",
                       "bound_ok",            "extrema_count"};
    summary.add_row({pred.shift, meas.shift, pred.frequency, meas.frequency, pred.drift,
                     meas.decay_exponent, meas.amplitude, bound.bound, bound.max_residual,
                     std::int64_t(bound.ok ? 1 : 0), std::int64_t(meas.extrema_count)});
    ctx.tables.emplace_back("zitter_summary", std::move(summary));

    std::cout << "shift " << io::format_double(meas.shift) << " (predicted "
              << io::format_double(pred.shift) << "), frequency "
              << io::format_double(meas.frequency) << " (predicted "
              << io::format_double(pred.frequency) << ")\n";
}

void run_scatter_scan(Fields& f, RunContext& ctx) {
    Config& cfg = f.cfg;
    const std::string mass_raw = f.str("m", "0.4");
    const std::int64_t k_points = f.integer("k_points", 200);
    const std::int64_t phi_points = f.integer("phi_points", 200);
    const std::vector<double> masses = parse_mass_list(cfg, mass_raw);
    if (k_points < 2) cfg.fail("k_points", "need at least 2 momentum samples");
    if (phi_points < 2) cfg.fail("phi_points", "need at least 2 potential samples");
    select_kernel(f);
    auto keys = common_keys();
    keys.insert(keys.end(), {"m", "k_points", "phi_points"});
    cfg.check_known_keys(keys);
    finish_validation(cfg, ctx);

    std::vector<double> k_grid(std::size_t(k_points), 0.0);
    std::vector<double> phi_grid(std::size_t(phi_points), 0.0);
    for (std::size_t i = 0; i < k_grid.size(); ++i)
        k_grid[i] = double(i + 1) * pi / double(k_points + 1);
    for (std::size_t j = 0; j < phi_grid.size(); ++j)
        phi_grid[j] = double(j) * 2.0 * pi / double(phi_points);

    io::Table cells;
    cells.columns = {"m", "k", "phi", "regime", "k_prime", "R", "T", "v_in", "v_out"};
    io::Table plateaus;
    plateaus.columns = {"m", "k", "width", "expected", "cells"};
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        const dqca::ScanResult scan = dqca::scan(p, k_grid, phi_grid);
        for (const auto& sol : scan.cells)
            cells.add_row({sol.m, sol.k, sol.phi, dqca::regime_name(sol.regime), sol.k_prime,
                           sol.R, sol.T, sol.v_in, sol.v_out});
        for (const auto& ps : dqca::plateau_widths(scan))
            plateaus.add_row(
                {m, ps.k, ps.width, ps.expected, std::int64_t(ps.cells)});
    }
    ctx.tables.emplace_back("scatter_scan", std::move(cells));
    ctx.tables.emplace_back("scatter_plateaus", std::move(plateaus));
}

void run_scatter_dynamic(Fields& f, RunContext& ctx) {
    Config& cfg = f.cfg;
    const double m = f.num("m", 0.2);
    const std::int64_t sites = f.integer("sites", 4096);
    const std::int64_t steps = f.integer("steps", 520);
    const double k0 = f.num("k0", 2.0);
    const double sigma = f.num("sigma", 1.0 / 15.0);
    const double phi = f.num("phi", 1.42);
    const std::int64_t barrier = f.integer("barrier", 2 * sites / 3);
    const double x0 = f.num("x0", double(barrier) - 140.0);
    const std::int64_t trace_stride = f.integer("trace_stride", 1);
    const std::int64_t snapshot_stride = f.integer("snapshot_stride", 40);
    const double guard_threshold = f.num("guard_threshold", 1e-8);
    const double guard_fraction = f.num("guard_fraction", 0.05);

    if (!(m > 0.0) || !(m <= 1.0)) cfg.fail("m", "mass out of (0,1]");
    if (sites < 4 || sites % 2 != 0) cfg.fail("sites", "ring size must be even and >= 4");
    if (steps < 1) cfg.fail("steps", "step count must be >= 1");
    if (!(k0 > 0.0) || !(k0 < pi)) cfg.fail("k0", "incident momentum must lie in (0, pi)");
    cfg.require_positive("sigma", sigma);
    if (sites >= 4 && sigma > 0.0 && sigma < 8.0 * (2.0 * pi / double(sites)))
        cfg.fail("sigma", "packet needs at least 8 momentum-grid spacings; enlarge sites or sigma");
    if (barrier < 1 || barrier >= sites) cfg.fail("barrier", "barrier must lie inside the ring");
    if (x0 < 0.0 || x0 >= double(sites)) cfg.fail("x0", "packet center must lie inside the ring");
    if (trace_stride < 1) cfg.fail("trace_stride", "stride must be >= 1");
    if (snapshot_stride < 0) cfg.fail("snapshot_stride", "snapshot stride must be >= 0");
    cfg.require_range("guard_fraction", guard_fraction, 0.0, 0.5);
    cfg.require_positive("guard_threshold", guard_threshold);
    select_kernel(f);
    auto keys = common_keys();
    keys.insert(keys.end(),
                {"m", "sites", "steps", "k0", "sigma", "phi", "barrier", "x0", "trace_stride",
                 "snapshot_stride", "guard_threshold", "guard_fraction"});
    cfg.check_known_keys(keys);
    finish_validation(cfg, ctx);

    io::Table density;
    density.columns = {"t", "x", "rho"};
    dqca::DynamicSpec spec;
    spec.sites = std::size_t(sites);
    spec.packet = dqca::WavepacketSpec{k0, sigma, 1.0, 0.0, x0};
    spec.phi = phi;
    spec.barrier = std::size_t(barrier);
    spec.steps = std::size_t(steps);
    spec.trace_stride = std::size_t(trace_stride);
    spec.evolve.guard_threshold = guard_threshold;
    spec.evolve.guard_fraction = guard_fraction;
    spec.snapshot_stride = std::size_t(snapshot_stride);
    if (snapshot_stride > 0)
        spec.on_snapshot = [&](std::size_t t, const dqca::FieldState& st) {
            const std::vector<double> rho = dqca::density(st);
            for (std::size_t x = 0; x < rho.size(); ++x)
                density.add_row({double(t), double(x), rho[x]});
        };

    const auto p = AutomatonParams::from_mass(m);
    const dqca::DynamicResult res = dqca::dynamic_scatter(spec, p);
    const dqca::ScatteringSolution sol = dqca::coefficients(k0, phi, p);

    io::Table trace;
    trace.columns = {"t", "mass_left", "mass_right", "centroid_left", "centroid_right"};
    for (std::size_t i = 0; i < res.t.size(); ++i)
        trace.add_row({res.t[i], res.mass_left[i], res.mass_right[i], res.centroid_left[i],
                       res.centroid_right[i]});

    io::Table summary;
    summary.columns = {"R_measured", "R_analytic", "v_out_measured", "v_out_analytic",
                       "T_measured", "T_analytic", "regime", "k_prime", "omega_prime", "v_in"};
    summary.add_row({res.R_measured, res.R_analytic, res.v_out_measured, res.v_out_analytic,
                     res.T_measured, res.T_analytic, dqca::regime_name(sol.regime), sol.k_prime,
                     sol.omega_prime, sol.v_in});

    if (snapshot_stride > 0) ctx.tables.emplace_back("dynamic_density", std::move(density));
    ctx.tables.emplace_back("dynamic_trace", std::move(trace));
    ctx.tables.emplace_back("dynamic_summary", std::move(summary));

    std::cout << "R measured " << io::format_double(res.R_measured) << ", analytic "
              << io::format_double(res.R_analytic) << " (" << dqca::regime_name(sol.regime)
              << ")\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-dimensional Dirac automaton experiments"};
    std::string config_path, experiment, out_dir, format;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--experiment", experiment,
                   "dispersion-table | free-evolve | zitter | scatter-scan | scatter-dynamic");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "csv | json");
    app.add_option("--set", overrides, "per-field override key=value")->take_all();
    CLI11_PARSE(app, argc, argv);

    const auto started = std::chrono::steady_clock::now();
    try {
        Config cfg;
        if (!config_path.empty()) {
            try {
                cfg = Config::from_file(config_path);
            } catch (const std::runtime_error& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            }
        }
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                std::cerr << "config error: --set expects key=value, got '" << kv << "'\n";
                return 2;
            }
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }

        RunContext ctx;
        Fields f{cfg};
        if (!experiment.empty()) cfg.set("experiment", experiment);
        if (!out_dir.empty()) cfg.set("out", out_dir);
        if (!format.empty()) cfg.set("format", format);
        ctx.experiment = f.str("experiment", "");
        ctx.out_dir = f.str("out", "out");
        ctx.format = f.str("format", "csv");
        if (ctx.format != "csv" && ctx.format != "json")
            cfg.fail("format", "expected csv or json, got '" + ctx.format + "'");

        if (ctx.experiment == "dispersion-table")
            run_dispersion_table(f, ctx);
        else if (ctx.experiment == "free-evolve")
            run_free_evolve(f, ctx);
        else if (ctx.experiment == "zitter")
            run_zitter(f, ctx);
        else if (ctx.experiment == "scatter-scan")
            run_scatter_scan(f, ctx);
        else if (ctx.experiment == "scatter-dynamic")
            run_scatter_dynamic(f, ctx);
        else {
            cfg.fail("experiment",
                     ctx.experiment.empty() ? "missing (use --experiment or the config file)"
                                            : "unknown experiment '" + ctx.experiment + "'");
            finish_validation(cfg, ctx);
        }

        std::filesystem::create_directories(ctx.out_dir);
        const std::string ext = ctx.format == "csv" ? ".csv" : ".json";
        nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
        for (const auto& [name, table] : ctx.tables) {
            const std::string file = name + ext;
            io::write_file(ctx.out_dir + "/" + file,
                           ctx.format == "csv" ? io::to_csv(table) : io::to_json(table));
            outputs.push_back(file);
            std::cout << "wrote " << ctx.out_dir << "/" << file << "\n";
        }

        nlohmann::ordered_json manifest;
        manifest["experiment"] = ctx.experiment;
        nlohmann::ordered_json versions;
        versions["dqca"] = dqca::version;
        versions["fftw"] = std::string(fftw_version);
        manifest["versions"] = std::move(versions);
        manifest["kernel"] = dqca::kernels::name(dqca::kernels::active());
        nlohmann::ordered_json echo;
        for (const auto& [k, v] : cfg.entries()) echo[k] = v;
        manifest["config"] = std::move(echo);
        manifest["outputs"] = std::move(outputs);
        manifest["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now() - started)
                                       .count();
        io::write_file(ctx.out_dir + "/manifest.json", manifest.dump(2) + "\n");
        return 0;
    } catch (const validation_failure&) {
        return 2;
    } catch (const dqca::leakage_error& e) {
        std::cerr << "guard failure: " << e.what() << "\n";
        return 3;
    } catch (const dqca::inconclusive_error& e) {
        std::cerr << "guard failure: " << e.what() << "\n";
        return 3;
    } catch (const dqca::signal_error& e) {
        std::cerr << "guard failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
