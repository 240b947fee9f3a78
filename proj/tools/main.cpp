// cavmem — command-line front end for the cavity EIT photon-storage toolkit.
//
// Subcommands: match, fig2a, fig2b, cycle, sweep, oracle-check.
// Exit codes: 0 ok, 1 usage/config error, 2 physics infeasible (unmatchable
// pulse, resolution guards, cutoff too small).
//
// All payload files are deterministic: identical config produces
// byte-identical CSV/JSON. Run metadata lives in <name>.meta.json sidecars.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cavmem/bath_oracle.hpp"
#include "cavmem/io.hpp"
#include "cavmem/storage.hpp"
#include "config.hpp"

using namespace cavmem;
using cavmem::cli::Config;
using nlohmann::json;

namespace {

TimeGrid grid_from(double t0, double dt, double t1) {
    if (!(dt > 0.0) || !(t1 > t0)) throw std::invalid_argument("grid: need dt > 0 and t1 > t0");
    const double steps = (t1 - t0) / dt;
    const auto n = static_cast<Eigen::Index>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(n)) > 1e-6)
        throw std::invalid_argument("grid: (t1 - t0) must be a multiple of dt");
    return TimeGrid{t0, dt, n + 1};
}

TimeGrid parse_grid_spec(const std::string& spec) {
    double t0, dt, t1;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> t0 >> c1 >> dt >> c2 >> t1) || c1 != ':' || c2 != ':')
        throw std::invalid_argument("grid spec must be t0:dt:t1");
    return grid_from(t0, dt, t1);
}

std::string out_path(const Config& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output.dir);
    return (std::filesystem::path(cfg.output.dir) / name).string();
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
}

void write_meta(const Config& cfg, const std::string& base, const std::string& command,
                const json& results) {
    json meta;
    meta["command"] = command;
    meta["config"] = cavmem::cli::to_json(cfg);
    meta["results"] = results;
    write_json(out_path(cfg, base + ".meta.json"), meta);
}

int thread_override() {
    const char* env = std::getenv("CAVMEM_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return std::clamp(n, 1, 64);
}

PulseEnvelope envelope_from_config(const Config& cfg, const TimeGrid& grid) {
    if (cfg.pulse.shape == "sech")
        return make_sech_envelope(cfg.pulse.width, cfg.pulse.center, grid);
    if (cfg.pulse.shape == "file") {
        if (cfg.pulse.envelope_file.empty())
            throw std::invalid_argument("pulse.shape = file needs pulse.envelope_file");
        PulseEnvelope h = read_envelope_csv(cfg.pulse.envelope_file);
        if (std::abs(envelope_norm(h) - 1.0) > 1e-6)
            throw std::invalid_argument("envelope file is not normalized");
        return h;
    }
    throw std::invalid_argument("pulse.shape must be sech or file");
}

FockStateMatrix state_from_config(const Config& cfg) {
    if (cfg.storage.state == "fock") return make_fock(cfg.storage.fock_n, cfg.storage.dim);
    if (cfg.storage.state == "squeezed")
        return make_squeezed_vacuum(cfg.storage.squeeze_r, cfg.storage.dim);
    throw std::invalid_argument("storage.state must be fock or squeezed");
}

MatchingMode matching_from_config(const Config& cfg) {
    if (cfg.storage.matching == "ideal") return MatchingMode::Ideal;
    if (cfg.storage.matching == "simulated") return MatchingMode::Simulated;
    throw std::invalid_argument("storage.matching must be ideal or simulated");
}

std::vector<double> t_s_list(const Config& cfg) {
    if (cfg.storage.t_s_count < 1 || cfg.storage.t_s_max < cfg.storage.t_s_min)
        throw std::invalid_argument("storage: bad t_s range");
    std::vector<double> ts(cfg.storage.t_s_count);
    const int n = cfg.storage.t_s_count;
    for (int i = 0; i < n; ++i)
        ts[i] = n == 1 ? cfg.storage.t_s_min
                       : cfg.storage.t_s_min + (cfg.storage.t_s_max - cfg.storage.t_s_min) *
                                                   static_cast<double>(i) / (n - 1);
    return ts;
}

// --- match ------------------------------------------------------------

struct MatchArgs {
    std::vector<double> sech;  // width, center
    std::string grid_spec;
    std::string envelope_file;
};

void cmd_match(const Config& cfg, const MatchArgs& args) {
    const SystemParams p = cfg.params();
    PulseEnvelope h;
    MatchedScheduleOptions opts;

    if (!args.envelope_file.empty()) {
        h = read_envelope_csv(args.envelope_file);
        if (std::abs(envelope_norm(h) - 1.0) > 1e-6)
            throw std::invalid_argument("envelope file is not normalized");
    } else {
        const TimeGrid grid = args.grid_spec.empty()
                                  ? grid_from(cfg.grid.t0, cfg.grid.dt, cfg.grid.t1)
                                  : parse_grid_spec(args.grid_spec);
        const double width = args.sech.empty() ? cfg.pulse.width : args.sech[0];
        const double center = args.sech.empty() ? cfg.pulse.center : args.sech[1];
        // raw samples plus the analytic pre-grid mass: a deliberately short
        // grid still yields the exact matched formula
        h = sech_samples(width, center, grid);
        opts.mass_before_t0 = sech_mass_before(width, center, grid.t0);
    }

    const ControlSchedule s = matched_schedule(h, p, opts);
    write_schedule_csv(out_path(cfg, "schedule.csv"), s, p);

    json results;
    results["cos_theta_first"] = s.cos_theta(0);
    results["cos_theta_max"] = s.cos_theta.maxCoeff();
    results["samples"] = s.grid.count;
    write_meta(cfg, "schedule", "match", results);
}

// --- fig2a ------------------------------------------------------------

void cmd_fig2a(const Config& cfg) {
    const SystemParams p = cfg.params();
    const TimeGrid grid = grid_from(cfg.grid.t0, cfg.grid.dt, cfg.grid.t1);
    const PulseEnvelope h = envelope_from_config(cfg, grid);
    const ControlSchedule s = matched_schedule(h, p);
    const DarkAmplitudeTrajectory traj = dark_amplitude(h, s, p);
    const PulseEnvelope residual = output_envelope(h, traj, p, s);
    const Complex d_in = traj.d(grid.count - 1);

    // the control is reversed at t_d >= the capture grid end; the pulse is
    // re-emitted as a mirror image about t_d
    const auto hold_steps =
        static_cast<Eigen::Index>(std::llround((cfg.storage.t_d - grid.t_end()) / grid.dt));
    if (hold_steps < 0) throw std::invalid_argument("fig2a: t_d before the pulse end");
    const double t_s = 2.0 * static_cast<double>(hold_steps) * grid.dt;
    const Complex d_hold = d_in * std::exp(-0.5 * p.gamma_0 * t_s);
    const ReleaseResult rel = release(d_hold, TimeReverse{}, s, p);

    const Eigen::Index n = grid.count;
    const Eigen::Index total = 2 * (n - 1 + hold_steps) + 1;
    const Eigen::Index offset = n - 1 + 2 * hold_steps;  // release start index

    // remaining stored amplitude during the release, by energy bookkeeping
    RealVector rel_energy =
        cumulative_trapezoid(rel.envelope.samples.cwiseAbs2(), grid.dt);

    const std::string path = out_path(cfg, "fig2a.csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "t,h_in,h_out,cos_theta,d\n";
    for (Eigen::Index i = 0; i < total; ++i) {
        const double t = grid.t0 + grid.dt * static_cast<double>(i);
        double h_in = 0.0, h_out = 0.0, cos_theta = 0.0, d = 0.0;
        if (i < n) {
            h_in = h.samples(i).real();
            h_out = residual.samples(i).real();
            cos_theta = s.cos_theta(i);
            d = std::abs(traj.d(i));
        } else if (i < offset) {
            d = std::abs(d_in) *
                std::exp(-0.5 * p.gamma_0 * grid.dt * static_cast<double>(i - (n - 1)));
        } else {
            const Eigen::Index k = i - offset;
            h_out = rel.envelope.samples(k).real();
            cos_theta = s.cos_theta(total - 1 - i);
            d = std::sqrt(std::max(0.0, std::norm(d_hold) - rel_energy(k)));
        }
        f << format_double(t) << ',' << format_double(h_in) << ',' << format_double(h_out)
          << ',' << format_double(cos_theta) << ',' << format_double(d) << '\n';
    }
    f.close();

    // mirror-shape deviation (unit-energy shapes, relative to the input peak)
    const double released_energy = envelope_norm(rel.envelope);
    const double peak = h.samples.cwiseAbs().maxCoeff();
    double mirror_error = 0.0;
    if (released_energy > 0.0) {
        const double scale = 1.0 / std::sqrt(released_energy);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double dev =
                std::abs(rel.envelope.samples(k) * scale - h.samples(n - 1 - k));
            mirror_error = std::max(mirror_error, dev / peak);
        }
    }

    json results;
    results["t_s"] = t_s;
    results["t_d"] = grid.t_end() + static_cast<double>(hold_steps) * grid.dt;
    results["d_in"] = std::abs(d_in);
    results["captured_energy"] = std::norm(d_in);
    results["released_energy"] = released_energy;
    results["energy_ratio"] = released_energy / std::norm(d_in);
    results["expected_ratio"] = std::exp(-p.gamma_0 * t_s);
    results["mirror_error"] = mirror_error;
    results["residual_capture_energy"] = envelope_norm(residual);
    write_meta(cfg, "fig2a", "fig2a", results);
}

// --- fig2b ------------------------------------------------------------

void cmd_fig2b(const Config& cfg) {
    const SystemParams p = cfg.params();
    const std::vector<double> ts = t_s_list(cfg);
    const MatchingMode mode = matching_from_config(cfg);
    const int threads = thread_override();

    PulseEnvelope h;
    const PulseEnvelope* h_ptr = nullptr;
    if (mode == MatchingMode::Simulated) {
        h = envelope_from_config(cfg, grid_from(cfg.grid.t0, cfg.grid.dt, cfg.grid.t1));
        h_ptr = &h;
    }

    const FockStateMatrix fock = make_fock(cfg.storage.fock_n, cfg.storage.dim);
    const FockStateMatrix squeezed =
        make_squeezed_vacuum(cfg.storage.squeeze_r, cfg.storage.dim);
    const auto f_fock = fidelity_sweep(fock, ts, p, mode, h_ptr, threads);
    const auto f_squeezed = fidelity_sweep(squeezed, ts, p, mode, h_ptr, threads);

    const std::string path = out_path(cfg, "fig2b.csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "t_s,f_fock,f_squeezed\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
        f << format_double(ts[i]) << ',' << format_double(f_fock[i].fidelity) << ','
          << format_double(f_squeezed[i].fidelity) << '\n';
    f.close();

    json results;
    results["fock_n"] = cfg.storage.fock_n;
    results["squeeze_r"] = cfg.storage.squeeze_r;
    results["squeezed_mean_photons"] = std::sinh(cfg.storage.squeeze_r) *
                                       std::sinh(cfg.storage.squeeze_r);
    results["rows"] = ts.size();
    write_meta(cfg, "fig2b", "fig2b", results);
}

// --- cycle and sweep --------------------------------------------------

void cmd_cycle(const Config& cfg) {
    const SystemParams p = cfg.params();
    const TimeGrid grid = grid_from(cfg.grid.t0, cfg.grid.dt, cfg.grid.t1);
    const PulseEnvelope h = envelope_from_config(cfg, grid);
    const FockStateMatrix rho = state_from_config(cfg);
    const CycleResult r = full_cycle(rho, h, p, cfg.storage.t_s, TimeReverse{},
                                     matching_from_config(cfg));

    json report;
    report["d_in"] = {r.d_in.real(), r.d_in.imag()};
    report["d_out"] = {r.d_out.real(), r.d_out.imag()};
    report["eta"] = r.eta;
    report["fidelity"] = r.fidelity;
    report["input_norm"] = r.input_norm;
    report["released_norm"] = r.released_norm;
    write_json(out_path(cfg, "cycle.json"), report);

    json results;
    results["t_s"] = cfg.storage.t_s;
    results["state"] = cfg.storage.state;
    write_meta(cfg, "cycle", "cycle", results);
}

void cmd_sweep(const Config& cfg) {
    const SystemParams p = cfg.params();
    const MatchingMode mode = matching_from_config(cfg);
    PulseEnvelope h;
    const PulseEnvelope* h_ptr = nullptr;
    if (mode == MatchingMode::Simulated) {
        h = envelope_from_config(cfg, grid_from(cfg.grid.t0, cfg.grid.dt, cfg.grid.t1));
        h_ptr = &h;
    }
    const auto points =
        fidelity_sweep(state_from_config(cfg), t_s_list(cfg), p, mode, h_ptr, thread_override());
    write_sweep_csv(out_path(cfg, "sweep.csv"), points);

    json results;
    results["state"] = cfg.storage.state;
    results["rows"] = points.size();
    write_meta(cfg, "sweep", "sweep", results);
}

// --- oracle-check -----------------------------------------------------

void cmd_oracle_check(const Config& cfg) {
    const SystemParams p = cfg.params();

    // (a) discretized-bath mode equations against the Markov capture law
    const TimeGrid fine = grid_from(cfg.grid.t0, cfg.bath.dt, cfg.grid.t1);
    const PulseEnvelope h_fine = envelope_from_config(cfg, fine);
    const ControlSchedule s = matched_schedule(h_fine, p);
    const TimeGrid ft_grid = grid_from(cfg.grid.t0, cfg.bath.ft_dt, cfg.grid.t1);
    const PulseEnvelope h_ft = envelope_from_config(cfg, ft_grid);

    const BathGrid bath =
        make_bath_grid(cfg.bath.bandwidth, cfg.bath.spacing, fine.span());
    const ComplexVector xi0 = discretize_input(h_ft, bath, fine.t0);
    const ModeTrajectory traj =
        integrate_mode_equations(xi0, s, bath, cfg.bath.reconstruct_stride);

    const DarkAmplitudeTrajectory markov = dark_amplitude(h_fine, s, p);
    const PulseEnvelope h_out_markov = output_envelope(h_fine, markov, p, s);

    double max_dev = 0.0, max_dev_phase = 0.0;
    for (Eigen::Index i = 0; i < fine.count; ++i) {
        max_dev = std::max(max_dev,
                           std::abs(std::abs(traj.dark(i)) - std::abs(markov.d(i))));
        max_dev_phase = std::max(max_dev_phase, std::abs(traj.dark(i) - kImag * markov.d(i)));
    }
    double max_dev_hout = 0.0;
    for (Eigen::Index i = 0; i < traj.h_out.grid.count; ++i)
        max_dev_hout = std::max(max_dev_hout,
                                std::abs(traj.h_out.samples(i) -
                                         h_out_markov.samples(i * cfg.bath.reconstruct_stride)));
    const double drift =
        (traj.norm_samples.array() - traj.norm_samples(0)).cwiseAbs().maxCoeff();

    // (b) Lambda-system capture at strong and weak collective coupling
    const double lw = cfg.bath.lambda_width;
    const TimeGrid lgrid = grid_from(0.0, cfg.bath.lambda_dt, 18.0 * lw);
    const PulseEnvelope h_l = make_sech_envelope(lw, 9.0 * lw, lgrid);
    const ControlSchedule s_l = matched_schedule(h_l, p);
    const BathGrid bath_l =
        make_bath_grid(cfg.bath.lambda_bandwidth, cfg.bath.lambda_spacing, lgrid.span());
    const double ideal_eff =
        std::norm(dark_amplitude(h_l, s_l, p).d(lgrid.count - 1));

    auto lambda_capture = [&](double margin, LambdaTrajectory* out) {
        SystemParams pm = p;
        pm.g_sqrt_n = std::sqrt(margin * pm.gamma * pm.gamma_a);
        RealVector omega(lgrid.count);
        for (Eigen::Index i = 0; i < lgrid.count; ++i)
            omega(i) = rabi_from_mixing_angle(s_l.cos_theta(i), pm);
        LambdaTrajectory lt = integrate_lambda_system(h_l, omega, pm, bath_l);
        const double eff = std::norm(lt.spin(lgrid.count - 1));
        if (out != nullptr) *out = std::move(lt);
        return eff;
    };
    LambdaTrajectory lt_good;
    const double eff_good = lambda_capture(cfg.bath.adiabatic_margin, &lt_good);
    const double eff_bad = lambda_capture(cfg.bath.violation_margin, nullptr);

    SystemParams p_good = p;
    p_good.g_sqrt_n = std::sqrt(cfg.bath.adiabatic_margin * p.gamma * p.gamma_a);
    const AdiabaticityMargins margins = adiabaticity_margins(p_good, 0.0, lw);

    const bool pass = max_dev <= 2e-2 && drift <= 1e-8 &&
                      eff_good >= 0.95 * ideal_eff && eff_bad <= 0.5 &&
                      margins.adiabatic();

    json report;
    report["max_dev"] = max_dev;
    report["max_dev_h_out"] = max_dev_hout;
    report["max_dev_phase"] = max_dev_phase;
    report["norm_drift"] = drift;
    report["adiabatic_margins"] = {{"vs_cavity_loss", margins.vs_cavity_loss},
                                   {"vs_pulse_rate", margins.vs_pulse_rate},
                                   {"vs_mixed", margins.vs_mixed},
                                   {"adiabatic", margins.adiabatic()}};
    report["capture"] = {{"adiabatic_efficiency", eff_good},
                         {"ideal_efficiency", ideal_eff},
                         {"violation_efficiency", eff_bad},
                         {"capture_failed_at_low_coupling", eff_bad <= 0.5}};
    report["verdict"] = pass ? "pass" : "fail";
    write_json(out_path(cfg, "oracle_check.json"), report);

    if (cfg.output.trajectories) {
        write_mode_trajectory_csv(out_path(cfg, "mode_trajectory.csv"), traj);
        write_lambda_trajectory_csv(out_path(cfg, "lambda_trajectory.csv"), lt_good, s_l);
    }

    json results;
    results["verdict"] = pass ? "pass" : "fail";
    write_meta(cfg, "oracle_check", "oracle-check", results);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavmem: adiabatic photon storage in a driven Lambda-atom cavity"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    bool dump_defaults = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_flag("--dump-defaults", dump_defaults, "print the default config and exit");

    MatchArgs match_args;
    auto* match = app.add_subcommand("match", "impedance-matched control schedule");
    match->add_option("--sech", match_args.sech, "sech pulse: width center")->expected(2);
    match->add_option("--grid", match_args.grid_spec, "grid as t0:dt:t1");
    match->add_option("--envelope", match_args.envelope_file, "input envelope CSV");

    auto* fig2a = app.add_subcommand("fig2a", "capture-hold-release trace");
    auto* fig2b = app.add_subcommand("fig2b", "fidelity vs storage time curves");
    auto* cycle = app.add_subcommand("cycle", "single memory cycle report");
    auto* sweep = app.add_subcommand("sweep", "fidelity sweep CSV");
    auto* oracle = app.add_subcommand("oracle-check", "discretized-bath validation report");
    for (auto* sub : {match, fig2a, fig2b, cycle, sweep, oracle}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (dump_defaults) {
        std::cout << cavmem::cli::to_json(cavmem::cli::default_config()).dump(2) << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }

    try {
        Config cfg =
            config_path.empty() ? cavmem::cli::default_config() : cavmem::cli::load_config(config_path);
        if (!out_dir.empty()) cfg.output.dir = out_dir;

        if (match->parsed()) cmd_match(cfg, match_args);
        if (fig2a->parsed()) cmd_fig2a(cfg);
        if (fig2b->parsed()) cmd_fig2b(cfg);
        if (cycle->parsed()) cmd_cycle(cfg);
        if (sweep->parsed()) cmd_sweep(cfg);
        if (oracle->parsed()) cmd_oracle_check(cfg);
        return 0;
    } catch (const UnmatchableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CutoffError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const BathGridError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const StepSizeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
