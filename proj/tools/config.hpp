// config.hpp — CLI configuration: one JSON document with sections
// {grid, pulse, system, storage, bath, output}, all defaults embedded.

#pragma once

#include <json.hpp>

#include <string>

#include "cavmem/dark_ladder.hpp"

namespace cavmem::cli {

struct GridConfig {
    double t0 = 0.0;
    double dt = 0.01;
    double t1 = 180.0;
};

struct PulseConfig {
    std::string shape = "sech";  // "sech" or "file"
    double width = 10.0;
    double center = 90.0;
    std::string envelope_file;
};

struct SystemConfig {
    double g_sqrt_n = 31.6227766016838;  // g^2 N = 100 gamma gamma_a
    double gamma_a = 10.0;
    double gamma_0 = 1e-3;
    double n_atoms = 1e6;
};

struct StorageConfig {
    double t_d = 190.0;   // control-reversal time (fig2a)
    double t_s = 20.0;    // storage time (cycle)
    std::string state = "fock";
    int fock_n = 1;
    double squeeze_r = 0.881373587019543;  // mean photon number 1
    int dim = 40;
    double t_s_min = 0.0;
    double t_s_max = 2000.0;
    int t_s_count = 21;
    std::string matching = "ideal";  // "ideal" or "simulated"
};

struct BathConfig {
    double bandwidth = 200.0;
    double spacing = 0.02;
    double dt = 5e-4;
    double ft_dt = 0.01;  // envelope sampling for the mode transform
    Eigen::Index reconstruct_stride = 16;
    // Lambda-system scenarios: coupling margins g^2 N / (gamma gamma_a)
    double adiabatic_margin = 100.0;
    double violation_margin = 0.1;
    double lambda_bandwidth = 100.0;
    double lambda_spacing = 0.04;
    double lambda_width = 4.0;
    double lambda_dt = 1e-3;
};

struct OutputConfig {
    std::string dir = ".";
    bool trajectories = false;
};

struct Config {
    GridConfig grid;
    PulseConfig pulse;
    SystemConfig system;
    StorageConfig storage;
    BathConfig bath;
    OutputConfig output;

    SystemParams params() const {
        SystemParams p;
        p.g_sqrt_n = system.g_sqrt_n;
        p.gamma_a = system.gamma_a;
        p.gamma_0 = system.gamma_0;
        p.n_atoms = system.n_atoms;
        return p;
    }
};

nlohmann::json to_json(const Config& c);
Config load_config(const std::string& path);  // defaults overlaid with the file
Config default_config();

}  // namespace cavmem::cli
