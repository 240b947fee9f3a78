#include "config.hpp"

#include <fstream>

namespace cavmem::cli {

using nlohmann::json;

json to_json(const Config& c) {
    json j;
    j["grid"] = {{"t0", c.grid.t0}, {"dt", c.grid.dt}, {"t1", c.grid.t1}};
    j["pulse"] = {{"shape", c.pulse.shape},
                  {"width", c.pulse.width},
                  {"center", c.pulse.center},
                  {"envelope_file", c.pulse.envelope_file}};
    j["system"] = {{"g_sqrt_n", c.system.g_sqrt_n},
                   {"gamma_a", c.system.gamma_a},
                   {"gamma_0", c.system.gamma_0},
                   {"n_atoms", c.system.n_atoms}};
    j["storage"] = {{"t_d", c.storage.t_d},
                    {"t_s", c.storage.t_s},
                    {"state", c.storage.state},
                    {"fock_n", c.storage.fock_n},
                    {"squeeze_r", c.storage.squeeze_r},
                    {"dim", c.storage.dim},
                    {"t_s_min", c.storage.t_s_min},
                    {"t_s_max", c.storage.t_s_max},
                    {"t_s_count", c.storage.t_s_count},
                    {"matching", c.storage.matching}};
    j["bath"] = {{"bandwidth", c.bath.bandwidth},
                 {"spacing", c.bath.spacing},
                 {"dt", c.bath.dt},
                 {"ft_dt", c.bath.ft_dt},
                 {"reconstruct_stride", c.bath.reconstruct_stride},
                 {"adiabatic_margin", c.bath.adiabatic_margin},
                 {"violation_margin", c.bath.violation_margin},
                 {"lambda_bandwidth", c.bath.lambda_bandwidth},
                 {"lambda_spacing", c.bath.lambda_spacing},
                 {"lambda_width", c.bath.lambda_width},
                 {"lambda_dt", c.bath.lambda_dt}};
    j["output"] = {{"dir", c.output.dir}, {"trajectories", c.output.trajectories}};
    return j;
}

namespace {

// Overlay known keys; unknown keys are configuration errors.
template <typename T>
void pick(const json& section, const char* key, T& value) {
    if (section.contains(key)) value = section.at(key).get<T>();
}

void check_keys(const json& section, std::initializer_list<const char*> known,
                const std::string& where) {
    for (const auto& [key, _] : section.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument("config: unknown key " + where + "." + key);
    }
}

}  // namespace

Config default_config() { return Config{}; }

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }

    Config c;
    check_keys(j, {"grid", "pulse", "system", "storage", "bath", "output"}, "");
    if (j.contains("grid")) {
        const auto& s = j["grid"];
        check_keys(s, {"t0", "dt", "t1"}, "grid");
        pick(s, "t0", c.grid.t0);
        pick(s, "dt", c.grid.dt);
        pick(s, "t1", c.grid.t1);
    }
    if (j.contains("pulse")) {
        const auto& s = j["pulse"];
        check_keys(s, {"shape", "width", "center", "envelope_file"}, "pulse");
        pick(s, "shape", c.pulse.shape);
        pick(s, "width", c.pulse.width);
        pick(s, "center", c.pulse.center);
        pick(s, "envelope_file", c.pulse.envelope_file);
    }
    if (j.contains("system")) {
        const auto& s = j["system"];
        check_keys(s, {"g_sqrt_n", "gamma_a", "gamma_0", "n_atoms"}, "system");
        pick(s, "g_sqrt_n", c.system.g_sqrt_n);
        pick(s, "gamma_a", c.system.gamma_a);
        pick(s, "gamma_0", c.system.gamma_0);
        pick(s, "n_atoms", c.system.n_atoms);
    }
    if (j.contains("storage")) {
        const auto& s = j["storage"];
        check_keys(s,
                   {"t_d", "t_s", "state", "fock_n", "squeeze_r", "dim", "t_s_min", "t_s_max",
                    "t_s_count", "matching"},
                   "storage");
        pick(s, "t_d", c.storage.t_d);
        pick(s, "t_s", c.storage.t_s);
        pick(s, "state", c.storage.state);
        pick(s, "fock_n", c.storage.fock_n);
        pick(s, "squeeze_r", c.storage.squeeze_r);
        pick(s, "dim", c.storage.dim);
        pick(s, "t_s_min", c.storage.t_s_min);
        pick(s, "t_s_max", c.storage.t_s_max);
        pick(s, "t_s_count", c.storage.t_s_count);
        pick(s, "matching", c.storage.matching);
    }
    if (j.contains("bath")) {
        const auto& s = j["bath"];
        check_keys(s,
                   {"bandwidth", "spacing", "dt", "ft_dt", "reconstruct_stride",
                    "adiabatic_margin", "violation_margin", "lambda_bandwidth",
                    "lambda_spacing", "lambda_width", "lambda_dt"},
                   "bath");
        pick(s, "bandwidth", c.bath.bandwidth);
        pick(s, "spacing", c.bath.spacing);
        pick(s, "dt", c.bath.dt);
        pick(s, "ft_dt", c.bath.ft_dt);
        long stride = c.bath.reconstruct_stride;
        pick(s, "reconstruct_stride", stride);
        c.bath.reconstruct_stride = stride;
        pick(s, "adiabatic_margin", c.bath.adiabatic_margin);
        pick(s, "violation_margin", c.bath.violation_margin);
        pick(s, "lambda_bandwidth", c.bath.lambda_bandwidth);
        pick(s, "lambda_spacing", c.bath.lambda_spacing);
        pick(s, "lambda_width", c.bath.lambda_width);
        pick(s, "lambda_dt", c.bath.lambda_dt);
    }
    if (j.contains("output")) {
        const auto& s = j["output"];
        check_keys(s, {"dir", "trajectories"}, "output");
        pick(s, "dir", c.output.dir);
        pick(s, "trajectories", c.output.trajectories);
    }
    return c;
}

}  // namespace cavmem::cli
