#include "cavmem/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cavmem {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, const std::string& path) {
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) throw std::runtime_error(path + ": bad numeric cell '" + cell + "'");
    return v;
}

// Check uniform spacing and return the grid.
TimeGrid grid_from_times(const std::vector<double>& t, const std::string& path) {
    if (t.size() < 2) throw std::runtime_error(path + ": need at least 2 rows");
    const double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw std::runtime_error(path + ": time column must increase");
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double expected = t[0] + dt * static_cast<double>(i);
        if (std::abs(t[i] - expected) > 1e-6 * dt)
            throw std::runtime_error(path + ": non-uniform time spacing at row " +
                                     std::to_string(i + 2));
    }
    return TimeGrid{t[0], dt, static_cast<Eigen::Index>(t.size())};
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
    table.header = split_line(line);

    std::vector<std::vector<double>> cols(table.header.size());
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error(path + ": row width does not match header");
        for (std::size_t c = 0; c < cells.size(); ++c)
            cols[c].push_back(parse_cell(cells[c], path));
    }
    table.columns.reserve(cols.size());
    for (auto& c : cols)
        table.columns.push_back(Eigen::Map<RealVector>(c.data(), static_cast<Eigen::Index>(c.size())));
    return table;
}

PulseEnvelope read_envelope_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header.size() != 3 || t.header[0] != "t" || t.header[1] != "re" || t.header[2] != "im")
        throw std::runtime_error(path + ": expected header t,re,im");
    std::vector<double> times(t.columns[0].data(), t.columns[0].data() + t.columns[0].size());
    PulseEnvelope h;
    h.grid = grid_from_times(times, path);
    h.samples.resize(h.grid.count);
    for (Eigen::Index i = 0; i < h.grid.count; ++i)
        h.samples(i) = Complex(t.columns[1](i), t.columns[2](i));
    validate_envelope(h);
    return h;
}

void write_envelope_csv(const std::string& path, const PulseEnvelope& h) {
    validate_envelope(h);
    auto f = open_out(path);
    f << "t,re,im\n";
    for (Eigen::Index i = 0; i < h.grid.count; ++i)
        f << format_double(h.grid.time(i)) << ',' << format_double(h.samples(i).real()) << ','
          << format_double(h.samples(i).imag()) << '\n';
}

void write_trajectory_csv(const std::string& path, const DarkAmplitudeTrajectory& traj) {
    auto f = open_out(path);
    f << "t,re,im\n";
    for (Eigen::Index i = 0; i < traj.grid.count; ++i)
        f << format_double(traj.grid.time(i)) << ',' << format_double(traj.d(i).real()) << ','
          << format_double(traj.d(i).imag()) << '\n';
}

ControlSchedule read_schedule_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header.size() != 3 || t.header[0] != "t" || t.header[1] != "cos_theta" ||
        t.header[2] != "omega")
        throw std::runtime_error(path + ": expected header t,cos_theta,omega");
    std::vector<double> times(t.columns[0].data(), t.columns[0].data() + t.columns[0].size());
    ControlSchedule s;
    s.grid = grid_from_times(times, path);
    s.cos_theta = t.columns[1];
    validate_schedule(s);
    return s;
}

void write_schedule_csv(const std::string& path, const ControlSchedule& s,
                        const SystemParams& p) {
    validate_schedule(s);
    auto f = open_out(path);
    f << "t,cos_theta,omega\n";
    for (Eigen::Index i = 0; i < s.grid.count; ++i) {
        f << format_double(s.grid.time(i)) << ',' << format_double(s.cos_theta(i)) << ',';
        if (s.cos_theta(i) < 1.0) f << format_double(rabi_from_mixing_angle(s.cos_theta(i), p));
        f << '\n';
    }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points) {
    auto f = open_out(path);
    f << "t_s,fidelity,eta,trace_out\n";
    for (const auto& pt : points)
        f << format_double(pt.t_s) << ',' << format_double(pt.fidelity) << ','
          << format_double(pt.eta) << ',' << format_double(pt.trace_out) << '\n';
}

void write_mode_trajectory_csv(const std::string& path, const ModeTrajectory& traj,
                               Eigen::Index stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    auto f = open_out(path);
    f << "t,abs_D,re_D,im_D,norm\n";
    const Eigen::Index step = traj.sample_stride * stride;
    for (Eigen::Index i = 0; i < traj.dark.size(); i += step) {
        const Complex d = traj.dark(i);
        f << format_double(traj.grid.time(i)) << ',' << format_double(std::abs(d)) << ','
          << format_double(d.real()) << ',' << format_double(d.imag()) << ','
          << format_double(traj.norm_samples(i / traj.sample_stride)) << '\n';
    }
}

void write_lambda_trajectory_csv(const std::string& path, const LambdaTrajectory& traj,
                                 const ControlSchedule& s, Eigen::Index stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    require_same_grid(traj.grid, s.grid, "write_lambda_trajectory_csv");
    auto f = open_out(path);
    f << "t,abs_D,re_D,im_D,norm,pop_e,pop_p,pop_s\n";
    const Eigen::Index step = traj.sample_stride * stride;
    for (Eigen::Index i = 0; i < traj.cavity.size(); i += step) {
        const double c = s.cos_theta(i);
        const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
        const Complex d = c * traj.cavity(i) - sn * traj.spin(i);
        f << format_double(traj.grid.time(i)) << ',' << format_double(std::abs(d)) << ','
          << format_double(d.real()) << ',' << format_double(d.imag()) << ','
          << format_double(traj.norm_samples(i / traj.sample_stride)) << ','
          << format_double(std::norm(traj.cavity(i))) << ','
          << format_double(std::norm(traj.excited(i))) << ','
          << format_double(std::norm(traj.spin(i))) << '\n';
    }
}

}  // namespace cavmem
