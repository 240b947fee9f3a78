#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cavmem/io.hpp"

using namespace cavmem;

namespace {
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("envelope CSV round trip is exact") {
    const TimeGrid grid{-3.0, 0.037, 64};
    ComplexVector samples(grid.count);
    for (Eigen::Index i = 0; i < grid.count; ++i)
        samples(i) = Complex(std::sin(0.1 * i) / 3.0, std::cos(0.2 * i) / 7.0);
    const PulseEnvelope h{grid, samples};

    TempFile f("envelope.csv");
    write_envelope_csv(f.path, h);
    const PulseEnvelope back = read_envelope_csv(f.path);
    CHECK(back.grid.count == grid.count);
    CHECK(back.grid.t0 == grid.t0);
    CHECK((back.samples - h.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("envelope reader validates the format") {
    TempFile f("bad_envelope.csv");

    SUBCASE("non-uniform spacing") {
        std::ofstream out(f.path);
        out << "t,re,im\n0,1,0\n0.1,1,0\n0.25,1,0\n0.3,1,0\n0.4,1,0\n0.5,1,0\n0.6,1,0\n0.7,1,0\n";
        out.close();
        CHECK_THROWS_AS(read_envelope_csv(f.path), std::runtime_error);
    }

    SUBCASE("wrong header") {
        std::ofstream out(f.path);
        out << "time,x,y\n0,1,0\n";
        out.close();
        CHECK_THROWS_AS(read_envelope_csv(f.path), std::runtime_error);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_envelope_csv("does_not_exist.csv"), std::runtime_error);
    }
}

TEST_CASE("schedule CSV: omega column blank at full transparency") {
    const TimeGrid grid{0.0, 0.5, 9};
    RealVector cos_theta(9);
    cos_theta << 0.0, 0.2, 0.5, 0.8, 1.0, 0.8, 0.5, 0.2, 0.0;
    const ControlSchedule s{grid, cos_theta};
    SystemParams p;
    p.g_sqrt_n = 10.0;

    TempFile f("schedule.csv");
    write_schedule_csv(f.path, s, p);

    const CsvTable t = read_csv(f.path);
    REQUIRE(t.header.size() == 3);
    CHECK(std::isnan(t.columns[2](4)));          // blank omega at cos_theta = 1
    CHECK(t.columns[2](3) == doctest::Approx(rabi_from_mixing_angle(0.8, p)));

    const ControlSchedule back = read_schedule_csv(f.path);
    CHECK((back.cos_theta - cos_theta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sweep CSV is loadable by the generic reader") {
    std::vector<SweepPoint> pts = {{0.0, 1.0, 1.0, 1.0}, {10.0, 0.99, 0.99, 1.0}};
    TempFile f("sweep.csv");
    write_sweep_csv(f.path, pts);
    const CsvTable t = read_csv(f.path);
    REQUIRE(t.header.size() == 4);
    CHECK(t.header[0] == "t_s");
    CHECK(t.columns[1](1) == 0.99);
}

TEST_CASE("trajectory dumps are loadable") {
    // tiny oracle run to exercise the dump writers end to end
    const TimeGrid grid{0.0, 0.005, 2001};
    const PulseEnvelope h = make_sech_envelope(0.65, 5.0, grid);
    const BathGrid bath = make_bath_grid(20.0, 0.2, grid.span());
    const ControlSchedule s{grid, RealVector::Constant(grid.count, 0.4)};
    const ComplexVector xi0 = discretize_input(h, bath, 0.0);
    const ModeTrajectory mode = integrate_mode_equations(xi0, s, bath, 10);

    TempFile fm("mode_dump.csv");
    write_mode_trajectory_csv(fm.path, mode);
    const CsvTable tm = read_csv(fm.path);
    REQUIRE(tm.header.size() == 5);
    CHECK(tm.header[1] == "abs_D");
    CHECK(tm.header[4] == "norm");
    CHECK(std::abs(tm.columns[4](0) - 1.0) <= 1e-9);

    SystemParams p;
    p.g_sqrt_n = 10.0;
    RealVector omega(grid.count);
    for (Eigen::Index i = 0; i < grid.count; ++i)
        omega(i) = rabi_from_mixing_angle(s.cos_theta(i), p);
    const LambdaTrajectory lam = integrate_lambda_system(h, omega, p, bath);
    TempFile fl("lambda_dump.csv");
    write_lambda_trajectory_csv(fl.path, lam, s);
    const CsvTable tl = read_csv(fl.path);
    REQUIRE(tl.header.size() == 8);
    CHECK(tl.header[5] == "pop_e");
    CHECK(tl.header[7] == "pop_s");

    // dark-amplitude trajectories reuse the envelope format
    const DarkAmplitudeTrajectory traj = dark_amplitude(h, s, p);
    TempFile ft("dark_dump.csv");
    write_trajectory_csv(ft.path, traj);
    const PulseEnvelope as_envelope = read_envelope_csv(ft.path);
    CHECK((as_envelope.samples - traj.d).cwiseAbs().maxCoeff() == 0.0);
}
