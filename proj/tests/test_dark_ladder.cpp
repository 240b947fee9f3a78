#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cavmem/channels.hpp"
#include "cavmem/dark_ladder.hpp"
#include "cavmem/impedance.hpp"
#include "oracle_helpers.hpp"

using namespace cavmem;

namespace {
SystemParams params(double g_sqrt_n = 10.0) {
    SystemParams p;
    p.g_sqrt_n = g_sqrt_n;
    return p;
}
}  // namespace

TEST_CASE("mixing angle") {
    const SystemParams p = params(10.0);
    CHECK(mixing_angle_from_rabi(10.0, p) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(mixing_angle_from_rabi(0.0, p) == 0.0);
    CHECK(mixing_angle_from_rabi(3.0, params(4.0)) == doctest::Approx(0.6));
    CHECK_THROWS_AS(mixing_angle_from_rabi(-1.0, p), std::invalid_argument);

    // monotone, saturating at 1
    double prev = -1.0;
    for (double omega : {0.0, 0.5, 1.0, 5.0, 50.0, 5000.0}) {
        const double c = mixing_angle_from_rabi(omega, p);
        CHECK(c > prev);
        prev = c;
    }
    CHECK(mixing_angle_from_rabi(1e8, p) == doctest::Approx(1.0));
}

TEST_CASE("rabi from mixing angle") {
    CHECK(rabi_from_mixing_angle(1.0 / std::sqrt(2.0), params(10.0)) == doctest::Approx(10.0));
    CHECK(rabi_from_mixing_angle(0.0, params(10.0)) == 0.0);
    CHECK(rabi_from_mixing_angle(0.6, params(4.0)) == doctest::Approx(3.0));
    CHECK_THROWS_AS(rabi_from_mixing_angle(1.0, params()), std::invalid_argument);
    CHECK_THROWS_AS(rabi_from_mixing_angle(-0.1, params()), std::invalid_argument);
    CHECK_THROWS_AS(rabi_from_mixing_angle(1.2, params()), std::invalid_argument);

    // round trip to 1e-12
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(0.0, 60.0);
    for (int i = 0; i < 50; ++i) {
        const double omega = u(gen);
        const double c = mixing_angle_from_rabi(omega, params(10.0));
        CHECK(std::abs(rabi_from_mixing_angle(c, params(10.0)) - omega) <= 1e-12 * (1.0 + omega));
    }
}

TEST_CASE("dark state coefficients") {
    const SystemParams p = params(10.0);

    const RealVector one = dark_state_coeffs(1, 10.0, p);
    CHECK(one(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(one(1) == doctest::Approx(-1.0 / std::sqrt(2.0)));

    const RealVector two = dark_state_coeffs(2, 10.0, p);
    CHECK(two(0) == doctest::Approx(0.5));
    CHECK(two(1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(two(2) == doctest::Approx(0.5));

    const RealVector three = dark_state_coeffs(3, 100.0 * 10.0, p);
    CHECK(three(0) >= 1.0 - 2e-4);

    CHECK_THROWS_AS(dark_state_coeffs(-1, 1.0, p), std::invalid_argument);
}

TEST_CASE("dark state coefficients: normalization and asymptotics") {
    const SystemParams p = params(10.0);
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(-2.0, 3.0);
    for (int n = 0; n <= 20; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            const double omega = std::pow(10.0, u(gen));
            const RealVector c = dark_state_coeffs(n, omega, p);
            CHECK(std::abs(c.squaredNorm() - 1.0) <= 1e-12);
        }
    }
    // photon-like and atom-like limits
    for (int n = 1; n <= 10; ++n) {
        CHECK(std::abs(dark_state_coeffs(n, 100.0 * 10.0, p)(0)) >= 1.0 - 1e-3);
        CHECK(std::abs(dark_state_coeffs(n, 0.01 * 10.0, p)(n)) >= 1.0 - 1e-3);
    }
    CHECK(std::abs(dark_state_coeffs(5, 0.0, p)(5)) == doctest::Approx(1.0));
}

TEST_CASE("dark amplitude: matched sech follows the closed form") {
    // t_c - 9 widths: the closed form carries the pre-grid tail, so the grid
    // has to start where that tail is below the tolerance
    const double width = 10.0, t_c = 90.0;
    const TimeGrid grid{0.0, 0.01, 18001};
    // raw samples plus the analytic left tail keep the matched formula exact
    // from the first grid point
    const PulseEnvelope h = sech_samples(width, t_c, grid);
    const SystemParams p = params();
    MatchedScheduleOptions opts;
    opts.mass_before_t0 = sech_mass_before(width, t_c, grid.t0);
    const ControlSchedule s = matched_schedule(h, p, opts);
    const DarkAmplitudeTrajectory traj = dark_amplitude(h, s, p);

    double worst = 0.0;
    for (Eigen::Index i = 0; i < grid.count; ++i) {
        const double expected =
            std::sqrt(0.5 * (1.0 + std::tanh((grid.time(i) - t_c) / width)));
        worst = std::max(worst, std::abs(std::abs(traj.d(i)) - expected));
    }
    CHECK(worst <= 2e-4);
    CHECK(std::abs(traj.d(grid.count - 1)) >= 0.9999);

    // capture amplitude is non-decreasing for the matched schedule
    for (Eigen::Index i = 1; i < grid.count; ++i)
        CHECK(std::abs(traj.d(i)) + 1e-12 >= std::abs(traj.d(i - 1)));
}

TEST_CASE("dark amplitude: degenerate and error paths") {
    const TimeGrid grid{0.0, 0.01, 2001};
    const SystemParams p = params();

    PulseEnvelope zero{grid, ComplexVector::Zero(grid.count)};
    ControlSchedule half{grid, RealVector::Constant(grid.count, 0.5)};
    const DarkAmplitudeTrajectory dz = dark_amplitude(zero, half, p);
    CHECK(dz.d.cwiseAbs().maxCoeff() == 0.0);

    const PulseEnvelope h = make_sech_envelope(1.0, 10.0, grid);
    ControlSchedule off{grid, RealVector::Zero(grid.count)};
    CHECK(dark_amplitude(h, off, p).d.cwiseAbs().maxCoeff() == 0.0);

    // grid mismatch and unnormalized input
    ControlSchedule other{TimeGrid{0.0, 0.02, 2001}, RealVector::Constant(2001, 0.5)};
    CHECK_THROWS_AS(dark_amplitude(h, other, p), std::invalid_argument);
    PulseEnvelope big = h;
    big.samples *= 2.0;
    CHECK_THROWS_AS(dark_amplitude(big, half, p), std::invalid_argument);
}

TEST_CASE("dark amplitude: single pass equals double quadrature") {
    const TimeGrid grid{0.0, 0.02, 2001};
    const PulseEnvelope h = make_sech_envelope(2.0, 20.0, grid);
    const SystemParams p = params();
    std::mt19937 gen(5);
    const ControlSchedule s = oracle::random_schedule(gen, grid);

    const DarkAmplitudeTrajectory fast = dark_amplitude(h, s, p);
    const ComplexVector slow = oracle::dark_amplitude_naive(h, s);
    CHECK((fast.d - slow).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("output envelope") {
    const SystemParams p = params();

    SUBCASE("matched schedule traps everything") {
        const TimeGrid grid{0.0, 0.01, 16001};
        const PulseEnvelope h = make_sech_envelope(10.0, 80.0, grid);
        const ControlSchedule s = matched_schedule(h, p);
        const DarkAmplitudeTrajectory traj = dark_amplitude(h, s, p);
        const PulseEnvelope out = output_envelope(h, traj, p, s);
        CHECK(envelope_norm(out) <= 1e-4);
    }

    SUBCASE("decoupled field passes through") {
        const TimeGrid grid{0.0, 0.01, 2001};
        const PulseEnvelope h = make_sech_envelope(1.0, 10.0, grid);
        ControlSchedule off{grid, RealVector::Zero(grid.count)};
        const DarkAmplitudeTrajectory traj = dark_amplitude(h, off, p);
        const PulseEnvelope out = output_envelope(h, traj, p, off);
        CHECK((out.samples - h.samples).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("empty cavity reflects a quasi-monochromatic pulse with a sign flip") {
        const double width = 100.0, t_c = 800.0;
        const TimeGrid grid{0.0, 0.05, 32001};
        const PulseEnvelope h = make_sech_envelope(width, t_c, grid);
        ControlSchedule open{grid, RealVector::Constant(grid.count, 1.0)};
        const DarkAmplitudeTrajectory traj = dark_amplitude(h, open, p);
        const PulseEnvelope out = output_envelope(h, traj, p, open);
        const Eigen::Index mid = 16000;
        CHECK(std::abs(out.samples(mid) + h.samples(mid)) <= 0.05 * std::abs(h.samples(mid)));
    }

    SUBCASE("probability conservation for arbitrary schedules") {
        const TimeGrid grid{0.0, 0.0025, 24001};
        std::mt19937 gen(17);
        for (int trial = 0; trial < 100; ++trial) {
            const PulseEnvelope h = oracle::random_envelope(gen, grid);
            const ControlSchedule s = oracle::random_schedule(gen, grid);
            const DarkAmplitudeTrajectory traj = dark_amplitude(h, s, p);
            const PulseEnvelope out = output_envelope(h, traj, p, s);
            const double total =
                envelope_norm(out) + std::norm(traj.d(grid.count - 1));
            CHECK(std::abs(total - 1.0) <= 1e-6);
        }
    }
}

TEST_CASE("capture channel") {
    SUBCASE("unit capture is the pure phase map") {
        std::mt19937 gen(23);
        const FockStateMatrix rho{oracle::random_density(gen, 5)};
        const FockStateMatrix out = capture_channel(rho, 1.0);
        CHECK(out.rho.trace().real() == doctest::Approx(1.0));
        for (int n = 0; n < 5; ++n)
            for (int m = 0; m < 5; ++m) {
                const Complex phase = std::pow(Complex(0, -1), n) * std::pow(Complex(0, 1), m);
                CHECK(std::abs(out.rho(n, m) - phase * rho.rho(n, m)) <= 1e-12);
            }
    }

    SUBCASE("single photon splits between survival and vacuum") {
        const FockStateMatrix one = make_fock(1, 2);
        for (double eta : {0.0, 0.3, 0.7, 1.0}) {
            const FockStateMatrix out = capture_channel(one, std::sqrt(eta));
            CHECK(out.rho(1, 1).real() == doctest::Approx(eta));
            CHECK(out.rho(0, 0).real() == doctest::Approx(1.0 - eta));
            // two-mode beam-splitter oracle at cutoff 2
            ComplexVector alpha(2);
            alpha << 0.0, 1.0;
            const ComplexMatrix ref = oracle::damp_pure(alpha, eta);
            CHECK((out.rho.cwiseAbs() - ref.cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }

    SUBCASE("vacuum is untouched, bad amplitudes rejected") {
        const FockStateMatrix vac = make_fock(0, 3);
        const FockStateMatrix out = capture_channel(vac, 0.3 * kImag);
        CHECK((out.rho - vac.rho).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK_THROWS_AS(capture_channel(vac, 1.2), std::invalid_argument);
    }

    SUBCASE("trace non-increasing and channel composition") {
        std::mt19937 gen(29);
        const FockStateMatrix rho{oracle::random_density(gen, 6)};
        const Complex d1 = Complex(0.6, 0.3);
        const Complex d2 = Complex(0.2, -0.7);
        const FockStateMatrix once = capture_channel(rho, d1);
        CHECK(once.rho.trace().real() <= 1.0 + 1e-12);
        const FockStateMatrix twice = capture_channel(once, d2);
        // composition of pure-loss channels is pure loss with tau1 tau2
        const ComplexMatrix direct =
            apply_loss(rho.rho, (-kImag * d1) * (-kImag * d2));
        CHECK((twice.rho - direct).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("complete positivity via the Choi matrix") {
        for (double eta : {0.25, 0.8}) {
            const Eigen::Index dim = 6;
            const Complex tau = std::sqrt(eta) * std::polar(1.0, 0.7);
            ComplexMatrix choi = ComplexMatrix::Zero(dim * dim, dim * dim);
            for (Eigen::Index i = 0; i < dim; ++i)
                for (Eigen::Index j = 0; j < dim; ++j) {
                    ComplexMatrix unit = ComplexMatrix::Zero(dim, dim);
                    unit(i, j) = 1.0;
                    const ComplexMatrix mapped = apply_loss(unit, tau);
                    for (Eigen::Index a = 0; a < dim; ++a)
                        for (Eigen::Index b = 0; b < dim; ++b)
                            choi(a * dim + i, b * dim + j) = mapped(a, b);
                }
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(choi, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        }
    }

    SUBCASE("pure projection mode renormalizes the retained branch") {
        ComplexMatrix plus = ComplexMatrix::Zero(3, 3);
        plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
        const FockStateMatrix rho{plus};
        const double d = 0.6;
        const FockStateMatrix out = capture_channel(rho, d, CaptureModel::PureProjection);
        CHECK(out.rho.trace().real() == doctest::Approx(1.0));
        // amplitudes alpha_k -> alpha_k d^k, renormalized
        const double w1 = d * d / (1.0 + d * d);
        CHECK(out.rho(1, 1).real() == doctest::Approx(w1));
    }
}
