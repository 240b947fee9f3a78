#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cavmem/errors.hpp"
#include "cavmem/states.hpp"
#include "oracle_helpers.hpp"

using namespace cavmem;

TEST_CASE("fock projectors") {
    const FockStateMatrix vac = make_fock(0, 4);
    CHECK(vac.rho(0, 0).real() == doctest::Approx(1.0));
    CHECK(vac.rho.cwiseAbs().sum() == doctest::Approx(1.0));

    const FockStateMatrix one = make_fock(1, 4);
    CHECK(one.rho(1, 1).real() == doctest::Approx(1.0));
    CHECK(one.rho.trace().real() == doctest::Approx(1.0));
    CHECK(purity(one) == doctest::Approx(1.0));
    CHECK_NOTHROW(validate_state(one));

    CHECK_THROWS_AS(make_fock(4, 4), CutoffError);
    CHECK_THROWS_AS(make_fock(-1, 4), std::invalid_argument);
}

TEST_CASE("squeezed vacuum basics") {
    const FockStateMatrix vac = make_squeezed_vacuum(0.0, 8);
    CHECK(vac.rho(0, 0).real() == doctest::Approx(1.0));

    const double r = 0.5;
    const FockStateMatrix sq = make_squeezed_vacuum(r, 32);
    CHECK_NOTHROW(validate_state(sq));
    CHECK(sq.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(sq) == doctest::Approx(1.0).epsilon(1e-12));

    // odd-photon content vanishes by parity
    CHECK(std::abs(sq.rho(1, 1)) == 0.0);
    CHECK(std::abs(sq.rho(3, 3)) == 0.0);

    double mean = 0.0;
    for (int n = 0; n < 32; ++n) mean += n * sq.rho(n, n).real();
    CHECK(std::abs(mean - std::sinh(r) * std::sinh(r)) <= 1e-6);
}

TEST_CASE("squeezed vacuum matches the squeeze-generator exponential") {
    for (double r : {0.3, 0.5, 0.9}) {
        const int dim = 40;
        const FockStateMatrix sq = make_squeezed_vacuum(r, dim);
        // the factory renormalizes after truncation; truncate and
        // renormalize the exponential's column the same way
        Eigen::VectorXd ref = oracle::squeeze_vacuum_expm(r, 2 * dim).head(dim);
        ref /= ref.norm();

        // recover amplitudes from the pure density matrix (a_0 > 0)
        const double a0 = std::sqrt(sq.rho(0, 0).real());
        for (int n = 0; n < dim; ++n) {
            const double a_n = sq.rho(n, 0).real() / a0;
            CHECK(std::abs(a_n - ref(n)) <= 1e-8);
        }
    }
}

TEST_CASE("squeezed vacuum cutoff error reports the required dim") {
    try {
        make_squeezed_vacuum(0.5, 4);
        FAIL("expected CutoffError");
    } catch (const CutoffError& e) {
        CHECK(e.required_dim > 4);
        CHECK_NOTHROW(make_squeezed_vacuum(0.5, e.required_dim));
    }
    CHECK_THROWS_AS(make_squeezed_vacuum(-0.1, 8), std::invalid_argument);
}

TEST_CASE("state fidelity") {
    const FockStateMatrix one = make_fock(1, 4);
    const FockStateMatrix zero = make_fock(0, 4);
    CHECK(state_fidelity(one, one) == doctest::Approx(1.0));
    CHECK(state_fidelity(zero, one) == doctest::Approx(0.0));

    const FockStateMatrix sq = make_squeezed_vacuum(0.5, 32);
    CHECK(state_fidelity(sq, sq) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(state_fidelity(one, make_fock(1, 5)), std::invalid_argument);

    // Tr a^2 <= 1, equality only for pure states
    std::mt19937 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        const FockStateMatrix mixed{oracle::random_density(gen, 6)};
        const double self = state_fidelity(mixed, mixed);
        CHECK(self <= 1.0 + 1e-12);
        CHECK(self == doctest::Approx(purity(mixed)));
        CHECK(self < 1.0 - 1e-6);  // random mixtures are genuinely mixed
        const FockStateMatrix other{oracle::random_density(gen, 6)};
        CHECK(state_fidelity(mixed, other) == doctest::Approx(state_fidelity(other, mixed)));
    }
}

TEST_CASE("sech envelope") {
    const double width = 10.0, t_c = 80.0;
    const TimeGrid grid{0.0, 0.01, 16001};
    const PulseEnvelope h = make_sech_envelope(width, t_c, grid);

    CHECK(envelope_norm(h) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(is_normalized(h));
    // peak value 1/sqrt(2 width), up to the truncation renormalization
    const Eigen::Index mid = 8000;
    CHECK(std::abs(h.samples(mid)) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * width)).epsilon(1e-6));

    // grid spanning only t_c +- width clips too much mass
    const TimeGrid narrow{70.0, 0.01, 2001};
    CHECK_THROWS_AS(make_sech_envelope(width, t_c, narrow), TruncationError);

    CHECK_THROWS_AS(make_sech_envelope(-1.0, t_c, grid), std::invalid_argument);
    CHECK_THROWS_AS(validate_envelope(PulseEnvelope{TimeGrid{0, 0.1, 4}, ComplexVector(4)}),
                    std::invalid_argument);
}

TEST_CASE("sech samples carry the analytic left-tail mass") {
    // the raw samples plus the analytic prior mass reproduce a unit pulse
    const TimeGrid grid{0.0, 0.01, 16001};
    const PulseEnvelope raw = sech_samples(10.0, 80.0, grid);
    const double left = sech_mass_before(10.0, 80.0, 0.0);
    const double right = sech_mass_before(10.0, 80.0, 2.0 * 80.0 - grid.t_end());
    CHECK(envelope_norm(raw) + left + right == doctest::Approx(1.0).epsilon(1e-7));
}
