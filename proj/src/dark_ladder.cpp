#include "cavmem/dark_ladder.hpp"

#include <cmath>

namespace cavmem {

void validate_params(const SystemParams& p) {
    if (std::abs(p.gamma - 1.0) > 1e-12)
        throw std::invalid_argument("params: gamma must be 1 (time unit convention)");
    if (!(p.g_sqrt_n > 0.0)) throw std::invalid_argument("params: g_sqrt_n must be > 0");
    if (p.gamma_a < 0.0 || p.gamma_0 < 0.0)
        throw std::invalid_argument("params: rates must be >= 0");
}

void validate_schedule(const ControlSchedule& s) {
    validate_grid(s.grid);
    if (s.cos_theta.size() != s.grid.count)
        throw std::invalid_argument("schedule: sample count does not match grid");
    if (s.cos_theta.minCoeff() < 0.0 || s.cos_theta.maxCoeff() > 1.0)
        throw std::invalid_argument("schedule: cos_theta must lie in [0, 1]");
}

double mixing_angle_from_rabi(double omega, const SystemParams& p) {
    validate_params(p);
    if (omega < 0.0) throw std::invalid_argument("mixing angle: omega must be >= 0");
    return omega / std::hypot(omega, p.g_sqrt_n);
}

double rabi_from_mixing_angle(double cos_theta, const SystemParams& p) {
    validate_params(p);
    if (cos_theta < 0.0 || cos_theta > 1.0)
        throw std::invalid_argument("rabi: cos_theta must lie in [0, 1)");
    if (cos_theta == 1.0)
        throw std::invalid_argument("rabi: cos_theta = 1 requires an unbounded drive");
    return p.g_sqrt_n * cos_theta / std::sqrt(1.0 - cos_theta * cos_theta);
}

RealVector dark_state_coeffs(int n, double omega, const SystemParams& p) {
    validate_params(p);
    if (n < 0) throw std::invalid_argument("dark_state_coeffs: n must be >= 0");
    if (omega < 0.0) throw std::invalid_argument("dark_state_coeffs: omega must be >= 0");

    const double norm = std::hypot(omega, p.g_sqrt_n);
    const double c = omega / norm;      // cos(theta)
    const double s = p.g_sqrt_n / norm; // sin(theta)

    RealVector coeffs(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double log_binom =
            std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coeffs(k) = sign * std::exp(0.5 * log_binom) * std::pow(c, n - k) * std::pow(s, k);
    }
    return coeffs;
}

DarkAmplitudeTrajectory dark_amplitude(const PulseEnvelope& h, const ControlSchedule& s,
                                       const SystemParams& p) {
    validate_params(p);
    validate_envelope(h);
    validate_schedule(s);
    require_same_grid(h.grid, s.grid, "dark_amplitude");

    const Eigen::Index n = h.grid.count;
    ComplexVector d(n);
    d(0) = 0.0;

    // Vacuum input is physical: d stays 0.
    if (h.samples.cwiseAbs().maxCoeff() == 0.0) {
        d.setZero();
        return DarkAmplitudeTrajectory{h.grid, std::move(d)};
    }
    if (std::abs(envelope_norm(h) - 1.0) > 1e-6)
        throw std::invalid_argument("dark_amplitude: envelope must be normalized");

    // Single cumulative pass: the damping exponent between neighboring
    // samples is applied as a running factor, so the double integral costs
    // O(count). Equivalent to the naive double trapezoid quadrature.
    const double dt = h.grid.dt;
    const double g = p.gamma;
    const double sqrt_g = std::sqrt(g);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double c0 = s.cos_theta(i);
        const double c1 = s.cos_theta(i + 1);
        const Complex f0 = c0 * h.samples(i);
        const Complex f1 = c1 * h.samples(i + 1);
        const double decay = std::exp(-0.25 * g * dt * (c0 * c0 + c1 * c1));
        d(i + 1) = d(i) * decay + sqrt_g * 0.5 * dt * (f0 * decay + f1);
    }

    const double d_max = d.cwiseAbs().maxCoeff();
    if (d_max > 1.0 + 1e-6)
        throw std::invalid_argument("dark_amplitude: |d| exceeded 1; input not normalized?");

    return DarkAmplitudeTrajectory{h.grid, std::move(d)};
}

PulseEnvelope output_envelope(const PulseEnvelope& h, const DarkAmplitudeTrajectory& traj,
                              const SystemParams& p, const ControlSchedule& s) {
    validate_params(p);
    validate_envelope(h);
    validate_schedule(s);
    require_same_grid(h.grid, s.grid, "output_envelope");
    require_same_grid(h.grid, traj.grid, "output_envelope");
    if (traj.d.size() != h.grid.count)
        throw std::invalid_argument("output_envelope: trajectory size mismatch");

    const double sqrt_g = std::sqrt(p.gamma);
    PulseEnvelope out{h.grid, ComplexVector(h.grid.count)};
    for (Eigen::Index i = 0; i < h.grid.count; ++i)
        out.samples(i) = h.samples(i) - sqrt_g * s.cos_theta(i) * traj.d(i);

    // Probability budget: energy out plus stored excitation cannot exceed
    // the input energy. The dt^2 term is trapezoid slack (the discrete
    // budget drifts at ~dt^2/12 per unit time of strong coupling).
    const double budget = envelope_norm(h) + 1e-6 + h.grid.dt * h.grid.dt;
    const double total = envelope_norm(out) + std::norm(traj.d(traj.d.size() - 1));
    if (total > budget)
        throw std::invalid_argument(
            "output_envelope: probability exceeds input energy; "
            "trajectory inconsistent with envelope/schedule");
    return out;
}

}  // namespace cavmem
