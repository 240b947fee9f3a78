#include "cavmem/impedance.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cavmem {

ControlSchedule matched_schedule(const PulseEnvelope& h, const SystemParams& p,
                                 const MatchedScheduleOptions& opts) {
    validate_params(p);
    validate_envelope(h);
    if (opts.mass_before_t0 < 0.0)
        throw std::invalid_argument("matched_schedule: mass_before_t0 must be >= 0");

    const Eigen::Index n = h.grid.count;
    const RealVector intensity = h.samples.cwiseAbs2();
    RealVector mass = cumulative_trapezoid(intensity, h.grid.dt);
    mass.array() += opts.mass_before_t0;

    const double total = mass(n - 1);
    if (!(total > 0.0))
        throw std::invalid_argument("matched_schedule: |h|^2 must be > 0 somewhere");
    if (total > 1.0 + 1e-6)
        throw std::invalid_argument("matched_schedule: envelope must be normalized");

    // Points before the onset threshold carry no usable field; the ratio
    // there is 0/0 noise and they are filled by continuous extension below.
    // A positive analytic prior makes the ratio well-defined from t0.
    const double onset_mass = opts.mass_before_t0 > 0.0 ? 0.0 : opts.onset_mass;
    Eigen::Index onset = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (mass(i) > onset_mass) {
            onset = i;
            break;
        }
    }
    if (onset < 0)
        throw std::invalid_argument("matched_schedule: pulse mass never exceeds onset threshold");

    RealVector cos_theta(n);
    for (Eigen::Index i = onset; i < n; ++i) {
        double c2 = intensity(i) / (p.gamma * mass(i));
        if (c2 > 1.0 + 1e-12) {
            if (!opts.clamp)
                throw UnmatchableError(
                    "matched_schedule: pulse faster than the cavity response at t = " +
                        std::to_string(h.grid.time(i)),
                    h.grid.time(i));
            c2 = 1.0;
        }
        cos_theta(i) = std::sqrt(std::min(c2, 1.0));
    }
    for (Eigen::Index i = 0; i < onset; ++i) cos_theta(i) = cos_theta(onset);

    ControlSchedule s{h.grid, std::move(cos_theta)};
    validate_schedule(s);
    return s;
}

double impedance_residual(const ControlSchedule& s, const PulseEnvelope& h,
                          const SystemParams& p) {
    validate_params(p);
    validate_envelope(h);
    validate_schedule(s);
    require_same_grid(h.grid, s.grid, "impedance_residual");

    const Eigen::Index n = h.grid.count;
    RealVector log_h(n), log_c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ha = std::abs(h.samples(i));
        if (!(ha > 0.0) || !(s.cos_theta(i) > 0.0))
            throw std::invalid_argument("impedance_residual: needs h > 0 and cos_theta > 0");
        log_h(i) = std::log(ha);
        log_c(i) = std::log(s.cos_theta(i));
    }

    const double inv2dt = 1.0 / (2.0 * h.grid.dt);
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double dlc = (log_c(i + 1) - log_c(i - 1)) * inv2dt;
        const double dlh = (log_h(i + 1) - log_h(i - 1)) * inv2dt;
        const double c = s.cos_theta(i);
        worst = std::max(worst, std::abs(-dlc + dlh - 0.5 * p.gamma * c * c));
    }
    return worst;
}

AdiabaticityMargins adiabaticity_margins(const SystemParams& p, double omega_min,
                                         double pulse_duration) {
    validate_params(p);
    if (omega_min < 0.0)
        throw std::invalid_argument("adiabaticity_margins: omega_min must be >= 0");
    if (!(pulse_duration > 0.0))
        throw std::invalid_argument("adiabaticity_margins: pulse duration must be > 0");

    const double coupling = omega_min * omega_min + p.g_sqrt_n * p.g_sqrt_n;
    const double inf = std::numeric_limits<double>::infinity();
    AdiabaticityMargins m;
    m.vs_cavity_loss = p.gamma_a > 0.0 ? coupling / (p.gamma * p.gamma_a) : inf;
    m.vs_pulse_rate = p.gamma_a > 0.0 ? coupling / (p.gamma_a / pulse_duration) : inf;
    m.vs_mixed = p.gamma_a > 0.0
                     ? coupling / (std::sqrt(p.gamma / pulse_duration) * p.gamma_a)
                     : inf;
    return m;
}

}  // namespace cavmem
