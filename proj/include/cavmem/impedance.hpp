// impedance.hpp — Impedance-matched control design.
//
// The matched mixing-angle schedule
//   cos^2(theta(t)) = |h(t)|^2 / (gamma Int_{-inf}^{t} |h|^2)
// makes the outgoing field vanish identically, so any pulse longer than the
// bare-cavity decay time is captured completely (d -> 1).

#pragma once

#include "cavmem/dark_ladder.hpp"
#include "cavmem/errors.hpp"

namespace cavmem {

struct MatchedScheduleOptions {
    // Pulse energy that arrived before the grid start; lets a deliberately
    // truncated envelope carry its analytic left tail.
    double mass_before_t0 = 0.0;
    // Accumulated mass below which a point counts as "before onset"; there
    // cos(theta) is extended continuously from the right (the value is
    // dynamically irrelevant, no field has arrived).
    double onset_mass = 1e-6;
    // Clamp cos^2(theta) at 1 instead of throwing UnmatchableError. A clamped
    // schedule cannot capture completely; exploration only.
    bool clamp = false;
};

// Matched schedule for the input envelope. Throws UnmatchableError (carrying
// the first violating time) if the pulse is faster than the cavity response.
ControlSchedule matched_schedule(const PulseEnvelope& h, const SystemParams& p,
                                 const MatchedScheduleOptions& opts = {});

// Max-norm residual of the matching condition
//   -d/dt ln cos(theta) + d/dt ln |h| - (gamma/2) cos^2(theta)
// over interior grid points, centered differences. ~0 for matched schedules,
// converging at second order in dt.
double impedance_residual(const ControlSchedule& s, const PulseEnvelope& h,
                          const SystemParams& p);

// Adiabaticity ratios (Omega^2 + g^2 N) against the three scales
// gamma*gamma_a, gamma_a/T and sqrt(gamma/T)*gamma_a, evaluated at the drive
// floor. All three must clear the threshold for adiabatic following; the
// first is the binding one for pulses longer than 1/gamma.
struct AdiabaticityMargins {
    double vs_cavity_loss = 0.0;
    double vs_pulse_rate = 0.0;
    double vs_mixed = 0.0;

    double min_ratio() const {
        return std::min({vs_cavity_loss, vs_pulse_rate, vs_mixed});
    }
    bool adiabatic(double threshold = 10.0) const { return min_ratio() >= threshold; }
};

AdiabaticityMargins adiabaticity_margins(const SystemParams& p, double omega_min,
                                         double pulse_duration);

}  // namespace cavmem
