// dark_ladder.hpp — Dark-state algebra of the driven cavity + N-atom system
// and the Markov-approximated capture dynamics that map a pulsed field onto
// the collective atomic amplitudes.
//
// Unit convention: the bare-cavity decay rate gamma sets the time unit
// (gamma = 1), and the quantization-length factors are absorbed so that a
// normalized input envelope drives the dark amplitude to d -> 1 under
// impedance matching.

#pragma once

#include "cavmem/grid.hpp"
#include "cavmem/states.hpp"

namespace cavmem {

struct SystemParams {
    double gamma = 1.0;      // bare-cavity decay rate; 1 by the unit convention
    double g_sqrt_n = 10.0;  // collective coupling g*sqrt(N), units of gamma
    double gamma_a = 0.0;    // excited-state linewidth, units of gamma
    double gamma_0 = 0.0;    // metastable decay rate, units of gamma
    double n_atoms = 1e6;    // N; display only, the dynamics use g*sqrt(N)
};

void validate_params(const SystemParams& p);

// Sampled mixing-angle trajectory cos(theta(t)) in [0, 1].
struct ControlSchedule {
    TimeGrid grid;
    RealVector cos_theta;
};

void validate_schedule(const ControlSchedule& s);

struct DarkAmplitudeTrajectory {
    TimeGrid grid;
    ComplexVector d;
};

// cos(theta) = Omega / sqrt(Omega^2 + g^2 N); monotone in Omega, -> 1 as
// Omega -> infinity.
double mixing_angle_from_rabi(double omega, const SystemParams& p);

// Inverse of the above; throws for cos_theta outside [0, 1) (full
// transparency needs an unbounded drive).
double rabi_from_mixing_angle(double cos_theta, const SystemParams& p);

// Coefficients of the n-excitation dark state over |n-k photons>|c^k>,
// k = 0..n: sqrt(binom(n,k)) cos^(n-k) (-sin)^k of the mixing angle.
// Squared coefficients sum to 1.
RealVector dark_state_coeffs(int n, double omega, const SystemParams& p);

// Dark amplitude for a single captured photon:
//   d(t) = sqrt(gamma) Int_{t0}^{t} dtau cos(theta) h(tau)
//          * exp(-(gamma/2) Int_{tau}^{t} cos^2(theta))
// evaluated in a single cumulative pass (O(count)). h must be normalized
// (within 1e-6) or identically zero, and share the schedule grid.
DarkAmplitudeTrajectory dark_amplitude(const PulseEnvelope& h,
                                       const ControlSchedule& s,
                                       const SystemParams& p);

// Input-output relation h_out(t) = h(t) - sqrt(gamma) cos(theta(t)) d(t).
// The cos(theta) factor is the schedule-weighted out-coupling; with it the
// probability budget Int |h_out|^2 + |d(end)|^2 = Int |h|^2 holds exactly,
// which the discretized-bath oracle confirms.
PulseEnvelope output_envelope(const PulseEnvelope& h,
                              const DarkAmplitudeTrajectory& traj,
                              const SystemParams& p,
                              const ControlSchedule& s);

}  // namespace cavmem
