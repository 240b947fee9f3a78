// bath_oracle.hpp — Approximation-free integrators used to validate the
// Markov capture dynamics and the adiabaticity conditions.
//
// The free-space continuum is replaced by a flat comb of modes with uniform
// detuning spacing delta and coupling kappa = sqrt(gamma delta / 2 pi), so
// the golden-rule rate reproduces the bare-cavity decay gamma exactly. The
// comb recurs after 2 pi / delta; the simulation window must end before that.
//
// Two models are integrated with a fixed-step classical 4th-order scheme:
//   (a) the dark-state mode equations
//         dD/dt    =  i kappa cos(theta) Sum_k xi_k
//         dxi_k/dt = -i Delta_k xi_k + i kappa cos(theta) D
//   (b) the single-excitation Lambda system retaining the excited and bright
//       amplitudes, with a non-Hermitian -(gamma_a/2) decay on the excited
//       state (loss = capture failure in this sector):
//         de/dt    =  i kappa Sum_k xi_k + i g sqrt(N) p
//         dp/dt    = -(gamma_a/2) p + i g sqrt(N) e + i Omega(t) s
//         ds/dt    =  i Omega(t) p
//         dxi_k/dt = -i Delta_k xi_k + i kappa e

#pragma once

#include "cavmem/dark_ladder.hpp"
#include "cavmem/errors.hpp"

namespace cavmem {

struct BathGrid {
    double kappa = 0.0;    // flat coupling, sqrt(gamma * spacing / 2 pi)
    double spacing = 0.0;  // detuning spacing delta
    double window = 0.0;   // simulation duration the grid was validated for
    RealVector detunings;  // uniform, symmetric about 0

    Eigen::Index modes() const { return detunings.size(); }
    double bandwidth() const {
        return detunings.size() > 1 ? detunings(detunings.size() - 1) - detunings(0) : 0.0;
    }
};

// Builds a symmetric comb spanning ~[-bandwidth/2, bandwidth/2]. Throws
// BathGridError when the recurrence time 2 pi / spacing does not exceed the
// window.
BathGrid make_bath_grid(double bandwidth, double spacing, double window,
                        double gamma = 1.0);

// Initial mode amplitudes for an incoming envelope: xi_k is the Fourier
// transform of h at detuning Delta_k, phase-referenced to t_start and
// normalized to Sum |xi_k|^2 = 1. Throws BathGridError when the comb
// bandwidth is below 20x the pulse bandwidth.
ComplexVector discretize_input(const PulseEnvelope& h, const BathGrid& bath,
                               double t_start);

// Freely evolved field reconstructed from mode amplitudes referenced at
// t_ref, sampled on eval: sqrt(spacing/2pi) Sum_k xi_k exp(-i Delta_k (t - t_ref)).
ComplexVector reconstruct_field(const ComplexVector& xi, const BathGrid& bath,
                                double t_ref, const TimeGrid& eval);

struct ModeTrajectory {
    TimeGrid grid;
    ComplexVector dark;        // D(t), every step
    ComplexVector xi_final;
    RealVector norm_samples;   // Sum|xi|^2 + |D|^2 every sample_stride steps
    Eigen::Index sample_stride = 1;
    PulseEnvelope h_out;       // outgoing envelope reconstructed from xi(end)
};

// Integrates the mode equations across the schedule grid. The step equals
// the grid spacing and must satisfy dt <= min(0.02/gamma, 0.1/bandwidth);
// cos(theta) between samples is midpoint-averaged.
ModeTrajectory integrate_mode_equations(const ComplexVector& xi0,
                                        const ControlSchedule& s,
                                        const BathGrid& bath,
                                        Eigen::Index reconstruct_stride = 16);

struct LambdaTrajectory {
    TimeGrid grid;
    ComplexVector cavity;   // e(t)
    ComplexVector excited;  // p(t)
    ComplexVector spin;     // s(t), the stored collective amplitude
    ComplexVector xi_final;
    RealVector norm_samples;
    Eigen::Index sample_stride = 1;
};

// Integrates the Lambda system for an input envelope and a sampled Rabi
// drive Omega(t) on the same grid. The step must additionally resolve the
// collective coupling: dt <= 0.1/sqrt(max Omega^2 + g^2 N).
LambdaTrajectory integrate_lambda_system(const PulseEnvelope& h,
                                         const RealVector& omega,
                                         const SystemParams& p,
                                         const BathGrid& bath);

}  // namespace cavmem
