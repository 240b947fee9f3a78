// states.hpp — Quantum states of a generalized single mode and temporal
// pulse envelopes.
//
// A pulsed field whose photon correlation amplitudes factorize over one
// envelope h(t) is described by (a) the envelope itself and (b) a density
// matrix rho_nm in the photon-number basis. Envelope samples carry units of
// sqrt(gamma), so that the trapezoid integral of |h|^2 dt is dimensionless;
// a normalized envelope integrates to 1.

#pragma once

#include "cavmem/grid.hpp"

namespace cavmem {

struct PulseEnvelope {
    TimeGrid grid;
    ComplexVector samples;
};

void validate_envelope(const PulseEnvelope& h);

// Trapezoid integral of |h|^2 over the grid.
double envelope_norm(const PulseEnvelope& h);

inline bool is_normalized(const PulseEnvelope& h, double tol = 1e-10) {
    return std::abs(envelope_norm(h) - 1.0) <= tol;
}

// Hermitian density matrix in the photon-number basis with cutoff dim.
// Sub-normalized traces are allowed (lossy channels).
struct FockStateMatrix {
    ComplexMatrix rho;
    Eigen::Index dim() const { return rho.rows(); }
};

// Throws unless rho is Hermitian (1e-12), has trace in [0, 1 + 1e-12] and
// smallest eigenvalue >= -1e-10.
void validate_state(const FockStateMatrix& state);

double purity(const FockStateMatrix& state);

// |n><n| at cutoff dim. Throws CutoffError for n >= dim.
FockStateMatrix make_fock(int n, int dim);

// Squeezed vacuum with squeeze parameter r >= 0, renormalized to unit trace
// after truncation. Throws CutoffError (reporting the required cutoff) when
// the truncated tail exceeds 1e-6.
FockStateMatrix make_squeezed_vacuum(double r, int dim);

// Overlap fidelity Re Tr{a b}; symmetric, equals 1 for identical pure states.
double state_fidelity(const FockStateMatrix& a, const FockStateMatrix& b);

// Raw hyperbolic-secant samples sech((t - t_c)/width)/sqrt(2 width) on the
// grid, *not* normalized. Useful together with sech_mass_before when the grid
// deliberately truncates the pulse.
PulseEnvelope sech_samples(double width, double t_c, const TimeGrid& grid);

// Analytic mass of the sech-squared envelope to the left of t0.
double sech_mass_before(double width, double t_c, double t0);

// Normalized sech envelope. Throws TruncationError when the grid clips more
// than 1e-6 of the pulse energy (the grid should span t_c +- 8 widths).
PulseEnvelope make_sech_envelope(double width, double t_c, const TimeGrid& grid);

}  // namespace cavmem
