// storage.hpp — Full memory cycles: capture, decaying storage, release,
// fidelity sweeps and bipartite (entangled) storage.

#pragma once

#include <variant>
#include <vector>

#include "cavmem/channels.hpp"
#include "cavmem/impedance.hpp"

namespace cavmem {

enum class DecayModel {
    Recycling,  // beam-splitter Kraus: lost population lands on lower levels
    Sink,       // comparison flag: coherences scaled, population leaves the space
};

// Metastable decay over the storage interval: amplitude damping with
// per-excitation survival exp(-gamma_0 t_s); the n-excitation collective
// state decays at n*gamma_0.
FockStateMatrix storage_decay(const FockStateMatrix& rho, double gamma_0,
                              double t_s, DecayModel model = DecayModel::Recycling);

// Release target: mirror-image retrieval (time-reversed capture schedule) or
// a tailored output envelope.
struct TimeReverse {};
using ReleaseTarget = std::variant<TimeReverse, PulseEnvelope>;

struct ReleaseResult {
    // Emitted envelope on a relative grid starting at 0 (caller places it at
    // the reversal time). Scales with |d_stored|.
    PulseEnvelope envelope;
    // Unit-efficiency release amplitude: the per-excitation transmission of
    // the release channel, real in [0, 1]. The emitted energy equals
    // |d_stored|^2 d_out^2.
    Complex d_out;
};

ReleaseResult release(Complex d_stored, const ReleaseTarget& target,
                      const ControlSchedule& s_capture, const SystemParams& p);

enum class MatchingMode { Ideal, Simulated };

struct CycleResult {
    FockStateMatrix rho_out;
    PulseEnvelope released_envelope;
    Complex d_in = 0.0;
    Complex d_out = 0.0;
    double fidelity = 0.0;
    double eta = 0.0;  // total transmissivity |d_in|^2 e^{-gamma_0 t_s} |d_out|^2
    double input_norm = 0.0;
    double released_norm = 0.0;
};

// capture -> storage decay -> release, with fidelity Tr{rho_in rho_out}.
// Ideal matching takes d_in = d_out = 1; Simulated runs the capture and
// release dynamics for the given envelope.
CycleResult full_cycle(const FockStateMatrix& rho_in, const PulseEnvelope& h,
                       const SystemParams& p, double t_s,
                       const ReleaseTarget& target = TimeReverse{},
                       MatchingMode mode = MatchingMode::Simulated,
                       DecayModel decay = DecayModel::Recycling);

struct SweepPoint {
    double t_s = 0.0;
    double fidelity = 0.0;
    double eta = 0.0;
    double trace_out = 0.0;
};

// Fidelity as a function of storage time; monotone non-increasing, f(0) = 1
// for ideal matching. Points may be evaluated concurrently (threads > 1);
// results are merged by index, so output is identical for any thread count.
std::vector<SweepPoint> fidelity_sweep(const FockStateMatrix& rho_in,
                                       const std::vector<double>& t_s_values,
                                       const SystemParams& p,
                                       MatchingMode mode = MatchingMode::Ideal,
                                       const PulseEnvelope* h = nullptr,
                                       int threads = 1);

// Two-mode state (dim^2, ordered n (x) m) through independent capture +
// decay channels on each tensor factor; product dark states make the joint
// map factorize.
FockStateMatrix bipartite_store(const FockStateMatrix& rho_ab, Complex d_left,
                                Complex d_right, double gamma_0, double t_s);

// Partial transpose on the second factor of a dim_single^2 bipartite matrix.
ComplexMatrix partial_transpose(const ComplexMatrix& rho_ab, Eigen::Index dim_single);

// Entanglement negativity: sum of |negative eigenvalues| of the partial
// transpose; 0 for product states, 1/2 for a Bell pair.
double negativity(const FockStateMatrix& rho_ab);

}  // namespace cavmem
