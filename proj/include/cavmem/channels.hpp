// channels.hpp — Fock-space pure-loss (beam-splitter) channels.
//
// Linear mode coupling makes every transfer step in the memory cycle a
// beam splitter: the retained branch keeps the complex transmission
// amplitude tau per excitation, the escaped branch is traced out. The map is
//
//   E(rho)_{ab} = tau^a conj(tau)^b
//                 Sum_l sqrt(binom(a+l,l) binom(b+l,l)) (1-|tau|^2)^l rho_{a+l,b+l}
//
// which is trace preserving on the truncated space (loss only moves
// population down) and multiplicative: E_tau1 o E_tau2 = E_{tau1 tau2}.

#pragma once

#include "cavmem/states.hpp"

namespace cavmem {

// Raw linear map on a matrix in the number basis; no state validation, so it
// can be applied to matrix units (Choi construction and the like).
ComplexMatrix apply_loss(const ComplexMatrix& rho, Complex tau);

enum class CaptureModel {
    BeamSplitter,    // trace out the escaped field (amplitude damping)
    PureProjection,  // renormalized alpha_k -> alpha_k d^k, for comparison
};

// Capture of the field state onto the collective atomic mode with final dark
// amplitude d (|d| <= 1). The transmission amplitude is -i d: the stored
// state keeps the deterministic (-i)^k phase per excitation. |d| = 1 is the
// unitary limit.
FockStateMatrix capture_channel(const FockStateMatrix& rho_in, Complex d_final,
                                CaptureModel model = CaptureModel::BeamSplitter);

// Release with per-excitation amplitude d_out (|d_out| <= 1). Applies the
// conjugate phase (+i conj(d_out) per excitation) so that a full
// capture/release cycle is phase neutral.
FockStateMatrix release_channel(const FockStateMatrix& rho, Complex d_out);

}  // namespace cavmem
