#include "cavmem/states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "cavmem/errors.hpp"

namespace cavmem {

void validate_envelope(const PulseEnvelope& h) {
    validate_grid(h.grid, 8);
    if (h.samples.size() != h.grid.count)
        throw std::invalid_argument("envelope: sample count does not match grid");
}

double envelope_norm(const PulseEnvelope& h) {
    return trapezoid(h.samples.cwiseAbs2().eval(), h.grid.dt);
}

void validate_state(const FockStateMatrix& state) {
    const ComplexMatrix& rho = state.rho;
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("state: rho must be square and non-empty");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("state: rho is not Hermitian");
    const double tr = rho.trace().real();
    if (tr < 0.0 || tr > 1.0 + 1e-12)
        throw std::invalid_argument("state: trace outside [0, 1]");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("state: rho is not positive semidefinite");
}

double purity(const FockStateMatrix& state) {
    return (state.rho * state.rho).trace().real();
}

FockStateMatrix make_fock(int n, int dim) {
    if (n < 0 || dim < 1) throw std::invalid_argument("make_fock: n >= 0, dim >= 1 required");
    if (n >= dim)
        throw CutoffError("make_fock: photon number " + std::to_string(n) +
                              " needs cutoff > " + std::to_string(n),
                          n + 1);
    FockStateMatrix out{ComplexMatrix::Zero(dim, dim)};
    out.rho(n, n) = 1.0;
    return out;
}

namespace {

// Even-photon amplitude of the squeezed vacuum: c_{2m}, computed in log form.
double squeezed_amplitude(double r, int m) {
    if (r == 0.0) return m == 0 ? 1.0 : 0.0;
    const double log_mag = m * std::log(std::tanh(r)) +
                           0.5 * std::lgamma(2.0 * m + 1.0) - m * std::log(2.0) -
                           std::lgamma(m + 1.0) - 0.5 * std::log(std::cosh(r));
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(log_mag);
}

}  // namespace

FockStateMatrix make_squeezed_vacuum(double r, int dim) {
    if (r < 0.0) throw std::invalid_argument("make_squeezed_vacuum: r must be >= 0");
    if (dim < 1) throw std::invalid_argument("make_squeezed_vacuum: dim must be >= 1");

    constexpr double kTailTol = 1e-6;
    constexpr int kMaxDim = 1 << 14;

    // Find the cutoff that brings the truncated tail below tolerance.
    double cum = 0.0;
    int required = -1;
    for (int m = 0; 2 * m < kMaxDim; ++m) {
        const double c = squeezed_amplitude(r, m);
        cum += c * c;
        if (1.0 - cum < kTailTol) {
            required = 2 * m + 1;
            break;
        }
    }
    if (required < 0)
        throw std::invalid_argument("make_squeezed_vacuum: r too large to truncate");
    if (dim < required)
        throw CutoffError("make_squeezed_vacuum: tail deficit exceeds 1e-6 at dim " +
                              std::to_string(dim) + ", need dim >= " + std::to_string(required),
                          required);

    RealVector amp = RealVector::Zero(dim);
    for (int m = 0; 2 * m < dim; ++m) amp(2 * m) = squeezed_amplitude(r, m);
    amp /= amp.norm();  // renormalize after truncation

    FockStateMatrix out{(amp * amp.transpose()).cast<Complex>()};
    return out;
}

double state_fidelity(const FockStateMatrix& a, const FockStateMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    return (a.rho * b.rho).trace().real();
}

PulseEnvelope sech_samples(double width, double t_c, const TimeGrid& grid) {
    if (!(width > 0.0)) throw std::invalid_argument("sech envelope: width must be positive");
    validate_grid(grid, 8);
    ComplexVector samples(grid.count);
    const double peak = 1.0 / std::sqrt(2.0 * width);
    for (Eigen::Index i = 0; i < grid.count; ++i) {
        const double x = (grid.time(i) - t_c) / width;
        samples(i) = peak / std::cosh(x);
    }
    return PulseEnvelope{grid, std::move(samples)};
}

double sech_mass_before(double width, double t_c, double t0) {
    return 0.5 * (1.0 + std::tanh((t0 - t_c) / width));
}

PulseEnvelope make_sech_envelope(double width, double t_c, const TimeGrid& grid) {
    PulseEnvelope h = sech_samples(width, t_c, grid);
    const double norm = envelope_norm(h);
    if (std::abs(norm - 1.0) > 1e-6)
        throw TruncationError("make_sech_envelope: grid clips the pulse (integral " +
                              std::to_string(norm) + "); span t_c +- 8 widths");
    h.samples /= std::sqrt(norm);
    return h;
}

}  // namespace cavmem
