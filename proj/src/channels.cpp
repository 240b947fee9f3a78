#include "cavmem/channels.hpp"

#include <cmath>

namespace cavmem {

namespace {

// sqrt(binom(a+l, l)) table, rows a = 0..dim-1, cols l = 0..dim-1.
Eigen::MatrixXd sqrt_binom_table(Eigen::Index dim) {
    Eigen::MatrixXd b(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index l = 0; l < dim; ++l)
            b(a, l) = std::exp(0.5 * (std::lgamma(a + l + 1.0) - std::lgamma(l + 1.0) -
                                      std::lgamma(a + 1.0)));
    return b;
}

}  // namespace

ComplexMatrix apply_loss(const ComplexMatrix& rho, Complex tau) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("apply_loss: rho must be square");
    const Eigen::Index dim = rho.rows();
    const double eta = std::norm(tau);
    const double loss = std::max(0.0, 1.0 - eta);

    const Eigen::MatrixXd b = sqrt_binom_table(dim);
    RealVector loss_pow(dim);
    loss_pow(0) = 1.0;
    for (Eigen::Index l = 1; l < dim; ++l) loss_pow(l) = loss_pow(l - 1) * loss;
    ComplexVector tau_pow(dim);
    tau_pow(0) = 1.0;
    for (Eigen::Index a = 1; a < dim; ++a) tau_pow(a) = tau_pow(a - 1) * tau;

    ComplexMatrix out(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index bcol = 0; bcol < dim; ++bcol) {
            Complex sum = 0.0;
            const Eigen::Index lmax = dim - 1 - std::max(a, bcol);
            for (Eigen::Index l = 0; l <= lmax; ++l)
                sum += b(a, l) * b(bcol, l) * loss_pow(l) * rho(a + l, bcol + l);
            out(a, bcol) = tau_pow(a) * std::conj(tau_pow(bcol)) * sum;
        }
    }
    return out;
}

namespace {

FockStateMatrix checked_loss(const FockStateMatrix& rho, Complex tau) {
    FockStateMatrix out{apply_loss(rho.rho, tau)};
    validate_state(out);
    return out;
}

}  // namespace

FockStateMatrix capture_channel(const FockStateMatrix& rho_in, Complex d_final,
                                CaptureModel model) {
    validate_state(rho_in);
    if (std::abs(d_final) > 1.0 + 1e-12)
        throw std::invalid_argument("capture_channel: |d_final| must be <= 1");

    const Complex tau = -kImag * d_final;
    if (model == CaptureModel::BeamSplitter) return checked_loss(rho_in, tau);

    // Pure projection: keep only the retained branch and renormalize.
    const Eigen::Index dim = rho_in.dim();
    ComplexVector tau_pow(dim);
    tau_pow(0) = 1.0;
    for (Eigen::Index a = 1; a < dim; ++a) tau_pow(a) = tau_pow(a - 1) * tau;
    ComplexMatrix out =
        tau_pow.asDiagonal() * rho_in.rho * tau_pow.conjugate().asDiagonal();
    const double tr = out.trace().real();
    if (tr > 0.0) out /= tr;
    FockStateMatrix result{std::move(out)};
    validate_state(result);
    return result;
}

FockStateMatrix release_channel(const FockStateMatrix& rho, Complex d_out) {
    validate_state(rho);
    if (std::abs(d_out) > 1.0 + 1e-12)
        throw std::invalid_argument("release_channel: |d_out| must be <= 1");
    return checked_loss(rho, kImag * std::conj(d_out));
}

}  // namespace cavmem
