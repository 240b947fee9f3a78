#include "cavmem/storage.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <thread>

namespace cavmem {

FockStateMatrix storage_decay(const FockStateMatrix& rho, double gamma_0, double t_s,
                              DecayModel model) {
    validate_state(rho);
    if (gamma_0 < 0.0 || t_s < 0.0)
        throw std::invalid_argument("storage_decay: gamma_0 and t_s must be >= 0");

    const double tau = std::exp(-0.5 * gamma_0 * t_s);
    if (model == DecayModel::Recycling) {
        FockStateMatrix out{apply_loss(rho.rho, tau)};
        validate_state(out);
        return out;
    }

    // Sink model: coherences scaled, lost population leaves the space.
    const Eigen::Index dim = rho.dim();
    ComplexMatrix out(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n)
        for (Eigen::Index m = 0; m < dim; ++m)
            out(n, m) = std::pow(tau, static_cast<double>(n + m)) * rho.rho(n, m);
    FockStateMatrix result{std::move(out)};
    validate_state(result);
    return result;
}

ReleaseResult release(Complex d_stored, const ReleaseTarget& target,
                      const ControlSchedule& s_capture, const SystemParams& p) {
    validate_params(p);
    validate_schedule(s_capture);
    if (std::abs(d_stored) > 1.0 + 1e-9)
        throw std::invalid_argument("release: |d_stored| must be <= 1");

    // Emission schedule on a relative grid. Time reversal mirrors the capture
    // drive; a tailored target is matched in reverse: capturing the
    // time-reversed target with zero output is the mirror of emitting it.
    TimeGrid grid;
    RealVector c;
    if (std::holds_alternative<TimeReverse>(target)) {
        const Eigen::Index n = s_capture.grid.count;
        grid = TimeGrid{0.0, s_capture.grid.dt, n};
        c.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = s_capture.cos_theta(n - 1 - i);
    } else {
        const PulseEnvelope& want = std::get<PulseEnvelope>(target);
        validate_envelope(want);
        if (std::abs(envelope_norm(want) - 1.0) > 1e-6)
            throw std::invalid_argument("release: tailored target must be normalized");
        const Eigen::Index n = want.grid.count;
        grid = TimeGrid{0.0, want.grid.dt, n};
        // The emission magnitude profile is what the schedule controls; the
        // target is taken by magnitude.
        PulseEnvelope reversed{grid, ComplexVector(n)};
        for (Eigen::Index i = 0; i < n; ++i)
            reversed.samples(i) = std::abs(want.samples(n - 1 - i));
        ControlSchedule s_rev = matched_schedule(reversed, p);  // may throw UnmatchableError
        c.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = s_rev.cos_theta(n - 1 - i);
    }

    // Unit-amplitude emission: the dark amplitude relaxes through the
    // schedule, d' = -(gamma/2) cos^2(theta) d, radiating sqrt(gamma) cos(theta) d.
    const Eigen::Index n = grid.count;
    const double dt = grid.dt;
    const double g = p.gamma;
    const double sqrt_g = std::sqrt(g);
    RealVector unit(n);
    double dtilde = 1.0;
    unit(0) = sqrt_g * c(0) * dtilde;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        dtilde *= std::exp(-0.25 * g * dt * (c(i) * c(i) + c(i + 1) * c(i + 1)));
        unit(i + 1) = sqrt_g * c(i + 1) * dtilde;
    }

    const double unit_energy = trapezoid(unit.cwiseAbs2().eval(), dt);
    ReleaseResult out;
    out.d_out = std::sqrt(std::min(1.0, unit_energy));
    out.envelope = PulseEnvelope{grid, d_stored * unit.cast<Complex>()};
    return out;
}

CycleResult full_cycle(const FockStateMatrix& rho_in, const PulseEnvelope& h,
                       const SystemParams& p, double t_s, const ReleaseTarget& target,
                       MatchingMode mode, DecayModel decay) {
    validate_state(rho_in);
    validate_envelope(h);
    validate_params(p);
    if (t_s < 0.0) throw std::invalid_argument("full_cycle: t_s must be >= 0");

    const double hold = std::exp(-0.5 * p.gamma_0 * t_s);
    CycleResult out;
    if (mode == MatchingMode::Simulated) {
        const ControlSchedule s = matched_schedule(h, p);
        const DarkAmplitudeTrajectory traj = dark_amplitude(h, s, p);
        out.d_in = traj.d(traj.d.size() - 1);
        ReleaseResult rel = release(out.d_in * hold, target, s, p);
        out.d_out = rel.d_out;
        out.released_envelope = std::move(rel.envelope);
    } else {
        out.d_in = 1.0;
        out.d_out = 1.0;
        // Ideal retrieval: exact mirror image carrying the decayed energy.
        const Eigen::Index n = h.grid.count;
        PulseEnvelope mirror{TimeGrid{0.0, h.grid.dt, n}, ComplexVector(n)};
        for (Eigen::Index i = 0; i < n; ++i)
            mirror.samples(i) = hold * std::conj(h.samples(n - 1 - i));
        out.released_envelope = std::move(mirror);
    }

    FockStateMatrix rho = capture_channel(rho_in, out.d_in);
    rho = storage_decay(rho, p.gamma_0, t_s, decay);
    rho = release_channel(rho, out.d_out);

    out.fidelity = state_fidelity(rho_in, rho);
    out.eta = std::norm(out.d_in) * std::exp(-p.gamma_0 * t_s) * std::norm(out.d_out);
    out.input_norm = envelope_norm(h);
    out.released_norm = envelope_norm(out.released_envelope);
    out.rho_out = std::move(rho);
    if (out.fidelity < 0.0 || out.fidelity > 1.0 + 1e-9)
        throw std::logic_error("full_cycle: fidelity outside [0, 1]");
    return out;
}

std::vector<SweepPoint> fidelity_sweep(const FockStateMatrix& rho_in,
                                       const std::vector<double>& t_s_values,
                                       const SystemParams& p, MatchingMode mode,
                                       const PulseEnvelope* h, int threads) {
    validate_state(rho_in);
    validate_params(p);
    if (t_s_values.empty()) throw std::invalid_argument("fidelity_sweep: empty t_s list");

    Complex d_in = 1.0;
    Complex d_out = 1.0;
    if (mode == MatchingMode::Simulated) {
        if (h == nullptr)
            throw std::invalid_argument("fidelity_sweep: simulated matching needs an envelope");
        const ControlSchedule s = matched_schedule(*h, p);
        const DarkAmplitudeTrajectory traj = dark_amplitude(*h, s, p);
        d_in = traj.d(traj.d.size() - 1);
        d_out = release(1.0, TimeReverse{}, s, p).d_out;
    }

    const FockStateMatrix captured = capture_channel(rho_in, d_in);
    auto eval = [&](double t_s) {
        FockStateMatrix rho = storage_decay(captured, p.gamma_0, t_s);
        rho = release_channel(rho, d_out);
        SweepPoint pt;
        pt.t_s = t_s;
        pt.fidelity = state_fidelity(rho_in, rho);
        pt.eta = std::norm(d_in) * std::exp(-p.gamma_0 * t_s) * std::norm(d_out);
        pt.trace_out = rho.rho.trace().real();
        return pt;
    };

    std::vector<SweepPoint> out(t_s_values.size());
    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(t_s_values.size())));
    if (nthreads == 1) {
        for (std::size_t i = 0; i < t_s_values.size(); ++i) out[i] = eval(t_s_values[i]);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < t_s_values.size(); i += nthreads)
                out[i] = eval(t_s_values[i]);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

namespace {

// Kraus operators of the single-mode loss channel with amplitude tau.
std::vector<ComplexMatrix> loss_kraus(Eigen::Index dim, Complex tau) {
    const double loss = std::max(0.0, 1.0 - std::norm(tau));
    const double sqrt_loss = std::sqrt(loss);
    std::vector<ComplexMatrix> ops;
    ops.reserve(dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        ComplexMatrix K = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index a = 0; a + l < dim; ++a) {
            const double b = std::exp(0.5 * (std::lgamma(a + l + 1.0) -
                                             std::lgamma(l + 1.0) - std::lgamma(a + 1.0)));
            K(a, a + l) = b * std::pow(tau, static_cast<double>(a)) *
                          std::pow(sqrt_loss, static_cast<double>(l));
        }
        ops.push_back(std::move(K));
    }
    return ops;
}

}  // namespace

FockStateMatrix bipartite_store(const FockStateMatrix& rho_ab, Complex d_left,
                                Complex d_right, double gamma_0, double t_s) {
    validate_state(rho_ab);
    if (gamma_0 < 0.0 || t_s < 0.0)
        throw std::invalid_argument("bipartite_store: gamma_0 and t_s must be >= 0");
    if (std::abs(d_left) > 1.0 + 1e-12 || std::abs(d_right) > 1.0 + 1e-12)
        throw std::invalid_argument("bipartite_store: |d| must be <= 1");

    const auto dim = rho_ab.dim();
    const auto single = static_cast<Eigen::Index>(std::llround(std::sqrt(double(dim))));
    if (single * single != dim)
        throw std::invalid_argument("bipartite_store: dimension is not a perfect square");

    const double hold = std::exp(-0.5 * gamma_0 * t_s);
    const auto left = loss_kraus(single, -kImag * d_left * hold);
    const auto right = loss_kraus(single, -kImag * d_right * hold);

    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& kl : left) {
        for (const auto& kr : right) {
            const ComplexMatrix K = Eigen::kroneckerProduct(kl, kr);
            out += K * rho_ab.rho * K.adjoint();
        }
    }
    FockStateMatrix result{std::move(out)};
    validate_state(result);
    return result;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho_ab, Eigen::Index dim_single) {
    const Eigen::Index dim = dim_single * dim_single;
    if (rho_ab.rows() != dim || rho_ab.cols() != dim)
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    ComplexMatrix out(dim, dim);
    for (Eigen::Index n = 0; n < dim_single; ++n)
        for (Eigen::Index m = 0; m < dim_single; ++m)
            for (Eigen::Index np = 0; np < dim_single; ++np)
                for (Eigen::Index mp = 0; mp < dim_single; ++mp)
                    out(n * dim_single + m, np * dim_single + mp) =
                        rho_ab(n * dim_single + mp, np * dim_single + m);
    return out;
}

double negativity(const FockStateMatrix& rho_ab) {
    const auto dim = rho_ab.dim();
    const auto single = static_cast<Eigen::Index>(std::llround(std::sqrt(double(dim))));
    if (single * single != dim)
        throw std::invalid_argument("negativity: dimension is not a perfect square");
    if ((rho_ab.rho - rho_ab.rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("negativity: input is not Hermitian");

    const ComplexMatrix pt = partial_transpose(rho_ab.rho, single);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        sum += std::max(0.0, -es.eigenvalues()(i));
    return sum;
}

}  // namespace cavmem
