#include "cavmem/bath_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cavmem {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

BathGrid make_bath_grid(double bandwidth, double spacing, double window, double gamma) {
    if (!(bandwidth > 0.0) || !(spacing > 0.0) || !(window > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("bath grid: bandwidth, spacing, window, gamma must be > 0");
    if (kTwoPi / spacing <= window)
        throw BathGridError("bath grid: recurrence time " + std::to_string(kTwoPi / spacing) +
                            " does not exceed the window " + std::to_string(window) +
                            "; refine the spacing");
    const auto half = static_cast<Eigen::Index>(std::llround(bandwidth / (2.0 * spacing)));
    if (half < 1) throw std::invalid_argument("bath grid: fewer than 3 modes");

    BathGrid bg;
    bg.spacing = spacing;
    bg.window = window;
    bg.kappa = std::sqrt(gamma * spacing / kTwoPi);
    bg.detunings.resize(2 * half + 1);
    for (Eigen::Index i = 0; i < bg.detunings.size(); ++i)
        bg.detunings(i) = spacing * static_cast<double>(i - half);
    return bg;
}

ComplexVector discretize_input(const PulseEnvelope& h, const BathGrid& bath,
                               double t_start) {
    validate_envelope(h);
    const Eigen::Index m = bath.modes();
    if (h.samples.cwiseAbs().maxCoeff() == 0.0) return ComplexVector::Zero(m);
    if (std::abs(envelope_norm(h) - 1.0) > 1e-6)
        throw std::invalid_argument("discretize_input: envelope must be normalized");

    // RMS pulse bandwidth via Parseval on the envelope derivative.
    const Eigen::Index n = h.grid.count;
    const double dt = h.grid.dt;
    ComplexVector dh(n);
    dh(0) = (h.samples(1) - h.samples(0)) / dt;
    dh(n - 1) = (h.samples(n - 1) - h.samples(n - 2)) / dt;
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        dh(i) = (h.samples(i + 1) - h.samples(i - 1)) / (2.0 * dt);
    const double pulse_bw = std::sqrt(trapezoid(dh.cwiseAbs2().eval(), dt) / envelope_norm(h));
    if (bath.bandwidth() < 20.0 * pulse_bw)
        throw BathGridError("discretize_input: bath bandwidth " +
                            std::to_string(bath.bandwidth()) + " below 20x pulse bandwidth " +
                            std::to_string(pulse_bw));

    // Trapezoid Fourier transform at each detuning; the per-mode phase is
    // stepped multiplicatively across samples.
    const double scale = std::sqrt(bath.spacing / kTwoPi) * dt;
    ComplexVector xi(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double delta = bath.detunings(k);
        const Complex rot = std::polar(1.0, delta * dt);
        Complex cur = std::polar(1.0, delta * (h.grid.t0 - t_start));
        Complex acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += w * h.samples(j) * cur;
            cur *= rot;
        }
        xi(k) = scale * acc;
    }

    const double nrm2 = xi.squaredNorm();
    if (std::abs(nrm2 - 1.0) > 1e-2)
        throw BathGridError("discretize_input: mode comb captures only " +
                            std::to_string(nrm2) + " of the pulse; widen the bath");
    xi /= std::sqrt(nrm2);
    return xi;
}

ComplexVector reconstruct_field(const ComplexVector& xi, const BathGrid& bath,
                                double t_ref, const TimeGrid& eval) {
    if (xi.size() != bath.modes())
        throw std::invalid_argument("reconstruct_field: amplitude count != bath modes");
    validate_grid(eval);
    const double scale = std::sqrt(bath.spacing / kTwoPi);
    ComplexVector out = ComplexVector::Zero(eval.count);
    for (Eigen::Index k = 0; k < xi.size(); ++k) {
        const double delta = bath.detunings(k);
        const Complex rot = std::polar(1.0, -delta * eval.dt);
        Complex cur = xi(k) * std::polar(1.0, -delta * (eval.t0 - t_ref));
        for (Eigen::Index j = 0; j < eval.count; ++j) {
            out(j) += cur;
            cur *= rot;
        }
    }
    return out * scale;
}

namespace {

void check_step(double dt, const BathGrid& bath, double extra_rate = 0.0) {
    const double gamma = kTwoPi * bath.kappa * bath.kappa / bath.spacing;
    double bound = std::min(0.02 / gamma, 0.1 / bath.bandwidth());
    if (extra_rate > 0.0) bound = std::min(bound, 0.1 / extra_rate);
    if (dt > bound * (1.0 + 1e-9))
        throw StepSizeError("integration step " + std::to_string(dt) + " above the bound " +
                            std::to_string(bound));
}

Eigen::Index norm_stride(Eigen::Index steps) {
    return std::max<Eigen::Index>(1, steps / 4000);
}

}  // namespace

ModeTrajectory integrate_mode_equations(const ComplexVector& xi0, const ControlSchedule& s,
                                        const BathGrid& bath,
                                        Eigen::Index reconstruct_stride) {
    validate_schedule(s);
    if (xi0.size() != bath.modes())
        throw std::invalid_argument("integrate_mode_equations: xi0 size != bath modes");
    if (s.grid.span() >= kTwoPi / bath.spacing)
        throw BathGridError("integrate_mode_equations: recurrence inside the window");
    if (reconstruct_stride < 1) throw std::invalid_argument("reconstruct_stride >= 1");

    const double dt = s.grid.dt;
    check_step(dt, bath);

    const Eigen::Index m = bath.modes();
    const Eigen::Index n = s.grid.count;
    const Complex ik = kImag * bath.kappa;
    const double h2 = 0.5 * dt;
    const double h6 = dt / 6.0;

    ComplexVector mdet(m);  // -i Delta_k
    for (Eigen::Index k = 0; k < m; ++k) mdet(k) = Complex(0.0, -bath.detunings(k));

    ComplexVector xi = xi0;
    Complex dark_amp = 0.0;

    ModeTrajectory traj;
    traj.grid = s.grid;
    traj.dark.resize(n);
    traj.dark(0) = dark_amp;
    traj.sample_stride = norm_stride(n - 1);
    traj.norm_samples.resize((n - 1) / traj.sample_stride + 1);
    traj.norm_samples(0) = xi.squaredNorm() + std::norm(dark_amp);

    ComplexVector k1(m), k2(m), k3(m), k4(m), tmp(m);
    Complex sum = xi.sum();

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double c0 = s.cos_theta(i);
        const double c1 = s.cos_theta(i + 1);
        const double cm = 0.5 * (c0 + c1);

        const Complex kd1 = ik * c0 * sum;
        k1 = mdet.cwiseProduct(xi);
        k1.array() += ik * c0 * dark_amp;
        tmp = xi + h2 * k1;
        const Complex d1 = dark_amp + h2 * kd1;

        const Complex kd2 = ik * cm * tmp.sum();
        k2 = mdet.cwiseProduct(tmp);
        k2.array() += ik * cm * d1;
        tmp = xi + h2 * k2;
        const Complex d2 = dark_amp + h2 * kd2;

        const Complex kd3 = ik * cm * tmp.sum();
        k3 = mdet.cwiseProduct(tmp);
        k3.array() += ik * cm * d2;
        tmp = xi + dt * k3;
        const Complex d3 = dark_amp + dt * kd3;

        const Complex kd4 = ik * c1 * tmp.sum();
        k4 = mdet.cwiseProduct(tmp);
        k4.array() += ik * c1 * d3;

        xi += h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        dark_amp += h6 * (kd1 + 2.0 * (kd2 + kd3) + kd4);
        sum = xi.sum();

        traj.dark(i + 1) = dark_amp;
        if ((i + 1) % traj.sample_stride == 0)
            traj.norm_samples((i + 1) / traj.sample_stride) =
                xi.squaredNorm() + std::norm(dark_amp);
    }

    traj.xi_final = xi;
    TimeGrid eval{s.grid.t0, dt * static_cast<double>(reconstruct_stride),
                  (n - 1) / reconstruct_stride + 1};
    traj.h_out = PulseEnvelope{eval, reconstruct_field(xi, bath, s.grid.t_end(), eval)};
    return traj;
}

LambdaTrajectory integrate_lambda_system(const PulseEnvelope& h, const RealVector& omega,
                                         const SystemParams& p, const BathGrid& bath) {
    validate_params(p);
    validate_envelope(h);
    if (omega.size() != h.grid.count)
        throw std::invalid_argument("integrate_lambda_system: omega size != grid");
    if (omega.minCoeff() < 0.0)
        throw std::invalid_argument("integrate_lambda_system: omega must be >= 0");
    if (h.grid.span() >= kTwoPi / bath.spacing)
        throw BathGridError("integrate_lambda_system: recurrence inside the window");

    const double dt = h.grid.dt;
    const double gn = p.g_sqrt_n;
    const double omega_max = omega.maxCoeff();
    check_step(dt, bath, std::sqrt(omega_max * omega_max + gn * gn));

    ComplexVector xi = discretize_input(h, bath, h.grid.t0);

    const Eigen::Index m = bath.modes();
    const Eigen::Index n = h.grid.count;
    const Complex ik = kImag * bath.kappa;
    const Complex ign = kImag * gn;
    const double half_ga = 0.5 * p.gamma_a;
    const double h2 = 0.5 * dt;
    const double h6 = dt / 6.0;

    ComplexVector mdet(m);
    for (Eigen::Index k = 0; k < m; ++k) mdet(k) = Complex(0.0, -bath.detunings(k));

    struct Amp {
        Complex e, pp, sp;
    };
    Amp y{0.0, 0.0, 0.0};

    LambdaTrajectory traj;
    traj.grid = h.grid;
    traj.cavity.resize(n);
    traj.excited.resize(n);
    traj.spin.resize(n);
    traj.cavity(0) = traj.excited(0) = traj.spin(0) = 0.0;
    traj.sample_stride = norm_stride(n - 1);
    traj.norm_samples.resize((n - 1) / traj.sample_stride + 1);
    traj.norm_samples(0) = xi.squaredNorm();

    ComplexVector k1(m), k2(m), k3(m), k4(m), tmp(m);
    Complex sum = xi.sum();

    auto amp_deriv = [&](const Amp& a, Complex xi_sum, double om) {
        return Amp{ik * xi_sum + ign * a.pp,
                   -half_ga * a.pp + ign * a.e + kImag * om * a.sp,
                   kImag * om * a.pp};
    };

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double om0 = omega(i);
        const double om1 = omega(i + 1);
        const double omm = 0.5 * (om0 + om1);

        const Amp ka1 = amp_deriv(y, sum, om0);
        k1 = mdet.cwiseProduct(xi);
        k1.array() += ik * y.e;
        tmp = xi + h2 * k1;
        Amp y1{y.e + h2 * ka1.e, y.pp + h2 * ka1.pp, y.sp + h2 * ka1.sp};

        const Amp ka2 = amp_deriv(y1, tmp.sum(), omm);
        k2 = mdet.cwiseProduct(tmp);
        k2.array() += ik * y1.e;
        tmp = xi + h2 * k2;
        Amp y2{y.e + h2 * ka2.e, y.pp + h2 * ka2.pp, y.sp + h2 * ka2.sp};

        const Amp ka3 = amp_deriv(y2, tmp.sum(), omm);
        k3 = mdet.cwiseProduct(tmp);
        k3.array() += ik * y2.e;
        tmp = xi + dt * k3;
        Amp y3{y.e + dt * ka3.e, y.pp + dt * ka3.pp, y.sp + dt * ka3.sp};

        const Amp ka4 = amp_deriv(y3, tmp.sum(), om1);
        k4 = mdet.cwiseProduct(tmp);
        k4.array() += ik * y3.e;

        xi += h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        y.e += h6 * (ka1.e + 2.0 * (ka2.e + ka3.e) + ka4.e);
        y.pp += h6 * (ka1.pp + 2.0 * (ka2.pp + ka3.pp) + ka4.pp);
        y.sp += h6 * (ka1.sp + 2.0 * (ka2.sp + ka3.sp) + ka4.sp);
        sum = xi.sum();

        traj.cavity(i + 1) = y.e;
        traj.excited(i + 1) = y.pp;
        traj.spin(i + 1) = y.sp;
        if ((i + 1) % traj.sample_stride == 0)
            traj.norm_samples((i + 1) / traj.sample_stride) =
                xi.squaredNorm() + std::norm(y.e) + std::norm(y.pp) + std::norm(y.sp);
    }

    traj.xi_final = xi;
    return traj;
}

}  // namespace cavmem
