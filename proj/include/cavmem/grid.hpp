// grid.hpp — Uniform time grids and trapezoid quadrature helpers

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cavmem {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex kImag{0.0, 1.0};

// Uniform grid t_i = t0 + i*dt. All times are in units of the bare-cavity
// decay time 1/gamma.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    Eigen::Index count = 0;

    double time(Eigen::Index i) const { return t0 + dt * static_cast<double>(i); }
    double t_end() const { return time(count - 1); }
    double span() const { return dt * static_cast<double>(count - 1); }

    RealVector times() const {
        RealVector t(count);
        for (Eigen::Index i = 0; i < count; ++i) t(i) = time(i);
        return t;
    }
};

inline void validate_grid(const TimeGrid& g, Eigen::Index min_count = 2) {
    if (!(g.dt > 0.0)) throw std::invalid_argument("grid: dt must be positive");
    if (g.count < min_count) throw std::invalid_argument("grid: too few samples");
}

inline bool same_grid(const TimeGrid& a, const TimeGrid& b) {
    if (a.count != b.count) return false;
    const double tol_dt = 1e-12 * std::max(a.dt, b.dt);
    const double tol_t0 = 1e-9 * std::max({1.0, std::abs(a.t0), std::abs(b.t0)});
    return std::abs(a.dt - b.dt) <= tol_dt && std::abs(a.t0 - b.t0) <= tol_t0;
}

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!same_grid(a, b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

// Composite trapezoid rule on a uniform grid.
template <typename Derived>
auto trapezoid(const Eigen::MatrixBase<Derived>& f, double dt) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = f.size();
    if (n < 2) return Scalar(0);
    Scalar s = f.sum() - Scalar(0.5) * (f(0) + f(n - 1));
    return s * Scalar(dt);
}

// Running trapezoid integral; out(0) = 0, out(i) = integral up to t_i.
inline RealVector cumulative_trapezoid(const RealVector& f, double dt) {
    RealVector out(f.size());
    if (f.size() == 0) return out;
    out(0) = 0.0;
    for (Eigen::Index i = 1; i < f.size(); ++i) {
        out(i) = out(i - 1) + 0.5 * dt * (f(i - 1) + f(i));
    }
    return out;
}

}  // namespace cavmem
