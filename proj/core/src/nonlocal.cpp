#include "ndsg/nonlocal.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ndsg {

namespace {

std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe

// Weights of the exact convolution of the exponential kernel with the
// piecewise-linear interpolant over one cell of width h.
struct SweepWeights {
    double d;       // exp(-h/lambda)
    double w_far;   // coefficient of the cell's far-end sample
    double w_near;  // coefficient of the cell's near-end sample
};

SweepWeights sweep_weights(double h, double lambda) {
    const double d = std::exp(-h / lambda);
    const double P = lambda * (1.0 - d);
    const double Q = (lambda * lambda / h) * (1.0 - d * (1.0 + h / lambda));
    return {d, Q / (2.0 * lambda), (P - Q) / (2.0 * lambda)};
}

}  // namespace

SampledField apply_symbol_spectral(const SampledField& field, const OperatorSymbol& symbol) {
    field.validate();
    if (field.boundary != Boundary::periodic)
        throw std::invalid_argument("apply_symbol_spectral: periodic fields only");

    const std::size_t n = field.grid.n;
    const double period = field.grid.h * static_cast<double>(n);
    std::vector<double> in(field.values);
    std::vector<std::complex<double>> spec(n / 2 + 1);

    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lk(fftw_plan_mutex);
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                   reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                   reinterpret_cast<fftw_complex*>(spec.data()), in.data(),
                                   FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double k = 2.0 * std::numbers::pi * static_cast<double>(j) / period;
        spec[j] *= symbol(k) / static_cast<double>(n);
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lk(fftw_plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    SampledField out = field;
    out.values = std::move(in);
    return out;
}

SampledField convolve_exponential(const SampledField& f, double lambda) {
    f.validate();
    if (!(lambda > 0.0))
        throw std::invalid_argument("convolve_exponential: lambda must be > 0 (use the local path)");

    const std::size_t n = f.grid.n;
    const auto w = sweep_weights(f.grid.h, lambda);
    const auto& v = f.values;
    std::vector<double> left(n), right(n);

    if (f.boundary == Boundary::periodic) {
        // One pass from a zero seed, then close the loop with the geometric
        // factor 1/(1 - d^n) so the cyclic fixed point is exact.
        const double dn = std::pow(w.d, static_cast<double>(n));
        double acc = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            acc = w.d * acc + w.w_far * v[i - 1] + w.w_near * v[i];
        const double g0 = w.w_far * v[n - 1] + w.w_near * v[0];
        left[0] = (w.d * acc + g0) / (1.0 - dn);
        for (std::size_t i = 1; i < n; ++i)
            left[i] = w.d * left[i - 1] + w.w_far * v[i - 1] + w.w_near * v[i];

        acc = 0.0;
        for (std::size_t i = n - 1; i-- > 0;)
            acc = w.d * acc + w.w_far * v[i + 1] + w.w_near * v[i];
        const double gN = w.w_far * v[0] + w.w_near * v[n - 1];
        right[n - 1] = (w.d * acc + gN) / (1.0 - dn);
        for (std::size_t i = n - 1; i-- > 0;)
            right[i] = w.d * right[i + 1] + w.w_far * v[i + 1] + w.w_near * v[i];
    } else {
        // Constant extension by the boundary samples: the half-line integral
        // of the kernel against a constant c contributes c/2.
        left[0] = 0.5 * v[0];
        for (std::size_t i = 1; i < n; ++i)
            left[i] = w.d * left[i - 1] + w.w_far * v[i - 1] + w.w_near * v[i];
        right[n - 1] = 0.5 * v[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            right[i] = w.d * right[i + 1] + w.w_far * v[i + 1] + w.w_near * v[i];
    }

    SampledField out = f;
    for (std::size_t i = 0; i < n; ++i) out.values[i] = left[i] + right[i];
    return out;
}

namespace {

// Thomas solve of (-a q_{i-1} + b q_i - a q_{i+1}) = rhs_i, Dirichlet data
// already folded into rhs at the first/last interior rows.
void thomas(double a, double b, std::vector<double>& rhs) {
    const std::size_t m = rhs.size();
    std::vector<double> c(m);
    c[0] = a / b;
    rhs[0] /= b;
    for (std::size_t i = 1; i < m; ++i) {
        const double denom = b - a * c[i - 1];
        c[i] = a / denom;
        rhs[i] = (rhs[i] + a * rhs[i - 1]) / denom;
    }
    for (std::size_t i = m - 1; i-- > 0;) rhs[i] += c[i] * rhs[i + 1];
}

}  // namespace

SampledField helmholtz_solve(const SampledField& f, double lambda) {
    f.validate();
    if (!(lambda > 0.0))
        throw std::invalid_argument("helmholtz_solve: lambda must be > 0");

    const std::size_t n = f.grid.n;
    const double h = f.grid.h;
    const double a = lambda * lambda / (h * h);   // off-diagonal magnitude
    const double b = 1.0 + 2.0 * a;               // diagonal
    SampledField out = f;

    if (f.boundary == Boundary::periodic) {
        // Sherman-Morrison for the cyclic system.
        std::vector<double> rhs(f.values);
        std::vector<double> u(n, 0.0);
        const double gamma = -b;
        u[0] = gamma;
        u[n - 1] = -a;
        // Modified diagonal corners: b' = b - gamma at 0, b - a^2/gamma at end.
        // Solve A' q = rhs and A' z = u with A' tridiagonal (no wrap).
        std::vector<double> diag(n, b);
        diag[0] = b - gamma;
        diag[n - 1] = b - a * a / gamma;
        auto solve_tri = [&](std::vector<double>& x) {
            std::vector<double> c(n);
            c[0] = a / diag[0];
            x[0] /= diag[0];
            for (std::size_t i = 1; i < n; ++i) {
                const double denom = diag[i] - a * c[i - 1];
                c[i] = a / denom;
                x[i] = (x[i] + a * x[i - 1]) / denom;
            }
            for (std::size_t i = n - 1; i-- > 0;) x[i] += c[i] * x[i + 1];
        };
        std::vector<double> z = u;
        solve_tri(rhs);
        solve_tri(z);
        const double vq = rhs[0] - (a / gamma) * rhs[n - 1];
        const double vz = 1.0 + z[0] - (a / gamma) * z[n - 1];
        const double fac = vq / vz;
        for (std::size_t i = 0; i < n; ++i) out.values[i] = rhs[i] - fac * z[i];
    } else {
        // Dirichlet: q = f at both ends (tail values of the input).
        std::vector<double> rhs(f.values.begin() + 1, f.values.end() - 1);
        rhs.front() += a * f.values.front();
        rhs.back() += a * f.values.back();
        thomas(a, b, rhs);
        out.values.front() = f.values.front();
        out.values.back() = f.values.back();
        for (std::size_t i = 0; i < rhs.size(); ++i) out.values[i + 1] = rhs[i];
    }
    return out;
}

SampledField apply_nonlocal_term(const SampledField& phi, double lambda) {
    phi.validate();
    if (lambda < 0.0) throw std::invalid_argument("apply_nonlocal_term: lambda must be >= 0");

    if (lambda == 0.0) {
        SampledField out = phi;
        out.values = fd_second_derivative(phi);
        return out;
    }
    if (phi.boundary == Boundary::periodic)
        return apply_symbol_spectral(phi, OperatorSymbol{lambda});

    SampledField smooth = convolve_exponential(phi, lambda);
    SampledField out = phi;
    const double il2 = 1.0 / (lambda * lambda);
    for (std::size_t i = 0; i < phi.grid.n; ++i)
        out.values[i] = (smooth.values[i] - phi.values[i]) * il2;
    return out;
}

}  // namespace ndsg
