#pragma once

// Three interchangeable realizations of the Kac-Baker smoothing operator
//
//   (S_l f)(x) = (1/2 l) Int exp(-|x - x'|/l) f(x') dx'
//
// and of the nonlocal operator  L phi = d/dx S_l phi_x = (S_l phi - phi)/l^2:
//
//   * spectral       - Fourier multiplier on periodic grids (exact symbol),
//   * sweep          - two recursive exponential sweeps, O(N), exact for
//                      piecewise-linear input (trapezoidal end correction),
//   * Helmholtz      - tridiagonal solve of -l^2 q'' + q = f.
//
// The identity L phi = (S_l phi - phi)/l^2 follows from the symbols
// (-k^2/(1+l^2 k^2) = (1/(1+l^2 k^2) - 1)/l^2) and lets the nonlocal term be
// evaluated without numerical differentiation, which keeps the discrete
// operator bounded by 1/l^2 exactly as the continuum symbol is.

#include "ndsg/grid.hpp"

namespace ndsg {

struct OperatorSymbol {
    double lambda = 0.0;
    // -k^2 / (1 + lambda^2 k^2); even, zero at k = 0, bounded by 1/lambda^2.
    double operator()(double k) const {
        return -k * k / (1.0 + lambda * lambda * k * k);
    }
};

// Multiply the discrete Fourier coefficients by the symbol.  Periodic fields
// only (throws std::invalid_argument otherwise).  The zero mode is
// annihilated, so the output has zero mean.
SampledField apply_symbol_spectral(const SampledField& field, const OperatorSymbol& symbol);

// S_l f by two exponential sweeps.  Outside the window the input is extended
// by its boundary values (for decaying fields whose tails vanish this is the
// zero extension; for constants it keeps the kernel's unit mass exact).
// Requires lambda > 0.
SampledField convolve_exponential(const SampledField& f, double lambda);

// S_l f via the tridiagonal discretization of -l^2 q'' + q = f; cyclic solve
// for periodic fields, Dirichlet with q = f at the ends otherwise.
SampledField helmholtz_solve(const SampledField& f, double lambda);

// L phi.  lambda = 0 falls back to the centered 4th-order second derivative;
// periodic fields go through the spectral path, decaying fields through the
// sweep identity above.
SampledField apply_nonlocal_term(const SampledField& phi, double lambda);

}  // namespace ndsg
