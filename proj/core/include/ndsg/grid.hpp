#pragma once

#include <cstddef>
#include <vector>

namespace ndsg {

// Uniform 1-D grid: nodes x0, x0 + h, ..., x0 + (n-1) h.
struct Grid {
    double h = 0.0;
    std::size_t n = 0;
    double x0 = 0.0;

    double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
    double length() const { return h * static_cast<double>(n - 1); }
    void validate() const;  // throws on h <= 0 or n < 4
};

enum class Boundary {
    periodic,   // values wrap; node n would coincide with node 0 + period
    decaying,   // field tends to constants outside the window
};

// Immutable once constructed; operators return new fields.
struct SampledField {
    Grid grid;
    std::vector<double> values;
    Boundary boundary = Boundary::decaying;

    void validate() const;  // grid valid and values.size() == grid.n

    // Largest |value[i+1] - value[i]| within the first and last 5% of nodes.
    // Small tail variation is what the decaying boundary model relies on.
    double tail_variation() const;
};

// Centered 4th-order first derivative; one-sided 4th-order stencils at the
// edges for decaying fields, wrap-around for periodic ones.
std::vector<double> fd_derivative(const SampledField& f);

// Centered 4th-order second derivative, same edge handling.
std::vector<double> fd_second_derivative(const SampledField& f);

// Composite trapezoidal quadrature of nodal values over the grid.
double trapezoid(const std::vector<double>& values, double h);

}  // namespace ndsg
