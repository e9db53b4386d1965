#include "ndsg/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ndsg {

void Grid::validate() const {
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(x0))
        throw std::invalid_argument("Grid: spacing must be positive and finite");
    if (n < 4)
        throw std::invalid_argument("Grid: need at least 4 nodes");
}

void SampledField::validate() const {
    grid.validate();
    if (values.size() != grid.n)
        throw std::invalid_argument("SampledField: value count != node count");
}

double SampledField::tail_variation() const {
    validate();
    const std::size_t m = std::max<std::size_t>(2, grid.n / 20);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i)
        worst = std::max(worst, std::abs(values[i + 1] - values[i]));
    for (std::size_t i = grid.n - m; i + 1 < grid.n; ++i)
        worst = std::max(worst, std::abs(values[i + 1] - values[i]));
    return worst;
}

namespace {

// f'(x_i) and f''(x_i) by 5-point stencils.  For periodic fields indices
// wrap; for decaying fields the edge nodes use shifted 5-point stencils of
// the same order.
template <bool second>
std::vector<double> fd_apply(const SampledField& f) {
    f.validate();
    const std::size_t n = f.grid.n;
    const double h = f.grid.h;
    const auto& v = f.values;
    std::vector<double> out(n);

    auto centered = [&](auto at) {
        for (std::size_t i = 0; i < n; ++i) {
            const double m2 = at(i, -2), m1 = at(i, -1), p1 = at(i, 1), p2 = at(i, 2);
            if constexpr (second)
                out[i] = (-m2 + 16.0 * m1 - 30.0 * v[i] + 16.0 * p1 - p2) / (12.0 * h * h);
            else
                out[i] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        }
    };

    if (f.boundary == Boundary::periodic) {
        centered([&](std::size_t i, long off) {
            return v[(i + n + static_cast<std::size_t>(off + static_cast<long>(n))) % n];
        });
        return out;
    }

    // Interior: centered stencils.
    for (std::size_t i = 2; i + 2 < n; ++i) {
        if constexpr (second)
            out[i] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) /
                     (12.0 * h * h);
        else
            out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    }
    // One-sided 5/6-point stencils at the edges.
    auto d1 = [&](std::size_t i0, int s) {
        // 5-point forward/backward first derivative, 4th order
        auto a = [&](int j) { return v[i0 + static_cast<std::size_t>(s * j)]; };
        return s * (-25.0 * a(0) + 48.0 * a(1) - 36.0 * a(2) + 16.0 * a(3) - 3.0 * a(4)) /
               (12.0 * h);
    };
    auto d1b = [&](std::size_t i0, int s) {
        // shifted stencil for the second node in from an edge
        auto a = [&](int j) { return v[i0 + static_cast<std::size_t>(s * j)]; };
        return s * (-3.0 * a(-1) - 10.0 * a(0) + 18.0 * a(1) - 6.0 * a(2) + a(3)) / (12.0 * h);
    };
    auto d2 = [&](std::size_t i0, int s) {
        // 6-point one-sided second derivative, 4th order
        auto a = [&](int j) { return v[i0 + static_cast<std::size_t>(s * j)]; };
        return (45.0 * a(0) - 154.0 * a(1) + 214.0 * a(2) - 156.0 * a(3) + 61.0 * a(4) -
                10.0 * a(5)) /
               (12.0 * h * h);
    };
    auto d2b = [&](std::size_t i0, int s) {
        auto a = [&](int j) { return v[i0 + static_cast<std::size_t>(s * j)]; };
        return (10.0 * a(-1) - 15.0 * a(0) - 4.0 * a(1) + 14.0 * a(2) - 6.0 * a(3) + a(4)) /
               (12.0 * h * h);
    };
    if constexpr (second) {
        out[0] = d2(0, 1);
        out[1] = d2b(1, 1);
        out[n - 1] = d2(n - 1, -1);
        out[n - 2] = d2b(n - 2, -1);
    } else {
        out[0] = d1(0, 1);
        out[1] = d1b(1, 1);
        out[n - 1] = d1(n - 1, -1);
        out[n - 2] = d1b(n - 2, -1);
    }
    return out;
}

}  // namespace

std::vector<double> fd_derivative(const SampledField& f) { return fd_apply<false>(f); }
std::vector<double> fd_second_derivative(const SampledField& f) { return fd_apply<true>(f); }

double trapezoid(const std::vector<double>& values, double h) {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * h;
}

}  // namespace ndsg
