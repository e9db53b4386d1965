#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the classical quartic dense
// interpolant, terminal-event location, and fixed-stride dense sampling.
// Templated on the scalar so the shooting code can escalate from double to
// long double when a mismatch function sinks toward the roundoff floor.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace ndsg::ode {

enum class StepStatus {
    reached_end,   // integrated to x_end
    event,         // terminal event located
    blow_up,       // solution norm exceeded the guard
    step_underflow // step size collapsed below machine resolution
};

template <class S>
struct Options {
    S rtol = S(1e-10);
    S atol = S(1e-12);
    S h_init = S(1e-3);
    S h_max = S(0);          // 0: no cap
    S guard_norm = S(1e6);   // blow-up threshold on max |y_i|
    std::size_t max_steps = 50'000'000;
};

template <class S, std::size_t N>
struct Result {
    StepStatus status = StepStatus::reached_end;
    S x = S(0);
    std::array<S, N> y{};
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;
};

// One accepted step's dense-output data; evaluates y(x0 + theta*h).
template <class S, std::size_t N>
struct DenseSegment {
    S x0 = S(0), h = S(0);
    std::array<S, N> r1{}, r2{}, r3{}, r4{}, r5{};

    std::array<S, N> eval(S x) const {
        const S th = (x - x0) / h;
        const S th1 = S(1) - th;
        std::array<S, N> y{};
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

template <class S, std::size_t N, class RHS>
class DormandPrince5 {
  public:
    using State = std::array<S, N>;

    explicit DormandPrince5(RHS rhs, Options<S> opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

    // Integrate from (x0, y0) to x_end.  If `event` is non-null, stop at its
    // first sign change in the requested direction (+1: increasing through
    // zero) and return the located event state.  If `sampler` is non-null it
    // is called at x0, x0+stride, ... via dense output.
    Result<S, N> solve(State y0, S x0, S x_end,
                       const std::function<S(S, const State&)>* event = nullptr,
                       int event_direction = 1,
                       const std::function<void(S, const State&)>* sampler = nullptr,
                       S sample_stride = S(0)) {
        Result<S, N> res;
        State y = y0;
        S x = x0;
        S h = opt_.h_init > S(0) ? opt_.h_init : S(1e-3);
        if (opt_.h_max > S(0)) h = std::min(h, opt_.h_max);

        State k1;
        rhs_(x, y, k1);
        S next_sample = x0;
        if (sampler) {
            (*sampler)(x, y);
            next_sample = x0 + sample_stride;
        }
        S g_prev = event ? (*event)(x, y) : S(0);

        while (res.n_steps < opt_.max_steps) {
            if (x + h > x_end) h = x_end - x;
            if (!(h > S(0)) || x + h == x) {
                res.status = StepStatus::step_underflow;
                break;
            }

            State y_new, k_new, err;
            step(x, y, k1, h, y_new, k_new, err);
            const S en = error_norm(y, y_new, err);
            if (en > S(1)) {
                ++res.n_rejected;
                h *= std::max(S(0.2), S(0.9) * pow_fifth(S(1) / en));
                continue;
            }

            ++res.n_steps;
            DenseSegment<S, N> seg = make_dense(x, h, y, y_new, k1, k_new);

            if (sampler) {
                while (next_sample <= x + h + std::numeric_limits<S>::epsilon() * std::abs(x + h) &&
                       next_sample <= x_end) {
                    auto ys = seg.eval(std::min(next_sample, x + h));
                    (*sampler)(next_sample, ys);
                    next_sample += sample_stride;
                }
            }

            if (event) {
                const S g_new = (*event)(x + h, y_new);
                const bool crossed = (event_direction >= 0 && g_prev < S(0) && g_new >= S(0)) ||
                                     (event_direction <= 0 && g_prev > S(0) && g_new <= S(0));
                if (crossed) {
                    locate_event(seg, *event, x, x + h, res);
                    res.status = StepStatus::event;
                    return res;
                }
                g_prev = g_new;
            }

            x += h;
            y = y_new;
            k1 = k_new;  // FSAL

            S big = S(0);
            for (auto c : y) big = std::max(big, std::abs(c));
            if (big > opt_.guard_norm) {
                res.status = StepStatus::blow_up;
                break;
            }
            if (x >= x_end) {
                res.status = StepStatus::reached_end;
                break;
            }

            S fac = S(0.9) * pow_fifth(S(1) / std::max(en, S(1e-30)));
            fac = std::min(S(5), std::max(S(0.2), fac));
            h *= fac;
            if (opt_.h_max > S(0)) h = std::min(h, opt_.h_max);
        }
        res.x = x;
        res.y = y;
        return res;
    }

  private:
    RHS rhs_;
    Options<S> opt_;

    static S pow_fifth(S v) { return std::pow(v, S(1) / S(5)); }

    void step(S x, const State& y, const State& k1, S h, State& y_new, State& k_new,
              State& err) {
        // Dormand & Prince RK5(4)7M tableau.
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State t, k2, k3, k4, k5, k6;
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * S(a21) * k1[i];
        rhs_(x + h * S(0.2), t, k2);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (S(a31) * k1[i] + S(a32) * k2[i]);
        rhs_(x + h * S(0.3), t, k3);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (S(a41) * k1[i] + S(a42) * k2[i] + S(a43) * k3[i]);
        rhs_(x + h * S(0.8), t, k4);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (S(a51) * k1[i] + S(a52) * k2[i] + S(a53) * k3[i] + S(a54) * k4[i]);
        rhs_(x + h * S(8.0 / 9.0), t, k5);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (S(a61) * k1[i] + S(a62) * k2[i] + S(a63) * k3[i] +
                               S(a64) * k4[i] + S(a65) * k5[i]);
        rhs_(x + h, t, k6);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (S(b1) * k1[i] + S(b3) * k3[i] + S(b4) * k4[i] +
                                   S(b5) * k5[i] + S(b6) * k6[i]);
        rhs_(x + h, y_new, k_new);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (S(e1) * k1[i] + S(e3) * k3[i] + S(e4) * k4[i] + S(e5) * k5[i] +
                          S(e6) * k6[i] + S(e7) * k_new[i]);
        ks_ = {k1, k3, k4, k5, k6, k_new};
    }

    S error_norm(const State& y_old, const State& y_new, const State& err) const {
        S s = S(0);
        for (std::size_t i = 0; i < N; ++i) {
            const S sc = opt_.atol + opt_.rtol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
            const S q = err[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / S(N));
    }

    DenseSegment<S, N> make_dense(S x, S h, const State& y, const State& y_new, const State& k1,
                                  const State& k_new) const {
        // Hairer's contd5 coefficients.
        constexpr double d1 = -12715105075.0 / 11282082432.0;
        constexpr double d3 = 87487479700.0 / 32700410799.0;
        constexpr double d4 = -10690763975.0 / 1880347072.0;
        constexpr double d5 = 701980252875.0 / 199316789632.0;
        constexpr double d6 = -1453857185.0 / 822651844.0;
        constexpr double d7 = 69997945.0 / 29380423.0;
        const auto& [K1, K3, K4, K5, K6, K7] = ks_;
        DenseSegment<S, N> seg;
        seg.x0 = x;
        seg.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            const S dy = y_new[i] - y[i];
            const S bspl = h * k1[i] - dy;
            seg.r1[i] = y[i];
            seg.r2[i] = dy;
            seg.r3[i] = bspl;
            seg.r4[i] = dy - h * k_new[i] - bspl;
            seg.r5[i] = h * (S(d1) * K1[i] + S(d3) * K3[i] + S(d4) * K4[i] + S(d5) * K5[i] +
                             S(d6) * K6[i] + S(d7) * K7[i]);
        }
        return seg;
    }

    void locate_event(const DenseSegment<S, N>& seg, const std::function<S(S, const State&)>& g,
                      S xa, S xb, Result<S, N>& res) const {
        S ga = g(xa, seg.eval(xa));
        for (int it = 0; it < 200; ++it) {
            const S xm = S(0.5) * (xa + xb);
            if (xm == xa || xm == xb) break;
            const S gm = g(xm, seg.eval(xm));
            if ((ga <= S(0) && gm <= S(0)) || (ga > S(0) && gm > S(0))) {
                xa = xm;
                ga = gm;
            } else {
                xb = xm;
            }
        }
        res.x = xb;
        res.y = seg.eval(xb);
    }

    std::array<State, 6> ks_{};
};

// Convenience wrapper deducing the RHS type.
template <class S, std::size_t N, class RHS>
DormandPrince5<S, N, RHS> make_dp5(RHS rhs, Options<S> opt = {}) {
    return DormandPrince5<S, N, RHS>(std::move(rhs), opt);
}

}  // namespace ndsg::ode
