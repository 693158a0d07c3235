#pragma once

#include <functional>

namespace fracdn {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // accumulated |Kronrod - Gauss| over accepted intervals
    long evaluations = 0;
    double upper_cutoff = 0.0;  // right end actually reached (semi-infinite rules)
};

using Integrand = std::function<double(double)>;

// Single Gauss7/Kronrod15 panel on [a, b].
QuadResult gk15(const Integrand& f, double a, double b);

// Adaptive bisection with GK15 panels. Accepts a panel when its error
// estimate is below rel_tol * max(1, |panel value|) or the panel has shrunk
// below width_floor. Suited to smooth decaying integrands; not a general
// singular-integral engine.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double rel_tol = 1e-12, double width_floor = 1e-12);

// Integral over [a, +inf): marches right in fixed-width chunks, each
// integrated adaptively, until a chunk contributes less than tail_rel of the
// accumulated value (or the hard cap of max_chunks is hit, which throws).
QuadResult integrate_right_tail(const Integrand& f, double a, double chunk_width = 3.0,
                                double rel_tol = 1e-12, double tail_rel = 1e-10,
                                int max_chunks = 200);

// Integral over (-inf, b]: same marching scheme mirrored to the left.
QuadResult integrate_left_tail(const Integrand& f, double b, double chunk_width = 3.0,
                               double rel_tol = 1e-12, double tail_rel = 1e-10,
                               int max_chunks = 200);

}  // namespace fracdn
