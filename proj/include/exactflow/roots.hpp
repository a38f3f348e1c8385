#pragma once

#include <functional>
#include <optional>

#include "exactflow/errors.hpp"

namespace exactflow {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
};

struct RootOptions {
    // Iteration stops once the bracket is this many ulps wide (relative) or
    // narrower than abs_width.
    double rel_width = 4.0e-16;
    double abs_width = 0.0;
    int max_iterations = 400;
};

// Bracketed bisection-secant hybrid. Requires f(lo) and f(hi) of opposite
// sign (or one of them zero). Deterministic for a fixed bracket.
// Throws BracketError without a sign change, DomainError when f returns a
// non-finite value.
double find_root(const std::function<double(double)>& f, Interval bracket,
                 const RootOptions& options = {});

// Samples f on `samples` points of [lo, hi] (geometric spacing when
// `geometric` and lo > 0) and returns the first subinterval with a sign
// change. Points where f throws or is non-finite are skipped.
std::optional<Interval> scan_for_bracket(const std::function<double(double)>& f, Interval range,
                                         int samples, bool geometric = false);

}  // namespace exactflow
