#include "exactflow/roots.hpp"

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "exactflow/errors.hpp"

namespace exactflow {

namespace {

double checked(const std::function<double(double)>& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg << "find_root: function is not finite at " << x;
        throw DomainError(msg.str());
    }
    return y;
}

}  // namespace

double find_root(const std::function<double(double)>& f, Interval bracket, const RootOptions& options) {
    double a = bracket.lo;
    double b = bracket.hi;
    if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("find_root: non-finite bracket");
    double fa = checked(f, a);
    double fb = checked(f, b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << a << ", " << b << "] (f = " << fa << ", " << fb << ")";
        throw BracketError(msg.str());
    }

    // Illinois-modified regula falsi; a bisection step is forced whenever the
    // bracket fails to halve over two consecutive iterations.
    int side = 0;
    double last_width = std::fabs(b - a);
    int slow_steps = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
        const double width = std::fabs(b - a);
        const double scale = std::max(std::fabs(a), std::fabs(b));
        if (width <= options.rel_width * scale || width <= options.abs_width) break;

        double c;
        if (slow_steps >= 2) {
            c = 0.5 * (a + b);
            slow_steps = 0;
        } else {
            c = (a * fb - b * fa) / (fb - fa);
            if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
        }
        if (c == a || c == b) break;  // bracket exhausted at double resolution

        const double fc = checked(f, c);
        if (fc == 0.0) return c;
        if (std::signbit(fc) == std::signbit(fb)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == +1) fb *= 0.5;
            side = +1;
        }
        const double new_width = std::fabs(b - a);
        slow_steps = new_width > 0.5 * last_width ? slow_steps + 1 : 0;
        last_width = new_width;
    }
    // Return the endpoint with the smaller residual (scaled fa/fb are not
    // residuals any more, so re-evaluate).
    return std::fabs(checked(f, a)) < std::fabs(checked(f, b)) ? a : b;
}

std::optional<Interval> scan_for_bracket(const std::function<double(double)>& f, Interval range,
                                         int samples, bool geometric) {
    if (samples < 2) samples = 2;
    const bool geo = geometric && range.lo > 0.0 && range.hi > 0.0;
    auto point = [&](int i) {
        const double t = static_cast<double>(i) / (samples - 1);
        return geo ? range.lo * std::pow(range.hi / range.lo, t) : range.lo + t * (range.hi - range.lo);
    };
    std::optional<std::pair<double, double>> prev;
    for (int i = 0; i < samples; ++i) {
        const double x = point(i);
        double y;
        try {
            y = f(x);
        } catch (const Error&) {
            prev.reset();
            continue;
        }
        if (!std::isfinite(y)) {
            prev.reset();
            continue;
        }
        if (y == 0.0) return Interval{x, x};
        if (prev && std::signbit(prev->second) != std::signbit(y)) return Interval{prev->first, x};
        prev = {x, y};
    }
    return std::nullopt;
}

}  // namespace exactflow
