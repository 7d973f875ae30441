#pragma once

// Golden-section maximization of a scalar function on an interval.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qfiport {

struct OptResult {
    double x_star = 0.0;
    double f_star = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
    bool multimodal_warning = false;
};

// Assumes f is unimodal on [lo, hi]; a final 11-point scan of the original
// interval flags candidates the bracket missed instead of failing.
inline OptResult golden_section_max(const std::function<double(double)>& f,
                                    double lo, double hi, double tol = 1e-8,
                                    int max_iter = 200) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_max: requires lo < hi");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - (b - a) * invphi;
    double d = a + (b - a) * invphi;
    double fc = f(c), fd = f(d);
    int it = 0;
    while (b - a > tol && it < max_iter) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d);
        }
        ++it;
    }
    OptResult r;
    r.x_star = 0.5 * (a + b);
    r.f_star = f(r.x_star);
    r.iterations = it;
    r.bracket_width = b - a;
    for (int i = 0; i <= 10; ++i) {
        const double x = lo + (hi - lo) * i / 10.0;
        if (f(x) > r.f_star + 1e-12 * (1.0 + std::abs(r.f_star)))
            r.multimodal_warning = true;
    }
    return r;
}

}  // namespace qfiport
