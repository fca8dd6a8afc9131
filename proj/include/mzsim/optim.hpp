#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace mzsim {

/// Brent's method on [a, b]; requires f(a) and f(b) of opposite sign.
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double xtol = 1e-13, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa * fb > 0.0) throw std::invalid_argument("brent_root: no sign change in bracket");
    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa, d = b - a;
    bool mflag = true;
    for (int it = 0; it < max_iter; ++it) {
        if (fb == 0.0 || std::abs(b - a) < xtol) return b;
        double s;
        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        const double lo = (3 * a + b) / 4;
        const bool out_of_range = (s < std::min(lo, b) || s > std::max(lo, b));
        const bool slow = mflag ? (std::abs(s - b) >= std::abs(b - c) / 2)
                                : (std::abs(s - b) >= std::abs(c - d) / 2);
        if (out_of_range || slow) {
            s = (a + b) / 2;
            mflag = true;
        } else {
            mflag = false;
        }
        const double fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (fa * fs < 0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
    }
    return b;
}

/// Golden-section minimizer on [a, b].
inline double golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double xtol = 1e-12, int max_iter = 400) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return (a + b) / 2;
}

}  // namespace mzsim
