#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace mzsim {

using cplx = std::complex<double>;

/// Amplitudes below this magnitude are dropped after arithmetic, so exact
/// cancellations (HOM nulls) do not pollute the key set.
inline constexpr double kAmplitudePrune = 1e-15;

/// Per-mode photon occupation numbers. Length equals the mode count.
using OccupationVector = std::vector<int>;

inline int total_photons(const OccupationVector& occ) {
    int n = 0;
    for (int k : occ) n += k;
    return n;
}

inline double factorial(int n) {
    // exact in double up to 18!
    static const double table[] = {1., 1., 2., 6., 24., 120., 720., 5040., 40320.,
                                   362880., 3628800., 39916800., 479001600.,
                                   6227020800., 87178291200., 1307674368000.,
                                   20922789888000., 355687428096000., 6402373705728000.};
    if (n < 0 || n > 18) throw std::invalid_argument("factorial: out of supported range");
    return table[n];
}

inline double sqrt_occ_factorial(const OccupationVector& occ) {
    double f = 1.0;
    for (int n : occ) f *= factorial(n);
    return std::sqrt(f);
}

/// Polynomial in creation operators applied to vacuum. Keys are per-mode
/// exponent vectors, values the complex coefficients.
struct CreationPolynomial {
    int modes = 0;
    std::map<OccupationVector, cplx> terms;
};

/// Sparse superposition over multimode Fock states. States produced by a
/// measurement projection are flagged `normalized = false` (tilde states).
struct FockStateVector {
    int modes = 0;
    std::map<OccupationVector, cplx> amplitudes;
    bool normalized = true;

    void prune(double eps = kAmplitudePrune) {
        for (auto it = amplitudes.begin(); it != amplitudes.end();) {
            if (std::abs(it->second) <= eps)
                it = amplitudes.erase(it);
            else
                ++it;
        }
    }
};

inline FockStateVector vacuum(int modes) {
    if (modes < 1) throw std::invalid_argument("vacuum: mode count must be >= 1");
    FockStateVector s;
    s.modes = modes;
    s.amplitudes[OccupationVector(modes, 0)] = 1.0;
    return s;
}

inline double norm_sq(const FockStateVector& s) {
    double n = 0.0;
    for (const auto& [occ, amp] : s.amplitudes) n += std::norm(amp);
    return n;
}

inline cplx inner_product(const FockStateVector& a, const FockStateVector& b) {
    if (a.modes != b.modes)
        throw std::invalid_argument("inner_product: mode count mismatch");
    cplx r = 0.0;
    // iterate the smaller map
    const auto& small = a.amplitudes.size() <= b.amplitudes.size() ? a : b;
    const auto& large = a.amplitudes.size() <= b.amplitudes.size() ? b : a;
    const bool small_is_a = &small == &a;
    for (const auto& [occ, amp] : small.amplitudes) {
        auto it = large.amplitudes.find(occ);
        if (it == large.amplitudes.end()) continue;
        r += small_is_a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return r;
}

inline FockStateVector tensor(const FockStateVector& a, const FockStateVector& b) {
    FockStateVector out;
    out.modes = a.modes + b.modes;
    out.normalized = a.normalized && b.normalized;
    for (const auto& [ka, va] : a.amplitudes) {
        for (const auto& [kb, vb] : b.amplitudes) {
            OccupationVector k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            out.amplitudes[k] = va * vb;
        }
    }
    out.prune();
    return out;
}

/// Drops keys exceeding the per-mode or total photon limits. The result is
/// flagged unnormalized.
inline FockStateVector truncate(const FockStateVector& s, int per_mode_max, int total_max) {
    if (per_mode_max < 0 || total_max < 0)
        throw std::invalid_argument("truncate: limits must be >= 0");
    FockStateVector out;
    out.modes = s.modes;
    out.normalized = false;
    for (const auto& [occ, amp] : s.amplitudes) {
        bool ok = total_photons(occ) <= total_max;
        for (int n : occ)
            if (n > per_mode_max) ok = false;
        if (ok) out.amplitudes[occ] = amp;
    }
    return out;
}

/// Exact Fock expansion of a creation-operator polynomial on vacuum:
/// each exponent vector n contributes coefficient * sqrt(prod n_i!).
inline FockStateVector polynomial_to_state(const CreationPolynomial& p) {
    FockStateVector s;
    s.modes = p.modes;
    for (const auto& [exps, coeff] : p.terms)
        s.amplitudes[exps] = coeff * sqrt_occ_factorial(exps);
    s.prune();
    return s;
}

inline CreationPolynomial state_to_polynomial(const FockStateVector& s) {
    CreationPolynomial p;
    p.modes = s.modes;
    for (const auto& [occ, amp] : s.amplitudes)
        p.terms[occ] = amp / sqrt_occ_factorial(occ);
    return p;
}

inline CreationPolynomial poly_multiply(const CreationPolynomial& a, const CreationPolynomial& b) {
    if (a.modes != b.modes)
        throw std::invalid_argument("poly_multiply: mode count mismatch");
    CreationPolynomial r;
    r.modes = a.modes;
    for (const auto& [ea, ca] : a.terms) {
        for (const auto& [eb, cb] : b.terms) {
            OccupationVector e(a.modes);
            for (int i = 0; i < a.modes; ++i) e[i] = ea[i] + eb[i];
            r.terms[e] += ca * cb;
        }
    }
    for (auto it = r.terms.begin(); it != r.terms.end();) {
        if (std::abs(it->second) <= kAmplitudePrune)
            it = r.terms.erase(it);
        else
            ++it;
    }
    return r;
}

inline FockStateVector add(const FockStateVector& a, const FockStateVector& b) {
    if (a.modes != b.modes) throw std::invalid_argument("add: mode count mismatch");
    FockStateVector out = a;
    out.normalized = false;
    for (const auto& [occ, amp] : b.amplitudes) out.amplitudes[occ] += amp;
    out.prune();
    return out;
}

inline FockStateVector scale(const FockStateVector& s, cplx c) {
    FockStateVector out = s;
    out.normalized = false;
    for (auto& [occ, amp] : out.amplitudes) amp *= c;
    out.prune();
    return out;
}

}  // namespace mzsim
