#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mzsim/fock.hpp"

namespace mzsim {

/// Click/no-click weight convention. `Squared` follows P = ||Pi |psi>||^2
/// (the POVM element is not idempotent, so weights enter the probability
/// squared); `Linear` is the textbook E = sum p_n |n><n| expectation.
enum class PovmConvention { Squared, Linear };

enum class Outcome { Click, NoClick, Unconditioned };

using OutcomePattern = std::vector<Outcome>;

/// Per-mode detection efficiencies xi_k in [0,1]. Dark counts are zero.
struct DetectorModel {
    std::vector<double> xi;

    explicit DetectorModel(std::vector<double> efficiencies) : xi(std::move(efficiencies)) {
        for (double x : xi)
            if (x < 0.0 || x > 1.0)
                throw std::invalid_argument("DetectorModel: efficiencies must lie in [0,1]");
    }
    static DetectorModel uniform(double x, int modes) {
        return DetectorModel(std::vector<double>(modes, x));
    }
    int modes() const { return static_cast<int>(xi.size()); }
};

/// No-click weights q_n = (1-xi)^n and click weights p_n = 1 - q_n.
struct PovmWeights {
    int mode = 0;
    std::vector<double> q, p;
};

inline PovmWeights weights(double xi, int n_max) {
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("weights: xi must lie in [0,1]");
    PovmWeights w;
    w.q.resize(n_max + 1);
    w.p.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        w.q[n] = std::pow(1.0 - xi, n);
        w.p[n] = 1.0 - w.q[n];
    }
    return w;
}

inline double click_weight(double xi, int n) { return 1.0 - std::pow(1.0 - xi, n); }
inline double noclick_weight(double xi, int n) { return std::pow(1.0 - xi, n); }

/// Product over modes of p_n (Click), q_n (NoClick) or 1 (Unconditioned).
inline double pattern_weight(const OutcomePattern& pattern, const OccupationVector& occ,
                             const DetectorModel& det) {
    if (pattern.size() != occ.size() || det.modes() != static_cast<int>(occ.size()))
        throw std::invalid_argument("pattern_weight: length mismatch");
    double w = 1.0;
    for (size_t k = 0; k < occ.size(); ++k) {
        switch (pattern[k]) {
            case Outcome::Click: w *= click_weight(det.xi[k], occ[k]); break;
            case Outcome::NoClick: w *= noclick_weight(det.xi[k], occ[k]); break;
            case Outcome::Unconditioned: break;
        }
    }
    return w;
}

/// Unnormalized post-measurement (tilde) state: each amplitude is multiplied
/// by the pattern weight of its key.
inline FockStateVector project(const FockStateVector& state, const OutcomePattern& pattern,
                               const DetectorModel& det) {
    FockStateVector out;
    out.modes = state.modes;
    out.normalized = false;
    for (const auto& [occ, amp] : state.amplitudes) {
        const double w = pattern_weight(pattern, occ, det);
        if (std::abs(w) > kAmplitudePrune && std::abs(amp) * w > kAmplitudePrune)
            out.amplitudes[occ] = amp * w;
    }
    return out;
}

/// Outcome probability. Squared convention: ||project(state)||^2, i.e.
/// sum w^2 |amp|^2. Linear convention: sum w |amp|^2.
inline double outcome_probability(const FockStateVector& state, const OutcomePattern& pattern,
                                  const DetectorModel& det,
                                  PovmConvention convention = PovmConvention::Squared) {
    double p = 0.0;
    for (const auto& [occ, amp] : state.amplitudes) {
        const double w = pattern_weight(pattern, occ, det);
        p += (convention == PovmConvention::Squared ? w * w : w) * std::norm(amp);
    }
    return p;
}

/// Single-mode dichotomy defect 1 - (P_C + P_NC) under the squared convention;
/// zero only for xi in {0, 1} or single-photon support. Reported per run.
inline double dichotomy_defect(const FockStateVector& state, int mode, double xi) {
    double pc = 0.0, pnc = 0.0;
    for (const auto& [occ, amp] : state.amplitudes) {
        const double q = noclick_weight(xi, occ[mode]);
        const double p = 1.0 - q;
        pc += p * p * std::norm(amp);
        pnc += q * q * std::norm(amp);
    }
    return 1.0 - (pc + pnc);
}

}  // namespace mzsim
