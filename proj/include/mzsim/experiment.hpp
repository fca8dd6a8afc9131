#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mzsim/detection.hpp"
#include "mzsim/fock.hpp"
#include "mzsim/linear_optics.hpp"
#include "mzsim/nlpsg.hpp"

namespace mzsim {

enum class InputKind { WCS, ClSPDC, Custom };

inline std::string to_string(InputKind k) {
    switch (k) {
        case InputKind::WCS: return "wcs";
        case InputKind::ClSPDC: return "clspdc";
        default: return "custom";
    }
}

/// One MZI arm: normalized amplitudes (alpha_0, alpha_1, alpha_2) of the
/// vacuum / one-photon / two-photon branches, plus the derived mean photon
/// number nbar = alpha^2 of the underlying weak field.
struct InputSpec {
    InputKind kind = InputKind::Custom;
    std::array<cplx, 3> alpha{};
    double mean_n = 0.0;

    /// Weak coherent state truncated at two photons and renormalized:
    /// alpha_k = alpha^k / sqrt(k!) / sqrt(1 + alpha^2 + alpha^4/2).
    static InputSpec wcs(double field_alpha) {
        InputSpec s;
        s.kind = InputKind::WCS;
        const double a = field_alpha;
        const double norm = std::sqrt(1.0 + a * a + a * a * a * a / 2.0);
        s.alpha = {1.0 / norm, a / norm, a * a / std::numbers::sqrt2 / norm};
        s.mean_n = a * a;
        return s;
    }

    /// Collinear pair source: no single-photon branch.
    static InputSpec clspdc(double field_alpha) {
        InputSpec s;
        s.kind = InputKind::ClSPDC;
        const double a = field_alpha;
        const double norm = std::sqrt(1.0 + a * a * a * a / 2.0);
        s.alpha = {1.0 / norm, 0.0, a * a / std::numbers::sqrt2 / norm};
        s.mean_n = a * a;
        return s;
    }

    static InputSpec custom(const std::array<cplx, 3>& alphas) {
        InputSpec s;
        s.kind = InputKind::Custom;
        s.alpha = alphas;
        double nn = 0.0;
        for (const cplx& a : alphas) nn += std::norm(a);
        if (std::abs(nn - 1.0) > 1e-10)
            throw std::invalid_argument("InputSpec::custom: amplitudes must be normalized");
        s.mean_n = std::norm(alphas[1]) + 2.0 * std::norm(alphas[2]);
        return s;
    }

    /// Field amplitude from the two-photon ratio |alpha_2/alpha_0|^2 = ratio,
    /// i.e. alpha^4 = 2 ratio.
    static double field_alpha_from_ratio_sq(double ratio_sq) {
        if (ratio_sq < 0) throw std::invalid_argument("ratio_sq must be >= 0");
        return std::pow(2.0 * ratio_sq, 0.25);
    }
};

inline OutcomePattern coincidence_pattern() {
    return {Outcome::Click, Outcome::Click, Outcome::NoClick, Outcome::Click};
}

/// Full pipeline configuration. The gate matrix is held directly; factory
/// helpers construct it at a family operating point.
struct ExperimentConfig {
    GateFamily family = GateFamily::KLM;
    MrrBranch branch = MrrBranch::Bottom;
    ModeUnitary gate = ModeUnitary::identity(3);
    double theta = std::numbers::pi / 2;
    InputSpec input1;
    InputSpec input4;
    DetectorModel detectors = DetectorModel::uniform(1.0, 4);
    OutcomePattern pattern = coincidence_pattern();
    int phi_points = 721;  // uniform on [0, 2pi]
    int per_mode_cutoff = 2;
    int total_cutoff = 5;
    PovmConvention convention = PovmConvention::Squared;
    bool phase_via_unitary = false;  // exercise the explicit mode-4 phase gate

    static ExperimentConfig at_optimum(GateFamily family, const InputSpec& in1,
                                       const InputSpec& in4, const DetectorModel& det,
                                       double theta = std::numbers::pi / 2,
                                       MrrBranch branch = MrrBranch::Bottom) {
        ExperimentConfig cfg;
        cfg.family = family;
        cfg.branch = branch;
        const OptimizeResult opt = optimize_beta(family, branch);
        cfg.gate = gate_on_curve(family, opt.r2_star, branch);
        cfg.theta = theta;
        cfg.input1 = in1;
        cfg.input4 = in4;
        cfg.detectors = det;
        return cfg;
    }

    void validate() const {
        if (pattern.size() != 4) throw std::invalid_argument("pattern must cover 4 modes");
        if (detectors.modes() != 4) throw std::invalid_argument("need 4 detector efficiencies");
        if (phi_points < 1) throw std::invalid_argument("phi grid must be nonempty");
    }
};

/// (sum_k alpha_k |k>_1) (x) |1,0>_23 (x) (sum_k alpha'_k |k>_4).
inline FockStateVector build_input(const InputSpec& spec1, const InputSpec& spec4) {
    FockStateVector s;
    s.modes = 4;
    for (int k1 = 0; k1 <= 2; ++k1) {
        for (int k4 = 0; k4 <= 2; ++k4) {
            const cplx v = spec1.alpha[k1] * spec4.alpha[k4];
            if (std::abs(v) > kAmplitudePrune) s.amplitudes[{k1, 1, 0, k4}] = v;
        }
    }
    return s;
}

/// 4x4 pipeline unitary: the 3-mode gate on modes {1,2,3} composed with the
/// closing beam splitter on modes (1,4). With 1-based entries the BS block
/// reads B11 = B44 = cos(theta/2), B14 = +sin(theta/2), B41 = -sin(theta/2),
/// so a4^dag -> sin(theta/2) a1^dag + cos(theta/2) a4^dag. The mode-4 phase is
/// handled separately (see run_once).
inline ModeUnitary build_total_unitary(const ExperimentConfig& cfg) {
    const ModeUnitary s4 = embed_leading(cfg.gate, 4);
    const ModeUnitary b4 = embed(bs2(cfg.theta), 3, 0, 4);
    return compose(b4, s4);
}

struct RunOnceResult {
    double probability = 0.0;
    FockStateVector projected;  // unnormalized tilde state
};

namespace detail {
inline InputSpec shifted(const InputSpec& spec, double phi) {
    InputSpec out = spec;
    for (int k = 0; k <= 2; ++k) out.alpha[k] *= std::polar(1.0, k * phi);
    return out;
}
}  // namespace detail

/// Evolved and truncated pipeline state just before detection.
inline FockStateVector evolve_truncated(const ExperimentConfig& cfg, double phi) {
    cfg.validate();
    FockStateVector in;
    if (cfg.phase_via_unitary) {
        in = build_input(cfg.input1, cfg.input4);
        in = apply_unitary(phase_shifter(phi, 3, 4), in);
    } else {
        in = build_input(cfg.input1, detail::shifted(cfg.input4, phi));
    }
    const FockStateVector out = apply_unitary(build_total_unitary(cfg), in);
    return truncate(out, cfg.per_mode_cutoff, cfg.total_cutoff);
}

/// One pipeline evaluation at phase phi: phase the lower arm, evolve through
/// the total unitary, truncate to the configured cutoffs, project on the
/// click pattern. Returns the coincidence probability and the tilde state.
inline RunOnceResult run_once(const ExperimentConfig& cfg, double phi) {
    const FockStateVector out = evolve_truncated(cfg, phi);
    RunOnceResult r;
    r.projected = project(out, cfg.pattern, cfg.detectors);
    if (cfg.convention == PovmConvention::Squared)
        r.probability = norm_sq(r.projected);
    else
        r.probability = outcome_probability(out, cfg.pattern, cfg.detectors, cfg.convention);
    return r;
}

/// Coincidence probability split by total photon number of the detected
/// state. The three parts sum to the run_once probability exactly.
struct Decomposition {
    double three_photon = 0, four_photon = 0, five_photon = 0;
    double total() const { return three_photon + four_photon + five_photon; }
};

inline Decomposition decompose_probability(const ExperimentConfig& cfg, double phi) {
    const FockStateVector out = evolve_truncated(cfg, phi);
    Decomposition d;
    for (const auto& [occ, amp] : out.amplitudes) {
        const double w = pattern_weight(cfg.pattern, occ, cfg.detectors);
        const double c =
            (cfg.convention == PovmConvention::Squared ? w * w : w) * std::norm(amp);
        switch (total_photons(occ)) {
            case 3: d.three_photon += c; break;
            case 4: d.four_photon += c; break;
            case 5: d.five_photon += c; break;
            default: break;  // impossible under the coincidence pattern + cutoffs
        }
    }
    return d;
}

/// f3(theta, phi) = sin(theta) cos(phi) + (beta1/beta) cos(theta).
inline double interference_amplitude_f3(double theta, double phi, double beta1_over_beta = 1.0) {
    return std::sin(theta) * std::cos(phi) + beta1_over_beta * std::cos(theta);
}

struct PrefactorInfo {
    double value = 0.0;
    bool custom_fallback = false;  // inputs outside the wcs/clspdc closed forms
};

/// Overall coincidence scale xi1^2 xi2^2 xi4^2 nbar^2 / normalization^2 with
/// normalization 1 + nbar + nbar^2/2 (wcs) or 1 + nbar^2/2 (clspdc, no
/// one-photon branch). Custom inputs fall back to the equivalent
/// |alpha_0 alpha'_2 + alpha_2 alpha'_0|^2 / 2 scale and are flagged.
inline PrefactorInfo prefactor(const ExperimentConfig& cfg) {
    const double xi_sq = cfg.detectors.xi[0] * cfg.detectors.xi[0] * cfg.detectors.xi[1] *
                         cfg.detectors.xi[1] * cfg.detectors.xi[3] * cfg.detectors.xi[3];
    PrefactorInfo out;
    const bool same_kind = cfg.input1.kind == cfg.input4.kind;
    bool same_alphas = true;
    for (int k = 0; k < 3; ++k)
        if (std::abs(cfg.input1.alpha[k] - cfg.input4.alpha[k]) > 1e-12) same_alphas = false;
    if (same_kind && same_alphas && cfg.input1.kind != InputKind::Custom) {
        const double nbar = cfg.input1.mean_n;
        const double norm = cfg.input1.kind == InputKind::WCS
                                ? 1.0 + nbar + nbar * nbar / 2.0
                                : 1.0 + nbar * nbar / 2.0;
        out.value = xi_sq * nbar * nbar / (norm * norm);
        return out;
    }
    const cplx cross = cfg.input1.alpha[0] * cfg.input4.alpha[2] +
                       cfg.input1.alpha[2] * cfg.input4.alpha[0];
    out.value = xi_sq * std::norm(cross) / 2.0;
    out.custom_fallback = true;
    return out;
}

/// Least-squares fit of P'(phi) = a0 + a1 cos(phi) + a2 cos^2(phi).
struct CosFit {
    double a0 = 0, a1 = 0, a2 = 0;
    double residual_rms = 0;
    double max_odd_harmonic = 0;  // projection of the residual on sin(k phi)
};

inline CosFit fit_cos_form(const std::vector<double>& phis, const std::vector<double>& values) {
    if (phis.size() != values.size() || phis.size() < 3)
        throw std::invalid_argument("fit_cos_form: need >= 3 samples");
    // normal equations for basis {1, cos, cos^2}
    double m[3][3] = {};
    double rhs[3] = {};
    for (size_t i = 0; i < phis.size(); ++i) {
        const double b[3] = {1.0, std::cos(phis[i]), std::cos(phis[i]) * std::cos(phis[i])};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += b[r] * values[i];
            for (int c = 0; c < 3; ++c) m[r][c] += b[r] * b[c];
        }
    }
    // Gaussian elimination with partial pivoting
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[idx[r]][col]) > std::abs(m[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        if (std::abs(m[idx[col]][col]) < 1e-12)
            throw std::invalid_argument("fit_cos_form: degenerate phase grid");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[idx[r]][col] / m[idx[col]][col];
            for (int c = col; c < 3; ++c) m[idx[r]][c] -= f * m[idx[col]][c];
            rhs[idx[r]] -= f * rhs[idx[col]];
        }
    }
    double sol[3];
    for (int r = 2; r >= 0; --r) {
        double s = rhs[idx[r]];
        for (int c = r + 1; c < 3; ++c) s -= m[idx[r]][c] * sol[c];
        sol[r] = s / m[idx[r]][r];
    }
    CosFit fit;
    fit.a0 = sol[0];
    fit.a1 = sol[1];
    fit.a2 = sol[2];
    double ss = 0.0;
    std::vector<double> resid(phis.size());
    for (size_t i = 0; i < phis.size(); ++i) {
        const double c = std::cos(phis[i]);
        resid[i] = values[i] - (fit.a0 + fit.a1 * c + fit.a2 * c * c);
        ss += resid[i] * resid[i];
    }
    fit.residual_rms = std::sqrt(ss / phis.size());
    for (int k = 1; k <= 4; ++k) {
        double proj = 0.0;
        for (size_t i = 0; i < phis.size(); ++i) proj += resid[i] * std::sin(k * phis[i]);
        fit.max_odd_harmonic = std::max(fit.max_odd_harmonic,
                                        std::abs(2.0 * proj / static_cast<double>(phis.size())));
    }
    return fit;
}

inline double visibility(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("visibility: empty sweep");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi + lo <= 0.0) return 0.0;
    return (hi - lo) / (hi + lo);
}

/// Phase sweep with the fitted cosine form, fringe visibility and the
/// per-phase 3/4/5-photon decomposition. P = prefactor * P_prime pointwise;
/// the decomposition columns are stored in P_prime units, so
/// P_prime = three_photon + ac + dc row by row.
struct SweepResult {
    std::vector<double> phi;
    std::vector<double> P;
    std::vector<double> P_prime;
    std::vector<double> three_photon, ac, dc;  // P_prime units
    PrefactorInfo prefactor;
    CosFit fit;
    double visibility = 0.0;
};

inline SweepResult run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult sw;
    sw.prefactor = prefactor(cfg);
    const int n = cfg.phi_points;
    sw.phi.resize(n);
    sw.P.resize(n);
    sw.P_prime.resize(n);
    sw.three_photon.resize(n);
    sw.ac.resize(n);
    sw.dc.resize(n);
    for (int i = 0; i < n; ++i) {
        const double phi =
            n == 1 ? 0.0 : 2.0 * std::numbers::pi * i / static_cast<double>(n - 1);
        const Decomposition d = decompose_probability(cfg, phi);
        sw.phi[i] = phi;
        sw.P[i] = d.total();
        sw.P_prime[i] = sw.P[i] / sw.prefactor.value;
        sw.three_photon[i] = d.three_photon / sw.prefactor.value;
        sw.ac[i] = d.four_photon / sw.prefactor.value;
        sw.dc[i] = d.five_photon / sw.prefactor.value;
    }
    sw.fit = fit_cos_form(sw.phi, sw.P_prime);
    sw.visibility = mzsim::visibility(sw.P);
    return sw;
}

/// Ideal heralding: partial inner product with <1,0| on the ancilla modes
/// (2,3). Returns the unnormalized state of modes (1,4).
inline FockStateVector herald_exact(const FockStateVector& state) {
    if (state.modes != 4) throw std::invalid_argument("herald_exact: need a 4-mode state");
    FockStateVector out;
    out.modes = 2;
    out.normalized = false;
    for (const auto& [occ, amp] : state.amplitudes) {
        if (occ[1] == 1 && occ[2] == 0) out.amplitudes[{occ[0], occ[3]}] += amp;
    }
    out.prune();
    return out;
}

}  // namespace mzsim
