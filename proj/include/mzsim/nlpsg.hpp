#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "mzsim/fock.hpp"
#include "mzsim/linear_optics.hpp"
#include "mzsim/optim.hpp"

namespace mzsim {

enum class GateFamily { KLM, MRR };
enum class MrrBranch { Top, Bottom };

inline std::string to_string(GateFamily f) { return f == GateFamily::KLM ? "klm" : "mrr"; }
inline std::string to_string(MrrBranch b) { return b == MrrBranch::Top ? "top" : "bottom"; }

/// Three real beam-splitter reflection coefficients plus optional phases and
/// path delays (all default 0, the on-axis case used throughout).
struct KLMParams {
    double r1 = 0, r2 = 0, r3 = 0;
    double phi1 = 0, phi2 = 0, phi3 = 0;
    double delta1 = 0, delta2 = 0, delta3 = 0;
};

/// Fictitious reflection coefficients indexing the ring solutions; r3 = r1.
/// The two branches are inequivalent solution regions of the r1(r2) constraint.
struct MRRParams {
    double r1 = 0, r2 = 0;
    MrrBranch branch = MrrBranch::Bottom;
};

struct ConditionBetas {
    cplx beta0, beta1, beta2;
};

/// One point of the physical-transmission manifold eta(tau; r*).
struct ManifoldPoint {
    double r_star = 0, tau = 0, eta = 0;
};

namespace detail {
inline void check_reflection(double r, const char* name) {
    if (std::abs(r) > 1.0)
        throw std::invalid_argument(std::string(name) + ": |r| must be <= 1");
}
}  // namespace detail

/// The i-th 2x2 block (i in {1,2,3}). Block 2 carries the opposite sign
/// pattern; every block has determinant -1.
inline ModeUnitary klm_bs_block(int i, const KLMParams& p) {
    double r, phi;
    switch (i) {
        case 1: r = p.r1; phi = p.phi1; break;
        case 2: r = p.r2; phi = p.phi2; break;
        case 3: r = p.r3; phi = p.phi3; break;
        default: throw std::invalid_argument("klm_bs_block: i must be 1, 2 or 3");
    }
    detail::check_reflection(r, "klm_bs_block");
    const double t = std::sqrt(1.0 - r * r);
    const cplx ep = std::polar(1.0, phi), em = std::polar(1.0, -phi);
    if (i == 2) return ModeUnitary(2, {-r * em, t, t, r * ep});
    return ModeUnitary(2, {r * ep, t, t, -r * em});
}

/// Full 3-mode gate matrix from the block product: block 1 mixes modes (2,3),
/// block 2 mixes (1,2), block 3 mixes (2,3) again, with the delay phases on the
/// bypassed mode of each stage.
inline ModeUnitary klm_smatrix(const KLMParams& p) {
    auto stage = [](const ModeUnitary& m2, int lone_mode, double delta) {
        std::vector<cplx> e(9, 0.0);
        const int a = lone_mode == 0 ? 1 : 0;
        const int b = lone_mode == 2 ? 1 : 2;
        e[static_cast<size_t>(lone_mode) * 3 + lone_mode] = std::polar(1.0, delta);
        e[static_cast<size_t>(a) * 3 + a] = m2(0, 0);
        e[static_cast<size_t>(a) * 3 + b] = m2(0, 1);
        e[static_cast<size_t>(b) * 3 + a] = m2(1, 0);
        e[static_cast<size_t>(b) * 3 + b] = m2(1, 1);
        return ModeUnitary(3, std::move(e));
    };
    const ModeUnitary b1 = stage(klm_bs_block(1, p), 0, p.delta1);
    const ModeUnitary b2 = stage(klm_bs_block(2, p), 2, p.delta2);
    const ModeUnitary b3 = stage(klm_bs_block(3, p), 0, p.delta3);
    return compose(b3, compose(b2, b1));
}

/// Ring-gate matrix, on resonance with zero bus delays (all coefficients real).
inline ModeUnitary mrr_smatrix(const MRRParams& p) {
    detail::check_reflection(p.r1, "mrr_smatrix r1");
    detail::check_reflection(p.r2, "mrr_smatrix r2");
    const double denom = 1.0 - (1.0 - p.r1 * p.r1) * p.r2;
    if (std::abs(denom) < 1e-12)
        throw std::invalid_argument("mrr_smatrix: pole at (1-r1^2) r2 = 1");
    const double c = 1.0 - p.r1 * p.r1;
    const double s1 = std::sqrt(c), s2 = std::sqrt(1.0 - p.r2 * p.r2);
    const double r1 = p.r1, r2 = p.r2;
    std::vector<cplx> e = {c - r2,         r1 * s2,        -r1 * s1 * s2,
                           r1 * s2,        r1 * r1 * r2,   s1 * (1.0 - r2),
                           -r1 * s1 * s2,  s1 * (1.0 - r2), r1 * r1};
    for (auto& x : e) x /= denom;
    return ModeUnitary(3, std::move(e));
}

/// beta0 = S22, beta1 = S11 S22 + S21 S12, beta2 = -S11 (S11 S22 + 2 S21 S12),
/// with 1-based mode indices.
inline ConditionBetas condition_betas(const ModeUnitary& s) {
    if (s.dim() != 3) throw std::invalid_argument("condition_betas: need a 3-mode matrix");
    ConditionBetas b;
    b.beta0 = s(1, 1);
    b.beta1 = s(0, 0) * s(1, 1) + s(1, 0) * s(0, 1);
    b.beta2 = -s(0, 0) * (s(0, 0) * s(1, 1) + 2.0 * s(1, 0) * s(0, 1));
    return b;
}

/// Valid r2 interval of the beta0 = beta2 constraint curve.
inline std::pair<double, double> valid_r2_range(GateFamily family, MrrBranch branch) {
    const double third = 1.0 / std::sqrt(3.0);
    if (family == GateFamily::KLM) return {0.0, third};
    return branch == MrrBranch::Bottom ? std::pair{0.0, third} : std::pair{-third, -0.5};
}

/// r1 = r3 enforcing Conditions 0 and 2 (beta0 = beta2) at the given r2.
/// Each region admits exactly one physical root of the underlying quadratic.
inline double constraint_r1_of_r2(GateFamily family, double r2,
                                  MrrBranch branch = MrrBranch::Bottom) {
    const auto [lo, hi] = valid_r2_range(family, branch);
    if (r2 < lo - 1e-12 || r2 > hi + 1e-12)
        throw std::invalid_argument("constraint_r1_of_r2: r2 outside the valid range");
    double r1_sq;
    if (family == GateFamily::KLM) {
        r1_sq = (1.0 + r2 * r2) / ((1.0 - r2) * (1.0 + 2.0 * r2 + 3.0 * r2 * r2));
    } else {
        const double disc = std::sqrt(std::max(0.0, 1.0 - 3.0 * r2 * r2));
        const double sign = branch == MrrBranch::Bottom ? -1.0 : 1.0;
        r1_sq = (1.0 - r2) / (r2 * (1.0 + r2 * r2)) *
                ((1.0 + 2.0 * r2 - r2 * r2) + sign * (1.0 + r2) * disc);
    }
    if (r1_sq < -1e-12 || r1_sq > 1.0 + 1e-9)
        throw std::invalid_argument("constraint_r1_of_r2: unphysical solution (r1^2 outside [0,1])");
    return std::sqrt(std::min(1.0, std::max(0.0, r1_sq)));
}

inline ModeUnitary gate_on_curve(GateFamily family, double r2,
                                 MrrBranch branch = MrrBranch::Bottom) {
    const double r1 = constraint_r1_of_r2(family, r2, branch);
    if (family == GateFamily::KLM) {
        KLMParams p;
        p.r1 = p.r3 = r1;
        p.r2 = r2;
        return klm_smatrix(p);
    }
    MRRParams p;
    p.r1 = r1;
    p.r2 = r2;
    p.branch = branch;
    return mrr_smatrix(p);
}

/// Success amplitude along the constraint curve, from the matrix product.
inline double beta_of_r2(GateFamily family, double r2, MrrBranch branch = MrrBranch::Bottom) {
    return condition_betas(gate_on_curve(family, r2, branch)).beta0.real();
}

/// Tabulated closed form for beta(r2). The KLM denominator reads
/// 1 + 2 r2 + 3 r2^2 (the r2^3 variant seen in print does not reproduce
/// beta = 1/2 at r2 = sqrt(2)-1 and disagrees with the matrix product).
inline double beta_closed_form(GateFamily family, double r2,
                               MrrBranch branch = MrrBranch::Bottom) {
    if (family == GateFamily::KLM)
        return 2.0 * r2 * (1.0 + r2) / (1.0 + 2.0 * r2 + 3.0 * r2 * r2);
    const double disc = std::sqrt(std::max(0.0, 1.0 - 3.0 * r2 * r2));
    const double sign = branch == MrrBranch::Bottom ? -1.0 : 1.0;
    return 1.0 / (2.0 + sign * disc) *
           ((1.0 + 2.0 * r2 - r2 * r2) / (1.0 + r2) + sign * disc);
}

/// Operating-point search result. `condition1_root_found` is false when the
/// branch admits no interior point with beta0 = beta1 = beta2 (the top ring
/// branch degenerates to beta -> 0 at r2 = -1/2).
struct OptimizeResult {
    GateFamily family = GateFamily::KLM;
    MrrBranch branch = MrrBranch::Bottom;
    double r2_star = 0, r1_star = 0;
    double beta_star = 0;
    ConditionBetas betas;
    double condition1_residual = 0;  // |beta1 - beta0| at the reported point
    double condition02_residual = 0;
    bool condition1_root_found = false;
};

/// Locates the full-gate operating point on the Conditions-0&2 curve: the r2
/// at which Condition-1 also holds, found by a derivative-free 1-D search
/// (Brent on the beta1 - beta0 residual; golden-section fallback when the
/// residual has no sign change on the branch).
inline OptimizeResult optimize_beta(GateFamily family, MrrBranch branch = MrrBranch::Bottom) {
    auto [lo, hi] = valid_r2_range(family, branch);
    const double eps = 1e-9 * (1.0 + std::abs(hi - lo));
    lo += eps;
    hi -= eps;
    auto g = [&](double r2) {
        const ConditionBetas b = condition_betas(gate_on_curve(family, r2, branch));
        return (b.beta1 - b.beta0).real();
    };

    OptimizeResult res;
    res.family = family;
    res.branch = branch;

    constexpr int kScan = 128;
    double prev_x = lo, prev_g = g(lo);
    std::optional<double> root;
    for (int i = 1; i <= kScan; ++i) {
        const double x = lo + (hi - lo) * i / kScan;
        const double gx = g(x);
        if (prev_g == 0.0) {
            root = prev_x;
            break;
        }
        if (prev_g * gx < 0.0) {
            root = brent_root(g, prev_x, x, 1e-14);
            break;
        }
        prev_x = x;
        prev_g = gx;
    }

    if (root) {
        res.r2_star = *root;
        res.condition1_root_found = true;
    } else {
        res.r2_star = golden_section_min([&](double x) { return std::abs(g(x)); }, lo, hi, 1e-12);
        res.condition1_root_found = false;
    }
    res.r1_star = constraint_r1_of_r2(family, res.r2_star, branch);
    res.betas = condition_betas(gate_on_curve(family, res.r2_star, branch));
    res.beta_star = res.betas.beta0.real();
    res.condition1_residual = std::abs(res.betas.beta1 - res.betas.beta0);
    res.condition02_residual = std::abs(res.betas.beta0 - res.betas.beta2);
    return res;
}

/// eta = (r* + tau) / (1 + r* tau); a Moebius map of [-1,1] onto itself.
inline ManifoldPoint eta_manifold(double r_star, double tau) {
    detail::check_reflection(r_star, "eta_manifold r_star");
    detail::check_reflection(tau, "eta_manifold tau");
    const double denom = 1.0 + r_star * tau;
    if (std::abs(denom) < 1e-12) throw std::invalid_argument("eta_manifold: pole at 1 + r* tau = 0");
    return {r_star, tau, (r_star + tau) / denom};
}

struct NlpsgSplit {
    FockStateVector nlpsg_part;  // span of {|0>,|1>,|2>}_1 (x) |1,0>_23
    FockStateVector perp_part;
};

/// Evolves (a0 + a1 a1^dag + a2 a1^dag^2/sqrt(2)) a2^dag |000> through S and
/// splits the output into the heralded-gate subspace and its complement.
inline NlpsgSplit isolated_nlpsg_transform(const ModeUnitary& s,
                                           const std::array<cplx, 3>& alphas) {
    if (s.dim() != 3) throw std::invalid_argument("isolated_nlpsg_transform: need 3 modes");
    double nn = 0.0;
    for (const cplx& a : alphas) nn += std::norm(a);
    if (std::abs(nn - 1.0) > 1e-10)
        throw std::invalid_argument("isolated_nlpsg_transform: alphas must be normalized");

    FockStateVector in;
    in.modes = 3;
    in.amplitudes[{0, 1, 0}] = alphas[0];
    in.amplitudes[{1, 1, 0}] = alphas[1];
    in.amplitudes[{2, 1, 0}] = alphas[2];
    in.prune();
    const FockStateVector out = apply_unitary(s, in);

    NlpsgSplit split;
    split.nlpsg_part.modes = split.perp_part.modes = 3;
    split.nlpsg_part.normalized = split.perp_part.normalized = false;
    for (const auto& [occ, amp] : out.amplitudes) {
        if (occ[1] == 1 && occ[2] == 0 && occ[0] <= 2)
            split.nlpsg_part.amplitudes[occ] = amp;
        else
            split.perp_part.amplitudes[occ] = amp;
    }
    return split;
}

}  // namespace mzsim
