#include <catch_amalgamated.hpp>
#include <numbers>

#include "mzsim/nlpsg.hpp"
#include "support.hpp"

using namespace mzsim;
using testsupport::random_alphas;
using testsupport::uniform;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kThird = 1.0 / std::sqrt(3.0);
}  // namespace

TEST_CASE("klm_bs_block_limits_and_determinant") {
    KLMParams p;
    p.r1 = 1.0;
    const ModeUnitary m1 = klm_bs_block(1, p);
    REQUIRE_THAT(std::abs(m1(0, 0) - cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(m1(1, 1) + cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));

    KLMParams q;  // r2 = 0 -> antidiagonal ones
    const ModeUnitary m2 = klm_bs_block(2, q);
    REQUIRE_THAT(std::abs(m2(0, 1) - cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(m2(1, 0) - cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(m2(0, 0)), Catch::Matchers::WithinAbs(0.0, 1e-15));

    for (int trial = 0; trial < 50; ++trial) {
        KLMParams r;
        r.r1 = uniform(-1, 1);
        r.r2 = uniform(-1, 1);
        r.r3 = uniform(-1, 1);
        r.phi1 = uniform(0, 2 * std::numbers::pi);
        r.phi2 = uniform(0, 2 * std::numbers::pi);
        r.phi3 = uniform(0, 2 * std::numbers::pi);
        for (int i = 1; i <= 3; ++i) {
            const ModeUnitary m = klm_bs_block(i, r);
            const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
            REQUIRE_THAT(std::abs(det + cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("klm_smatrix_structure_and_unitarity") {
    // zero phases: S11 = -r2
    for (double r2 : {0.1, 0.3, std::numbers::sqrt2 - 1.0}) {
        const double r1 = constraint_r1_of_r2(GateFamily::KLM, r2);
        KLMParams p;
        p.r1 = p.r3 = r1;
        p.r2 = r2;
        const ModeUnitary s = klm_smatrix(p);
        REQUIRE_THAT(s(0, 0).real(), Catch::Matchers::WithinAbs(-r2, 1e-13));
    }
    // at the operating point S11 = 1 - sqrt(2)
    const ModeUnitary s = gate_on_curve(GateFamily::KLM, kSqrt2 - 1.0);
    REQUIRE_THAT(s(0, 0).real(), Catch::Matchers::WithinAbs(1.0 - kSqrt2, 1e-12));

    for (int trial = 0; trial < 1000; ++trial) {
        KLMParams p;
        p.r1 = uniform(-1, 1);
        p.r2 = uniform(-1, 1);
        p.r3 = uniform(-1, 1);
        p.phi1 = uniform(0, 2 * std::numbers::pi);
        p.phi2 = uniform(0, 2 * std::numbers::pi);
        p.phi3 = uniform(0, 2 * std::numbers::pi);
        p.delta1 = uniform(0, 2 * std::numbers::pi);
        p.delta2 = uniform(0, 2 * std::numbers::pi);
        p.delta3 = uniform(0, 2 * std::numbers::pi);
        REQUIRE(klm_smatrix(p).max_unitarity_defect() < 1e-12);
    }
}

TEST_CASE("klm_smatrix_closed_form_cross_check") {
    // the tabulated closed form, with the 3 r2^2 denominator; the printed S33
    // numerator additionally disagrees with the block product (known misprint)
    for (double r2 : {0.1, 0.25, 0.4, 0.55}) {
        const ModeUnitary s = gate_on_curve(GateFamily::KLM, r2);
        const double den_sq = 1.0 + r2 + r2 * r2 - 3.0 * r2 * r2 * r2;
        const double den = 1.0 + 2.0 * r2 + 3.0 * r2 * r2;
        REQUIRE_THAT(s(0, 1).real(),
                     Catch::Matchers::WithinAbs(std::sqrt(1.0 - std::pow(r2, 4)) / std::sqrt(den_sq), 1e-12));
        REQUIRE_THAT(s(0, 2).real(),
                     Catch::Matchers::WithinAbs(
                         std::sqrt(1.0 - r2 * r2) * std::sqrt(r2 - 3.0 * r2 * r2 * r2) / std::sqrt(den_sq),
                         1e-12));
        REQUIRE_THAT(s(1, 1).real(), Catch::Matchers::WithinAbs(2.0 * r2 * (1.0 + r2) / den, 1e-12));
        REQUIRE_THAT(s(1, 2).real(),
                     Catch::Matchers::WithinAbs(
                         -std::sqrt(1.0 + r2 * r2) * std::sqrt(r2 - 3.0 * r2 * r2 * r2) / den, 1e-12));
        // derived S33 numerator: 1 + r2 + 3 r2^2 + 3 r2^3
        REQUIRE_THAT(s(2, 2).real(),
                     Catch::Matchers::WithinAbs((1.0 + r2 + 3.0 * r2 * r2 + 3.0 * r2 * r2 * r2) / den, 1e-12));
    }
}

TEST_CASE("mrr_smatrix_entries_and_unitarity") {
    MRRParams p;
    p.r1 = 0.8;
    p.r2 = 0.3;
    const ModeUnitary s = mrr_smatrix(p);
    const double denom = 1.0 - (1.0 - 0.64) * 0.3;
    REQUIRE_THAT(s(2, 2).real(), Catch::Matchers::WithinAbs(0.64 / denom, 1e-13));
    REQUIRE(s.max_unitarity_defect() < 1e-12);

    // unitarity along the constraint curve
    for (int i = 0; i <= 50; ++i) {
        const double r2 = 0.02 + (kThird - 0.04) * i / 50.0;
        REQUIRE(gate_on_curve(GateFamily::MRR, r2).max_unitarity_defect() < 1e-10);
    }
    REQUIRE_THROWS_AS(mrr_smatrix(MRRParams{0.0, 1.0, MrrBranch::Bottom}), std::invalid_argument);
}

TEST_CASE("condition_betas_identity_and_optima") {
    const ConditionBetas id = condition_betas(ModeUnitary::identity(3));
    REQUIRE_THAT(std::abs(id.beta0 - cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(id.beta1 - cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(id.beta2 + cplx(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-15));

    const OptimizeResult klm = optimize_beta(GateFamily::KLM);
    const ConditionBetas bk = condition_betas(gate_on_curve(GateFamily::KLM, klm.r2_star));
    REQUIRE_THAT(std::abs(bk.beta0 - cplx(0.5)), Catch::Matchers::WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(std::abs(bk.beta1 - cplx(0.5)), Catch::Matchers::WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(std::abs(bk.beta2 - cplx(0.5)), Catch::Matchers::WithinAbs(0.0, 1e-9));

    const OptimizeResult mrr = optimize_beta(GateFamily::MRR);
    const ConditionBetas bm = condition_betas(gate_on_curve(GateFamily::MRR, mrr.r2_star));
    REQUIRE_THAT(std::abs(bm.beta0 - cplx(0.5)), Catch::Matchers::WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(std::abs(bm.beta1 - cplx(0.5)), Catch::Matchers::WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(std::abs(bm.beta2 - cplx(0.5)), Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("constraint_curve_enforces_condition_0_and_2") {
    // KLM r2* gives r1*^2 = 0.853553
    REQUIRE_THAT(std::pow(constraint_r1_of_r2(GateFamily::KLM, kSqrt2 - 1.0), 2),
                 Catch::Matchers::WithinAbs(0.853553, 1e-6));
    // MRR bottom branch at the operating point: r1 = 0.91018
    REQUIRE_THAT(constraint_r1_of_r2(GateFamily::MRR, (1.0 + 2.0 * kSqrt2) / 7.0),
                 Catch::Matchers::WithinAbs(0.91018, 1e-5));

    for (int i = 1; i <= 50; ++i) {
        const double r2 = 0.01 + (kThird - 0.02) * i / 50.0;
        for (GateFamily fam : {GateFamily::KLM, GateFamily::MRR}) {
            const ConditionBetas b = condition_betas(gate_on_curve(fam, r2));
            REQUIRE(std::abs(b.beta0 - b.beta2) < 1e-10);
        }
    }
    for (int i = 1; i < 50; ++i) {
        const double r2 = -kThird + 1e-6 + (kThird - 0.5 - 2e-6) * i / 50.0;
        const ConditionBetas b = condition_betas(gate_on_curve(GateFamily::MRR, r2, MrrBranch::Top));
        REQUIRE(std::abs(b.beta0 - b.beta2) < 1e-10);
    }
    // rejected unphysical region (r1^2 > 1)
    REQUIRE_THROWS_AS(constraint_r1_of_r2(GateFamily::KLM, -(kSqrt2 - 1.0)), std::invalid_argument);
}

TEST_CASE("beta_of_r2_matches_closed_form_and_special_values") {
    REQUIRE_THAT(beta_of_r2(GateFamily::KLM, kSqrt2 - 1.0), Catch::Matchers::WithinAbs(0.5, 1e-10));
    REQUIRE_THAT(beta_of_r2(GateFamily::MRR, 0.546918), Catch::Matchers::WithinAbs(0.5, 1e-5));
    REQUIRE_THAT(beta_of_r2(GateFamily::KLM, 1e-12), Catch::Matchers::WithinAbs(0.0, 1e-10));
    for (int i = 1; i <= 20; ++i) {
        const double r2 = 0.02 + (kThird - 0.04) * i / 20.0;
        REQUIRE_THAT(beta_of_r2(GateFamily::KLM, r2),
                     Catch::Matchers::WithinAbs(beta_closed_form(GateFamily::KLM, r2), 1e-10));
        REQUIRE_THAT(beta_of_r2(GateFamily::MRR, r2),
                     Catch::Matchers::WithinAbs(beta_closed_form(GateFamily::MRR, r2), 1e-10));
    }
}

TEST_CASE("optimize_beta_reproduces_operating_points") {
    const OptimizeResult klm = optimize_beta(GateFamily::KLM);
    REQUIRE(klm.condition1_root_found);
    REQUIRE_THAT(klm.r2_star * klm.r2_star, Catch::Matchers::WithinAbs(0.171573, 1e-6));
    REQUIRE_THAT(klm.r1_star * klm.r1_star, Catch::Matchers::WithinAbs(0.853553, 1e-6));
    REQUIRE_THAT(klm.beta_star * klm.beta_star, Catch::Matchers::WithinAbs(0.25, 1e-8));

    const OptimizeResult mrr = optimize_beta(GateFamily::MRR);
    REQUIRE(mrr.condition1_root_found);
    REQUIRE_THAT(mrr.r2_star, Catch::Matchers::WithinAbs(0.546918, 1e-6));
    REQUIRE_THAT(mrr.beta_star * mrr.beta_star, Catch::Matchers::WithinAbs(0.25, 1e-8));
    // constraint-formula oracle for r1*: sqrt(2(sqrt2 - 1)) = 0.91018,
    // i.e. r1*^2 = 0.828427 (not 0.844778)
    REQUIRE_THAT(mrr.r1_star, Catch::Matchers::WithinAbs(std::sqrt(2.0 * (kSqrt2 - 1.0)), 1e-7));

    // success probability identity |S22|^2 = |S21|^2 |S12|^2 / 2 at both optima
    for (const auto& opt : {klm, mrr}) {
        const ModeUnitary s = gate_on_curve(opt.family, opt.r2_star, opt.branch);
        REQUIRE_THAT(std::norm(s(1, 1)),
                     Catch::Matchers::WithinAbs(0.5 * std::norm(s(1, 0)) * std::norm(s(0, 1)), 1e-8));
        REQUIRE_THAT(s(0, 0).real(), Catch::Matchers::WithinAbs(1.0 - kSqrt2, 1e-8));
    }

    // top ring branch: no interior point satisfies Condition-1; the search
    // reports the degenerate endpoint where the gate amplitude vanishes
    const OptimizeResult top = optimize_beta(GateFamily::MRR, MrrBranch::Top);
    REQUIRE_FALSE(top.condition1_root_found);
    REQUIRE(top.r2_star >= -1.0 / std::sqrt(3.0));
    REQUIRE(top.r2_star <= -0.5 + 1e-6);
    REQUIRE(std::abs(top.beta_star) < 1e-3);
}

TEST_CASE("klm_and_mrr_gates_share_the_upper_left_block_at_the_optimum") {
    const OptimizeResult klm = optimize_beta(GateFamily::KLM);
    const OptimizeResult mrr = optimize_beta(GateFamily::MRR);
    const ModeUnitary sk = gate_on_curve(GateFamily::KLM, klm.r2_star);
    const ModeUnitary sm = gate_on_curve(GateFamily::MRR, mrr.r2_star);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) REQUIRE(std::abs(sk(r, c) - sm(r, c)) < 1e-9);
}

TEST_CASE("eta_manifold_moebius_map") {
    REQUIRE_THAT(eta_manifold(0.7, 0.0).eta, Catch::Matchers::WithinAbs(0.7, 1e-15));
    REQUIRE_THAT(eta_manifold(0.7, 1.0).eta, Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(eta_manifold(0.7, -0.7).eta, Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THROWS_AS(eta_manifold(1.0, -1.0), std::invalid_argument);
    for (double r = -0.9; r <= 0.95; r += 0.31) {
        double prev = -2.0;
        for (double tau = -1.0; tau <= 1.0; tau += 0.05) {
            const double eta = eta_manifold(r, tau).eta;
            REQUIRE(std::abs(eta) <= 1.0 + 1e-12);
            REQUIRE(eta >= prev);  // monotone in tau
            prev = eta;
        }
    }
}

TEST_CASE("isolated_nlpsg_transform_splits_orthogonally") {
    // identity gate: betas (1, 1, -1), so the heralded part is the input
    // itself: beta0 a0, beta1 a1, -beta2 a2 = (a0, a1, +a2)
    const auto a = std::array<cplx, 3>{0.6, 0.48, cplx(0.4, 0.5)};
    double nn = 0;
    for (auto& x : a) nn += std::norm(x);
    auto an = a;
    for (auto& x : an) x /= std::sqrt(nn);
    const NlpsgSplit id = isolated_nlpsg_transform(ModeUnitary::identity(3), an);
    REQUIRE_THAT(std::abs(id.nlpsg_part.amplitudes.at({0, 1, 0}) - an[0]),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(std::abs(id.nlpsg_part.amplitudes.at({1, 1, 0}) - an[1]),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(std::abs(id.nlpsg_part.amplitudes.at({2, 1, 0}) - an[2]),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE(id.perp_part.amplitudes.empty());

    // optimum: nlpsg part is (alpha0, alpha1, -alpha2)/2 and the two parts
    // are orthogonal with norms summing to one
    const OptimizeResult klm = optimize_beta(GateFamily::KLM);
    const ModeUnitary s = gate_on_curve(GateFamily::KLM, klm.r2_star);
    for (int trial = 0; trial < 10; ++trial) {
        const auto alphas = random_alphas();
        const NlpsgSplit split = isolated_nlpsg_transform(s, alphas);
        REQUIRE_THAT(std::abs(split.nlpsg_part.amplitudes.at({0, 1, 0}) - 0.5 * alphas[0]),
                     Catch::Matchers::WithinAbs(0.0, 1e-9));
        REQUIRE_THAT(std::abs(split.nlpsg_part.amplitudes.at({1, 1, 0}) - 0.5 * alphas[1]),
                     Catch::Matchers::WithinAbs(0.0, 1e-9));
        REQUIRE_THAT(std::abs(split.nlpsg_part.amplitudes.at({2, 1, 0}) + 0.5 * alphas[2]),
                     Catch::Matchers::WithinAbs(0.0, 1e-9));
        REQUIRE_THAT(std::abs(inner_product(split.nlpsg_part, split.perp_part)),
                     Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(norm_sq(split.nlpsg_part) + norm_sq(split.perp_part),
                     Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
    // orthogonality for random unitaries too
    for (int trial = 0; trial < 5; ++trial) {
        const NlpsgSplit split =
            isolated_nlpsg_transform(testsupport::random_unitary(3), random_alphas());
        REQUIRE_THAT(std::abs(inner_product(split.nlpsg_part, split.perp_part)),
                     Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
    REQUIRE_THROWS_AS(isolated_nlpsg_transform(ModeUnitary::identity(3),
                                               std::array<cplx, 3>{1.0, 1.0, 0.0}),
                      std::invalid_argument);
}
