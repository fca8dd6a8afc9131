#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mzsim/accidentals.hpp"
#include "mzsim/experiment.hpp"
#include "mzsim/io.hpp"
#include "mzsim/tables.hpp"

// The validation suite behind the `validate` subcommand. Hard checks verify
// the implementation against closed forms, independent expansions and the
// reproducible reference values; soft checks compare against reference table
// cells that the recomputation demonstrably does not reproduce (documented
// discrepancies) and conventions that are reported rather than judged.

namespace mzsim {

struct CheckResult {
    std::string name;
    bool hard = true;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<DiscrepancyRow> discrepancies;  // tabulated forms vs dense, generic point
    double seconds = 0.0;
    PovmConvention convention = PovmConvention::Squared;

    bool all_hard_passed() const {
        for (const auto& c : checks)
            if (c.hard && !c.pass) return false;
        return true;
    }

    json to_json() const {
        json arr = json::array();
        for (const auto& c : checks)
            arr.push_back({{"name", c.name},
                           {"kind", c.hard ? "hard" : "soft"},
                           {"pass", c.pass},
                           {"detail", c.detail}});
        json disc = json::array();
        for (const auto& d : discrepancies) {
            disc.push_back({{"ket", d.ket},
                            {"tabulated_amplitude", {d.tabulated.real(), d.tabulated.imag()}},
                            {"dense_amplitude", {d.dense.real(), d.dense.imag()}},
                            {"abs_delta", d.deviation},
                            {"suspect", d.suspect}});
        }
        return json{{"checks", arr},
                    {"discrepancy_report", disc},
                    {"seconds", seconds},
                    {"povm_convention",
                     convention == PovmConvention::Squared ? "squared" : "linear"},
                    {"all_hard_passed", all_hard_passed()}};
    }
};

namespace vdetail {

inline std::array<cplx, 3> random_alphas(std::mt19937& gen) {
    std::normal_distribution<double> g;
    std::array<cplx, 3> a{cplx(g(gen), g(gen)), cplx(g(gen), g(gen)), cplx(g(gen), g(gen))};
    double nn = 0;
    for (auto& x : a) nn += std::norm(x);
    for (auto& x : a) x /= std::sqrt(nn);
    return a;
}

inline std::string fmt(double x) { return format_number(x, 6); }

}  // namespace vdetail

inline ValidationReport run_validation_suite(
    PovmConvention convention = PovmConvention::Squared) {
    const auto t0 = std::chrono::steady_clock::now();
    ValidationReport report;
    report.convention = convention;
    std::mt19937 gen(0xA11CE);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    };
    auto add = [&](std::string name, bool hard, bool pass, std::string detail) {
        report.checks.push_back({std::move(name), hard, pass, std::move(detail)});
    };
    const double third = 1.0 / std::sqrt(3.0);

    // --- operating points -------------------------------------------------
    {
        const auto tick = std::chrono::steady_clock::now();
        const OptimizeResult klm = optimize_beta(GateFamily::KLM);
        const OptimizeResult mrr = optimize_beta(GateFamily::MRR);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
        const bool pass_klm = std::abs(klm.beta_star * klm.beta_star - 0.25) < 1e-8 &&
                              std::abs(klm.r2_star * klm.r2_star - 0.171573) < 1e-6 &&
                              std::abs(klm.r1_star * klm.r1_star - 0.853553) < 1e-6;
        const double mrr_r1_oracle = std::sqrt(2.0 * (std::numbers::sqrt2 - 1.0));
        const bool pass_mrr = std::abs(mrr.beta_star * mrr.beta_star - 0.25) < 1e-8 &&
                              std::abs(mrr.r2_star - 0.546918) < 1e-6 &&
                              std::abs(mrr.r1_star - mrr_r1_oracle) < 1e-7;
        add("optimization_fixed_points", true, pass_klm && pass_mrr && elapsed < 1.0,
            "klm r2*^2=" + vdetail::fmt(klm.r2_star * klm.r2_star) +
                " r1*^2=" + vdetail::fmt(klm.r1_star * klm.r1_star) +
                " beta*^2=" + vdetail::fmt(klm.beta_star * klm.beta_star) +
                "; mrr r2*=" + vdetail::fmt(mrr.r2_star) +
                " r1*=" + vdetail::fmt(mrr.r1_star) + " (constraint oracle " +
                vdetail::fmt(mrr_r1_oracle) +
                "; the tabulated pair 0.91018 / 0.844778 is mutually inconsistent, r1*^2=" +
                vdetail::fmt(mrr.r1_star * mrr.r1_star) + " resolves it); " +
                vdetail::fmt(elapsed) + " s");
    }
    {
        double worst_curve = 0.0;
        for (int i = 1; i <= 50; ++i) {
            const double r2 = 0.01 + (third - 0.02) * i / 50.0;
            for (GateFamily fam : {GateFamily::KLM, GateFamily::MRR}) {
                const ConditionBetas b = condition_betas(gate_on_curve(fam, r2));
                worst_curve = std::max(worst_curve, std::abs(b.beta0 - b.beta2));
            }
        }
        double worst_opt = 0.0;
        for (GateFamily fam : {GateFamily::KLM, GateFamily::MRR}) {
            const OptimizeResult opt = optimize_beta(fam);
            worst_opt = std::max(worst_opt, std::abs(opt.betas.beta0 - opt.betas.beta1));
            worst_opt = std::max(worst_opt, std::abs(opt.betas.beta1 - opt.betas.beta2));
        }
        add("condition_curves", true, worst_curve < 1e-10 && worst_opt < 1e-8,
            "max |beta0-beta2| on curves " + vdetail::fmt(worst_curve) +
                ", max beta spread at optima " + vdetail::fmt(worst_opt));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            KLMParams p;
            p.r1 = uni(-1, 1);
            p.r2 = uni(-1, 1);
            p.r3 = uni(-1, 1);
            p.phi1 = uni(0, 2 * std::numbers::pi);
            p.phi2 = uni(0, 2 * std::numbers::pi);
            p.phi3 = uni(0, 2 * std::numbers::pi);
            p.delta1 = uni(0, 2 * std::numbers::pi);
            p.delta2 = uni(0, 2 * std::numbers::pi);
            p.delta3 = uni(0, 2 * std::numbers::pi);
            worst = std::max(worst, klm_smatrix(p).max_unitarity_defect());
        }
        double worst_mrr = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double r2 = 0.01 + (third - 0.02) * i / 100.0;
            worst_mrr = std::max(worst_mrr,
                                 gate_on_curve(GateFamily::MRR, r2).max_unitarity_defect());
        }
        add("unitarity", true, worst < 1e-12 && worst_mrr < 1e-10,
            "klm max defect " + vdetail::fmt(worst) + " (1000 draws), mrr on-curve max " +
                vdetail::fmt(worst_mrr));
    }

    // --- splitter coefficient oracle ---------------------------------------
    {
        double worst_closed = 0.0;
        for (double theta : {0.3, std::numbers::pi / 2, 2.2, 4.9}) {
            const double c = std::cos(theta / 2), s = std::sin(theta / 2);
            const auto f02 = bs_fock_coefficients(0, 2, theta);
            worst_closed = std::max({worst_closed, std::abs(f02.f[0] - c * c),
                                     std::abs(f02.f[1] + std::sin(theta) / std::numbers::sqrt2),
                                     std::abs(f02.f[2] - s * s)});
            const auto f20 = bs_fock_coefficients(2, 0, theta);
            worst_closed = std::max({worst_closed, std::abs(f20.f[0] - s * s),
                                     std::abs(f20.f[1] - std::sin(theta) / std::numbers::sqrt2),
                                     std::abs(f20.f[2] - c * c)});
            const auto f11 = bs_fock_coefficients(1, 1, theta);
            worst_closed = std::max(worst_closed, std::abs(f11.f[1] - std::cos(theta)));
        }
        double worst_match = 0.0, worst_norm = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const double theta = uni(0, 2 * std::numbers::pi);
            for (int n = 0; n <= 4; ++n)
                for (int m = 0; n + m <= 4; ++m) {
                    const auto fc = bs_fock_coefficients(n, m, theta);
                    double sum = 0;
                    for (double f : fc.f) sum += f * f;
                    worst_norm = std::max(worst_norm, std::abs(sum - 1.0));
                    FockStateVector s;
                    s.modes = 2;
                    s.amplitudes[{n, m}] = 1.0;
                    const FockStateVector out = apply_unitary(bs2(theta), s);
                    for (int p = 0; p <= n + m; ++p) {
                        const auto it = out.amplitudes.find({p, n + m - p});
                        const cplx amp = it == out.amplitudes.end() ? cplx(0) : it->second;
                        worst_match = std::max(worst_match, std::abs(amp - cplx(fc.f[p])));
                    }
                }
        }
        add("splitter_fock_coefficients", true,
            worst_closed < 1e-12 && worst_match < 1e-12 && worst_norm < 1e-12,
            "closed forms " + vdetail::fmt(worst_closed) + ", vs state evolution " +
                vdetail::fmt(worst_match) + ", normalization " + vdetail::fmt(worst_norm));
    }

    // --- accidental-amplitude oracle ---------------------------------------
    {
        double worst = 0.0;
        std::set<std::string> bad_kets;
        for (int trial = 0; trial < 100; ++trial) {
            const GateFamily fam = uni(0, 1) < 0.5 ? GateFamily::KLM : GateFamily::MRR;
            const ModeUnitary gate = gate_on_curve(fam, uni(0.05, third - 0.02));
            const CrossValidation cv =
                cross_validate(gate, uni(0, std::numbers::pi), uni(0, 2 * std::numbers::pi),
                               vdetail::random_alphas(gen), vdetail::random_alphas(gen));
            worst = std::max(worst, cv.max_abs_deviation);
            for (const auto& row : cv.discrepancies)
                if (row.deviation > 1e-10) {
                    std::string k = "|";
                    for (int n : row.ket) k += std::to_string(n);
                    bad_kets.insert(k + ">");
                }
        }
        std::string itemized;
        for (const auto& k : bad_kets) itemized += (itemized.empty() ? "" : " ") + k;
        add("accidental_amplitude_oracle", true, worst < 1e-10,
            "max |closed form - dense| = " + vdetail::fmt(worst) +
                " over 100 draws; tabulated-form discrepancies itemized for: " + itemized);
    }

    // --- closed-form three-photon law --------------------------------------
    {
        double worst = 0.0;
        for (double r2 : {std::numbers::sqrt2 - 1.0, 0.3}) {
            ExperimentConfig cfg;
            cfg.gate = gate_on_curve(GateFamily::KLM, r2);
            cfg.input1 = cfg.input4 =
                InputSpec::clspdc(InputSpec::field_alpha_from_ratio_sq(0.1));
            const double beta = beta_of_r2(GateFamily::KLM, r2);
            for (int i = 0; i < 16; ++i) {
                const double phi = 2 * std::numbers::pi * i / 16.0;
                const double law = 2 * beta * beta * std::norm(cfg.input1.alpha[0]) *
                                   std::norm(cfg.input1.alpha[2]) * std::cos(phi) *
                                   std::cos(phi);
                worst = std::max(worst,
                                 std::abs(decompose_probability(cfg, phi).three_photon - law));
            }
        }
        add("three_photon_law", true, worst < 1e-12,
            "max |P3 - 2 beta^2 |a0|^2 |a2|^2 cos^2| = " + vdetail::fmt(worst));
    }

    // --- benchmark cells ----------------------------------------------------
    const std::vector<TableCell> cells = compute_table_cells(GateFamily::KLM, 721, convention);
    {
        double worst_a2 = 0.0, worst_a1 = 0.0, worst_odd = 0.0;
        for (const auto& c : cells) {
            worst_a2 = std::max(worst_a2, std::abs(c.fit.a2 - 0.25));
            worst_a1 = std::max(worst_a1, c.delta_a1);
            worst_odd = std::max(worst_odd, c.fit.max_odd_harmonic);
        }
        const bool conv_ok = convention == PovmConvention::Squared;
        add("fit_structure", true,
            !conv_ok || (worst_a2 < 1e-6 && worst_a1 < 0.01 && worst_odd < 1e-10),
            conv_ok ? "max |a2 - 1/4| = " + vdetail::fmt(worst_a2) +
                          ", max |a1 - ref| = " + vdetail::fmt(worst_a1) +
                          ", odd harmonics " + vdetail::fmt(worst_odd)
                    : "skipped under linear convention (reference cells assume squared)");
        std::string detail;
        double worst_a0 = 0.0;
        for (const auto& c : cells) {
            worst_a0 = std::max(worst_a0, c.delta_a0);
            detail += to_string(c.ref.kind) + "/" + vdetail::fmt(c.ref.xi) + ": a0=" +
                      vdetail::fmt(c.fit.a0) + " (ref " + vdetail::fmt(c.ref.a0) + ", |d|=" +
                      vdetail::fmt(c.delta_a0) + ") ";
        }
        add("table_a0_cells", false, worst_a0 <= 0.01,
            detail + "-- documented discrepancy: the reference cells are not reproduced by "
                     "the stated model (see tables report)");
        detail.clear();
        double worst_vis = 0.0;
        for (const auto& c : cells) {
            worst_vis = std::max(worst_vis, c.delta_visibility);
            detail += to_string(c.ref.kind) + "/" + vdetail::fmt(c.ref.xi) + ": vis=" +
                      vdetail::fmt(c.visibility) + " (ref " + vdetail::fmt(c.ref.visibility) +
                      ") ";
        }
        add("table_visibilities", false, worst_vis <= 0.02, detail + "-- documented discrepancy");
    }
    {
        double worst_rel = 0.0;
        std::string wcs_detail;
        for (const auto& c : cells) {
            if (!c.ref.prefactor_documented_discrepancy)
                worst_rel = std::max(worst_rel, c.delta_prefactor_rel);
            else
                wcs_detail += " " + to_string(c.ref.kind) + "/" + vdetail::fmt(c.ref.xi) + "=" +
                              vdetail::fmt(c.prefactor) + " (ref " +
                              vdetail::fmt(c.ref.prefactor) + ")";
        }
        const double ratio = cells[1].prefactor / cells[0].prefactor;
        const double ratio_ref = std::pow(0.85 / 0.40, 6);
        const bool conv_ok = convention == PovmConvention::Squared;
        add("prefactor_pair_source", true,
            !conv_ok || (worst_rel < 0.02 && std::abs(ratio / ratio_ref - 1.0) < 0.01),
            conv_ok ? "worst relative error " + vdetail::fmt(worst_rel) + ", xi ratio " +
                          vdetail::fmt(ratio) + " vs " + vdetail::fmt(ratio_ref)
                    : "skipped under linear convention");
        add("prefactor_wcs_cells", false, false,
            "documented discrepancy: closed form gives" + wcs_detail);
    }

    // --- family equivalence -------------------------------------------------
    {
        const InputSpec w = InputSpec::wcs(InputSpec::field_alpha_from_ratio_sq(0.1));
        ExperimentConfig klm = ExperimentConfig::at_optimum(GateFamily::KLM, w, w,
                                                            DetectorModel::uniform(0.85, 4));
        ExperimentConfig mrr = ExperimentConfig::at_optimum(GateFamily::MRR, w, w,
                                                            DetectorModel::uniform(0.85, 4));
        klm.phi_points = mrr.phi_points = 73;
        const SweepResult a = run_sweep(klm), b = run_sweep(mrr);
        double worst = 0.0;
        for (size_t i = 0; i < a.P.size(); ++i)
            worst = std::max(worst, std::abs(a.P[i] - b.P[i]));
        double worst_block = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                worst_block = std::max(worst_block, std::abs(klm.gate(r, c) - mrr.gate(r, c)));
        add("family_equivalence", true, worst < 1e-10 && worst_block < 1e-9,
            "max sweep |dP| = " + vdetail::fmt(worst) + ", upper-left block diff " +
                vdetail::fmt(worst_block));
    }

    // --- heralded isometry ----------------------------------------------------
    {
        const OptimizeResult klm = optimize_beta(GateFamily::KLM);
        const ModeUnitary gate4 = embed_leading(gate_on_curve(GateFamily::KLM, klm.r2_star), 4);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto alphas = vdetail::random_alphas(gen);
            FockStateVector in;
            in.modes = 4;
            in.amplitudes[{0, 1, 0, 0}] = alphas[0];
            in.amplitudes[{1, 1, 0, 0}] = alphas[1];
            in.amplitudes[{2, 1, 0, 0}] = alphas[2];
            in.prune();
            const FockStateVector h = herald_exact(apply_unitary(gate4, in));
            const std::array<cplx, 3> want = {0.5 * alphas[0], 0.5 * alphas[1], -0.5 * alphas[2]};
            for (int n1 = 0; n1 <= 2; ++n1) {
                const auto it = h.amplitudes.find({n1, 0});
                const cplx amp = it == h.amplitudes.end() ? cplx(0) : it->second;
                worst = std::max(worst, std::abs(amp - want[n1]));
            }
        }
        add("heralded_isometry", true, worst < 1e-10,
            "max deviation from (a0, a1, -a2)/2: " + vdetail::fmt(worst));
    }

    // --- accidental scaling ----------------------------------------------------
    {
        std::vector<double> lnn, ln4, ln5;
        for (double nbar = 1e-3; nbar < 1.1e-1; nbar *= std::sqrt(10.0)) {
            ExperimentConfig cfg;
            cfg.gate = gate_on_curve(GateFamily::KLM, std::numbers::sqrt2 - 1.0);
            cfg.input1 = cfg.input4 = InputSpec::wcs(std::sqrt(nbar));
            cfg.detectors = DetectorModel::uniform(0.85, 4);
            const Decomposition d = decompose_probability(cfg, 0.3);
            lnn.push_back(std::log(nbar));
            ln4.push_back(std::log(d.four_photon / d.three_photon));
            ln5.push_back(std::log(d.five_photon / d.three_photon));
        }
        auto slope = [&](const std::vector<double>& y) {
            const double n = static_cast<double>(y.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < y.size(); ++i) {
                sx += lnn[i];
                sy += y[i];
                sxx += lnn[i] * lnn[i];
                sxy += lnn[i] * y[i];
            }
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        const double s4 = slope(ln4), s5 = slope(ln5);
        add("accidental_scaling", true, std::abs(s4 - 1.0) < 0.05 && std::abs(s5 - 2.0) < 0.10,
            "log-log slopes: four-photon " + vdetail::fmt(s4) + " (want 1), five-photon " +
                vdetail::fmt(s5) + " (want 2)");
    }

    // --- pipeline consistency ---------------------------------------------------
    {
        const ExperimentConfig cfg =
            benchmark_config(GateFamily::KLM, InputKind::WCS, 0.85, 0.1, 721);
        double worst_sum = 0.0, worst_dc = 0.0, worst_phase = 0.0;
        const Decomposition d0 = decompose_probability(cfg, 0.0);
        for (double phi : {0.0, 0.4, 1.3, 2.9, 4.4}) {
            const Decomposition d = decompose_probability(cfg, phi);
            worst_sum = std::max(worst_sum,
                                 std::abs(d.total() - run_once(cfg, phi).probability));
            worst_dc = std::max(worst_dc, std::abs(d.five_photon - d0.five_photon));
            ExperimentConfig gate_path = cfg;
            gate_path.phase_via_unitary = true;
            worst_phase = std::max(worst_phase, std::abs(run_once(cfg, phi).probability -
                                                         run_once(gate_path, phi).probability));
        }
        const ExperimentConfig cl =
            benchmark_config(GateFamily::KLM, InputKind::ClSPDC, 0.85, 0.1, 721);
        double worst_ac = 0.0;
        for (double phi : {0.2, 1.7})
            worst_ac = std::max(worst_ac, decompose_probability(cl, phi).four_photon);
        add("pipeline_consistency", true,
            worst_sum < 1e-12 && worst_dc < 1e-12 && worst_phase < 1e-12 && worst_ac < 1e-15,
            "decomposition sum " + vdetail::fmt(worst_sum) + ", dc flatness " +
                vdetail::fmt(worst_dc) + ", phase-path agreement " + vdetail::fmt(worst_phase) +
                ", pair-source ac " + vdetail::fmt(worst_ac));
    }

    // --- squared-weight dichotomy defect (reported, not judged) -----------------
    {
        const ExperimentConfig cfg =
            benchmark_config(GateFamily::KLM, InputKind::WCS, 0.4, 0.1, 721);
        FockStateVector out = apply_unitary(build_total_unitary(cfg),
                                            build_input(cfg.input1, cfg.input4));
        out = truncate(out, cfg.per_mode_cutoff, cfg.total_cutoff);
        const double defect = dichotomy_defect(out, 0, 0.4);
        add("povm_dichotomy_defect", false, true,
            "squared-weight P_C + P_NC on mode 1 differs from one by " + vdetail::fmt(defect) +
                " at xi = 0.4 (the squared forms are not complementary; reported per run)");
    }

    // --- structured discrepancy rows at a generic point --------------------------
    {
        // away from the operating point and the 50:50 angle, where none of the
        // transcription errors cancels
        const std::array<cplx, 3> a = InputSpec::wcs(0.7).alpha;
        const CrossValidation cv =
            cross_validate(gate_on_curve(GateFamily::KLM, 0.3), 1.1, 0.7, a, a);
        report.discrepancies = cv.discrepancies;
    }

    // --- convention sensitivity (reported) ---------------------------------------
    if (convention == PovmConvention::Squared) {
        const std::vector<TableCell> lin =
            compute_table_cells(GateFamily::KLM, 241, PovmConvention::Linear);
        std::string detail = "linear-convention a0 cells:";
        for (const auto& c : lin)
            detail += " " + to_string(c.ref.kind) + "/" + vdetail::fmt(c.ref.xi) + "=" +
                      vdetail::fmt(c.fit.a0);
        add("povm_convention_sensitivity", false, true, detail);
    }

    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace mzsim
