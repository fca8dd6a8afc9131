#pragma once

#include <string>
#include <vector>

#include "mzsim/experiment.hpp"

namespace mzsim {

/// Reference values for the four (input x efficiency) benchmark cells:
/// the published scaled-probability coefficients (a0, a1) with a2 = beta^2,
/// the prefactor and the fringe visibility, all at theta = pi/2,
/// |alpha2/alpha0|^2 = 0.1 and beta^2 = 1/4.
struct ReferenceCell {
    InputKind kind;
    double xi;
    double a0, a1;        // published fit coefficients
    double prefactor;     // published overall scale
    double visibility;    // published contrast
    bool prefactor_documented_discrepancy;  // known not to follow the closed form
};

inline const std::vector<ReferenceCell>& reference_cells() {
    static const std::vector<ReferenceCell> cells = {
        {InputKind::ClSPDC, 0.40, 0.065, 0.000, 6.7e-4, 0.65, false},
        {InputKind::ClSPDC, 0.85, 0.015, 0.006, 6.2e-2, 0.89, false},
        {InputKind::WCS, 0.40, 0.188, 0.000, 4.1e-4, 0.41, true},
        {InputKind::WCS, 0.85, 0.078, 0.003, 3.8e-2, 0.65, true},
    };
    return cells;
}

/// One recomputed benchmark cell next to its reference values.
struct TableCell {
    ReferenceCell ref;
    CosFit fit;
    double prefactor = 0.0;
    double visibility = 0.0;
    double delta_a0 = 0.0, delta_a1 = 0.0;
    double delta_prefactor_rel = 0.0;
    double delta_visibility = 0.0;
};

inline ExperimentConfig benchmark_config(GateFamily family, InputKind kind, double xi,
                                         double alpha_ratio_sq = 0.1, int phi_points = 721,
                                         MrrBranch branch = MrrBranch::Bottom,
                                         PovmConvention convention = PovmConvention::Squared) {
    const double field_alpha = InputSpec::field_alpha_from_ratio_sq(alpha_ratio_sq);
    const InputSpec in =
        kind == InputKind::WCS ? InputSpec::wcs(field_alpha) : InputSpec::clspdc(field_alpha);
    ExperimentConfig cfg = ExperimentConfig::at_optimum(family, in, in,
                                                        DetectorModel::uniform(xi, 4),
                                                        std::numbers::pi / 2, branch);
    cfg.phi_points = phi_points;
    cfg.convention = convention;
    return cfg;
}

inline std::vector<TableCell> compute_table_cells(
    GateFamily family = GateFamily::KLM, int phi_points = 721,
    PovmConvention convention = PovmConvention::Squared) {
    std::vector<TableCell> out;
    for (const ReferenceCell& ref : reference_cells()) {
        const ExperimentConfig cfg =
            benchmark_config(family, ref.kind, ref.xi, 0.1, phi_points, MrrBranch::Bottom,
                             convention);
        const SweepResult sw = run_sweep(cfg);
        TableCell cell;
        cell.ref = ref;
        cell.fit = sw.fit;
        cell.prefactor = sw.prefactor.value;
        cell.visibility = sw.visibility;
        cell.delta_a0 = std::abs(sw.fit.a0 - ref.a0);
        cell.delta_a1 = std::abs(sw.fit.a1 - ref.a1);
        cell.delta_prefactor_rel = std::abs(sw.prefactor.value - ref.prefactor) / ref.prefactor;
        cell.delta_visibility = std::abs(sw.visibility - ref.visibility);
        out.push_back(cell);
    }
    return out;
}

}  // namespace mzsim
