#pragma once

#include <array>
#include <random>

#include "mzsim/fock.hpp"
#include "mzsim/linear_optics.hpp"

namespace testsupport {

using mzsim::cplx;

inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline cplx random_cplx() {
    std::normal_distribution<double> g;
    return {g(rng()), g(rng())};
}

/// Haar-ish random unitary via Gram-Schmidt on a complex Gaussian matrix.
inline mzsim::ModeUnitary random_unitary(int n) {
    std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(n));
    for (auto& col : cols)
        for (auto& x : col) x = random_cplx();
    for (int i = 0; i < n; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < i; ++j) {
                cplx dot = 0.0;
                for (int k = 0; k < n; ++k) dot += std::conj(cols[j][k]) * cols[i][k];
                for (int k = 0; k < n; ++k) cols[i][k] -= dot * cols[j][k];
            }
        }
        double nn = 0.0;
        for (int k = 0; k < n; ++k) nn += std::norm(cols[i][k]);
        for (int k = 0; k < n; ++k) cols[i][k] /= std::sqrt(nn);
    }
    std::vector<cplx> e(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) e[static_cast<size_t>(r) * n + c] = cols[c][r];
    return mzsim::ModeUnitary(n, std::move(e));
}

inline mzsim::FockStateVector random_state(int modes, int max_per_mode, int n_terms) {
    mzsim::FockStateVector s;
    s.modes = modes;
    std::uniform_int_distribution<int> occ(0, max_per_mode);
    for (int t = 0; t < n_terms; ++t) {
        mzsim::OccupationVector k(modes);
        for (int& x : k) x = occ(rng());
        s.amplitudes[k] += random_cplx();
    }
    const double nn = std::sqrt(mzsim::norm_sq(s));
    for (auto& [k, a] : s.amplitudes) a /= nn;
    return s;
}

inline std::array<cplx, 3> random_alphas(bool with_one_photon = true) {
    std::array<cplx, 3> a{random_cplx(), with_one_photon ? random_cplx() : 0.0, random_cplx()};
    double nn = 0.0;
    for (const auto& x : a) nn += std::norm(x);
    for (auto& x : a) x /= std::sqrt(nn);
    return a;
}

}  // namespace testsupport
