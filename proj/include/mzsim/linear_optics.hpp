#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mzsim/fock.hpp"

namespace mzsim {

/// Dense M x M complex matrix acting on creation operators. The constructor
/// verifies unitarity to 1e-10 in the max norm.
///
/// Convention: a mode unitary U transforms input creation operators as
///   a^dag_i -> sum_k a^dag_k U(k,i),
/// i.e. column i of U lists the output amplitudes of a photon entering mode i.
class ModeUnitary {
public:
    ModeUnitary(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
        if (dim_ < 1 || a_.size() != static_cast<size_t>(dim_) * dim_)
            throw std::invalid_argument("ModeUnitary: bad dimensions");
        verify_unitary();
    }

    static ModeUnitary identity(int dim) {
        std::vector<cplx> e(static_cast<size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) e[static_cast<size_t>(i) * dim + i] = 1.0;
        return ModeUnitary(dim, std::move(e));
    }

    int dim() const { return dim_; }
    cplx operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

    ModeUnitary dagger() const {
        std::vector<cplx> e(a_.size());
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c)
                e[static_cast<size_t>(c) * dim_ + r] = std::conj((*this)(r, c));
        return ModeUnitary(dim_, std::move(e));
    }

    double max_unitarity_defect() const {
        double worst = 0.0;
        for (int r = 0; r < dim_; ++r) {
            for (int c = 0; c < dim_; ++c) {
                cplx s = 0.0;
                for (int k = 0; k < dim_; ++k) s += std::conj((*this)(k, r)) * (*this)(k, c);
                if (r == c) s -= 1.0;
                worst = std::max(worst, std::abs(s));
            }
        }
        return worst;
    }

private:
    void verify_unitary() const {
        if (max_unitarity_defect() >= 1e-10)
            throw std::invalid_argument("ModeUnitary: matrix is not unitary");
    }

    int dim_;
    std::vector<cplx> a_;  // row-major
};

/// Two-mode beam splitter of full angle theta (50:50 at theta = pi/2):
///   [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]].
/// On states this sends |1,0> -> cos(t/2)|1,0> + sin(t/2)|0,1>.
inline ModeUnitary bs2(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return ModeUnitary(2, {c, -s, s, c});
}

/// Embeds a two-mode unitary into modes (i, j) of an M-mode identity,
/// 0-based: entry (0,0) goes to (i,i), (0,1) to (i,j), and so on.
inline ModeUnitary embed(const ModeUnitary& two_mode, int i, int j, int modes) {
    if (two_mode.dim() != 2) throw std::invalid_argument("embed: expected a 2-mode unitary");
    if (i == j || i < 0 || j < 0 || i >= modes || j >= modes)
        throw std::out_of_range("embed: mode indices out of range");
    std::vector<cplx> e(static_cast<size_t>(modes) * modes, 0.0);
    for (int k = 0; k < modes; ++k) e[static_cast<size_t>(k) * modes + k] = 1.0;
    e[static_cast<size_t>(i) * modes + i] = two_mode(0, 0);
    e[static_cast<size_t>(i) * modes + j] = two_mode(0, 1);
    e[static_cast<size_t>(j) * modes + i] = two_mode(1, 0);
    e[static_cast<size_t>(j) * modes + j] = two_mode(1, 1);
    return ModeUnitary(modes, std::move(e));
}

/// Embeds an n-mode unitary into the first n modes of an M-mode identity.
inline ModeUnitary embed_leading(const ModeUnitary& u, int modes) {
    if (u.dim() > modes) throw std::out_of_range("embed_leading: submatrix too large");
    std::vector<cplx> e(static_cast<size_t>(modes) * modes, 0.0);
    for (int k = 0; k < modes; ++k) e[static_cast<size_t>(k) * modes + k] = 1.0;
    for (int r = 0; r < u.dim(); ++r)
        for (int c = 0; c < u.dim(); ++c) e[static_cast<size_t>(r) * modes + c] = u(r, c);
    return ModeUnitary(modes, std::move(e));
}

/// Diagonal phase e^{i phi} on one mode; multiplies |n> by e^{i n phi}.
inline ModeUnitary phase_shifter(double phi, int mode, int modes) {
    if (mode < 0 || mode >= modes) throw std::out_of_range("phase_shifter: mode out of range");
    std::vector<cplx> e(static_cast<size_t>(modes) * modes, 0.0);
    for (int k = 0; k < modes; ++k) e[static_cast<size_t>(k) * modes + k] = 1.0;
    e[static_cast<size_t>(mode) * modes + mode] = std::polar(1.0, phi);
    return ModeUnitary(modes, std::move(e));
}

/// Matrix product a*b (apply b first, then a).
inline ModeUnitary compose(const ModeUnitary& a, const ModeUnitary& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
    const int n = a.dim();
    std::vector<cplx> e(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += a(r, k) * b(k, c);
            e[static_cast<size_t>(r) * n + c] = s;
        }
    return ModeUnitary(n, std::move(e));
}

/// Applies U exactly by creation-operator substitution: the state is read as
/// a polynomial in a^dag, each a^dag_i is replaced by sum_k a^dag_k U(k,i),
/// the product is expanded and converted back. No truncation.
inline FockStateVector apply_unitary(const ModeUnitary& u, const FockStateVector& s) {
    if (u.dim() != s.modes) throw std::invalid_argument("apply_unitary: dimension mismatch");
    const int m = s.modes;

    // column i as a linear polynomial sum_k U(k,i) a^dag_k
    std::vector<CreationPolynomial> columns(m);
    for (int i = 0; i < m; ++i) {
        columns[i].modes = m;
        for (int k = 0; k < m; ++k) {
            if (std::abs(u(k, i)) <= kAmplitudePrune) continue;
            OccupationVector e(m, 0);
            e[k] = 1;
            columns[i].terms[e] = u(k, i);
        }
    }

    CreationPolynomial out;
    out.modes = m;
    for (const auto& [occ, amp] : s.amplitudes) {
        CreationPolynomial term;
        term.modes = m;
        term.terms[OccupationVector(m, 0)] = amp / sqrt_occ_factorial(occ);
        for (int i = 0; i < m; ++i)
            for (int rep = 0; rep < occ[i]; ++rep) term = poly_multiply(term, columns[i]);
        for (const auto& [e, c] : term.terms) out.terms[e] += c;
    }

    FockStateVector result = polynomial_to_state(out);
    result.normalized = s.normalized;
    return result;
}

/// Beam-splitter Fock coefficients: |n,m> -> sum_p f_p |p, n+m-p>.
struct BSFockCoefficients {
    int n = 0, m = 0;
    double theta = 0.0;
    std::vector<double> f;  // indices p = 0..n+m
};

/// Closed-form coefficients for bs2(theta) acting on |n>_a |m>_b:
///   f_p = sum_{q,q'} delta_{p,q+q'} C(n,q) C(m,q') sqrt(p!(n+m-p)!/(n!m!))
///         (-1)^{q'} cos(t/2)^{m+q-q'} sin(t/2)^{n-q+q'}.
inline BSFockCoefficients bs_fock_coefficients(int n, int m, double theta) {
    if (n < 0 || m < 0 || n + m > 12)
        throw std::invalid_argument("bs_fock_coefficients: require n,m >= 0 and n+m <= 12");
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    auto binom = [](int a, int b) { return factorial(a) / (factorial(b) * factorial(a - b)); };
    BSFockCoefficients out;
    out.n = n;
    out.m = m;
    out.theta = theta;
    out.f.assign(n + m + 1, 0.0);
    for (int q = 0; q <= n; ++q) {
        for (int qp = 0; qp <= m; ++qp) {
            const int p = q + qp;
            const double amp = binom(n, q) * binom(m, qp) *
                               std::sqrt(factorial(p) * factorial(n + m - p) /
                                         (factorial(n) * factorial(m))) *
                               ((qp % 2) ? -1.0 : 1.0) * std::pow(c, m + q - qp) *
                               std::pow(s, n - q + qp);
            out.f[p] += amp;
        }
    }
    return out;
}

}  // namespace mzsim
