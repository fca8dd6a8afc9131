#include <catch_amalgamated.hpp>

#include "mzsim/fock.hpp"
#include "support.hpp"

using namespace mzsim;
using testsupport::random_state;

TEST_CASE("vacuum_is_normalized_single_key") {
    const FockStateVector v = vacuum(4);
    REQUIRE(v.amplitudes.size() == 1);
    REQUIRE(v.amplitudes.count({0, 0, 0, 0}) == 1);
    REQUIRE_THAT(norm_sq(v), Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE(v.normalized);
    REQUIRE_THROWS_AS(vacuum(0), std::invalid_argument);
}

TEST_CASE("vacuum_tensor_vacuum_is_vacuum") {
    const FockStateVector t = tensor(vacuum(3), vacuum(1));
    REQUIRE(t.amplitudes.size() == 1);
    REQUIRE(t.amplitudes.count({0, 0, 0, 0}) == 1);
    REQUIRE_THAT(std::abs(t.amplitudes.at({0, 0, 0, 0}) - cplx(1.0)),
                 Catch::Matchers::WithinAbs(0.0, 1e-15));
}

TEST_CASE("polynomial_to_state_basic_conversions") {
    CreationPolynomial p;
    p.modes = 4;
    p.terms[{0, 1, 0, 0}] = 1.0;  // a2^dag on vacuum
    FockStateVector s = polynomial_to_state(p);
    REQUIRE(s.amplitudes.size() == 1);
    REQUIRE_THAT(std::abs(s.amplitudes.at({0, 1, 0, 0}) - cplx(1.0)),
                 Catch::Matchers::WithinAbs(0.0, 1e-15));

    // (a1^dag)^2 / sqrt(2) -> |2,0,0,0> with unit amplitude
    CreationPolynomial q;
    q.modes = 4;
    q.terms[{2, 0, 0, 0}] = 1.0 / std::numbers::sqrt2;
    s = polynomial_to_state(q);
    REQUIRE_THAT(std::abs(s.amplitudes.at({2, 0, 0, 0}) - cplx(1.0)),
                 Catch::Matchers::WithinAbs(0.0, 1e-15));

    CreationPolynomial r;
    r.modes = 4;
    const cplx c{0.3, -0.4};
    r.terms[{1, 1, 0, 1}] = c;
    s = polynomial_to_state(r);
    REQUIRE_THAT(std::abs(s.amplitudes.at({1, 1, 0, 1}) - c), Catch::Matchers::WithinAbs(0.0, 1e-15));
}

TEST_CASE("polynomial_to_state_is_linear") {
    for (int trial = 0; trial < 20; ++trial) {
        const FockStateVector a = random_state(3, 3, 5);
        const FockStateVector b = random_state(3, 3, 5);
        CreationPolynomial pa = state_to_polynomial(a), pb = state_to_polynomial(b);
        CreationPolynomial sum;
        sum.modes = 3;
        for (const auto& [k, v] : pa.terms) sum.terms[k] += v;
        for (const auto& [k, v] : pb.terms) sum.terms[k] += v;
        const FockStateVector via_sum = polynomial_to_state(sum);
        const FockStateVector direct = add(a, b);
        for (const auto& [k, v] : direct.amplitudes) {
            const auto it = via_sum.amplitudes.find(k);
            REQUIRE(it != via_sum.amplitudes.end());
            REQUIRE_THAT(std::abs(it->second - v), Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("inner_product_conjugate_symmetry_and_positivity") {
    REQUIRE_THAT(std::abs(inner_product(vacuum(2), vacuum(2)) - cplx(1.0)),
                 Catch::Matchers::WithinAbs(0.0, 1e-15));
    FockStateVector a = vacuum(2), b = vacuum(2);
    a.amplitudes = {{{1, 0}, 1.0}};
    b.amplitudes = {{{0, 1}, 1.0}};
    REQUIRE_THAT(std::abs(inner_product(a, b)), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THROWS_AS(inner_product(vacuum(2), vacuum(3)), std::invalid_argument);

    for (int trial = 0; trial < 20; ++trial) {
        const FockStateVector x = random_state(3, 2, 6);
        const FockStateVector y = random_state(3, 2, 6);
        const cplx xy = inner_product(x, y);
        const cplx yx = inner_product(y, x);
        REQUIRE_THAT(std::abs(xy - std::conj(yx)), Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE(inner_product(x, x).real() >= 0.0);
        REQUIRE_THAT(inner_product(x, x).imag(), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("tensor_inner_product_factorizes") {
    for (int trial = 0; trial < 20; ++trial) {
        const FockStateVector a = random_state(2, 2, 4), b = random_state(2, 2, 4);
        const FockStateVector c = random_state(2, 2, 4), d = random_state(2, 2, 4);
        const cplx lhs = inner_product(tensor(a, b), tensor(c, d));
        const cplx rhs = inner_product(a, c) * inner_product(b, d);
        REQUIRE_THAT(std::abs(lhs - rhs), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("tensor_concatenates_keys_and_multiplies_amplitudes") {
    FockStateVector a;
    a.modes = 1;
    const cplx alpha{0.6, 0.2};
    a.amplitudes[{1}] = alpha;
    const FockStateVector t = tensor(a, vacuum(1));
    REQUIRE(t.modes == 2);
    REQUIRE_THAT(std::abs(t.amplitudes.at({1, 0}) - alpha), Catch::Matchers::WithinAbs(0.0, 1e-15));
}

TEST_CASE("truncate_drops_offending_keys_and_flags_unnormalized") {
    REQUIRE(truncate(vacuum(4), 2, 5).amplitudes.size() == 1);

    FockStateVector s = vacuum(4);
    s.amplitudes[{3, 0, 0, 0}] = 0.5;
    s.amplitudes[{2, 2, 2, 0}] = 0.25;
    const FockStateVector t = truncate(s, 2, 5);
    REQUIRE(t.amplitudes.count({3, 0, 0, 0}) == 0);
    REQUIRE(t.amplitudes.count({2, 2, 2, 0}) == 0);  // total 6 > 5
    REQUIRE(t.amplitudes.count({0, 0, 0, 0}) == 1);
    REQUIRE_FALSE(t.normalized);
}

TEST_CASE("truncate_is_idempotent_and_monotone") {
    for (int trial = 0; trial < 10; ++trial) {
        const FockStateVector s = random_state(4, 4, 12);
        const FockStateVector once = truncate(s, 2, 5);
        const FockStateVector twice = truncate(once, 2, 5);
        REQUIRE(once.amplitudes == twice.amplitudes);
        for (const auto& [k, v] : once.amplitudes)
            REQUIRE(std::abs(v) <= std::abs(s.amplitudes.at(k)) + 1e-15);
    }
}
