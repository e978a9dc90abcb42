#include <random>

#include "doctest.h"
#include "opfree/balgebra.hpp"

using namespace opfree;

namespace {

BElement random_matrix(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    BElement m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

}  // namespace

TEST_CASE("imag_part basics") {
    const Complex I(0.0, 1.0);
    BElement x = I * BElement::Identity(2, 2);
    CHECK(op_norm(imag_part(x) - BElement::Identity(2, 2)) < 1e-14);

    BElement sa(2, 2);
    sa << 1.0, Complex(0.5, 0.25), Complex(0.5, -0.25), -2.0;
    CHECK(op_norm(imag_part(sa)) < 1e-14);

    BElement y(2, 2);
    y << I, 1.0, 0.0, I;
    BElement expected(2, 2);
    expected << 1.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 1.0;
    CHECK(op_norm(imag_part(y) - expected) < 1e-14);
}

TEST_CASE("in_upper_half_plane") {
    const Complex I(0.0, 1.0);
    CHECK(in_upper_half_plane(2.0 * I * BElement::Identity(3, 3), 1.0));
    CHECK_FALSE(in_upper_half_plane(BElement::Identity(2, 2), 1e-6));
    BElement diag = BElement::Zero(2, 2);
    diag(0, 0) = I;
    diag(1, 1) = 0.5 * I;
    CHECK(in_upper_half_plane(diag, 0.4));
    CHECK_FALSE(in_upper_half_plane(diag, 0.6));
}

TEST_CASE("invert") {
    const Complex I(0.0, 1.0);
    BElement x = 2.0 * I * BElement::Identity(2, 2);
    CHECK(op_norm(invert(x) - (-0.5 * I) * BElement::Identity(2, 2)) < 1e-14);

    BElement diag = BElement::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    BElement expect = BElement::Zero(2, 2);
    expect(0, 0) = 1.0;
    expect(1, 1) = 0.5;
    CHECK(op_norm(invert(diag) - expect) < 1e-14);

    BElement singular = BElement::Zero(2, 2);
    singular(0, 1) = 1.0;
    CHECK_THROWS_AS(invert(singular), SingularMatrix);

    // resolvent bound: margin eps forces ||x^{-1}|| <= 1/eps
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        BElement m = random_matrix(2, rng);
        BElement probe_mat = 0.5 * (m + m.adjoint()) + Complex(0.0, 1.0) * BElement::Identity(2, 2) +
                             Complex(0.0, 0.2) * (random_matrix(2, rng) +
                                                  random_matrix(2, rng).adjoint());
        if (!in_upper_half_plane(probe_mat, 1e-9)) continue;
        const double eps = min_eigenvalue_selfadjoint(imag_part(probe_mat));
        CHECK(op_norm(invert(probe_mat)) <= 1.0 / eps + 1e-9);
    }
}

TEST_CASE("op_norm") {
    CHECK(op_norm(BElement::Identity(4, 4)) == doctest::Approx(1.0));
    BElement diag = BElement::Zero(2, 2);
    diag(0, 0) = 3.0;
    diag(1, 1) = -4.0;
    CHECK(op_norm(diag) == doctest::Approx(4.0));
    BElement nil = BElement::Zero(2, 2);
    nil(0, 1) = 2.0;
    CHECK(op_norm(nil) == doctest::Approx(2.0));
}

TEST_CASE("op_norm submultiplicative on random samples") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        BElement x = random_matrix(3, rng), y = random_matrix(3, rng);
        CHECK(op_norm(x * y) <= op_norm(x) * op_norm(y) + 1e-9);
    }
}

TEST_CASE("invert is an involution on its domain") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        BElement x = random_matrix(3, rng) + 3.0 * BElement::Identity(3, 3);
        CHECK(op_norm(invert(invert(x)) - x) < 1e-9);
    }
}

TEST_CASE("adjoint is an exact involution") {
    std::mt19937_64 rng(23);
    BElement x = random_matrix(3, rng);
    CHECK((x.adjoint().adjoint() - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("amplify") {
    BElement b(2, 2);
    b << 1.0, Complex(0.0, 2.0), 3.0, -1.0;

    SUBCASE("k=1 is the identity embedding") {
        CHECK(op_norm(amplify({{b}}) - b) < 1e-15);
    }
    SUBCASE("diagonal blocks give b (x) I_k") {
        BElement z = BElement::Zero(2, 2);
        BElement big = amplify({{b, z}, {z, b}});
        CHECK(op_norm(big - amplify_diag(b, 2)) < 1e-15);
        CHECK(op_norm(block_of(big, 2, 0, 0) - b) < 1e-15);
        CHECK(op_norm(block_of(big, 2, 1, 0)) < 1e-15);
    }
    SUBCASE("generic blocks match index arithmetic") {
        std::mt19937_64 rng(3);
        std::vector<std::vector<BElement>> blocks{{random_matrix(2, rng), random_matrix(2, rng)},
                                                  {random_matrix(2, rng), random_matrix(2, rng)}};
        BElement big = amplify(blocks);
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        CHECK(big(p * 2 + i, q * 2 + j) == blocks[p][q](i, j));
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(amplify({{b, BElement::Zero(3, 3)},
                                 {BElement::Zero(2, 2), b}}),
                        DimensionMismatch);
    }
}

TEST_CASE("half-plane membership survives diagonal amplification") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        BElement m = random_matrix(2, rng);
        BElement x = m + Complex(0.0, 3.0) * BElement::Identity(2, 2);
        for (double eps : {0.5, 1.0, 1.5})
            if (in_upper_half_plane(x, eps)) CHECK(in_upper_half_plane(amplify_diag(x, 3), eps));
    }
}

TEST_CASE("make_probe certifies the margin") {
    const Complex I(0.0, 1.0);
    ProbePoint p = make_probe(2.0 * I * BElement::Identity(2, 2), 1);
    CHECK(p.margin == doctest::Approx(2.0));
    CHECK(p.algebra_dim() == 2);
    CHECK_THROWS_AS(make_probe(BElement::Identity(2, 2), 1), DomainViolation);
}
