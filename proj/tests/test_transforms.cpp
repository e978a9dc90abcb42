#include <random>

#include "doctest.h"
#include "opfree/transforms.hpp"
#include "oracles.hpp"

using namespace opfree;

namespace {

const Complex I(0.0, 1.0);

ProbePoint scalar_probe(Complex z) {
    BElement b(1, 1);
    b(0, 0) = z;
    return make_probe(b, 1);
}

TruncatedMoments semicircle_moments(int order) {
    return moments_from_cumulants(semicircular(Eigen::MatrixXcd::Identity(1, 1), 1, order));
}

}  // namespace

TEST_CASE("cauchy_series: scalar semicircle matches the closed form") {
    const TruncatedMoments mu = semicircle_moments(8);
    const SeriesValue g = cauchy_series(mu, scalar_probe(Complex(0, 2)), 8);
    CHECK(std::abs(g.value(0, 0) - Complex(0.0, -0.41421356)) < 0.05);
    CHECK(std::abs(g.value(0, 0) - oracles::semicircle_cauchy(Complex(0, 2), 1.0)) <=
          g.tail_bound + 1e-9);
    // deeper in the half-plane the truncation error collapses
    const SeriesValue far = cauchy_series(mu, scalar_probe(Complex(0, 6)), 8);
    CHECK(std::abs(far.value(0, 0) - oracles::semicircle_cauchy(Complex(0, 6), 1.0)) < 1e-6);
}

TEST_CASE("cauchy_series: delta_0 resolvent") {
    const TruncatedMoments mu = moments_from_cumulants(point_mass(BElement::Zero(1, 1), 6));
    const double lambda = 3.5;
    const SeriesValue g = cauchy_series(mu, scalar_probe(Complex(0.0, lambda)), 6);
    CHECK(std::abs(g.value(0, 0) - Complex(0.0, -1.0 / lambda)) < 1e-14);
    CHECK(g.tail_bound == 0.0);
}

TEST_CASE("cauchy_series: domain violation below the radius rule") {
    const TruncatedMoments mu = semicircle_moments(8);
    REQUIRE(mu.bound > 1.0);
    CHECK_THROWS_AS(cauchy_series(mu, scalar_probe(Complex(0.0, 0.9 / mu.bound)), 8),
                    DomainViolation);
}

TEST_CASE("cauchy_realized matches the spectral decomposition (d=1)") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    a(2, 2) = 0.25;
    const RealizedModel model = make_realized(1, 3, a);
    const Complex z(0.3, 1.0);
    const BElement g = cauchy_realized(model, scalar_probe(z));
    Complex expect(0, 0);
    for (double lam : {1.0, -1.0, 0.25}) expect += 1.0 / (z - lam) / 3.0;
    CHECK(std::abs(g(0, 0) - expect) < 1e-13);
}

TEST_CASE("cauchy_realized: a = 0 gives b^{-1}") {
    const RealizedModel model = make_realized(2, 2, Eigen::MatrixXcd::Zero(4, 4));
    BElement b = BElement::Identity(2, 2) * Complex(0.5, 2.0);
    b(0, 1) = Complex(0.2, 0.1);
    b(1, 0) = Complex(0.2, -0.1);
    const ProbePoint probe = make_probe(b, 1);
    CHECK(op_norm(cauchy_realized(model, probe) - invert(b)) < 1e-13);
}

TEST_CASE("series and exact resolvent agree within the reported tail") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::uint64_t seed : {21u, 22u}) {
        const RealizedModel model = random_realized(2, 4, 1.1, seed);
        const TruncatedMoments mu = moments_from_realized(model, 8);
        for (int trial = 0; trial < 25; ++trial) {
            BElement dmat(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) dmat(i, j) = Complex(g(rng), g(rng));
            dmat = (0.25 * (dmat + dmat.adjoint())).eval();
            const double lam = 2.0 + 3.0 * std::abs(g(rng));
            const ProbePoint probe = make_probe(dmat + I * lam * BElement::Identity(2, 2), 1);
            const SeriesValue sv = cauchy_series(mu, probe, 8);
            const BElement exact = cauchy_realized(model, probe);
            CHECK(op_norm(sv.value - exact) <= sv.tail_bound + 1e-9);
            // resolvent maps into the closed lower half-plane
            CHECK(min_eigenvalue_selfadjoint(-imag_part(exact)) > -1e-12);
        }
    }
}

TEST_CASE("f_transform") {
    SUBCASE("scalar semicircle at 2i") {
        const TruncatedMoments mu = semicircle_moments(8);
        const SeriesValue g = cauchy_series(mu, scalar_probe(Complex(0, 2)), 8);
        const BElement f = f_transform(mu, scalar_probe(Complex(0, 2)), 8);
        const Complex f_true(0.0, 2.41421356);
        // the reciprocal amplifies the series error by |F_series| * |F_true|
        const double budget =
            std::abs(f(0, 0)) * std::abs(f_true) * (g.tail_bound + 1e-9);
        CHECK(std::abs(f(0, 0) - f_true) <= budget);
        CHECK(std::abs(f(0, 0) - f_true) < 0.1);
    }
    SUBCASE("delta_0 fixes the probe") {
        const TruncatedMoments mu = moments_from_cumulants(point_mass(BElement::Zero(2, 2), 6));
        BElement b = Complex(0.0, 2.0) * BElement::Identity(2, 2);
        b(0, 1) = 0.3;
        b(1, 0) = 0.3;
        const ProbePoint probe = make_probe(b, 1);
        CHECK(op_norm(f_transform(mu, probe, 6) - b) < 1e-12);
    }
    SUBCASE("scalar point mass shifts the probe") {
        const double c = 0.6;
        const TruncatedMoments mu =
            moments_from_cumulants(point_mass(c * BElement::Identity(1, 1), 8));
        const Complex z(0.4, 3.0);
        const BElement f = f_transform(mu, scalar_probe(z), 8);
        CHECK(std::abs(f(0, 0) - (z - c)) < 1e-4);
    }
    SUBCASE("Im F(b) >= Im b on sampled probes") {
        const RealizedModel model = random_realized(2, 4, 1.0, 33);
        const TruncatedMoments mu = moments_from_realized(model, 8);
        std::mt19937_64 rng(17);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            BElement dmat(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) dmat(i, j) = Complex(g(rng), g(rng));
            dmat = (0.3 * (dmat + dmat.adjoint())).eval();
            const double lam = 2.5 + std::abs(g(rng));
            const ProbePoint probe = make_probe(dmat + I * lam * BElement::Identity(2, 2), 1);
            const BElement f = invert(cauchy_realized(model, probe));
            CHECK(min_eigenvalue_selfadjoint(imag_part(f) - imag_part(probe.value)) > -1e-8);
        }
    }
}

TEST_CASE("voiculescu_series") {
    SUBCASE("scalar semicircle: phi(b) = 1/b") {
        const CumulantSequence semi = semicircular(Eigen::MatrixXcd::Identity(1, 1), 1, 8);
        const SeriesValue phi = voiculescu_series(semi, scalar_probe(Complex(0, 2)), 8);
        CHECK(std::abs(phi.value(0, 0) - Complex(0.0, -0.5)) < 1e-14);
    }
    SUBCASE("point mass: phi == c") {
        BElement c(2, 2);
        c << 0.4, Complex(0.1, 0.3), Complex(0.1, -0.3), -0.2;
        const CumulantSequence delta = point_mass(c, 6);
        const ProbePoint probe = make_probe(Complex(0, 5) * BElement::Identity(2, 2), 1);
        CHECK(op_norm(voiculescu_series(delta, probe, 6).value - c) < 1e-14);
    }
    SUBCASE("additivity under free convolution is exact at fixed truncation") {
        std::mt19937_64 rng(211);
        const auto a = oracles::random_cumulants(2, 6, 0.5, 0.6, rng);
        const auto b = oracles::random_cumulants(2, 6, 0.5, 0.6, rng);
        const CumulantSequence sum = free_convolve(a, b);
        const ProbePoint probe =
            make_probe(Complex(0, 40) * BElement::Identity(2, 2), 1);
        const BElement lhs = voiculescu_series(sum, probe, 6).value;
        const BElement rhs =
            voiculescu_series(a, probe, 6).value + voiculescu_series(b, probe, 6).value;
        CHECK(op_norm(lhs - rhs) < 1e-12);
    }
    SUBCASE("domain rule uses 1/(4M)") {
        const CumulantSequence semi = semicircular(Eigen::MatrixXcd::Identity(1, 1), 1, 8);
        REQUIRE(semi.bound > 0.0);
        CHECK_THROWS_AS(
            voiculescu_series(semi, scalar_probe(Complex(0.0, 3.9 * semi.bound)), 8),
            DomainViolation);
    }
}

TEST_CASE("voiculescu_via_inversion") {
    SUBCASE("point mass returns the shift") {
        const double c = 0.45;
        const TruncatedMoments mu =
            moments_from_cumulants(point_mass(c * BElement::Identity(1, 1), 8));
        const ProbePoint probe = scalar_probe(Complex(0.7, 4.0));
        const InversionResult res = voiculescu_via_inversion(mu, probe, 1e-12, 8);
        // the iteration solves the truncated F exactly; the remaining error is
        // the resolvent tail amplified by |F|^2
        const double budget =
            1e-12 + 20.0 * cauchy_series(mu, probe, 8).tail_bound;
        CHECK(std::abs(res.value(0, 0) - c) <= budget);
        CHECK(std::abs(res.value(0, 0) - c) < 1e-7);
    }
    SUBCASE("scalar semicircle matches the series at b = 4i") {
        const TruncatedMoments mu = semicircle_moments(8);
        const CumulantSequence semi = semicircular(Eigen::MatrixXcd::Identity(1, 1), 1, 8);
        const ProbePoint probe = scalar_probe(Complex(0, 4));
        const InversionResult inv = voiculescu_via_inversion(mu, probe, 1e-11, 8);
        const SeriesValue ser = voiculescu_series(semi, probe, 8);
        const double budget = 1e-11 + ser.tail_bound +
                              cauchy_series(mu, probe, 8).tail_bound * 30.0;
        CHECK(op_norm(inv.value - ser.value) <= budget);
    }
    SUBCASE("d=2 semicircular with identity eta at 8i") {
        const CumulantSequence semi = semicircular(Eigen::MatrixXcd::Identity(4, 4), 2, 8);
        const TruncatedMoments mu = moments_from_cumulants(semi);
        const ProbePoint probe = make_probe(Complex(0, 8) * BElement::Identity(2, 2), 1);
        const InversionResult inv = voiculescu_via_inversion(mu, probe, 1e-11, 8);
        const SeriesValue ser = voiculescu_series(semi, probe, 8);
        CHECK(op_norm(inv.value - ser.value) < 1e-6);
    }
}

TEST_CASE("subordination_convolve") {
    SUBCASE("closed-form semicircles at b = 3i") {
        const CauchyProvider g = [](const ProbePoint& b) {
            BElement out(1, 1);
            out(0, 0) = oracles::semicircle_cauchy(b.value(0, 0), 1.0);
            return out;
        };
        const SubordinationResult res =
            subordination_convolve(g, g, scalar_probe(Complex(0, 3)), 1e-12);
        const Complex expect = oracles::semicircle_cauchy(Complex(0, 3), 2.0);
        CHECK(std::abs(res.value(0, 0) - expect) < 1e-10);
        CHECK(std::abs(res.value(0, 0) - Complex(0.0, -0.28077640)) < 1e-7);
        CHECK(res.identity_error < 1e-11);
    }
    SUBCASE("convolving with delta_0 changes nothing") {
        const RealizedModel model = random_realized(2, 4, 1.0, 55);
        const CauchyProvider g1 = realized_provider(model);
        const CauchyProvider g2 = realized_provider(make_realized(2, 2, Eigen::MatrixXcd::Zero(4, 4)));
        BElement b = Complex(0, 4) * BElement::Identity(2, 2);
        const ProbePoint probe = make_probe(b, 1);
        const SubordinationResult res = subordination_convolve(g1, g2, probe, 1e-12);
        CHECK(op_norm(res.value - cauchy_realized(model, probe)) < 1e-10);
    }
    SUBCASE("subordination route vs cumulant route, d=2") {
        const RealizedModel m1 = random_realized(2, 3, 1.0, 61);
        const RealizedModel m2 = random_realized(2, 4, 0.9, 62);
        const ProbePoint probe = make_probe(Complex(0, 8) * BElement::Identity(2, 2), 1);
        const SubordinationResult sub = subordination_convolve(
            realized_provider(m1), realized_provider(m2), probe, 1e-11);

        const CumulantSequence conv = free_convolve(
            cumulants_from_moments(moments_from_realized(m1, 8)),
            cumulants_from_moments(moments_from_realized(m2, 8)));
        TruncatedMoments conv_mom = moments_from_cumulants(conv);
        conv_mom.bound = op_norm(m1.a) + op_norm(m2.a);  // sum rule for free sums
        const SeriesValue sv = cauchy_series(conv_mom, probe, 8);
        CHECK(op_norm(sub.value - sv.value) <= sv.tail_bound + 1e-10 * 10.0 + 1e-9);
        CHECK(sub.identity_error < 1e-10);
    }
}

TEST_CASE("convergence equivalences on an interpolated family") {
    std::mt19937_64 rng(401);
    const CumulantSequence mu = oracles::random_cumulants(2, 6, 0.5, 0.6, rng);
    CumulantSequence nu = mu;
    {
        // a small perturbation keeps every transform in its linear response
        // regime along the whole interpolation
        const CumulantSequence other = oracles::random_cumulants(2, 6, 0.5, 0.6, rng);
        for (int n = 1; n <= 6; ++n) {
            MultilinearMap d = other.k(n);
            d *= 0.01;
            nu.k(n) += d;
        }
        nu.bound = fit_cumulant_bound(nu.maps);
    }
    const TruncatedMoments mu_mom = moments_from_cumulants(mu);

    std::vector<ProbePoint> probes;
    for (double lam : {25.0, 40.0}) {
        probes.push_back(make_probe(Complex(0, lam) * BElement::Identity(2, 2), 1));
        BElement off = Complex(0, lam) * BElement::Identity(2, 2);
        off(0, 1) = 0.5;
        off(1, 0) = 0.5;
        probes.push_back(make_probe(off, 1));
    }

    double prev_g = 1e300, prev_f = 1e300, prev_phi = 1e300, prev_mom = 1e300;
    for (int i = 0; i <= 6; ++i) {
        const double s = std::pow(10.0, -i);
        CumulantSequence interp = mu;
        for (int n = 1; n <= 6; ++n) {
            MultilinearMap diff = nu.k(n);
            diff *= s;
            MultilinearMap base = mu.k(n);
            base *= 1.0 - s;
            interp.k(n) = base + diff;
        }
        interp.bound = fit_cumulant_bound(interp.maps);
        const TruncatedMoments interp_mom = moments_from_cumulants(interp);

        double dmom = tensor_distance(interp_mom.maps, mu_mom.maps);
        double dg = 0, df = 0, dphi = 0;
        for (const auto& probe : probes) {
            dg = std::max(dg, op_norm(cauchy_series(interp_mom, probe, 6).value -
                                      cauchy_series(mu_mom, probe, 6).value));
            df = std::max(df, op_norm(f_transform(interp_mom, probe, 6) -
                                      f_transform(mu_mom, probe, 6)));
            dphi = std::max(dphi, op_norm(voiculescu_series(interp, probe, 6).value -
                                          voiculescu_series(mu, probe, 6).value));
        }
        // monotone decrease down to the floating-point floor
        CHECK(dg <= prev_g + 1e-8);
        CHECK(df <= prev_f + 1e-8);
        CHECK(dphi <= prev_phi + 1e-8);
        CHECK(dmom <= prev_mom + 1e-8);
        prev_g = dg;
        prev_f = df;
        prev_phi = dphi;
        prev_mom = dmom;
    }
    // at s = 1e-6 every distance has collapsed together
    CHECK(prev_g < 1e-7);
    CHECK(prev_f < 1e-7);
    CHECK(prev_phi < 1e-7);
    CHECK(prev_mom < 1e-6);
}
