#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "munse/elliptic.hpp"
#include "munse/spectral.hpp"

using namespace munse;

namespace {
const Grid g64(64);
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("transform roundtrip and layout") {
    SECTION("constant field concentrates at the zero mode") {
        ScalarField f(g64, 3.25);
        SpectralField w = transform(f);
        CHECK(std::abs(w(0, 0) - std::complex<double>(3.25 * g64.size())) < 1e-9);
        double off = 0.0;
        for (int i = 0; i < g64.n; ++i)
            for (int j = 0; j < g64.n; ++j)
                if (i || j) off = std::max(off, std::abs(w(i, j)));
        CHECK(off < 1e-9 * g64.size());
    }
    SECTION("cos(x1) has exactly the two k=(±1,0) modes") {
        ScalarField f = sample(g64, [](double x, double) { return std::cos(x); });
        SpectralField w = transform(f);
        CHECK(std::abs(w(1, 0) - 0.5 * double(g64.size())) < 1e-8);
        CHECK(std::abs(w(g64.n - 1, 0) - 0.5 * double(g64.size())) < 1e-8);
        double off = 0.0;
        for (int i = 0; i < g64.n; ++i)
            for (int j = 0; j < g64.n; ++j)
                if (!((i == 1 || i == g64.n - 1) && j == 0)) off = std::max(off, std::abs(w(i, j)));
        CHECK(off < 1e-8 * g64.size());
    }
    SECTION("random roundtrip within 1e-12 relative L2") {
        std::mt19937_64 rng(1);
        ScalarField f = random_mean_zero_field(g64, rng);
        ScalarField back = inverse_transform(transform(f));
        CHECK(l2_norm(back - f) <= 1e-12 * l2_norm(f));
    }
}

TEST_CASE("Parseval consistency over random fields") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        ScalarField f = random_mean_zero_field(g64, rng, t % 3 == 0 ? 0.0 : 1.5);
        const double phys = lp_norm(f, 2.0);
        const double spec = sobolev_norm(f, 0.0);
        REQUIRE(std::abs(phys - spec) <= 1e-12 * phys);
    }
}

TEST_CASE("riesz symbols") {
    ScalarField c1 = sample(g64, [](double x, double) { return std::cos(x); });
    SECTION("R1R1 cos x1 = cos x1, R2R2 cos x1 = 0") {
        ScalarField r11 = riesz2(1, 1, c1);
        ScalarField r22 = riesz2(2, 2, c1);
        CHECK(l2_norm(r11 - c1) < 1e-12 * l2_norm(c1));
        CHECK(l2_norm(r22) < 1e-12 * l2_norm(c1));
    }
    SECTION("identity R1R1 + R2R2 on mean-zero fields") {
        std::mt19937_64 rng(3);
        ScalarField f = random_mean_zero_field(g64, rng, 1.0);
        ScalarField s = riesz2(1, 1, f) + riesz2(2, 2, f);
        CHECK(l2_norm(s - f) <= 1e-12 * l2_norm(f));
    }
    SECTION("R1R2 cos(x1+x2) = cos(x1+x2)/2") {
        // symbol k1 k2/|k|^2 evaluates to 1/2 at k=(1,1)
        ScalarField f = sample(g64, [](double x, double y) { return std::cos(x + y); });
        ScalarField r = riesz2(1, 2, f);
        ScalarField expect = 0.5 * f;
        CHECK(l2_norm(r - expect) < 1e-12 * l2_norm(f));
    }
}

TEST_CASE("riesz idempotence and the squared double-Riesz identity") {
    std::mt19937_64 rng(4);
    ScalarField f = random_mean_zero_field(g64, rng, 1.0);
    auto rr = [&](const ScalarField& x) { return riesz2(1, 1, x) + riesz2(2, 2, x); };
    ScalarField once = rr(f);
    ScalarField twice = rr(once);
    CHECK(l2_norm(twice - once) <= 1e-12 * l2_norm(f));
    CHECK(l2_norm(once - f) <= 1e-12 * l2_norm(f));

    // P1^2 + P2^2 = Id
    ScalarField p = apply_p1(apply_p1(f)) + apply_p2(apply_p2(f));
    CHECK(l2_norm(p - f) <= 1e-12 * l2_norm(f));
}

TEST_CASE("derivative and inverse laplacian") {
    ScalarField s1 = sample(g64, [](double x, double) { return std::sin(x); });
    ScalarField c1 = sample(g64, [](double x, double) { return std::cos(x); });
    CHECK(l2_norm(derivative(1, s1) - c1) < 1e-12);

    ScalarField s2 = sample(g64, [](double, double y) { return std::sin(y); });
    ScalarField inv = inverse_laplacian(s2);
    CHECK(l2_norm(inv + s2) < 1e-12);  // -sin x2

    std::mt19937_64 rng(5);
    ScalarField f = random_mean_zero_field(g64, rng, 1.0);
    ScalarField lap_of_inv = inverse_transform(laplacian(inverse_laplacian(transform(f))));
    CHECK(l2_norm(lap_of_inv - f) <= 1e-12 * l2_norm(f));

    ScalarField with_mean(g64, 0.5);
    CHECK_THROWS_AS(inverse_laplacian(with_mean), std::invalid_argument);
}

TEST_CASE("biot-savart") {
    SECTION("omega = sin x2 gives u = (cos x2, 0)") {
        ScalarField om = sample(g64, [](double, double y) { return std::sin(y); });
        VectorField u = biot_savart(om);
        ScalarField ex = sample(g64, [](double, double y) { return std::cos(y); });
        CHECK(l2_norm(u.x - ex) < 1e-12);
        CHECK(l2_norm(u.y) < 1e-12);
    }
    SECTION("Taylor-Green cell") {
        ScalarField om = sample(g64, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y); });
        VectorField u = biot_savart(om);
        ScalarField ex = sample(g64, [](double x, double y) { return std::sin(x) * std::cos(y); });
        ScalarField ey = sample(g64, [](double x, double y) { return -std::cos(x) * std::sin(y); });
        CHECK(l2_norm(u.x - ex) < 1e-12);
        CHECK(l2_norm(u.y - ey) < 1e-12);
    }
    SECTION("zero maps to zero, nonzero mean rejected") {
        VectorField u = biot_savart(ScalarField(g64));
        CHECK(l2_norm(u.x) == 0.0);
        CHECK(l2_norm(u.y) == 0.0);
        ScalarField bad(g64, 1.0);
        CHECK_THROWS_AS(biot_savart(bad), std::invalid_argument);
    }
    SECTION("divergence-free and curl roundtrip on random fields") {
        std::mt19937_64 rng(6);
        for (int t = 0; t < 5; ++t) {
            ScalarField om = random_mean_zero_field(g64, rng, 1.0);
            VectorField u = biot_savart(om);
            CHECK(l2_norm(divergence(u)) <= 1e-12 * (sobolev_norm(om, 0.0) + 1.0));
            ScalarField back = curl(u);
            CHECK(l2_norm(back - om) <= 1e-12 * l2_norm(om));
        }
    }
}

TEST_CASE("strain tensor") {
    SECTION("shear from omega = sin x2: (Su)_12 = -sin x2") {
        // u = (cos x2, 0); Su_ij = d_i u_j + d_j u_i so Su_12 = d2 u1.
        ScalarField om = sample(g64, [](double, double y) { return std::sin(y); });
        StrainField s = strain(biot_savart(om));
        ScalarField expect = sample(g64, [](double, double y) { return -std::sin(y); });
        CHECK(l2_norm(s.s12 - expect) < 1e-12);
        CHECK(l2_norm(s.s11) < 1e-12);
        CHECK(l2_norm(s.s22) < 1e-12);
    }
    SECTION("one-mode rotation field") {
        VectorField u(sample(g64, [](double, double y) { return -std::sin(y); }),
                      sample(g64, [](double x, double) { return std::sin(x); }));
        StrainField s = strain(u);
        ScalarField expect =
            sample(g64, [](double x, double y) { return std::cos(x) - std::cos(y); });
        CHECK(l2_norm(s.s12 - expect) < 1e-12);
    }
    SECTION("zero velocity, and trace = 2 div u") {
        StrainField s0 = strain(VectorField(g64));
        CHECK(l2_norm(s0.s11) + l2_norm(s0.s12) + l2_norm(s0.s22) == 0.0);

        std::mt19937_64 rng(7);
        VectorField u = biot_savart(random_mean_zero_field(g64, rng, 1.0));
        StrainField s = strain(u);
        CHECK(l2_norm(s.s11 + s.s22) < 1e-11);
    }
}

TEST_CASE("norms") {
    SECTION("constant field L2 = |c|*l") {
        ScalarField f(g64, -2.0);
        CHECK(lp_norm(f, 2.0) == Catch::Approx(2.0 * g64.l).epsilon(1e-13));
    }
    SECTION("sin x1 on l = 2pi") {
        ScalarField f = sample(g64, [](double x, double) { return std::sin(x); });
        CHECK(lp_norm(f, 2.0) == Catch::Approx(kPi * std::sqrt(2.0)).epsilon(1e-13));
        CHECK(linf_norm(f) == Catch::Approx(1.0).epsilon(1e-12));
        // |k| = 1, so the H^{-1} norm equals the L2 norm
        CHECK(sobolev_norm(f, -1.0) == Catch::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    }
    SECTION("negative order rejects nonzero mean") {
        ScalarField f(g64, 1.0);
        CHECK_THROWS_AS(sobolev_norm(f, -1.0), std::invalid_argument);
    }
}
