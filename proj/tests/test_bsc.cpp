#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmmi/bsc.hpp"
#include "fmmi/exponents.hpp"
#include "fmmi/weighting.hpp"
#include "oracles.hpp"

using namespace fmmi;
using doctest::Approx;

TEST_CASE("binary entropy and the mu parameterization") {
    CHECK(bsc::h2(0.5) == 1.0);
    CHECK(bsc::h2_inv(1.0) == Approx(0.5).epsilon(1e-12));
    CHECK(bsc::h2(0.1) == Approx(oracle::h2(0.1)).epsilon(1e-15));
    CHECK(bsc::h2(0.1) == Approx(0.4690).epsilon(1e-4));
    CHECK(bsc::rho_R(0.1) == Approx(oracle::h2_inv(0.9)).epsilon(1e-12));
    CHECK(bsc::rho_R(0.1) == Approx(0.3160).epsilon(1e-4));
    CHECK(bsc::mu_R(0.1) == Approx(2.1646).epsilon(1e-4));
    CHECK(bsc::mu_R(0.0) == Approx(1.0));
    double prev = 1.0;
    for (double R = 0.05; R < 1.0; R += 0.05) {
        CHECK(bsc::mu_R(R) > prev);
        prev = bsc::mu_R(R);
    }
    CHECK_THROWS_AS(bsc::h2(1.5), std::invalid_argument);
    CHECK_THROWS_AS(bsc::mu_of(0.6), std::invalid_argument);
    CHECK(bsc::mu_of(0.5) == 1.0);
    CHECK(bsc::capacity(0.5) == 0.0);
}

TEST_CASE("closed-form exponent") {
    const double rho = 0.1;
    CHECK(bsc::esp_bsc(0.0, rho) == Approx(-std::log2(std::sqrt(4 * rho * (1 - rho)))).epsilon(1e-10));
    CHECK(bsc::esp_bsc(0.0, rho) == Approx(0.7370).epsilon(1e-4));
    CHECK(bsc::esp_bsc(bsc::capacity(rho), rho) == 0.0);
    CHECK(bsc::esp_bsc(0.7, rho) == 0.0);
    for (double R = 0.01; R < 0.53; R += 0.01) CHECK(bsc::esp_bsc(R, rho) == Approx(oracle::esp_bsc(R, rho)).epsilon(1e-12));
}

TEST_CASE("slope formula matches finite differences") {
    for (double rho : {0.05, 0.1, 0.2}) {
        const double C = bsc::capacity(rho);
        for (int i = 1; i < 40; ++i) {
            const double R = 0.02 + (C - 0.04) * i / 40.0;
            const double fd = oracle::diff([&](double r) { return oracle::esp_bsc(r, rho); }, R, 1e-5);
            CHECK(bsc::esp_prime_bsc(R, rho) == Approx(fd).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("critical rate from the slope definition") {
    CHECK(bsc::rcr_bsc(0.1) == Approx(1.0 - oracle::h2(0.25)).epsilon(1e-12));
    CHECK(bsc::rcr_bsc(0.1) == Approx(0.1887).epsilon(1e-4));
    for (double rho : {0.02, 0.1, 0.3}) {
        const double r = bsc::rcr_bsc(rho);
        const double fd = oracle::diff([&](double x) { return oracle::esp_bsc(x, rho); }, r, 1e-6);
        CHECK(fd == Approx(-1.0).epsilon(1e-6));
        // The alternative sqrt(1/rho^2 - 1) expression does not give slope -1.
        const double alt = 1.0 - oracle::h2(1.0 / (1.0 + std::sqrt(1.0 / (rho * rho) - 1.0)));
        if (alt < bsc::capacity(rho)) {
            const double fa = oracle::diff([&](double x) { return oracle::esp_bsc(x, rho); }, alt, 1e-6);
            CHECK(std::abs(fa + 1.0) > 1e-2);
        }
    }
}

TEST_CASE("conjugate rates") {
    const double rho = 0.1;
    const double rcr = bsc::rcr_bsc(rho);
    CHECK(bsc::conjugate_bsc(rcr, rho).value() == Approx(rcr).epsilon(1e-12));
    CHECK(bsc::conjugate_bsc(0.1, rho).value() == Approx(0.2904).epsilon(2e-4));
    CHECK(bsc::conjugate_bsc(0.1, rho).value() == Approx(1.0 - oracle::h2(1.0 / (1.0 + 9.0 / bsc::mu_R(0.1)))).epsilon(1e-12));
    // Above capacity mu_R > mu and there is none.
    CHECK_FALSE(bsc::conjugate_bsc(0.55, rho).has_value());
    for (double R = 0.02; R < rcr; R += 0.01) {
        const double c = *bsc::conjugate_bsc(R, rho);
        CHECK(bsc::conjugate_bsc(c, rho).value() == Approx(R).epsilon(1e-9));
        CHECK(bsc::esp_prime_bsc(R, rho) * bsc::esp_prime_bsc(c, rho) == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("closed forms agree with the generic solver") {
    const Pmf u = Pmf::uniform(2);
    for (double rho : {0.05, 0.1, 0.2}) {
        SpherePacking sp(u, Channel::bsc(rho));
        CompoundExponent ce(std::vector<SpherePacking>{sp});
        const double C = bsc::capacity(rho);
        for (int i = 1; i <= 30; ++i) {
            const double R = C * i / 31.0;
            CHECK(sp.value(R) == Approx(bsc::esp_bsc(R, rho)).epsilon(1e-6).scale(1.0));
            CHECK(esp_derivative(R, ce) == Approx(bsc::esp_prime_bsc(R, rho)).epsilon(1e-6).scale(1.0));
        }
        const double rcr = bsc::rcr_bsc(rho);
        for (double R = 0.01; R <= rcr; R += (rcr - 0.01) / 10) {
            auto g = conjugate_rate(R, ce);
            REQUIRE(g.has_value());
            CHECK(*g == Approx(*bsc::conjugate_bsc(R, rho)).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("compound minimum sits at rho_max; cleanest channel has the steepest slope") {
    const Pmf u = Pmf::uniform(2);
    const double lo = 0.05, hi = 0.1;
    auto W = CompoundClass::bsc_interval(lo, hi);
    for (double R : {0.05, 0.1, 0.2, 0.3}) {
        double best = oracle::inf, bestRho = 0.0;
        double minSlope = 0.0, minSlopeRho = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const double rho = lo + (hi - lo) * i / 50;
            const double e = oracle::esp_bsc(R, rho);
            if (e < best) { best = e; bestRho = rho; }
            const double s = bsc::esp_prime_bsc(R, rho);
            if (s < minSlope) { minSlope = s; minSlopeRho = rho; }
        }
        CHECK(bestRho == Approx(hi));
        CHECK(esp_compound(R, u, W) == Approx(best).epsilon(1e-6).scale(1.0));
        CHECK(minSlopeRho == Approx(lo));
        CHECK(bsc::esp_prime_bsc(R, lo) < bsc::esp_prime_bsc(R, hi));
        CHECK(esp_derivative(R, u, W) == Approx(bsc::esp_prime_bsc(R, hi)).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("universality region") {
    const double R = 0.1;
    SUBCASE("singleton collapses to the conjugate gap") {
        auto u = bsc::universality_region_bsc(R, 0.1, 0.1);
        CHECK(u.delta_range.lo == Approx(*bsc::conjugate_bsc(R, 0.1) - R).epsilon(1e-12));
        CHECK(u.delta_range.hi == Approx(bsc::capacity(0.1) - R).epsilon(1e-12));
    }
    SUBCASE("left end is zero when mu_max <= mu_R^2") {
        const double muR = bsc::mu_R(R);
        const double rhoMin = 1.0 / (1.0 + 0.99 * muR * muR);
        auto u = bsc::universality_region_bsc(R, rhoMin, 0.3);
        CHECK(u.delta_range.lo == 0.0);
        auto v = bsc::universality_region_bsc(R, 1.0 / (1.0 + 1.01 * muR * muR), 0.3);
        CHECK(v.delta_range.lo > 0.0);
    }
    SUBCASE("equality case gives the single lambda") {
        const double D = 0.3;
        const double muMax = bsc::mu_R(R) * bsc::mu_R(R + D);
        auto u = bsc::universality_region_bsc(R, 1.0 / (1.0 + muMax), 0.1);
        auto lr = u.lambda_range(D);
        CHECK(lr.lo == Approx(lr.hi).epsilon(1e-9));
        CHECK(lr.lo == Approx(u.lambda_opt(D)).epsilon(1e-9));
        CHECK(u.lambda_opt(D) >= 1.0);
        CHECK(u.lambda_nonempty(D));
        CHECK_FALSE(u.lambda_nonempty(D - 0.01));
    }
    SUBCASE("agrees with the generic universality check") {
        const Pmf pX = Pmf::uniform(2);
        for (auto [lo, hi] : {std::pair{0.1, 0.1}, std::pair{0.05, 0.1}, std::pair{0.08, 0.12}}) {
            auto u = bsc::universality_region_bsc(R, lo, hi);
            auto W = CompoundClass::bsc_interval(lo, hi);
            for (double D : {0.2, 0.3, 0.4}) {
                if (D > u.delta_range.hi) continue;
                auto spec = ProblemSpec::with_delta(R, pX, W, D);
                auto rep = universality_check(spec, D, 1.0);
                CHECK(rep.delta_lo == Approx(u.delta_range.lo).epsilon(1e-6).scale(1.0));
                CHECK(rep.delta_hi == Approx(u.delta_range.hi).epsilon(1e-6).scale(1.0));
                auto lr = u.lambda_range(D);
                CHECK(rep.lambda_lo == Approx(lr.lo).epsilon(1e-6).scale(1.0));
                if (std::isinf(lr.hi)) CHECK(std::isinf(rep.lambda_hi));
                else CHECK(rep.lambda_hi == Approx(lr.hi).epsilon(1e-6).scale(1.0));
                CHECK((rep.lambda_lo <= rep.lambda_hi + 1e-9) == u.lambda_nonempty(D));
            }
        }
    }
}
