#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fmmi/relative.hpp"
#include "fmmi/weighting.hpp"
#include "oracles.hpp"

using namespace fmmi;
using doctest::Approx;

namespace {

const Pmf kU = Pmf::uniform(2);

Channel binary(double w0, double w1) { return Channel({{1 - w0, w0}, {1 - w1, w1}}); }

CompoundClass three() { return CompoundClass::explicit_list({Channel::bsc(0.1), binary(0.05, 0.7), binary(0.2, 0.95)}); }

WeightFn random_F(std::mt19937_64& g, double R, double H) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t{-R, H - R};
    for (int i = 0; i < 6; ++i) t.push_back(-R + H * u(g));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<double> f(t.size());
    double acc = -0.3 * u(g);
    for (size_t i = 0; i < t.size(); ++i) f[i] = acc += 0.5 * u(g);
    return WeightFn(t, f, WeightFn::Kind::custom);
}

}  // namespace

TEST_CASE("zero and constant references") {
    const double R = 0.1;
    auto W = three();
    CompoundExponent ce(kU, W);
    std::mt19937_64 g(1);
    RelativeModel zero(R, kU, W, ReferenceFunctional::constant(0.0));
    RelativeModel shift(R, kU, W, ReferenceFunctional::constant(0.2));
    for (int i = 0; i < 5; ++i) {
        auto F = random_F(g, R, 1.0);
        const double e = erf(R, ce, F);
        CHECK(zero.delta_alpha_erf(F) == e);
        CHECK(shift.delta_alpha_erf(F) == Approx(e - 0.2).epsilon(1e-14));
    }
    auto fr = f_R_builder(R, ce).F, rf = zero.rel_F();
    // Both are chord approximations with tolerance 1e-6, on different knots.
    for (double t = -0.1; t < 0.5; t += 0.01) CHECK(rf(t) == Approx(fr(t)).epsilon(2e-6).scale(1.0));

    // Constant alpha_0 collapses to the minimax design at alpha_0.
    auto B = CompoundClass::bsc_interval(0.05, 0.1);
    RelativeModel c(R, kU, B, ReferenceFunctional::constant(0.35));
    auto L = optimal_F_list(ProblemSpec::with_alpha(R, kU, B, 0.35));
    auto Fc = c.rel_optimal_F();
    for (double t = -0.1; t < 0.9; t += 0.01) CHECK(Fc(t) == Approx(L(t)).epsilon(2e-6).scale(1.0));
}

TEST_CASE("relative F is zero at zero and increasing") {
    for (auto ref : {ReferenceFunctional::constant(0.1), ReferenceFunctional::forney(0.1),
                     ReferenceFunctional::table({0.3, 0.1, 0.2})}) {
        RelativeModel m(0.1, kU, three(), ref);
        auto F = m.rel_F();
        CHECK(F(0.0) == Approx(0.0).scale(1.0));
        for (size_t k = 1; k < F.values().size(); ++k) CHECK(F.values()[k] >= F.values()[k - 1]);
        // rel_F reproduces the shifted exponent at R.
        CHECK(m.delta_alpha_erf(F) == Approx(m.delta_alpha_esp(0.1).value).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("decomposition into a rate scan") {
    std::mt19937_64 g(2);
    const double R = 0.15;
    RelativeModel m(R, kU, three(), ReferenceFunctional::table({0.3, 0.1, 0.2}));
    for (int trial = 0; trial < 8; ++trial) {
        auto F = random_F(g, R, 1.0);
        // Kinks of F are scanned exactly; elsewhere the grid error is quadratic.
        std::vector<double> rs;
        for (int i = 0; i <= 20000; ++i) rs.push_back(0.8 * i / 20000.0);
        for (double k : F.knots()) rs.push_back(R + k);
        double best = oracle::inf;
        for (double r : rs)
            if (r >= 0.0) best = std::min(best, m.delta_alpha_esp(r).value + F(r - R));
        CHECK(m.delta_alpha_erf(F) == Approx(best).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("optimal relative F") {
    for (auto ref : {ReferenceFunctional::forney(0.1), ReferenceFunctional::table({0.3, 0.1, 0.2})}) {
        RelativeModel m(0.1, kU, three(), ref);
        CHECK(std::abs(m.delta_alpha_erf(m.rel_optimal_F())) <= 1e-4);
    }
    // beta plays no part in the design.
    RelativeModel a(0.1, kU, three(), ReferenceFunctional::table({0.3, 0.1, 0.2}, {0.0, 0.0, 0.0}));
    RelativeModel b(0.1, kU, three(), ReferenceFunctional::table({0.3, 0.1, 0.2}, {0.5, 0.01, 0.3}));
    CHECK(a.rel_optimal_F().knots() == b.rel_optimal_F().knots());
    CHECK(a.rel_optimal_F().values() == b.rel_optimal_F().values());
    CHECK(a.delta_beta_erasure(a.rel_optimal_F()) != b.delta_beta_erasure(b.rel_optimal_F()));
}

TEST_CASE("singleton class reduces to the minimax quantities") {
    const double R = 0.1, D = 0.1;
    auto W = CompoundClass::bsc_interval(0.1, 0.1);
    RelativeModel m(R, kU, W, ReferenceFunctional::forney(D));
    REQUIRE(m.members().size() == 1);
    auto s = ProblemSpec::with_delta(R, kU, W, D);
    CHECK(m.alpha(0) == Approx(s.alpha).epsilon(1e-15));
    auto L = optimal_F_list(s);
    auto F = m.rel_optimal_F();
    for (double t = -0.1; t < 0.9; t += 0.01) CHECK(F(t) == Approx(L(t)).epsilon(1e-12).scale(1.0));
    CHECK(m.delta_alpha_erf(L) == Approx(erf(R, s.ce, L) - s.alpha).epsilon(1e-15));
    CHECK(m.beta(0) == Approx(esp(R + D, kU, Channel::bsc(0.1))).epsilon(1e-15));
}

TEST_CASE("BSC interval attribution") {
    const double R = 0.1, D = 0.1;
    auto W = CompoundClass::bsc_interval(0.05, 0.1);
    RelativeModel m(R, kU, W, ReferenceFunctional::forney(D));
    auto rel = m.rel_optimal_F();
    auto mm = optimal_F_list(ProblemSpec::with_delta(R, kU, W, D));
    const double I = m.members().back().mutual_info();
    for (int i = 0; i <= 200; ++i) {
        const double t = (0.9 - R) * i / 200.0;
        // Relative design is D + F_{R, rho = 0.05}(t).
        const double clean = oracle::esp_bsc(R, 0.05) - oracle::esp_bsc(R + t, 0.05);
        CHECK(rel(t) == Approx(D + clean).epsilon(1e-6).scale(1.0));
        CHECK(rel(t) >= mm(t) - 1e-9);
        if (t > 0.0) CHECK(m.argmax_member_F(t).first == 0);
        const double noisy = oracle::esp_bsc(R, 0.1) - oracle::esp_bsc(R + t, 0.1);
        CHECK(mm(t) == Approx(D + noisy).epsilon(1e-6).scale(1.0));
        if (R + t < I) CHECK(m.argmin_member_esp(R + t) == m.members().size() - 1);
    }
    // Endpoint fast path agrees with the full grid.
    RelativeModel ends(R, kU, W, ReferenceFunctional::forney(D), 201, true);
    auto fe = ends.rel_optimal_F();
    for (double t = -0.1; t < 0.9; t += 0.005) CHECK(fe(t) == Approx(rel(t)).epsilon(1e-9).scale(1.0));
    CHECK(ends.delta_alpha_erf(fe) == Approx(m.delta_alpha_erf(rel)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("reference table checks") {
    CHECK_THROWS_AS(RelativeModel(0.1, kU, three(), ReferenceFunctional::table({0.1})), std::invalid_argument);
    CHECK_THROWS(CompoundClass::explicit_list({}));
}
