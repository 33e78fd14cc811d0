#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "fmmi/probkit.hpp"
#include "oracles.hpp"

using namespace fmmi;
using doctest::Approx;

namespace {

Sequence seq(const char* s) {
    Sequence out;
    for (; *s; ++s) out.push_back(*s - '0');
    return out;
}

Pmf random_pmf(Rng& rng, int n, double zero_prob = 0.0) {
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) {
        v = uniform01(rng) < zero_prob ? 0.0 : uniform01(rng) + 1e-3;
        s += v;
    }
    if (s == 0.0) p[0] = s = 1.0;
    for (auto& v : p) v /= s;
    return Pmf(p);
}

Channel random_channel(Rng& rng, int nx, int ny, double zero_prob = 0.0) {
    std::vector<std::vector<double>> rows;
    for (int x = 0; x < nx; ++x) rows.push_back(random_pmf(rng, ny, zero_prob).probs());
    return Channel(rows);
}

}  // namespace

TEST_CASE("pmf validation") {
    CHECK_THROWS_AS(Pmf({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Pmf({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(Pmf({-0.1, 1.1}), std::invalid_argument);
    Pmf p({0.5 + 4e-7, 0.5});
    CHECK(p[0] + p[1] == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(Channel({{0.5, 0.5}, {1.0}}), std::invalid_argument);
}

TEST_CASE("entropy examples") {
    CHECK(entropy(Pmf::uniform(2)) == Approx(1.0));
    CHECK(entropy(Pmf::point(3, 1)) == 0.0);
    CHECK(entropy(Pmf({0.9, 0.1})) == Approx(oracle::h2(0.1)).epsilon(1e-14));
    CHECK(entropy(Pmf({0.9, 0.1})) == Approx(0.4690).epsilon(1e-4));
}

TEST_CASE("mutual information examples") {
    CHECK(mutual_information(Pmf::uniform(2), Channel::identity(2)) == Approx(1.0));
    Channel constant({{0.3, 0.7}, {0.3, 0.7}});
    CHECK(mutual_information(Pmf({0.2, 0.8}), constant) == Approx(0.0).epsilon(1e-15));
    CHECK(mutual_information(Pmf::uniform(2), Channel::bsc(0.1)) == Approx(0.5310).epsilon(1e-4));
    CHECK(mutual_information(Pmf::uniform(2), Channel::bsc(0.1)) == Approx(1.0 - oracle::h2(0.1)).epsilon(1e-14));
    CHECK_THROWS_AS(mutual_information(Pmf::uniform(3), Channel::bsc(0.1)), std::invalid_argument);
}

TEST_CASE("conditional divergence examples") {
    const Pmf u = Pmf::uniform(2);
    CHECK(conditional_kl(Channel::bsc(0.1), Channel::bsc(0.1), u) == 0.0);
    const double rhoR = oracle::h2_inv(0.9);
    CHECK(rhoR == Approx(0.3160).epsilon(1e-4));
    CHECK(conditional_kl(Channel::bsc(rhoR), Channel::bsc(0.1), u) == Approx(oracle::bkl(rhoR, 0.1)).epsilon(1e-13));
    CHECK(conditional_kl(Channel::bsc(0.316), Channel::bsc(0.1), u) == Approx(0.2538).epsilon(5e-4));
    CHECK(conditional_kl(Channel::bsc(0.1), Channel::identity(2), u) == kInf);
    // A zero-probability input row is ignored.
    CHECK(conditional_kl(Channel::bsc(0.1), Channel({{0.9, 0.1}, {1.0, 0.0}}), Pmf({1.0, 0.0})) == 0.0);
}

TEST_CASE("joint type examples") {
    auto a = joint_type(seq("0101"), seq("0101"), 2, 2);
    CHECK(a.mutual_information() == Approx(1.0));
    CHECK(joint_type(seq("0011"), seq("0101"), 2, 2).mutual_information() == Approx(0.0).epsilon(1e-15));
    auto z = joint_type(seq("0000"), seq("0000"), 2, 2);
    CHECK(z.mutual_information() == 0.0);
    CHECK(z.conditional_entropy_y_given_x() == 0.0);
    CHECK_THROWS_AS(joint_type(seq("01"), seq("011"), 2, 2), std::invalid_argument);
    int sum = 0;
    for (auto& r : a.counts)
        for (int c : r) sum += c;
    CHECK(sum == 4);
}

TEST_CASE("empirical MI equals the entropy decomposition") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int N = 1 + static_cast<int>(uniform01(rng) * 40);
        const int nx = 2 + trial % 3, ny = 2 + (trial / 3) % 3;
        Sequence x(N), y(N);
        for (int i = 0; i < N; ++i) {
            x[i] = static_cast<int>(uniform01(rng) * nx);
            y[i] = static_cast<int>(uniform01(rng) * ny);
        }
        auto jt = joint_type(x, y, nx, ny);
        std::vector<double> px(nx, 0.0), py(ny, 0.0), pxy;
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b) {
                double v = double(jt.counts[a][b]) / N;
                px[a] += v;
                py[b] += v;
                pxy.push_back(v);
            }
        double ref = 0.0;
        for (double v : px) ref -= oracle::xlog2x(v);
        for (double v : py) ref -= oracle::xlog2x(v);
        for (double v : pxy) ref += oracle::xlog2x(v);
        CHECK(jt.mutual_information() == Approx(std::max(ref, 0.0)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("type class size bounds, binary N <= 12") {
    for (int N = 1; N <= 12; ++N)
        for (int k = 0; k <= N; ++k) {
            Composition c{{N - k, k}};
            const double exact = std::round(std::exp(oracle::log_choose(N, k)));
            CHECK(type_class_size(c) == exact);
            const double H = oracle::h2(double(k) / N);
            const double upper = std::exp2(N * H);
            const double lower = upper / ((N + 1.0) * (N + 1.0));
            CHECK(exact <= upper * (1 + 1e-12));
            CHECK(exact >= lower * (1 - 1e-12));
        }
    Composition c{{5, 5}};
    CHECK(type_class_size(c) == 252.0);
    CHECK(log2_type_class_size(c) == Approx(std::log2(252.0)));
}

TEST_CASE("sampling from a type class") {
    Rng rng(2024);
    SUBCASE("uniform over the 6 arrangements of 0011") {
        Composition c{{2, 2}};
        std::map<Sequence, int> hist;
        const int draws = 60000;
        for (int i = 0; i < draws; ++i) ++hist[sample_type_class(c, rng)];
        REQUIRE(hist.size() == 6);
        double chi2 = 0.0, e = draws / 6.0;
        for (auto& [s, n] : hist) chi2 += (n - e) * (n - e) / e;
        // 5 degrees of freedom, p = 0.001 critical value.
        CHECK(chi2 < 20.52);
    }
    SUBCASE("singleton class") {
        Composition c{{3, 0}};
        for (int i = 0; i < 10; ++i) CHECK(sample_type_class(c, rng) == seq("000"));
    }
    SUBCASE("every draw has the exact composition") {
        for (int i = 0; i < 10000; ++i) {
            Composition c{{1 + i % 7, i % 5, 2}};
            auto s = sample_type_class(c, rng);
            std::vector<int> cnt(3, 0);
            for (int v : s) ++cnt[v];
            CHECK(cnt == c.counts);
        }
    }
}

TEST_CASE("closest composition") {
    CHECK(Composition::closest(Pmf::uniform(2), 21).counts == std::vector<int>{11, 10});
    // Equal deficits go to the lowest index.
    CHECK(Composition::closest(Pmf({0.25, 0.75}), 10).counts == std::vector<int>{3, 7});
    auto c = Composition::closest(Pmf({0.2, 0.3, 0.5}), 7);
    CHECK(c.length() == 7);
    CHECK(Composition::closest(Pmf::uniform(2), 20).counts == std::vector<int>{10, 10});
}

TEST_CASE("conditional type enumeration") {
    auto count = [](Composition c, int ny) {
        return enumerate_conditional_types(c, ny, [](const auto&) {});
    };
    CHECK(count(Composition{{1, 1}}, 2) == 4);
    for (int N = 0; N <= 6; ++N) CHECK(count(Composition{{N, 0}}, 2) == std::uint64_t(N + 1));
    CHECK(count(Composition{{2, 2}}, 2) == 9);
    CHECK(count(Composition{{3, 2, 1}}, 3) == conditional_type_count(Composition{{3, 2, 1}}, 3));
    CHECK(conditional_type_count(Composition{{3, 2, 1}}, 3) == 10.0 * 6 * 3);

    Composition c{{2, 1}};
    enumerate_conditional_types(c, 3, [&](const std::vector<std::vector<int>>& m) {
        for (size_t x = 0; x < m.size(); ++x) {
            int s = 0;
            for (int v : m[x]) s += v;
            CHECK(s == c.counts[x]);
        }
    });
    CHECK_THROWS_AS(count(Composition{{500, 500}}, 4), GuardError);
}

TEST_CASE("conditional divergence is nonnegative, zero iff rows agree on the support") {
    Rng rng(99);
    for (int t = 0; t < 1000; ++t) {
        const int nx = 2 + t % 3, ny = 2 + (t / 3) % 3;
        Pmf pX = random_pmf(rng, nx, 0.3);
        Channel p = random_channel(rng, nx, ny);
        Channel q = t % 4 == 0 ? p : random_channel(rng, nx, ny, 0.2);
        if (t % 8 == 4) {
            // Agree on supp(pX), differ elsewhere.
            std::vector<std::vector<double>> rows;
            for (int x = 0; x < nx; ++x)
                rows.push_back(pX[x] > 0.0 ? p.row(x).probs() : random_pmf(rng, ny).probs());
            q = Channel(rows);
        }
        const double d = conditional_kl(q, p, pX);
        CHECK(d >= 0.0);
        bool same = true;
        for (int x = 0; x < nx; ++x)
            if (pX[x] > 0.0)
                for (int y = 0; y < ny; ++y) same = same && std::abs(q(x, y) - p(x, y)) < 1e-12;
        if (same) CHECK(d < 1e-12);
        else {
            INFO("t=" << t);
            CHECK(d > 0.0);
        }
    }
}
