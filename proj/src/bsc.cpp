#include "fmmi/bsc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmmi::bsc {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

void check_rho(double rho) {
    if (!(rho > 0.0 && rho <= 0.5)) throw std::invalid_argument("crossover must lie in (0, 1/2]");
}

double binary_kl(double a, double b) {
    auto term = [](double p, double q) { return p > 0.0 ? p * std::log2(p / q) : 0.0; };
    return term(a, b) + term(1.0 - a, 1.0 - b);
}

}  // namespace

double h2(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("h2 argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double h2_inv(double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("h2_inv argument outside [0,1]");
    if (y == 1.0) return 0.5;
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-15) {
        double mid = 0.5 * (lo + hi);
        (h2(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double capacity(double rho) { return 1.0 - h2(rho); }

double mu_of(double rho) {
    check_rho(rho);
    return 1.0 / rho - 1.0;
}

double rho_R(double R) {
    if (!(R >= 0.0 && R <= 1.0)) throw std::invalid_argument("rate outside [0,1]");
    return h2_inv(1.0 - R);
}

double mu_R(double R) {
    double r = rho_R(R);
    return r > 0.0 ? 1.0 / r - 1.0 : kInfD;
}

double rate_of_mu(double mu) {
    if (!(mu >= 1.0)) throw std::invalid_argument("mu must be >= 1");
    return 1.0 - h2(1.0 / (1.0 + mu));
}

double esp_bsc(double R, double rho) {
    check_rho(rho);
    if (R < 0.0) throw std::invalid_argument("negative rate");
    if (R >= capacity(rho)) return 0.0;
    return binary_kl(rho_R(R), rho);
}

double esp_prime_bsc(double R, double rho) {
    check_rho(rho);
    if (R < 0.0) throw std::invalid_argument("negative rate");
    if (R >= capacity(rho)) return 0.0;
    const double mr = mu_R(R);
    if (mr <= 1.0) return -kInfD;
    return -std::log(mu_of(rho) / mr) / std::log(mr);
}

double rcr_bsc(double rho) { return rate_of_mu(std::sqrt(mu_of(rho))); }

std::optional<double> conjugate_bsc(double R, double rho) {
    const double mc = mu_of(rho) / mu_R(R);
    if (!(mc >= 1.0)) return std::nullopt;
    return rate_of_mu(mc);
}

Interval UniversalityRegion::lambda_range(double delta) const {
    const double muMax = mu_of(rho_min);
    const double muR = mu_R(R);
    const double muRD = mu_R(R + delta);
    Interval iv;
    iv.lo = std::log(muMax / muR) / std::log(muR);
    iv.hi = muMax <= muRD ? kInfD : std::log(muRD) / std::log(muMax / muRD);
    return iv;
}

double UniversalityRegion::lambda_opt(double delta) const {
    return std::log(mu_R(R + delta)) / std::log(mu_R(R));
}

bool UniversalityRegion::lambda_nonempty(double delta) const {
    return mu_of(rho_min) <= mu_R(R) * mu_R(R + delta);
}

UniversalityRegion universality_region_bsc(double R, double rho_min, double rho_max) {
    check_rho(rho_min);
    check_rho(rho_max);
    if (rho_min > rho_max) throw std::invalid_argument("rho interval reversed");
    UniversalityRegion u;
    u.R = R;
    u.rho_min = rho_min;
    u.rho_max = rho_max;
    // The cleanest channel has the largest mu.
    const double muMax = mu_of(rho_min);
    const double muMin = mu_of(rho_max);
    const double muR = mu_R(R);
    const double gap = h2(1.0 / (1.0 + muR)) - h2(1.0 / (1.0 + muMax / muR));
    u.delta_range.lo = std::max(gap, 0.0);
    u.delta_range.hi = capacity(rho_max) - R;
    u.nonempty = muMax <= std::max(muR * muR, muR * muMin);
    return u;
}

}  // namespace fmmi::bsc
