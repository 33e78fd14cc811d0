#include "fmmi/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace fmmi {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::threshold: return "threshold";
        case Regime::regime_I: return "I";
        case Regime::regime_II: return "II";
        case Regime::regime_III: return "III";
        case Regime::direct: return "direct";
        case Regime::infeasible: return "infeasible";
    }
    return "direct";
}

ProblemSpec ProblemSpec::with_alpha(double R, const Pmf& pX, const CompoundClass& W, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!(R >= 0.0)) throw std::invalid_argument("rate must be >= 0");
    ProblemSpec s;
    s.R = R;
    s.pX = pX;
    s.W = W;
    s.ce = CompoundExponent(pX, W);
    if (R < s.ce.rate_infinity()) throw std::invalid_argument("rate below R_inf: E_sp is infinite");
    s.alpha = alpha;
    s.delta = alpha - s.ce.value(R);
    return s;
}

ProblemSpec ProblemSpec::with_delta(double R, const Pmf& pX, const CompoundClass& W, double delta) {
    CompoundExponent ce(pX, W);
    if (R < ce.rate_infinity()) throw std::invalid_argument("rate below R_inf: E_sp is infinite");
    return with_alpha(R, pX, W, ce.value(R) + delta);
}

WeightFn optimal_F_list(const ProblemSpec& s, int knots) {
    const double H = s.input_entropy();
    const auto& ce = s.ce;
    if (s.R >= ce.mutual_info()) return WeightFn::threshold(s.delta, s.R, H);
    auto curve = [&](double r) {
        EspPoint p = ce.at_rate(r);
        return CurveSample{p.exponent, p.slope()};
    };
    // Curve starts at t = 0, so F is the constant Delta for t <= 0.
    return weight_from_curve(curve, s.alpha, s.R, H, s.R, ce.mutual_info(), knots, WeightFn::Kind::optimal_list);
}

WeightFn optimal_F_single(const ProblemSpec& s, int knots) {
    return optimal_F_list(s, knots).max_with_identity(WeightFn::Kind::optimal_single);
}

ExponentPair exponent_pair(double R, const CompoundExponent& ce, const WeightFn& F, Exec exec) {
    return {erf(R, ce, F, exec), erf_inverse(R, ce, F, exec), Regime::direct, false};
}

ExponentPair exponent_pair_for_channel(double R, const Pmf& pX, const Channel& ch, const WeightFn& F) {
    std::vector<SpherePacking> one{SpherePacking(pX, ch)};
    return exponent_pair(R, CompoundExponent(std::move(one)), F);
}

InverseValue f_R_inverse(double R, const CompoundExponent& ce, double u) {
    const double rInf = ce.rate_infinity(), iMin = ce.mutual_info();
    const double eR = ce.value(R);
    const double target = eR - u;
    if (target < 0.0) return {kInf, true};
    if (target >= ce.value(rInf)) return {rInf - R, true};
    double lo = rInf, hi = std::max(iMin, R);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        (ce.value(mid) > target ? lo : hi) = mid;
    }
    return {hi - R, false};
}

bool esp_is_convex(const CompoundExponent& ce, int n, double tol) {
    if (ce.members().size() == 1) return true;
    const double a = ce.rate_infinity(), b = ce.mutual_info();
    if (!(b > a)) return true;
    std::vector<double> r(n), e(n);
    for (int i = 0; i < n; ++i) {
        r[i] = a + (b - a) * (i + 1) / (n + 1);
        e[i] = ce.value(r[i]);
    }
    for (int i = 1; i + 1 < n; ++i)
        if (e[i] > 0.5 * (e[i - 1] + e[i + 1]) + tol) return false;
    return true;
}

double erasure_by_scan(const ProblemSpec& s) {
    const auto& ce = s.ce;
    const double R = s.R, D = s.delta;
    const double lo = std::max(R + D, ce.rate_infinity());
    const double hi = std::min(R + D + ce.value(R), ce.mutual_info());
    if (!(hi > lo)) return ce.value(lo) + std::max(f_R_inverse(R, ce, lo - R - D).t, 0.0);
    // h is convex on [lo, hi] when E_sp is convex.
    auto h = [&](double r) { return ce.value(r) + std::max(f_R_inverse(R, ce, r - R - D).t, 0.0); };
    auto [rmin, hmin] = boost::math::tools::brent_find_minima(h, lo, hi, 40);
    (void)rmin;
    return std::min({hmin, h(lo), h(hi)});
}

std::optional<double> regime_closed_form(const ProblemSpec& s) {
    const auto& ce = s.ce;
    const double R = s.R, D = s.delta;
    if (R >= ce.mutual_info() || R > characteristic_rates(ce).r_cr) return std::nullopt;
    const auto conj = conjugate_rate(R, ce);
    if (!conj || D >= *conj - R || D < ce.rate_infinity() - R) return std::nullopt;
    auto [r1, r2] = conjugate_pair_from_gap(std::abs(D), ce);
    if (D >= 0.0) return ce.value(r2) + f_R_inverse(R, ce, r1 - R).t;
    return ce.value(r1) + f_R_inverse(R, ce, r2 - R).t;
}

ExponentPair optimal_exponents(const ProblemSpec& s) {
    const auto& ce = s.ce;
    const double R = s.R, D = s.delta;
    const double rInf = ce.rate_infinity(), iMin = ce.mutual_info();
    if (R >= iMin) return {s.alpha, 0.0, Regime::threshold, false};
    if (D < rInf - R - 1e-12 || D > iMin - R + 1e-12)
        throw std::domain_error("Delta outside [R_inf - R, I_min - R]");

    ExponentPair out{s.alpha, 0.0, Regime::direct, false};
    auto direct = [&] {
        out.E_erase = erf_inverse(R, ce, optimal_F_list(s));
        out.regime = Regime::direct;
        return out;
    };
    if (!esp_is_convex(ce)) {
        out.flagged = true;
        return direct();
    }

    const auto cr = characteristic_rates(ce);
    const auto conj = conjugate_rate(R, ce);
    const double lower = conj ? std::max(*conj - R, 0.0) : 0.0;
    if (D >= lower - 1e-12) {
        out.E_erase = ce.value(std::min(R + D, iMin));
        out.regime = Regime::regime_I;
        return out;
    }
    if (R > cr.r_cr) return direct();
    out.E_erase = erasure_by_scan(s);
    out.regime = D >= 0.0 ? Regime::regime_II : Regime::regime_III;
    return out;
}

std::optional<LambdaRange> ck_lambda_range(const ProblemSpec& s) {
    const auto& ce = s.ce;
    const double iMin = ce.mutual_info();
    if (s.R >= iMin) return std::nullopt;
    LambdaRange lr;
    lr.lo = -ce.slopes(s.R).value();
    const double r2 = s.R + s.delta;
    if (r2 >= iMin) {
        lr.hi = kInf;
    } else {
        const double sl = ce.slopes(r2).value();
        lr.hi = sl < 0.0 ? 1.0 / -sl : kInf;
    }
    if (lr.lo > lr.hi + 1e-12) return std::nullopt;
    return lr;
}

ExponentPair forney_exponents(double R, double delta, const Pmf& pX, const Channel& ch) {
    std::vector<SpherePacking> one{SpherePacking(pX, ch)};
    CompoundExponent ce(std::move(one));
    ExponentPair out{ce.value(R) + delta, ce.value(std::min(R + delta, ce.mutual_info())), Regime::regime_I, false};
    const auto conj = conjugate_rate(R, ce);
    const double lower = conj ? std::max(*conj - R, 0.0) : 0.0;
    out.flagged = delta < lower - 1e-12 || R + delta > ce.mutual_info() + 1e-12;
    return out;
}

UniversalityReport universality_check(const ProblemSpec& s, double delta, double lambda, int grid) {
    const CompoundExponent all(s.pX, s.W, CompoundExponent::Members::grid, grid);
    const double R = s.R;
    UniversalityReport rep;
    rep.delta_hi = s.ce.mutual_info() - R;
    rep.rconj_sup = R;
    double minSlopeR = 0.0, minSlopeRD = 0.0;
    for (const auto& sp : all.members()) {
        std::vector<SpherePacking> one{sp};
        CompoundExponent single(std::move(one));
        EspPoint pR = sp.at_rate(R);
        EspPoint pRD = sp.at_rate(std::max(R + delta, 0.0));
        minSlopeR = std::min(minSlopeR, pR.slope());
        minSlopeRD = std::min(minSlopeRD, pRD.slope());
        if (auto c = conjugate_rate(R, single)) rep.rconj_sup = std::max(rep.rconj_sup, *c);
        rep.per_channel.push_back({pR.exponent + delta, pRD.exponent, Regime::regime_I, false});
    }
    rep.delta_lo = std::max(rep.rconj_sup - R, 0.0);
    rep.lambda_lo = -minSlopeR;
    rep.lambda_hi = minSlopeRD < 0.0 ? 1.0 / -minSlopeRD : kInf;
    constexpr double eps = 1e-9;
    rep.universal = delta >= rep.delta_lo - eps && delta <= rep.delta_hi + eps &&
                    lambda >= rep.lambda_lo - eps && lambda <= rep.lambda_hi + eps;
    return rep;
}

}  // namespace fmmi
