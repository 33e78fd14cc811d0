// weighting.hpp
//
// Optimal weighting functions for list/erasure decoding with the F-MMI rule,
// the resulting exponent pairs, and the CK lambda range.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmmi/exponents.hpp"
#include "fmmi/weight_fn.hpp"

namespace fmmi {

struct ProblemSpec {
    double R = 0.0;
    Pmf pX;
    CompoundClass W;
    double alpha = 0.0;
    double delta = 0.0;  // alpha - E_sp(R, pX, W)
    CompoundExponent ce;

    static ProblemSpec with_alpha(double R, const Pmf& pX, const CompoundClass& W, double alpha);
    static ProblemSpec with_delta(double R, const Pmf& pX, const CompoundClass& W, double delta);
    double input_entropy() const { return entropy(pX); }
};

enum class Regime { threshold, regime_I, regime_II, regime_III, direct, infeasible };
std::string to_string(Regime r);

struct ExponentPair {
    double E_i = 0.0;
    double E_erase = 0.0;
    Regime regime = Regime::direct;
    bool flagged = false;  // an argument was clamped or a validity window was violated
};

WeightFn optimal_F_list(const ProblemSpec& spec, int knots = 513);
WeightFn optimal_F_single(const ProblemSpec& spec, int knots = 513);

ExponentPair exponent_pair(double R, const CompoundExponent& ce, const WeightFn& F, Exec exec = Exec::parallel);
ExponentPair exponent_pair_for_channel(double R, const Pmf& pX, const Channel& ch, const WeightFn& F);

// Inverse of F_R(t) = E_sp(R) - E_sp(R + t) by bisection on the exact curve.
struct InverseValue {
    double t = 0.0;
    bool clamped = false;
};
InverseValue f_R_inverse(double R, const CompoundExponent& ce, double u);

// Midpoint convexity of E_sp(., pX, W) on n points of (R_inf, I_min).
bool esp_is_convex(const CompoundExponent& ce, int n = 65, double tol = 1e-8);

// Regime I uses E_sp(R + Delta). Regimes II and III minimize
// h(R') = E_sp(R') + F_R^{-1}(R' - R - Delta) over R' >= R + Delta directly.
ExponentPair optimal_exponents(const ProblemSpec& spec);
double erasure_by_scan(const ProblemSpec& spec);

// h evaluated at the conjugate pair (R_1(Delta), R_2(Delta)). This is an upper
// bound on the erasure exponent, not the minimum: the stationarity condition
// behind it treats (F^{-1})'(u) as 1/F'(u) instead of 1/F'(F^{-1}(u)).
// nullopt outside regimes II and III.
std::optional<double> regime_closed_form(const ProblemSpec& spec);

struct LambdaRange {
    double lo = 0.0;
    double hi = 0.0;  // may be +inf
};
std::optional<LambdaRange> ck_lambda_range(const ProblemSpec& spec);

ExponentPair forney_exponents(double R, double delta, const Pmf& pX, const Channel& ch);

struct UniversalityReport {
    bool universal = false;
    double delta_lo = 0.0;      // |max conj - R|^+
    double delta_hi = 0.0;      // I_min - R
    double lambda_lo = 0.0;     // -min slope at R
    double lambda_hi = 0.0;     // 1 / -min slope at R + delta
    double rconj_sup = 0.0;     // max over members of the conjugate rate (R when none)
    std::vector<ExponentPair> per_channel;  // Forney pairs, one per member
};
// BSC intervals are discretized to `grid` crossovers.
UniversalityReport universality_check(const ProblemSpec& spec, double delta, double lambda, int grid = 201);

}  // namespace fmmi
