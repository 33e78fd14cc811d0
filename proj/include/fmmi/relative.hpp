// relative.hpp
//
// Relative minimax: exponents shifted by channel-dependent reference
// functionals alpha(p), beta(p), and the weighting function that is optimal
// for the shifted criterion.

#pragma once

#include <vector>

#include "fmmi/exponents.hpp"
#include "fmmi/weight_fn.hpp"

namespace fmmi {

struct ReferenceFunctional {
    enum class Kind { constant, forney, table };

    Kind kind = Kind::constant;
    double delta = 0.0;          // constant value (constant) or slack Delta (forney)
    std::vector<double> alpha_table;  // per member, table kind only
    std::vector<double> beta_table;

    static ReferenceFunctional constant(double c) { return {Kind::constant, c, {}, {}}; }
    static ReferenceFunctional forney(double delta) { return {Kind::forney, delta, {}, {}}; }
    static ReferenceFunctional table(std::vector<double> alpha, std::vector<double> beta = {}) {
        return {Kind::table, 0.0, std::move(alpha), std::move(beta)};
    }
};

class RelativeModel {
public:
    // BSC intervals are discretized to `grid` crossovers, or to the two
    // endpoints when endpoints_only is set.
    RelativeModel(double R, const Pmf& pX, const CompoundClass& W, ReferenceFunctional aref,
                  int grid = 201, bool endpoints_only = false);

    double rate() const { return R_; }
    const std::vector<SpherePacking>& members() const { return members_; }
    const std::vector<double>& alphas() const { return alpha_; }
    double alpha(size_t i) const { return alpha_[i]; }
    double beta(size_t i) const;

    // min_p [E_sp(r, p) - alpha(p)], with the slope of the minimizing member.
    CurveSample delta_alpha_esp(double r) const;
    // min_p [E_{r,F}(R, p) - alpha(p)].
    double delta_alpha_erf(const WeightFn& F, Exec exec = Exec::parallel) const;
    // min_p [E_{r,|F^{-1}|^+}(R, p) - beta(p)].
    double delta_beta_erasure(const WeightFn& F, Exec exec = Exec::parallel) const;

    // F_{R,alpha}(t) = dE(R) - dE(R + t); zero at t = 0.
    WeightFn rel_F(int knots = 513) const;
    // -dE(R + t) for t >= 0, constant below.
    WeightFn rel_optimal_F(int knots = 513) const;

    // Index of the member maximizing E_sp(R, p) - E_sp(R + t, p), and the
    // runner-up gap in value (0 when tied).
    std::pair<size_t, double> argmax_member_F(double t) const;
    // Index of the member minimizing E_sp(r, p).
    size_t argmin_member_esp(double r) const;

private:
    double R_;
    ReferenceFunctional aref_;
    std::vector<SpherePacking> members_;
    std::vector<double> alpha_;
    std::vector<double> esp_R_;  // E_sp(R, p) per member
    double r_lo_ = 0.0, r_hi_ = 0.0, H_ = 0.0;
};

}  // namespace fmmi
