// exponents.hpp
//
// Sphere-packing exponent for fixed composition, compound classes, the
// modified random-coding exponent E_{r,F}, and brute-force type oracles.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fmmi/probkit.hpp"
#include "fmmi/weight_fn.hpp"

namespace fmmi {

enum class Exec { serial, parallel };

// A point on the E_sp curve. slope = -rho.
struct EspPoint {
    double rate = 0.0;
    double exponent = 0.0;
    double rho = 0.0;
    double slope() const { return -rho; }
};

// E_sp(R, pX, W) for a single channel, through the dual
// max_rho [E0(rho) - rho R] with E0(rho) = min_V D(V||W|P) + rho I(P,V).
class SpherePacking {
public:
    SpherePacking(Pmf pX, Channel ch);

    double value(double R) const { return at_rate(R).exponent; }
    EspPoint at_rate(double R) const;
    // Curve point where the slope equals -rho (rho >= 0).
    EspPoint at_slope(double rho) const;
    Channel minimizer(double R) const;

    double rate_infinity() const { return rInf_; }
    double mutual_info() const { return iMax_; }
    const Pmf& input() const { return pX_; }
    const Channel& channel() const { return ch_; }

    static constexpr double kRhoCap = 1099511627776.0;  // 2^40

private:
    struct Inner {
        double e0 = 0.0;    // E0(rho)
        double rate = 0.0;  // I(P, V_rho)
        double div = 0.0;   // D(V_rho || W | P)
        std::vector<double> v;  // row-major test channel
    };
    // q is the output marginal, used as warm start and updated in place.
    Inner solve(double rho, std::vector<double>& q) const;

    Pmf pX_;
    Channel ch_;
    int nx_ = 0, ny_ = 0;
    std::vector<double> logW_;  // -inf where W = 0
    double rInf_ = 0.0;
    double iMax_ = 0.0;
};

class CompoundClass {
public:
    static CompoundClass explicit_list(std::vector<Channel> chans);
    static CompoundClass bsc_interval(double rho_min, double rho_max);

    bool is_bsc() const { return bsc_; }
    double rho_min() const { return rhoMin_; }
    double rho_max() const { return rhoMax_; }
    int inputs() const;
    int outputs() const;
    size_t size() const { return bsc_ ? 0 : chans_.size(); }
    const std::vector<Channel>& channels() const { return chans_; }

    // Members that can attain a minimum of a degradation-monotone quantity.
    // For a BSC interval this is the noisiest channel only.
    std::vector<Channel> min_members() const;
    // Full member list, with a BSC interval discretized to n crossovers.
    std::vector<Channel> grid_members(int n = 201) const;
    std::vector<double> grid_rhos(int n = 201) const;

private:
    bool bsc_ = false;
    double rhoMin_ = 0.0, rhoMax_ = 0.0;
    std::vector<Channel> chans_;
};

struct Slopes {
    double left = 0.0;
    double right = 0.0;
    bool kink = false;
    double value() const { return 0.5 * (left + right); }
};

// E_sp(R, pX, W) = min over members.
class CompoundExponent {
public:
    enum class Members { min_only, grid };

    CompoundExponent() = default;
    CompoundExponent(const Pmf& pX, const CompoundClass& W, Members m = Members::min_only, int grid = 201);
    explicit CompoundExponent(std::vector<SpherePacking> members);

    double value(double R) const;
    EspPoint at_rate(double R) const;  // from the argmin member
    int argmin(double R) const;
    Slopes slopes(double R) const;

    double rate_infinity() const { return rInf_; }
    double mutual_info() const { return iMin_; }
    double input_entropy() const { return entropy(members_.front().input()); }
    const Pmf& input() const { return members_.front().input(); }
    const std::vector<SpherePacking>& members() const { return members_; }

private:
    void init();
    std::vector<SpherePacking> members_;
    double rInf_ = 0.0, iMin_ = 0.0;
};

struct CharacteristicRates {
    double r_inf = 0.0;
    double i_min = 0.0;
    double r_cr = 0.0;
};

double esp(double R, const Pmf& pX, const Channel& ch);
double esp_compound(double R, const Pmf& pX, const CompoundClass& W);
// One-sided slopes are averaged; throws std::domain_error outside (R_inf, I_min).
double esp_derivative(double R, const CompoundExponent& ce);
double esp_derivative(double R, const Pmf& pX, const CompoundClass& W);

CharacteristicRates characteristic_rates(const CompoundExponent& ce);
CharacteristicRates characteristic_rates(const Pmf& pX, const CompoundClass& W);

// Rate with reciprocal slope; nullopt if none exists in (R_inf, I_min].
std::optional<double> conjugate_rate(double R, const CompoundExponent& ce);
// (R1, R2) with R1 <= R_cr <= R2, R2 - R1 = |d| and reciprocal slopes.
std::pair<double, double> conjugate_pair_from_gap(double d, const CompoundExponent& ce);

// Minimum over R' of E_sp(R') + f(R' - R) for a piecewise-linear f.
double erf_pieces(double R, const SpherePacking& sp, const std::vector<Piece>& pieces,
                  Exec exec = Exec::parallel);
double erf(double R, const SpherePacking& sp, const WeightFn& F, Exec exec = Exec::parallel);
double erf(double R, const CompoundExponent& ce, const WeightFn& F, Exec exec = Exec::parallel);
// Same with |F^{-1}|^+ in place of F.
double erf_inverse(double R, const SpherePacking& sp, const WeightFn& F, Exec exec = Exec::parallel);
double erf_inverse(double R, const CompoundExponent& ce, const WeightFn& F, Exec exec = Exec::parallel);

struct CurveSample {
    double value = 0.0;
    double slope = 0.0;
};
using CurveFn = std::function<CurveSample(double rate)>;

// F(t) = base - c(R + t) on [r_lo - R, r_hi - R], constant outside. Starts
// from the uniform grid and bisects any interval whose chord error bound
// min(dt |ds| / 4, |df|) exceeds tol.
WeightFn weight_from_curve(const CurveFn& c, double base, double R, double H, double r_lo, double r_hi,
                           int knots, WeightFn::Kind kind, double tol = 1e-6, Exec exec = Exec::parallel);

struct FRResult {
    WeightFn F;
    bool degenerate = false;  // R >= I_min: F is identically zero
};
FRResult f_R_builder(double R, const CompoundExponent& ce, int knots = 513);

// Evaluates fn on xs, optionally in parallel.
std::vector<double> tabulate(const std::function<double(double)>& fn, const std::vector<double>& xs, Exec exec);

struct ExponentCurve {
    std::vector<double> rate;
    std::vector<double> esp;
    std::vector<double> slope;
    double r_inf = 0.0;
    double i_min = 0.0;
    double r_cr = 0.0;

    double value(double R) const;
    double slope_at(double R) const;

    // Uniform grid on [R_inf, I_min]; E_sp = 0 beyond I_min.
    static ExponentCurve build(const CompoundExponent& ce, int n = 2049, Exec exec = Exec::parallel);
};

// Brute force over conditional types of composition comp.
struct OracleResult {
    double value = kInf;
    std::vector<std::vector<int>> counts;
};
OracleResult esp_N_oracle(double R, const Composition& comp, const Channel& ch);
OracleResult erf_N_oracle(double R, const Composition& comp, const Channel& ch, const WeightFn& F);

}  // namespace fmmi
