// weight_fn.hpp
//
// Monotone piecewise-linear weighting functions F(t) on [-R, H - R] with a
// generalized (inf-type) inverse.

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fmmi {

// Linear on [a, b] from va to vb. a may be -inf and b may be +inf, in which
// case va == vb.
struct Piece {
    double a, b, va, vb;
    double slope() const { return (b > a && std::isfinite(b - a)) ? (vb - va) / (b - a) : 0.0; }
};

class WeightFn {
public:
    enum class Kind { threshold, ck, optimal_list, optimal_single, custom };

    WeightFn() = default;
    // Knots must be strictly increasing in t and nondecreasing in value.
    // lo/hi give the domain [lo, hi] = [-R, H - R].
    WeightFn(std::vector<double> t, std::vector<double> f, Kind kind);

    static WeightFn threshold(double delta, double R, double H);
    static WeightFn ck(double delta, double lambda, double R, double H);
    static WeightFn affine(double delta, double lambda, double R, double H);
    // a·|t - delta|^+
    static WeightFn hinge(double a, double delta, double R, double H);
    static WeightFn identity(double R, double H) { return affine(0.0, 1.0, R, H); }
    // n uniform knots over [-R, H - R] merged with extra knots inside it.
    static std::vector<double> grid(double R, double H, int n, const std::vector<double>& extra);
    // Samples fn on grid(R, H, n, extra), enforcing monotonicity.
    static WeightFn sample(const std::function<double(double)>& fn, double R, double H, int n,
                           const std::vector<double>& extra, Kind kind);

    double operator()(double t) const;
    // inf{t : F(t) >= u}; -inf when u <= F(lo), +inf when u > F(hi).
    double inverse(double u) const;
    double tF() const { return tF_; }

    double lo() const { return t_.front(); }
    double hi() const { return t_.back(); }
    double min_value() const { return f_.front(); }
    double max_value() const { return f_.back(); }
    Kind kind() const { return kind_; }
    const std::vector<double>& knots() const { return t_; }
    const std::vector<double>& values() const { return f_; }

    // Pointwise max(t, F(t)) with crossing points inserted as knots.
    WeightFn max_with_identity(Kind kind = Kind::optimal_single) const;
    WeightFn shifted(double c) const;

    // F over the whole real line, including the clamped tails.
    std::vector<Piece> pieces() const;
    // g(u) = |F^{-1}(u)|^+ as closed pieces; +inf region omitted.
    std::vector<Piece> positive_inverse_pieces() const;

private:
    void compute_tF();

    std::vector<double> t_, f_;
    Kind kind_ = Kind::custom;
    double tF_ = 0.0;
};

std::string to_string(WeightFn::Kind k);

}  // namespace fmmi
