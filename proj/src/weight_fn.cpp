#include "fmmi/weight_fn.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fmmi {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

std::vector<double> merge_knots(std::vector<double> pts, double lo, double hi) {
    std::vector<double> out;
    pts.push_back(lo);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    const double eps = 1e-12 * std::max(1.0, hi - lo);
    for (double p : pts) {
        if (p < lo || p > hi) continue;
        if (!out.empty() && p - out.back() <= eps) continue;
        out.push_back(p);
    }
    if (out.size() < 2) out = {lo, lo + 1e-9};
    return out;
}

WeightFn from_points(std::vector<double> pts, double lo, double hi,
                     const std::function<double(double)>& fn, WeightFn::Kind kind) {
    auto t = merge_knots(std::move(pts), lo, hi);
    std::vector<double> f(t.size());
    for (size_t i = 0; i < t.size(); ++i) f[i] = fn(t[i]);
    return WeightFn(std::move(t), std::move(f), kind);
}

}  // namespace

WeightFn::WeightFn(std::vector<double> t, std::vector<double> f, Kind kind)
    : t_(std::move(t)), f_(std::move(f)), kind_(kind) {
    if (t_.size() < 2 || t_.size() != f_.size()) throw std::invalid_argument("weight function needs >= 2 matching knots");
    for (size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || !std::isfinite(f_[i])) throw std::invalid_argument("weight function knots must be finite");
        if (i == 0) continue;
        if (!(t_[i] > t_[i - 1])) throw std::invalid_argument("weight function knots must increase");
        if (f_[i] < f_[i - 1]) {
            if (f_[i] < f_[i - 1] - 1e-9) throw std::invalid_argument("weight function must be nondecreasing");
            f_[i] = f_[i - 1];
        }
    }
    compute_tF();
}

WeightFn WeightFn::threshold(double delta, double R, double H) {
    return from_points({}, -R, H - R, [=](double) { return delta; }, Kind::threshold);
}

WeightFn WeightFn::ck(double delta, double lambda, double R, double H) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    return from_points({0.0}, -R, H - R, [=](double t) { return delta + lambda * std::max(t, 0.0); }, Kind::ck);
}

WeightFn WeightFn::affine(double delta, double lambda, double R, double H) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    return from_points({}, -R, H - R, [=](double t) { return delta + lambda * t; }, Kind::custom);
}

WeightFn WeightFn::hinge(double a, double delta, double R, double H) {
    if (a < 0.0) throw std::invalid_argument("slope must be >= 0");
    return from_points({delta}, -R, H - R, [=](double t) { return a * std::max(t - delta, 0.0); }, Kind::custom);
}

WeightFn WeightFn::sample(const std::function<double(double)>& fn, double R, double H, int n,
                          const std::vector<double>& extra, Kind kind) {
    auto t = grid(R, H, n, extra);
    std::vector<double> f(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        f[i] = fn(t[i]);
        if (i > 0) f[i] = std::max(f[i], f[i - 1]);
    }
    return WeightFn(std::move(t), std::move(f), kind);
}

std::vector<double> WeightFn::grid(double R, double H, int n, const std::vector<double>& extra) {
    if (n < 2) throw std::invalid_argument("need at least 2 knots");
    const double lo = -R, hi = H - R;
    std::vector<double> pts(extra);
    for (int i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * i / (n - 1));
    return merge_knots(std::move(pts), lo, hi);
}

double WeightFn::operator()(double t) const {
    if (t <= t_.front()) return f_.front();
    if (t >= t_.back()) return f_.back();
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    size_t k = it - t_.begin();
    double w = (t - t_[k - 1]) / (t_[k] - t_[k - 1]);
    return f_[k - 1] + w * (f_[k] - f_[k - 1]);
}

double WeightFn::inverse(double u) const {
    if (u <= f_.front()) return -kInfD;
    if (u > f_.back()) return kInfD;
    auto it = std::lower_bound(f_.begin(), f_.end(), u);
    size_t k = it - f_.begin();
    double w = (u - f_[k - 1]) / (f_[k] - f_[k - 1]);
    return t_[k - 1] + w * (t_[k] - t_[k - 1]);
}

void WeightFn::compute_tF() {
    const double c = std::max(f_.front(), 0.0);
    for (size_t k = 1; k < t_.size(); ++k) {
        if (std::max(f_[k], 0.0) <= c) continue;
        if (f_[k - 1] >= c) {
            tF_ = t_[k - 1];
        } else {
            // F crosses zero inside this segment.
            tF_ = t_[k - 1] + (0.0 - f_[k - 1]) / (f_[k] - f_[k - 1]) * (t_[k] - t_[k - 1]);
        }
        return;
    }
    tF_ = t_.back();
}

WeightFn WeightFn::max_with_identity(Kind kind) const {
    std::vector<double> t, f;
    auto push = [&](double tt, double ff) {
        if (!t.empty() && tt - t.back() <= 1e-14) return;
        t.push_back(tt);
        f.push_back(std::max(ff, tt));
    };
    push(t_[0], f_[0]);
    for (size_t k = 1; k < t_.size(); ++k) {
        double d0 = f_[k - 1] - t_[k - 1], d1 = f_[k] - t_[k];
        if ((d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0)) {
            double w = d0 / (d0 - d1);
            double tc = t_[k - 1] + w * (t_[k] - t_[k - 1]);
            push(tc, tc);
        }
        push(t_[k], f_[k]);
    }
    return WeightFn(std::move(t), std::move(f), kind);
}

WeightFn WeightFn::shifted(double c) const {
    std::vector<double> f(f_);
    for (double& v : f) v += c;
    return WeightFn(t_, std::move(f), kind_);
}

std::vector<Piece> WeightFn::pieces() const {
    std::vector<Piece> out;
    out.push_back({-kInfD, t_.front(), f_.front(), f_.front()});
    for (size_t k = 1; k < t_.size(); ++k) out.push_back({t_[k - 1], t_[k], f_[k - 1], f_[k]});
    out.push_back({t_.back(), kInfD, f_.back(), f_.back()});
    return out;
}

std::vector<Piece> WeightFn::positive_inverse_pieces() const {
    std::vector<Piece> out;
    out.push_back({-kInfD, f_.front(), 0.0, 0.0});
    for (size_t k = 1; k < t_.size(); ++k) {
        if (!(f_[k] > f_[k - 1])) continue;
        double u0 = f_[k - 1], u1 = f_[k], s0 = t_[k - 1], s1 = t_[k];
        if (s0 < 0.0 && s1 > 0.0) {
            double uc = u0 + (0.0 - s0) / (s1 - s0) * (u1 - u0);
            out.push_back({u0, uc, 0.0, 0.0});
            out.push_back({uc, u1, 0.0, s1});
        } else {
            out.push_back({u0, u1, std::max(s0, 0.0), std::max(s1, 0.0)});
        }
    }
    return out;
}

std::string to_string(WeightFn::Kind k) {
    switch (k) {
        case WeightFn::Kind::threshold: return "threshold";
        case WeightFn::Kind::ck: return "ck";
        case WeightFn::Kind::optimal_list: return "optimal_list";
        case WeightFn::Kind::optimal_single: return "optimal_single";
        case WeightFn::Kind::custom: return "custom";
    }
    return "custom";
}

}  // namespace fmmi
