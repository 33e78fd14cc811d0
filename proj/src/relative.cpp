#include "fmmi/relative.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmmi {

RelativeModel::RelativeModel(double R, const Pmf& pX, const CompoundClass& W, ReferenceFunctional aref,
                             int grid, bool endpoints_only)
    : R_(R), aref_(std::move(aref)) {
    std::vector<Channel> chans;
    if (W.is_bsc())
        chans = endpoints_only ? std::vector<Channel>{Channel::bsc(W.rho_min()), Channel::bsc(W.rho_max())}
                               : W.grid_members(grid);
    else
        chans = W.channels();
    if (chans.empty()) throw std::invalid_argument("empty channel class");
    if (aref_.kind == ReferenceFunctional::Kind::table && aref_.alpha_table.size() != chans.size())
        throw std::invalid_argument("reference table size does not match class size");

    H_ = entropy(pX);
    for (auto& c : chans) members_.emplace_back(pX, std::move(c));
    for (size_t i = 0; i < members_.size(); ++i) {
        const auto& sp = members_[i];
        esp_R_.push_back(sp.value(R));
        switch (aref_.kind) {
            case ReferenceFunctional::Kind::constant: alpha_.push_back(aref_.delta); break;
            case ReferenceFunctional::Kind::forney: alpha_.push_back(esp_R_.back() + aref_.delta); break;
            case ReferenceFunctional::Kind::table: alpha_.push_back(aref_.alpha_table[i]); break;
        }
        r_lo_ = std::max(r_lo_, sp.rate_infinity());
        r_hi_ = std::max(r_hi_, sp.mutual_info());
    }
}

double RelativeModel::beta(size_t i) const {
    if (aref_.kind == ReferenceFunctional::Kind::table && !aref_.beta_table.empty()) return aref_.beta_table.at(i);
    const double d = aref_.kind == ReferenceFunctional::Kind::table ? 0.0 : aref_.delta;
    return members_.at(i).value(R_ + d);
}

CurveSample RelativeModel::delta_alpha_esp(double r) const {
    CurveSample best{kInf, 0.0};
    for (size_t i = 0; i < members_.size(); ++i) {
        EspPoint p = members_[i].at_rate(r);
        double v = p.exponent - alpha_[i];
        if (v < best.value) best = {v, p.slope()};
    }
    return best;
}

double RelativeModel::delta_alpha_erf(const WeightFn& F, Exec exec) const {
    double best = kInf;
    for (size_t i = 0; i < members_.size(); ++i)
        best = std::min(best, erf(R_, members_[i], F, exec) - alpha_[i]);
    return best;
}

double RelativeModel::delta_beta_erasure(const WeightFn& F, Exec exec) const {
    double best = kInf;
    for (size_t i = 0; i < members_.size(); ++i)
        best = std::min(best, erf_inverse(R_, members_[i], F, exec) - beta(i));
    return best;
}

WeightFn RelativeModel::rel_F(int knots) const {
    auto c = [this](double r) { return delta_alpha_esp(r); };
    const double lo = std::min(r_lo_, R_);
    return weight_from_curve(c, delta_alpha_esp(R_).value, R_, H_, lo, std::max(r_hi_, R_), knots,
                             WeightFn::Kind::custom);
}

WeightFn RelativeModel::rel_optimal_F(int knots) const {
    auto c = [this](double r) { return delta_alpha_esp(r); };
    return weight_from_curve(c, 0.0, R_, H_, R_, std::max(r_hi_, R_), knots, WeightFn::Kind::optimal_list);
}

std::pair<size_t, double> RelativeModel::argmax_member_F(double t) const {
    size_t best = 0;
    double v1 = -kInf, v2 = -kInf;
    for (size_t i = 0; i < members_.size(); ++i) {
        double v = esp_R_[i] - members_[i].value(R_ + t);
        if (v > v1) {
            v2 = v1;
            v1 = v;
            best = i;
        } else {
            v2 = std::max(v2, v);
        }
    }
    return {best, members_.size() > 1 ? v1 - v2 : 0.0};
}

size_t RelativeModel::argmin_member_esp(double r) const {
    size_t best = 0;
    double v = kInf;
    for (size_t i = 0; i < members_.size(); ++i) {
        double e = members_[i].value(r);
        if (e < v) { v = e; best = i; }
    }
    return best;
}

}  // namespace fmmi
