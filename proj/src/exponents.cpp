#include "fmmi/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

namespace fmmi {

namespace {

double log2_safe(double v) { return v > 0.0 ? std::log2(v) : -kInf; }

// Root of a decreasing function on [lo, hi] with f(lo) > 0 >= f(hi).
template <class F>
double toms748_root(F f, double lo, double hi, double flo, double fhi) {
    if (fhi == 0.0) return hi;
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(46), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

// ---------------------------------------------------------------------------
// SpherePacking

SpherePacking::SpherePacking(Pmf pX, Channel ch) : pX_(std::move(pX)), ch_(std::move(ch)) {
    if (pX_.size() != ch_.inputs()) throw std::invalid_argument("input distribution does not match channel");
    nx_ = ch_.inputs();
    ny_ = ch_.outputs();
    logW_.resize(static_cast<size_t>(nx_) * ny_);
    bool full = true;
    for (int x = 0; x < nx_; ++x)
        for (int y = 0; y < ny_; ++y) {
            logW_[x * ny_ + y] = log2_safe(ch_(x, y));
            if (pX_[x] > 0.0 && ch_(x, y) <= 0.0) full = false;
        }
    iMax_ = mutual_information(pX_, ch_);

    if (full) {
        rInf_ = 0.0;
        return;
    }
    // min_Q -sum_x P(x) log Q(S_x) by EM over Q.
    std::vector<double> q(ny_, 0.0);
    for (int x = 0; x < nx_; ++x)
        if (pX_[x] > 0.0)
            for (int y = 0; y < ny_; ++y)
                if (ch_(x, y) > 0.0) q[y] = 1.0;
    double s = 0.0;
    for (double v : q) s += v;
    for (double& v : q) v /= s;
    std::vector<double> nq(ny_);
    for (int it = 0; it < 1000000; ++it) {
        std::fill(nq.begin(), nq.end(), 0.0);
        for (int x = 0; x < nx_; ++x) {
            if (pX_[x] <= 0.0) continue;
            double mass = 0.0;
            for (int y = 0; y < ny_; ++y)
                if (ch_(x, y) > 0.0) mass += q[y];
            for (int y = 0; y < ny_; ++y)
                if (ch_(x, y) > 0.0) nq[y] += pX_[x] * q[y] / mass;
        }
        double diff = 0.0;
        for (int y = 0; y < ny_; ++y) diff = std::max(diff, std::abs(nq[y] - q[y]));
        q.swap(nq);
        if (diff < 1e-15) break;
    }
    rInf_ = 0.0;
    for (int x = 0; x < nx_; ++x) {
        if (pX_[x] <= 0.0) continue;
        double mass = 0.0;
        for (int y = 0; y < ny_; ++y)
            if (ch_(x, y) > 0.0) mass += q[y];
        rInf_ -= pX_[x] * std::log2(mass);
    }
    rInf_ = std::max(rInf_, 0.0);
}

// E0(rho) = min_Q -(1+rho) sum_x P(x) log Z_x(Q), Z_x = sum_y W^a Q^(1-a), a = 1/(1+rho).
// The optimal test channel is V_x(y) = W^a Q^(1-a) / Z_x with Q = PV. The
// objective is convex in Q but nearly flat for large rho, so Q is found by
// Newton steps on the simplex. Everything is expressed through
// r = V/Q - 1 and L = a ln(W/Q) to avoid cancellation when a is tiny.
SpherePacking::Inner SpherePacking::solve(double rho, std::vector<double>& q) const {
    const double a = 1.0 / (1.0 + rho);
    const double b = 1.0 - a;

    std::vector<int> ys;
    for (int y = 0; y < ny_; ++y)
        for (int x = 0; x < nx_; ++x)
            if (pX_[x] > 0.0 && !std::isinf(logW_[x * ny_ + y])) {
                ys.push_back(y);
                break;
            }
    const int n = static_cast<int>(ys.size());
    {
        // Restrict the warm start to reachable outputs and keep it interior.
        std::vector<double> w(ny_, 0.0);
        double s = 0.0;
        for (int y : ys) s += w[y] = std::max(q[y], 1e-12);
        for (int y : ys) w[y] /= s;
        q = w;
    }

    // r[x][k] = V/Q - 1 and objective G = -sum_x P log Z_x (nats).
    std::vector<double> r(static_cast<size_t>(nx_) * n), L(static_cast<size_t>(nx_) * n);
    auto evaluate = [&](const std::vector<double>& qq) {
        double G = 0.0;
        for (int x = 0; x < nx_; ++x) {
            if (pX_[x] <= 0.0) continue;
            double s = 0.0;  // Z_x - 1
            for (int k = 0; k < n; ++k) {
                const int y = ys[k];
                const double lw = logW_[x * ny_ + y];
                double& l = L[x * n + k];
                l = std::isinf(lw) ? -kInf : a * (lw - std::log2(qq[y])) * std::numbers::ln2;
                s += qq[y] * std::expm1(l);
            }
            for (int k = 0; k < n; ++k) r[x * n + k] = (std::expm1(L[x * n + k]) - s) / (1.0 + s);
            G -= pX_[x] * std::log1p(s);
        }
        return G;
    };

    double G = evaluate(q);
    Eigen::MatrixXd K(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);
    std::vector<double> qn(ny_);
    for (int it = 0; it < 200; ++it) {
        // Tangent-space gradient and Hessian.
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
        for (int x = 0; x < nx_; ++x) {
            if (pX_[x] <= 0.0) continue;
            for (int k = 0; k < n; ++k) {
                const double rk = r[x * n + k];
                g(k) -= b * pX_[x] * rk;
                for (int j = 0; j < n; ++j) H(k, j) += b * b * pX_[x] * rk * r[x * n + j];
            }
        }
        for (int k = 0; k < n; ++k) {
            double pv = 1.0;
            for (int x = 0; x < nx_; ++x)
                if (pX_[x] > 0.0) pv += pX_[x] * r[x * n + k];
            H(k, k) += b * a * pv / q[ys[k]];
        }
        // Equivalent to the full gradient -b (PV)/Q on the tangent space since
        // sum_y dQ_y = 0; rescale so the KKT system is well balanced.
        const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
        K.topLeftCorner(n, n) = H / scale;
        K.topRightCorner(n, 1).setOnes();
        K.bottomLeftCorner(1, n).setOnes();
        K(n, n) = 0.0;
        rhs.head(n) = -g / scale;
        rhs(n) = 0.0;
        Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
        Eigen::VectorXd d = sol.head(n);
        if (!d.allFinite()) break;

        double step = 1.0;
        for (int k = 0; k < n; ++k)
            if (d(k) < 0.0) step = std::min(step, 0.9 * q[ys[k]] / -d(k));
        const double slope = g.dot(d);
        if (!(slope < 0.0)) break;
        bool moved = false;
        double Gn = G;
        for (int ls = 0; ls < 60; ++ls) {
            qn = q;
            for (int k = 0; k < n; ++k) qn[ys[k]] = q[ys[k]] + step * d(k);
            Gn = evaluate(qn);
            if (Gn <= G + 1e-4 * step * slope) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            evaluate(q);
            break;
        }
        const double dmax = step * d.cwiseAbs().maxCoeff();
        q = qn;
        G = Gn;
        if (dmax < 1e-15) break;
    }

    Inner out;
    out.v.assign(static_cast<size_t>(nx_) * ny_, 0.0);
    for (int x = 0; x < nx_; ++x) {
        if (pX_[x] <= 0.0) continue;
        for (int k = 0; k < n; ++k) {
            const int y = ys[k];
            const double rr = r[x * n + k];
            const double v = q[y] * (1.0 + rr);
            out.v[x * ny_ + y] = v;
            if (v <= 0.0) continue;
            out.rate += pX_[x] * v * std::log1p(rr);
            // ln(V/W) = ln(1+r) - L/a
            out.div += pX_[x] * v * (std::log1p(rr) + (std::log2(q[y]) - logW_[x * ny_ + y]) * std::numbers::ln2);
        }
    }
    out.rate = std::max(out.rate / std::numbers::ln2, 0.0);
    out.div = std::max(out.div / std::numbers::ln2, 0.0);
    out.e0 = (1.0 + rho) * G / std::numbers::ln2;
    return out;
}

EspPoint SpherePacking::at_slope(double rho) const {
    if (!(rho >= 0.0)) throw std::invalid_argument("slope parameter must be >= 0");
    if (rho == 0.0) return {iMax_, 0.0, 0.0};
    std::vector<double> q = output_distribution(pX_, ch_).probs();
    Inner in = solve(std::min(rho, kRhoCap), q);
    return {in.rate, in.div, rho};
}

EspPoint SpherePacking::at_rate(double R) const {
    if (!(R >= 0.0) || std::isnan(R)) throw std::invalid_argument("rate must be >= 0");
    if (R >= iMax_) return {R, 0.0, 0.0};
    if (R < rInf_ - 1e-12) return {R, kInf, kInf};

    std::vector<double> q = output_distribution(pX_, ch_).probs();
    auto f = [&](double rho) { return solve(rho, q).rate - R; };

    double lo = 0.0, flo = iMax_ - R, hi = 64.0, fhi = f(hi);
    while (fhi > 0.0 && hi < kRhoCap) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = f(hi);
    }
    double rho = hi;
    if (fhi <= 0.0) rho = toms748_root(f, lo, hi, flo, fhi);
    Inner in = solve(rho, q);
    // Dual value E0(rho) - rho R; second-order accurate in the root error.
    double e = in.e0 - rho * R;
    return {R, std::max(e, 0.0), rho};
}

Channel SpherePacking::minimizer(double R) const {
    EspPoint p = at_rate(R);
    if (std::isinf(p.exponent)) throw std::domain_error("rate below R_inf has no feasible test channel");
    if (p.rho == 0.0) return ch_;
    std::vector<double> q = output_distribution(pX_, ch_).probs();
    Inner in = solve(p.rho, q);
    std::vector<std::vector<double>> rows(nx_, std::vector<double>(ny_));
    for (int x = 0; x < nx_; ++x)
        for (int y = 0; y < ny_; ++y) rows[x][y] = pX_[x] > 0.0 ? in.v[x * ny_ + y] : ch_(x, y);
    return Channel(std::move(rows));
}

// ---------------------------------------------------------------------------
// CompoundClass

CompoundClass CompoundClass::explicit_list(std::vector<Channel> chans) {
    if (chans.empty()) throw std::invalid_argument("compound class is empty");
    for (const auto& c : chans)
        if (c.inputs() != chans[0].inputs() || c.outputs() != chans[0].outputs())
            throw std::invalid_argument("compound class members differ in alphabet sizes");
    CompoundClass w;
    w.chans_ = std::move(chans);
    return w;
}

CompoundClass CompoundClass::bsc_interval(double rho_min, double rho_max) {
    if (!(rho_min > 0.0 && rho_min <= rho_max && rho_max <= 0.5))
        throw std::invalid_argument("bsc interval must satisfy 0 < rho_min <= rho_max <= 1/2");
    CompoundClass w;
    w.bsc_ = true;
    w.rhoMin_ = rho_min;
    w.rhoMax_ = rho_max;
    return w;
}

int CompoundClass::inputs() const { return bsc_ ? 2 : chans_[0].inputs(); }
int CompoundClass::outputs() const { return bsc_ ? 2 : chans_[0].outputs(); }

std::vector<Channel> CompoundClass::min_members() const {
    if (bsc_) return {Channel::bsc(rhoMax_)};
    return chans_;
}

std::vector<double> CompoundClass::grid_rhos(int n) const {
    if (!bsc_) return {};
    if (rhoMin_ == rhoMax_ || n < 2) return {rhoMin_};
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = rhoMin_ + (rhoMax_ - rhoMin_) * i / (n - 1);
    return r;
}

std::vector<Channel> CompoundClass::grid_members(int n) const {
    if (!bsc_) return chans_;
    std::vector<Channel> out;
    for (double r : grid_rhos(n)) out.push_back(Channel::bsc(r));
    return out;
}

// ---------------------------------------------------------------------------
// CompoundExponent

CompoundExponent::CompoundExponent(const Pmf& pX, const CompoundClass& W, Members m, int grid) {
    for (auto& c : m == Members::grid ? W.grid_members(grid) : W.min_members()) members_.emplace_back(pX, c);
    init();
}

CompoundExponent::CompoundExponent(std::vector<SpherePacking> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("compound class is empty");
    init();
}

void CompoundExponent::init() {
    rInf_ = kInf;
    iMin_ = kInf;
    for (const auto& m : members_) {
        rInf_ = std::min(rInf_, m.rate_infinity());
        iMin_ = std::min(iMin_, m.mutual_info());
    }
}

int CompoundExponent::argmin(double R) const {
    int best = 0;
    double bv = kInf;
    for (size_t i = 0; i < members_.size(); ++i) {
        double v = members_[i].value(R);
        if (v < bv) {
            bv = v;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double CompoundExponent::value(double R) const { return at_rate(R).exponent; }

EspPoint CompoundExponent::at_rate(double R) const {
    EspPoint best{R, kInf, kInf};
    for (const auto& m : members_) {
        EspPoint p = m.at_rate(R);
        if (p.exponent < best.exponent) best = p;
    }
    return best;
}

Slopes CompoundExponent::slopes(double R) const {
    std::vector<EspPoint> pts;
    double emin = kInf;
    for (const auto& m : members_) {
        pts.push_back(m.at_rate(R));
        emin = std::min(emin, pts.back().exponent);
    }
    Slopes s{-kInf, kInf, false};
    for (const auto& p : pts) {
        if (p.exponent > emin + 1e-10) continue;
        // Left of a crossing the flatter member is smaller.
        s.left = std::max(s.left, p.slope());
        s.right = std::min(s.right, p.slope());
    }
    s.kink = s.left - s.right > 1e-6;
    return s;
}

// ---------------------------------------------------------------------------
// Free functions

double esp(double R, const Pmf& pX, const Channel& ch) { return SpherePacking(pX, ch).value(R); }

double esp_compound(double R, const Pmf& pX, const CompoundClass& W) {
    return CompoundExponent(pX, W).value(R);
}

double esp_derivative(double R, const CompoundExponent& ce) {
    if (!(R > ce.rate_infinity() && R < ce.mutual_info()))
        throw std::domain_error("rate outside the differentiable range (R_inf, I_min)");
    return ce.slopes(R).value();
}

double esp_derivative(double R, const Pmf& pX, const CompoundClass& W) {
    return esp_derivative(R, CompoundExponent(pX, W));
}

namespace {

// Rate in [lo, hi] where the compound slope crosses target; slopes nondecreasing.
double slope_crossing(const CompoundExponent& ce, double target, double lo, double hi) {
    for (int i = 0; i < 100 && hi - lo > 1e-14; ++i) {
        double mid = 0.5 * (lo + hi);
        (ce.slopes(mid).value() < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CharacteristicRates characteristic_rates(const CompoundExponent& ce) {
    CharacteristicRates c{ce.rate_infinity(), ce.mutual_info(), ce.rate_infinity()};
    if (!(c.i_min > c.r_inf)) return c;
    if (ce.members().size() == 1) {
        c.r_cr = std::max(ce.members()[0].at_slope(1.0).rate, c.r_inf);
        return c;
    }
    const double lo = c.r_inf + 1e-12;
    if (ce.slopes(lo).value() >= -1.0) return c;
    c.r_cr = slope_crossing(ce, -1.0, lo, c.i_min);
    return c;
}

CharacteristicRates characteristic_rates(const Pmf& pX, const CompoundClass& W) {
    return characteristic_rates(CompoundExponent(pX, W));
}

std::optional<double> conjugate_rate(double R, const CompoundExponent& ce) {
    const double rInf = ce.rate_infinity(), iMin = ce.mutual_info();
    if (!(R > rInf && R < iMin)) return std::nullopt;
    const double s1 = ce.slopes(R).value();
    if (!(s1 < 0.0) || std::isinf(s1)) return std::nullopt;
    const double target = 1.0 / s1;

    if (ce.members().size() == 1) {
        EspPoint p = ce.members()[0].at_slope(-target);
        if (!(p.rate > rInf + 1e-12)) return std::nullopt;
        return p.rate;
    }
    const double rcr = characteristic_rates(ce).r_cr;
    if (target >= -1.0) return slope_crossing(ce, target, std::min(rcr, R), iMin);
    const double lo = rInf + 1e-12;
    if (ce.slopes(lo).value() > target) return std::nullopt;
    return slope_crossing(ce, target, lo, std::max(rcr, R));
}

std::pair<double, double> conjugate_pair_from_gap(double d, const CompoundExponent& ce) {
    d = std::abs(d);
    const auto cr = characteristic_rates(ce);
    if (d == 0.0) return {cr.r_cr, cr.r_cr};

    if (ce.members().size() == 1) {
        const SpherePacking& sp = ce.members()[0];
        // gap(s) = R(e^-s) - R(e^s) increases in s = log rho1.
        auto pair = [&](double s) {
            return std::make_pair(sp.at_slope(std::exp(s)).rate, sp.at_slope(std::exp(-s)).rate);
        };
        double lo = 0.0, hi = std::log(SpherePacking::kRhoCap);
        auto top = pair(hi);
        if (top.second - top.first < d) throw std::domain_error("conjugate gap not attainable");
        for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
            double mid = 0.5 * (lo + hi);
            auto p = pair(mid);
            (p.second - p.first < d ? lo : hi) = mid;
        }
        return pair(0.5 * (lo + hi));
    }

    double lo = cr.r_inf + 1e-12, hi = cr.r_cr;
    auto gap = [&](double r1) {
        auto c = conjugate_rate(r1, ce);
        return c ? *c - r1 : -kInf;
    };
    if (gap(lo) < d) throw std::domain_error("conjugate gap not attainable");
    for (int i = 0; i < 100 && hi - lo > 1e-14; ++i) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) >= d ? lo : hi) = mid;
    }
    double r1 = 0.5 * (lo + hi);
    return {r1, r1 + gap(r1)};
}

// ---------------------------------------------------------------------------
// E_{r,F} by exact per-piece minimization. Each piece contributes the convex
// function E_sp(R') + linear, minimized at the rate whose slope cancels it.

double erf_pieces(double R, const SpherePacking& sp, const std::vector<Piece>& pieces, Exec exec) {
    const double rInf = sp.rate_infinity(), iMax = sp.mutual_info();
    const int n = static_cast<int>(pieces.size());
    std::vector<double> vals(n, kInf);
    const bool par = exec == Exec::parallel;

#pragma omp parallel for schedule(dynamic, 4) if (par)
    for (int i = 0; i < n; ++i) {
        const Piece& p = pieces[i];
        const double lo = std::max(R + p.a, rInf);
        const double hi = R + p.b;
        if (lo > hi) continue;
        if (std::isinf(p.b)) {
            vals[i] = p.va;  // reaches R' >= I where E_sp vanishes
            continue;
        }
        if (std::isinf(p.a)) {
            vals[i] = p.va + sp.value(std::min(hi, iMax));
            continue;
        }
        const double sigma = p.slope();
        EspPoint st = sp.at_slope(sigma);
        double r = std::clamp(st.rate, lo, hi);
        double e = r == st.rate ? st.exponent : sp.value(r);
        vals[i] = e + p.va + sigma * (r - (R + p.a));
    }
    double best = kInf;
    for (double v : vals) best = std::min(best, v);
    return best;
}

double erf(double R, const SpherePacking& sp, const WeightFn& F, Exec exec) {
    return erf_pieces(R, sp, F.pieces(), exec);
}

double erf(double R, const CompoundExponent& ce, const WeightFn& F, Exec exec) {
    double best = kInf;
    const auto pieces = F.pieces();
    for (const auto& m : ce.members()) best = std::min(best, erf_pieces(R, m, pieces, exec));
    return best;
}

double erf_inverse(double R, const SpherePacking& sp, const WeightFn& F, Exec exec) {
    return erf_pieces(R, sp, F.positive_inverse_pieces(), exec);
}

double erf_inverse(double R, const CompoundExponent& ce, const WeightFn& F, Exec exec) {
    double best = kInf;
    const auto pieces = F.positive_inverse_pieces();
    for (const auto& m : ce.members()) best = std::min(best, erf_pieces(R, m, pieces, exec));
    return best;
}

std::vector<double> tabulate(const std::function<double(double)>& fn, const std::vector<double>& xs, Exec exec) {
    std::vector<double> out(xs.size());
    const int n = static_cast<int>(xs.size());
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 8) if (par)
    for (int i = 0; i < n; ++i) out[i] = fn(xs[i]);
    return out;
}

WeightFn weight_from_curve(const CurveFn& c, double base, double R, double H, double r_lo, double r_hi,
                           int knots, WeightFn::Kind kind, double tol, Exec exec) {
    const double tlo = r_lo - R, thi = r_hi - R;
    std::vector<double> t = WeightFn::grid(R, H, knots, {0.0, tlo, thi});
    const bool par = exec == Exec::parallel;
    auto sample_at = [&](const std::vector<double>& ts) {
        std::vector<CurveSample> out(ts.size());
        const int n = static_cast<int>(ts.size());
#pragma omp parallel for schedule(dynamic, 8) if (par)
        for (int i = 0; i < n; ++i) out[i] = c(R + std::clamp(ts[i], tlo, thi));
        return out;
    };
    std::vector<CurveSample> cs = sample_at(t);

    constexpr size_t kMaxKnots = 1 << 15;
    for (int round = 0; round < 64 && t.size() < kMaxKnots; ++round) {
        std::vector<double> mids;
        for (size_t i = 1; i < t.size(); ++i) {
            if (t[i - 1] < tlo || t[i] > thi) continue;
            const double dt = t[i] - t[i - 1];
            if (dt < 1e-13) continue;
            const double ds = std::abs(cs[i].slope - cs[i - 1].slope);
            const double df = std::abs(cs[i].value - cs[i - 1].value);
            if (std::min(dt * ds / 4.0, df) > tol) mids.push_back(0.5 * (t[i - 1] + t[i]));
        }
        if (mids.empty()) break;
        std::vector<CurveSample> ms = sample_at(mids);
        std::vector<double> nt;
        std::vector<CurveSample> ncs;
        size_t j = 0;
        for (size_t i = 0; i < t.size(); ++i) {
            while (j < mids.size() && mids[j] < t[i]) {
                nt.push_back(mids[j]);
                ncs.push_back(ms[j]);
                ++j;
            }
            nt.push_back(t[i]);
            ncs.push_back(cs[i]);
        }
        t.swap(nt);
        cs.swap(ncs);
    }
    std::vector<double> f(t.size());
    for (size_t i = 0; i < t.size(); ++i) f[i] = base - cs[i].value;
    return WeightFn(std::move(t), std::move(f), kind);
}

FRResult f_R_builder(double R, const CompoundExponent& ce, int knots) {
    const double rInf = ce.rate_infinity(), iMin = ce.mutual_info(), H = ce.input_entropy();
    if (R < rInf) throw std::invalid_argument("rate below R_inf");
    if (R >= iMin) return {WeightFn::threshold(0.0, R, H), true};
    auto curve = [&](double r) {
        EspPoint p = ce.at_rate(r);
        return CurveSample{p.exponent, p.slope()};
    };
    return {weight_from_curve(curve, ce.value(R), R, H, rInf, iMin, knots, WeightFn::Kind::custom), false};
}

// ---------------------------------------------------------------------------
// ExponentCurve

double ExponentCurve::value(double R) const {
    if (R < r_inf) return kInf;
    if (R >= i_min || rate.size() < 2) return 0.0;
    auto it = std::upper_bound(rate.begin(), rate.end(), R);
    size_t k = std::clamp<size_t>(it - rate.begin(), 1, rate.size() - 1);
    double w = (R - rate[k - 1]) / (rate[k] - rate[k - 1]);
    return esp[k - 1] + w * (esp[k] - esp[k - 1]);
}

double ExponentCurve::slope_at(double R) const {
    if (R >= i_min || rate.size() < 2) return 0.0;
    if (R < r_inf) return -kInf;
    auto it = std::upper_bound(rate.begin(), rate.end(), R);
    size_t k = std::clamp<size_t>(it - rate.begin(), 1, rate.size() - 1);
    double w = (R - rate[k - 1]) / (rate[k] - rate[k - 1]);
    return slope[k - 1] + w * (slope[k] - slope[k - 1]);
}

ExponentCurve ExponentCurve::build(const CompoundExponent& ce, int n, Exec exec) {
    if (n < 2) throw std::invalid_argument("curve needs >= 2 points");
    ExponentCurve c;
    auto cr = characteristic_rates(ce);
    c.r_inf = cr.r_inf;
    c.i_min = cr.i_min;
    c.r_cr = cr.r_cr;
    c.rate.resize(n);
    for (int i = 0; i < n; ++i) c.rate[i] = c.r_inf + (c.i_min - c.r_inf) * i / (n - 1);
    c.esp.resize(n);
    c.slope.resize(n);
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 16) if (par)
    for (int i = 0; i < n; ++i) {
        EspPoint p = ce.at_rate(c.rate[i]);
        c.esp[i] = p.exponent;
        c.slope[i] = p.slope();
    }
    return c;
}

// ---------------------------------------------------------------------------
// Type oracles

namespace {

template <class Score>
OracleResult type_search(const Composition& comp, const Channel& ch, Score score) {
    if (static_cast<int>(comp.counts.size()) != ch.inputs()) throw std::invalid_argument("composition does not match channel");
    const int N = comp.length();
    OracleResult best;
    enumerate_conditional_types(comp, ch.outputs(), [&](const std::vector<std::vector<int>>& m) {
        double div = 0.0;
        for (size_t x = 0; x < m.size() && std::isfinite(div); ++x) {
            const int nx = comp.counts[x];
            if (nx == 0) continue;
            for (size_t y = 0; y < m[x].size(); ++y) {
                if (m[x][y] == 0) continue;
                const double v = static_cast<double>(m[x][y]) / nx;
                if (ch(x, y) <= 0.0) {
                    div = kInf;
                    break;
                }
                div += static_cast<double>(nx) / N * v * std::log2(v / ch(x, y));
            }
        }
        if (std::isinf(div)) return;
        JointType jt{N, m};
        double s = score(div, jt.mutual_information());
        if (s < best.value) {
            best.value = s;
            best.counts = m;
        }
    });
    return best;
}

}  // namespace

OracleResult esp_N_oracle(double R, const Composition& comp, const Channel& ch) {
    return type_search(comp, ch, [R](double div, double mi) { return mi <= R + 1e-12 ? div : kInf; });
}

OracleResult erf_N_oracle(double R, const Composition& comp, const Channel& ch, const WeightFn& F) {
    return type_search(comp, ch, [&](double div, double mi) { return div + F(mi - R); });
}

}  // namespace fmmi
