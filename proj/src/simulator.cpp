#include "fmmi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmmi::sim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2e = 1.4426950408889634;

double log2_sum_exp2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = std::max(a, b);
    return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

// Indices of the largest and second largest entries (second = -1 if size 1).
std::pair<int, int> top_two(const std::vector<double>& v) {
    int a = -1, b = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
        if (a < 0 || v[i] > v[a]) {
            b = a;
            a = i;
        } else if (b < 0 || v[i] > v[b]) {
            b = i;
        }
    }
    return {a, b};
}

}  // namespace

std::uint64_t codebook_size(int N, double R) {
    if (N < 1) throw std::invalid_argument("blocklength must be >= 1");
    if (R < 0.0) throw std::invalid_argument("rate must be >= 0");
    const double lm = N * R;
    if (lm > 20.0 + 1e-9) throw GuardError("codebook size exceeds 2^20");
    auto m = static_cast<std::uint64_t>(std::llround(std::exp2(lm)));
    return std::max<std::uint64_t>(2, std::min(m, kMaxCodewords));
}

Codebook build_codebook(int N, double R, const Composition& comp, Rng& rng) {
    if (comp.length() != N) throw std::invalid_argument("composition length differs from N");
    Codebook cb;
    cb.N = N;
    cb.rate = R;
    cb.comp = comp;
    const auto M = codebook_size(N, R);
    cb.rate_eff = std::log2(static_cast<double>(M)) / N;
    cb.codewords.reserve(M);
    for (std::uint64_t i = 0; i < M; ++i) cb.codewords.push_back(sample_type_class(comp, rng));
    return cb;
}

Sequence transmit(const Sequence& x, const Channel& ch, Rng& rng) {
    Sequence y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const auto& row = ch.row(x[i]);
        double u = uniform01(rng), acc = 0.0;
        int out = row.size() - 1;
        for (int k = 0; k < row.size(); ++k) {
            acc += row[k];
            if (u < acc) { out = k; break; }
        }
        // Never land on a zero-probability symbol through rounding in acc.
        while (row[out] <= 0.0 && out > 0) --out;
        y[i] = out;
    }
    return y;
}

MiScorer::MiScorer(int N, int nx, int ny) : N_(N), nx_(nx), ny_(ny), clog_(N + 1, 0.0) {
    for (int c = 1; c <= N; ++c) clog_[c] = c * std::log2(static_cast<double>(c));
}

double MiScorer::operator()(const Sequence& x, const Sequence& y) const {
    int joint[64] = {0}, cx[8] = {0}, cy[8] = {0};
    if (nx_ > 8 || ny_ > 8) throw std::invalid_argument("simulation alphabets limited to 8 symbols");
    for (size_t i = 0; i < x.size(); ++i) ++joint[x[i] * ny_ + y[i]];
    double s = clog_[N_];
    for (int a = 0; a < nx_; ++a)
        for (int b = 0; b < ny_; ++b) {
            int c = joint[a * ny_ + b];
            cx[a] += c;
            cy[b] += c;
            s += clog_[c];
        }
    for (int a = 0; a < nx_; ++a) s -= clog_[cx[a]];
    for (int b = 0; b < ny_; ++b) s -= clog_[cy[b]];
    return std::max(s / N_, 0.0);
}

std::vector<double> MiScorer::all(const Codebook& cb, const Sequence& y) const {
    std::vector<double> out(cb.size());
    for (size_t i = 0; i < cb.size(); ++i) out[i] = (*this)(cb.codewords[i], y);
    return out;
}

std::vector<int> decode_fmmi(const std::vector<double>& mi, double R, const WeightFn& F) {
    auto [a, b] = top_two(mi);
    // F is nondecreasing, so the best competitor is the top score, or the
    // runner-up when the candidate is the top score itself.
    const double fa = F(mi[a] - R), fb = b >= 0 ? F(mi[b] - R) : kNegInf;
    std::vector<int> out;
    for (int m = 0; m < static_cast<int>(mi.size()); ++m)
        if (mi[m] > R + (m == a ? fb : fa)) out.push_back(m);
    return out;
}

std::vector<int> decode_fmmi(const Codebook& cb, const Sequence& y, const WeightFn& F, int nx, int ny) {
    return decode_fmmi(MiScorer(cb.N, nx, ny).all(cb, y), cb.rate_eff, F);
}

std::vector<int> decode_mmi(const std::vector<double>& mi) {
    auto [a, b] = top_two(mi);
    if (b >= 0 && !(mi[a] > mi[b])) return {};
    return {a};
}

std::vector<int> decode_ck(const std::vector<double>& mi, double R, double delta, double lambda) {
    std::vector<int> out;
    for (int m = 0; m < static_cast<int>(mi.size()); ++m) {
        double worst = 0.0;
        for (int i = 0; i < static_cast<int>(mi.size()); ++i)
            if (i != m) worst = std::max(worst, std::max(mi[i] - R, 0.0));
        if (mi[m] > R + delta + lambda * worst) out.push_back(m);
    }
    return out;
}

std::vector<double> log2_likelihoods(const Codebook& cb, const Sequence& y, const Channel& ch) {
    const int nx = ch.inputs(), ny = ch.outputs();
    std::vector<double> lw(nx * ny);
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b) lw[a * ny + b] = ch(a, b) > 0.0 ? std::log2(ch(a, b)) : kNegInf;
    std::vector<double> out(cb.size());
    std::vector<int> joint(nx * ny);
    for (size_t i = 0; i < cb.size(); ++i) {
        std::fill(joint.begin(), joint.end(), 0);
        for (size_t k = 0; k < y.size(); ++k) ++joint[cb.codewords[i][k] * ny + y[k]];
        double s = 0.0;
        for (int j = 0; j < nx * ny; ++j)
            if (joint[j] > 0) s += joint[j] * lw[j];
        out[i] = s;
    }
    return out;
}

std::vector<int> decode_forney(const Codebook& cb, const Sequence& y, const Channel& ch, double T_nats,
                               ForneyVariant variant) {
    const auto ll = log2_likelihoods(cb, y, ch);
    const int M = static_cast<int>(ll.size());
    const double thr = cb.N * T_nats * kLog2e;  // e^{NT} in log2
    std::vector<double> others(M, kNegInf);
    if (variant == ForneyVariant::max2) {
        auto [a, b] = top_two(ll);
        for (int m = 0; m < M; ++m) others[m] = m == a ? (b >= 0 ? ll[b] : kNegInf) : ll[a];
    } else {
        // Prefix/suffix log-sum-exp avoids cancellation when excluding one term.
        std::vector<double> pre(M + 1, kNegInf), suf(M + 1, kNegInf);
        for (int m = 0; m < M; ++m) pre[m + 1] = log2_sum_exp2(pre[m], ll[m]);
        for (int m = M - 1; m >= 0; --m) suf[m] = log2_sum_exp2(suf[m + 1], ll[m]);
        for (int m = 0; m < M; ++m) others[m] = log2_sum_exp2(pre[m], suf[m + 1]);
    }
    std::vector<int> out;
    for (int m = 0; m < M; ++m) {
        if (ll[m] == kNegInf) continue;
        if (others[m] == kNegInf || ll[m] > thr + others[m]) out.push_back(m);
    }
    return out;
}

Decoder Decoder::fmmi(WeightFn F) {
    Decoder d;
    d.kind = Kind::fmmi;
    d.F = std::move(F);
    return d;
}

Decoder Decoder::mmi() {
    Decoder d;
    d.kind = Kind::mmi;
    return d;
}

Decoder Decoder::ck(double delta, double lambda) {
    Decoder d;
    d.kind = Kind::ck;
    d.delta = delta;
    d.lambda = lambda;
    return d;
}

Decoder Decoder::forney(double T_nats, ForneyVariant v) {
    Decoder d;
    d.kind = Kind::forney;
    d.T_nats = T_nats;
    d.variant = v;
    return d;
}

void SimConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (blocklengths.empty()) throw std::invalid_argument("no blocklengths");
    for (int N : blocklengths)
        if (N < 1) throw std::invalid_argument("blocklength must be >= 1");
    if (pX.size() != channel.inputs()) throw std::invalid_argument("input distribution does not match channel");
    if (channel.inputs() > 8 || channel.outputs() > 8) throw std::invalid_argument("simulation alphabets limited to 8");
    if (R < 0.0) throw std::invalid_argument("rate must be >= 0");
    if (decoder.kind == Decoder::Kind::forney && !channel_known)
        throw std::invalid_argument("Forney decoder needs channel_known");
    if (decoder.kind == Decoder::Kind::ck && (decoder.lambda < 0.0 || decoder.delta < 0.0))
        throw std::invalid_argument("CK decoder needs delta >= 0 and lambda >= 0");
}

Tally& Tally::operator+=(const Tally& o) {
    trials += o.trials;
    correct += o.correct;
    erasure += o.erasure;
    undetected += o.undetected;
    max_list = std::max(max_list, o.max_list);
    sum_ni += o.sum_ni;
    sum_ni2 += o.sum_ni2;
    return *this;
}

Estimate wilson(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 0.0, 1.0};
    const double p = static_cast<double>(k) / n, z2 = z * z, nn = static_cast<double>(n);
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // The bounds are exactly 0 and 1 at the extremes; skip the cancellation.
    return {p, k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

Estimate mean_ci(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 0.0, 0.0};
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
    const double half = z * std::sqrt(var / nn);
    return {mean, std::max(0.0, mean - half), mean + half};
}

std::uint64_t trial_seed(std::uint64_t seed, int N, std::uint64_t trial) {
    return splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(N))) + trial);
}

Tally run_block(const SimConfig& cfg, int N, Exec exec) {
    cfg.validate();
    const Composition comp = Composition::closest(cfg.pX, N);
    const int nx = cfg.channel.inputs(), ny = cfg.channel.outputs();
    const MiScorer scorer(N, nx, ny);
    (void)codebook_size(N, cfg.R);  // trip the guard before spawning threads

    const auto T = static_cast<std::int64_t>(cfg.trials);
    Tally total;
    const bool par = exec == Exec::parallel;
    std::vector<Tally> partial;
#pragma omp parallel if (par)
    {
        Tally local;
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < T; ++t) {
            Rng rng(trial_seed(cfg.seed, N, static_cast<std::uint64_t>(t)));
            const Codebook cb = build_codebook(N, cfg.R, comp, rng);
            const Sequence y = transmit(cb.codewords[0], cfg.channel, rng);
            std::vector<int> list;
            switch (cfg.decoder.kind) {
                case Decoder::Kind::fmmi: list = decode_fmmi(scorer.all(cb, y), cb.rate_eff, cfg.decoder.F); break;
                case Decoder::Kind::mmi: list = decode_mmi(scorer.all(cb, y)); break;
                case Decoder::Kind::ck:
                    list = decode_ck(scorer.all(cb, y), cb.rate_eff, cfg.decoder.delta, cfg.decoder.lambda);
                    break;
                case Decoder::Kind::forney:
                    list = decode_forney(cb, y, cfg.channel, cfg.decoder.T_nats, cfg.decoder.variant);
                    break;
            }
            const bool hit = std::find(list.begin(), list.end(), 0) != list.end();
            const std::uint64_t ni = list.size() - (hit ? 1 : 0);
            ++local.trials;
            if (hit) ++local.correct;
            else if (list.empty()) ++local.erasure;
            else ++local.undetected;
            local.sum_ni += ni;
            local.sum_ni2 += ni * ni;
            local.max_list = std::max<std::uint64_t>(local.max_list, list.size());
        }
        // Integer tallies: the merge order does not change the result.
#pragma omp critical
        total += local;
    }
    return total;
}

SimResult run_experiment(const SimConfig& cfg, Exec exec) {
    cfg.validate();
    SimResult res;
    std::vector<double> ns, er, ud, ms, ni;
    for (int N : cfg.blocklengths) {
        BlockResult b;
        b.N = N;
        b.M = codebook_size(N, cfg.R);
        b.rate_eff = std::log2(static_cast<double>(b.M)) / N;
        b.tally = run_block(cfg, N, exec);
        const auto n = b.tally.trials;
        b.erasure = wilson(b.tally.erasure, n);
        b.undetected = wilson(b.tally.undetected, n);
        b.miss = wilson(b.tally.miss(), n);
        b.mean_ni = mean_ci(b.tally.sum_ni, b.tally.sum_ni2, n);
        ns.push_back(N);
        er.push_back(b.erasure.value);
        ud.push_back(b.undetected.value);
        ms.push_back(b.miss.value);
        ni.push_back(b.mean_ni.value);
        res.blocks.push_back(b);
    }
    res.exp_erasure = -log2_slope(ns, er);
    res.exp_undetected = -log2_slope(ns, ud);
    res.exp_miss = -log2_slope(ns, ms);
    res.exp_ni = -log2_slope(ns, ni);
    return res;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    if (n < 2 || ys.size() != n) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

double log2_slope(const std::vector<double>& xs, const std::vector<double>& values) {
    std::vector<double> x, y;
    for (size_t i = 0; i < xs.size(); ++i)
        if (values[i] > 0.0) {
            x.push_back(xs[i]);
            y.push_back(std::log2(values[i]));
        }
    return ls_slope(x, y);
}

std::uint64_t mi_tail_count(const Composition& comp, const Sequence& y, int ny, double nu, std::uint64_t draws,
                            std::uint64_t seed, Exec exec) {
    const int N = comp.length();
    if (static_cast<int>(y.size()) != N) throw std::invalid_argument("y length differs from composition");
    const MiScorer scorer(N, static_cast<int>(comp.counts.size()), ny);
    const auto D = static_cast<std::int64_t>(draws);
    std::uint64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) if (exec == Exec::parallel)
    for (std::int64_t d = 0; d < D; ++d) {
        Rng rng(trial_seed(seed, N, static_cast<std::uint64_t>(d)));
        // Small slack so types sitting exactly on nu are not lost to rounding.
        if (scorer(sample_type_class(comp, rng), y) >= nu - 1e-12) ++hits;
    }
    return hits;
}

}  // namespace fmmi::sim
