#include "fmmi/probkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fmmi {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

Pmf::Pmf(std::vector<double> p) : p_(std::move(p)) {
    if (p_.size() < 2) throw std::invalid_argument("pmf needs at least 2 symbols");
    double s = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("pmf entry must be finite and >= 0");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-6) throw std::invalid_argument("pmf does not sum to 1 (sum=" + std::to_string(s) + ")");
    for (double& v : p_) v /= s;
}

Pmf Pmf::uniform(int n) { return Pmf(std::vector<double>(n, 1.0 / n)); }

Pmf Pmf::point(int n, int k) {
    std::vector<double> p(n, 0.0);
    p.at(k) = 1.0;
    return Pmf(std::move(p));
}

Channel::Channel(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw std::invalid_argument("channel has no rows");
    const size_t ny = rows[0].size();
    for (auto& r : rows) {
        if (r.size() != ny) throw std::invalid_argument("channel rows differ in output size");
        rows_.emplace_back(std::move(r));
    }
}

Channel Channel::bsc(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("bsc crossover outside [0,1]");
    return Channel({{1.0 - rho, rho}, {rho, 1.0 - rho}});
}

Channel Channel::identity(int n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) rows[i][i] = 1.0;
    return Channel(std::move(rows));
}

int Composition::length() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Pmf Composition::pmf() const {
    const int N = length();
    if (N <= 0) throw std::invalid_argument("empty composition");
    std::vector<double> p(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / N;
    return Pmf(std::move(p));
}

Composition Composition::closest(const Pmf& p, int N) {
    if (N < 1) throw std::invalid_argument("blocklength must be >= 1");
    Composition c;
    c.counts.resize(p.size());
    int used = 0;
    for (int i = 0; i < p.size(); ++i) {
        c.counts[i] = static_cast<int>(std::floor(p[i] * N + 1e-9));
        used += c.counts[i];
    }
    // Remaining units go to the largest deficits, lowest index first.
    for (; used < N; ++used) {
        int best = 0;
        double bestDef = -1.0;
        for (int i = 0; i < p.size(); ++i) {
            double def = p[i] * N - c.counts[i];
            if (def > bestDef + 1e-12) { bestDef = def; best = i; }
        }
        ++c.counts[best];
    }
    return c;
}

std::vector<double> JointType::joint() const {
    std::vector<double> out;
    for (const auto& row : counts)
        for (int c : row) out.push_back(static_cast<double>(c) / N);
    return out;
}

Pmf JointType::x_marginal() const {
    std::vector<double> p(counts.size(), 0.0);
    for (size_t x = 0; x < counts.size(); ++x)
        for (int c : counts[x]) p[x] += static_cast<double>(c) / N;
    return Pmf(std::move(p));
}

Pmf JointType::y_marginal() const {
    std::vector<double> p(counts.at(0).size(), 0.0);
    for (const auto& row : counts)
        for (size_t y = 0; y < row.size(); ++y) p[y] += static_cast<double>(row[y]) / N;
    return Pmf(std::move(p));
}

double JointType::mutual_information() const {
    double mi = entropy(x_marginal()) + entropy(y_marginal()) - entropy(joint());
    return std::max(mi, 0.0);
}

double JointType::conditional_entropy_y_given_x() const {
    return std::max(entropy(joint()) - entropy(x_marginal()), 0.0);
}

double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) h -= xlog2x(v);
    return h;
}

double entropy(const Pmf& p) { return entropy(p.probs()); }

double kl_divergence(const Pmf& q, const Pmf& p) {
    if (q.size() != p.size()) throw std::invalid_argument("kl: size mismatch");
    double d = 0.0;
    for (int i = 0; i < q.size(); ++i) {
        if (q[i] <= 0.0) continue;
        if (p[i] <= 0.0) return kInf;
        d += q[i] * std::log2(q[i] / p[i]);
    }
    return std::max(d, 0.0);
}

Pmf output_distribution(const Pmf& pX, const Channel& ch) {
    if (pX.size() != ch.inputs()) throw std::invalid_argument("input size mismatch");
    std::vector<double> q(ch.outputs(), 0.0);
    for (int x = 0; x < ch.inputs(); ++x)
        for (int y = 0; y < ch.outputs(); ++y) q[y] += pX[x] * ch(x, y);
    return Pmf(std::move(q));
}

double mutual_information(const Pmf& pX, const Channel& ch) {
    const Pmf q = output_distribution(pX, ch);
    double mi = 0.0;
    for (int x = 0; x < ch.inputs(); ++x) {
        if (pX[x] <= 0.0) continue;
        mi += pX[x] * kl_divergence(ch.row(x), q);
    }
    return std::max(mi, 0.0);
}

double conditional_kl(const Channel& q, const Channel& p, const Pmf& pX) {
    if (q.inputs() != p.inputs() || q.outputs() != p.outputs() || pX.size() != p.inputs())
        throw std::invalid_argument("conditional_kl: dimension mismatch");
    double d = 0.0;
    for (int x = 0; x < p.inputs(); ++x) {
        if (pX[x] <= 0.0) continue;
        double dx = kl_divergence(q.row(x), p.row(x));
        if (std::isinf(dx)) return kInf;
        d += pX[x] * dx;
    }
    return d;
}

JointType joint_type(const Sequence& x, const Sequence& y, int nx, int ny) {
    if (x.size() != y.size()) throw std::invalid_argument("joint_type: length mismatch");
    JointType t;
    t.N = static_cast<int>(x.size());
    t.counts.assign(nx, std::vector<int>(ny, 0));
    for (size_t i = 0; i < x.size(); ++i) ++t.counts.at(x[i]).at(y[i]);
    return t;
}

double empirical_mi(const Sequence& x, const Sequence& y, int nx, int ny) {
    return joint_type(x, y, nx, ny).mutual_information();
}

Sequence sample_type_class(const Composition& comp, Rng& rng) {
    Sequence s;
    s.reserve(comp.length());
    for (size_t a = 0; a < comp.counts.size(); ++a)
        s.insert(s.end(), comp.counts[a], static_cast<int>(a));
    // Fisher-Yates with our own index draw so results do not depend on the
    // standard library's distribution implementation.
    for (size_t i = s.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(uniform01(rng) * static_cast<double>(i));
        std::swap(s[i - 1], s[j]);
    }
    return s;
}

double log2_type_class_size(const Composition& comp) {
    double l = std::lgamma(comp.length() + 1.0);
    for (int c : comp.counts) l -= std::lgamma(c + 1.0);
    return l / std::log(2.0);
}

double type_class_size(const Composition& comp) {
    // Exact product form for small N, avoiding lgamma rounding.
    double v = 1.0;
    int n = 0;
    for (int c : comp.counts) {
        for (int k = 1; k <= c; ++k) {
            ++n;
            v = v * n / k;
        }
    }
    return std::round(v);
}

double conditional_type_count(const Composition& comp, int out_size) {
    double total = 1.0;
    for (int n : comp.counts) {
        // C(n + |Y| - 1, |Y| - 1)
        double c = 1.0;
        for (int k = 1; k < out_size; ++k) c = c * (n + k) / k;
        total *= std::round(c);
    }
    return total;
}

std::uint64_t enumerate_conditional_types(
    const Composition& comp, int out_size,
    const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    if (out_size < 1) throw std::invalid_argument("output alphabet must be nonempty");
    if (conditional_type_count(comp, out_size) > kEnumerationGuard)
        throw GuardError("conditional type enumeration exceeds guard");

    const int nx = static_cast<int>(comp.counts.size());
    std::vector<std::vector<int>> m(nx, std::vector<int>(out_size, 0));
    std::uint64_t visited = 0;

    // Odometer over rows; each row walks its compositions of n_x into |Y| parts.
    std::function<void(int, int, int)> rec = [&](int x, int y, int left) {
        if (x == nx) {
            fn(m);
            ++visited;
            return;
        }
        if (y == out_size - 1) {
            m[x][y] = left;
            rec(x + 1, 0, x + 1 < nx ? comp.counts[x + 1] : 0);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            m[x][y] = c;
            rec(x, y + 1, left - c);
        }
    };
    rec(0, 0, nx > 0 ? comp.counts[0] : 0);
    return visited;
}

}  // namespace fmmi
