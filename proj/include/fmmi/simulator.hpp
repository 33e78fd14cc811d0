// simulator.hpp
//
// Monte Carlo over the constant-composition random-coding ensemble with the
// F-MMI, MMI, Csiszar-Korner and Forney decoders.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fmmi/exponents.hpp"
#include "fmmi/probkit.hpp"
#include "fmmi/weight_fn.hpp"

namespace fmmi::sim {

constexpr std::uint64_t kMaxCodewords = 1u << 20;

struct Codebook {
    int N = 0;
    double rate = 0.0;      // nominal
    double rate_eff = 0.0;  // log2(M) / N
    Composition comp;
    std::vector<Sequence> codewords;

    std::size_t size() const { return codewords.size(); }
};

// max(2, round(2^{NR})); throws GuardError above kMaxCodewords.
std::uint64_t codebook_size(int N, double R);
Codebook build_codebook(int N, double R, const Composition& comp, Rng& rng);
Sequence transmit(const Sequence& x, const Channel& ch, Rng& rng);

// Empirical mutual information in bits for every codeword against y.
// Precomputed c log2 c table keeps the result exact across call sites.
class MiScorer {
public:
    MiScorer(int N, int nx, int ny);
    double operator()(const Sequence& x, const Sequence& y) const;
    std::vector<double> all(const Codebook& cb, const Sequence& y) const;

private:
    int N_, nx_, ny_;
    std::vector<double> clog_;
};

std::vector<int> decode_fmmi(const std::vector<double>& mi, double R, const WeightFn& F);
std::vector<int> decode_fmmi(const Codebook& cb, const Sequence& y, const WeightFn& F, int nx, int ny);
// Argmax of empirical MI; empty on a tie for the top score.
std::vector<int> decode_mmi(const std::vector<double>& mi);
std::vector<int> decode_ck(const std::vector<double>& mi, double R, double delta, double lambda);

enum class ForneyVariant { sum, max2 };
// T is in nats, as in the e^{NT} form of the rule.
std::vector<int> decode_forney(const Codebook& cb, const Sequence& y, const Channel& ch, double T_nats,
                               ForneyVariant variant);
// Log2-likelihood log2 p^N(y | x) per codeword.
std::vector<double> log2_likelihoods(const Codebook& cb, const Sequence& y, const Channel& ch);

struct Decoder {
    enum class Kind { fmmi, mmi, ck, forney };
    Kind kind = Kind::fmmi;
    WeightFn F = WeightFn::identity(0.0, 1.0);
    double delta = 0.0;   // ck
    double lambda = 1.0;  // ck
    double T_nats = 0.0;  // forney
    ForneyVariant variant = ForneyVariant::sum;

    static Decoder fmmi(WeightFn F);
    static Decoder mmi();
    static Decoder ck(double delta, double lambda);
    static Decoder forney(double T_nats, ForneyVariant v);
};

struct SimConfig {
    Channel channel = Channel::identity(2);
    Pmf pX = Pmf::uniform(2);
    double R = 0.0;
    Decoder decoder;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<int> blocklengths;
    bool channel_known = false;  // required by the Forney decoders

    void validate() const;  // throws std::invalid_argument
};

// Each trial falls in exactly one of correct / erasure / undetected.
//   correct:    transmitted message is on the list
//   erasure:    empty list
//   undetected: transmitted message absent, list nonempty
// miss = erasure + undetected is the list-decoding erasure event.
struct Tally {
    std::uint64_t trials = 0;
    std::uint64_t correct = 0;
    std::uint64_t erasure = 0;
    std::uint64_t undetected = 0;
    std::uint64_t max_list = 0;
    std::uint64_t sum_ni = 0;   // wrong messages listed
    std::uint64_t sum_ni2 = 0;

    std::uint64_t miss() const { return erasure + undetected; }
    Tally& operator+=(const Tally& o);
    bool operator==(const Tally&) const = default;
};

struct Estimate {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
Estimate wilson(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);
Estimate mean_ci(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n, double z = 1.959963984540054);

struct BlockResult {
    int N = 0;
    std::uint64_t M = 0;
    double rate_eff = 0.0;
    Tally tally;
    Estimate erasure, undetected, miss, mean_ni;
};

struct SimResult {
    std::vector<BlockResult> blocks;
    // Exponents -slope of log2(estimate) vs N; NaN with fewer than 2 nonzero points.
    double exp_erasure = 0.0, exp_undetected = 0.0, exp_miss = 0.0, exp_ni = 0.0;
};

// Trial t at blocklength N draws from an RNG seeded by (seed, N, t) only, so
// results do not depend on the thread count.
Tally run_block(const SimConfig& cfg, int N, Exec exec = Exec::parallel);
SimResult run_experiment(const SimConfig& cfg, Exec exec = Exec::parallel);

std::uint64_t trial_seed(std::uint64_t seed, int N, std::uint64_t trial);
// Least-squares slope of ys on xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys);
// Least-squares slope of log2(values) on xs, skipping nonpositive values.
double log2_slope(const std::vector<double>& xs, const std::vector<double>& values);

// Monte Carlo estimate of Pr[I(x'; y) >= nu] with x' uniform on T_comp.
std::uint64_t mi_tail_count(const Composition& comp, const Sequence& y, int ny, double nu,
                            std::uint64_t draws, std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace fmmi::sim
