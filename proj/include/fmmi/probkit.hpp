// probkit.hpp
//
// Finite-alphabet probability helpers and method-of-types machinery.
// All logarithms are base 2.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace fmmi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Sequence = std::vector<int>;
using Rng = std::mt19937_64;

// Thrown when an enumeration or allocation would exceed a hard guard.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver fails to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Pmf {
public:
    Pmf() = default;
    // Renormalizes; rejects negative entries or total mass off by > 1e-6.
    explicit Pmf(std::vector<double> p);

    static Pmf uniform(int n);
    static Pmf point(int n, int k);

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

private:
    std::vector<double> p_;
};

class Channel {
public:
    Channel() = default;
    explicit Channel(std::vector<std::vector<double>> rows);

    static Channel bsc(double rho);
    static Channel identity(int n);

    int inputs() const { return static_cast<int>(rows_.size()); }
    int outputs() const { return rows_.empty() ? 0 : rows_[0].size(); }
    const Pmf& row(int x) const { return rows_[x]; }
    double operator()(int x, int y) const { return rows_[x][y]; }

private:
    std::vector<Pmf> rows_;
};

struct Composition {
    std::vector<int> counts;

    int length() const;
    Pmf pmf() const;
    // Truncate each N·p(x) down, then hand the remainder to the largest deficits.
    static Composition closest(const Pmf& p, int N);
};

struct JointType {
    int N = 0;
    std::vector<std::vector<int>> counts;  // [x][y]

    std::vector<double> joint() const;     // row-major |X|·|Y|
    Pmf x_marginal() const;
    Pmf y_marginal() const;
    double mutual_information() const;
    double conditional_entropy_y_given_x() const;
};

double entropy(const Pmf& p);
double entropy(const std::vector<double>& p);  // unnormalized masses allowed to sum to 1
double kl_divergence(const Pmf& q, const Pmf& p);
double mutual_information(const Pmf& pX, const Channel& ch);
Pmf output_distribution(const Pmf& pX, const Channel& ch);
double conditional_kl(const Channel& q, const Channel& p, const Pmf& pX);

JointType joint_type(const Sequence& x, const Sequence& y, int nx, int ny);
double empirical_mi(const Sequence& x, const Sequence& y, int nx, int ny);

Sequence sample_type_class(const Composition& comp, Rng& rng);

// Multinomial coefficient N!/prod n_x! as a double.
double type_class_size(const Composition& comp);
double log2_type_class_size(const Composition& comp);

// Number of conditional count matrices with row sums comp.counts.
double conditional_type_count(const Composition& comp, int out_size);

inline constexpr double kEnumerationGuard = 1e7;

// Calls fn(counts) for every |X|×|Y| count matrix with row x summing to
// comp.counts[x]. Returns the number visited.
std::uint64_t enumerate_conditional_types(
    const Composition& comp, int out_size,
    const std::function<void(const std::vector<std::vector<int>>&)>& fn);

// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace fmmi
