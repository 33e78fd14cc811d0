// bsc.hpp
//
// Closed-form theory for the binary symmetric channel with uniform input,
// in the mu = 1/rho - 1 parameterization.

#pragma once

#include <optional>

namespace fmmi::bsc {

double h2(double x);
// Inverse on [0, 1/2], bisection to 1e-12.
double h2_inv(double y);

double capacity(double rho);
double mu_of(double rho);
double rho_R(double R);
double mu_R(double R);
// Rate whose rho_R equals 1/(1+mu).
double rate_of_mu(double mu);

double esp_bsc(double R, double rho);
// Derivative dE/dR, i.e. -log(mu/mu_R)/log(mu_R). -inf at R = 0, 0 at capacity.
double esp_prime_bsc(double R, double rho);
// Rate with slope -1, from mu_R = sqrt(mu).
double rcr_bsc(double rho);

std::optional<double> conjugate_bsc(double R, double rho);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return lo > hi; }
};

struct UniversalityRegion {
    double R = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    Interval delta_range;
    bool nonempty = false;

    // Lambda interval at a given Delta; hi may be +inf.
    Interval lambda_range(double delta) const;
    double lambda_opt(double delta) const;
    bool lambda_nonempty(double delta) const;
};

UniversalityRegion universality_region_bsc(double R, double rho_min, double rho_max);

}  // namespace fmmi::bsc
