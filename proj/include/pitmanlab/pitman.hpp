#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pitmanlab/distribution.hpp"
#include "pitmanlab/mc.hpp"
#include "pitmanlab/rng.hpp"
#include "pitmanlab/sample.hpp"

namespace pitmanlab {

// --- point evaluation --------------------------------------------------------
//
// All evaluators compute t(x) = xbar - E(xbar | residuals), each through a
// different route: posterior-mean quadrature, registered closed forms, or
// exact summation over the lattice shift class.

double pitman_quadrature(const DistributionSpec& spec, const Sample& sample);
std::optional<double> pitman_closed(const DistributionSpec& spec, const Sample& sample);
double pitman_discrete(const DistributionSpec& lattice_spec, const Sample& sample);
// Dispatch: lattice -> discrete, registered closed form, else quadrature.
double pitman_evaluate(const DistributionSpec& spec, const Sample& sample);
// Pooled estimator for per-observation populations (all density-capable or
// all lattices); specs.size() must equal the sample size.
double pitman_pooled(const std::vector<DistributionSpec>& per_obs_specs, const Sample& sample);
// Componentwise evaluation for product populations; full shift-class
// enumeration for s-variate lattices.
Eigen::VectorXd pitman_multivariate(const DistributionSpec& spec, const Sample& sample);
// Score-based equivariant estimator xbar - (1/(n I)) sum J(x_i - xbar).
double score_estimator(const DistributionSpec& spec, const Sample& sample);

// --- variances ---------------------------------------------------------------

struct EnumerationDetail {
    double var_t = 0.0;
    double var_cond_mean = 0.0; // var E(xbar|R)
    double sigma2 = 0.0;
    double identity_gap = 0.0; // var_t - (sigma2/n - var_cond_mean)
};

// Exact variance over all size-n samples from a finite lattice. Enumerates
// sorted support multisets with multinomial weights (t is symmetric), guarded
// at 2e7 multisets.
VarianceEstimate pitman_variance_exact(const DistributionSpec& lattice_spec, std::size_t n,
                                       EnumerationDetail* detail = nullptr);

VarianceEstimate pitman_variance_mc(const DistributionSpec& spec, std::size_t n,
                                    std::int64_t reps, const SeededStream& stream);

// Closed form where registered (Gaussian: sigma^2/n).
std::optional<double> pitman_variance_closed(const DistributionSpec& spec, std::size_t n);

// Route automatically: closed form, exact enumeration, else Monte Carlo.
VarianceEstimate pitman_variance(const DistributionSpec& spec, std::size_t n, std::int64_t reps,
                                 const SeededStream& stream);
bool has_exact_variance_path(const DistributionSpec& spec, std::size_t n);

// Covariance-matrix versions for s-variate populations.
CovarianceEstimate pitman_covariance_exact(const DistributionSpec& lattice_spec, std::size_t n);
std::optional<Eigen::MatrixXd> pitman_covariance_closed(const DistributionSpec& spec,
                                                        std::size_t n);
CovarianceEstimate pitman_covariance(const DistributionSpec& spec, std::size_t n,
                                     std::int64_t reps, const SeededStream& stream);

// --- closed-form variance candidates ------------------------------------------
//
// Two closed forms circulate for the uniform and exponential populations; the
// lab keeps both and lets enumeration / Monte Carlo arbitrate (see the
// uniform_variance_oracles experiment).

// Midrange variance from the joint density of (min, max): (b-a)^2/(2(n+1)(n+2)).
double uniform_midrange_variance(double a, double b, std::size_t n);
// Alternate published closed form for n*var on Uniform(-1,1): 4n^2/((n+1)^2(n+2)).
double uniform_nvar_alt(std::size_t n);
// var(x_(1) - scale/n) = (scale/n)^2 from the minimum of n exponentials.
double exponential_min_variance(double scale, std::size_t n);
// Alternate published closed form for n*var: 2*scale*n/((n+1)(n+2)).
double exponential_nvar_alt(double scale, std::size_t n);

} // namespace pitmanlab
