#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "obcs/core.hpp"
#include "obcs/ensembles.hpp"

// Probability kernels for the balancing-failure events: a subset's sum
// against one random vector either lands within the margin d (the small-ball
// event) or misses it (the single failure event E); F is the conjunction of
// m independent failures. Gaussian kernels are closed-form or quadrature,
// Rademacher kernels are exact dyadic rationals.

namespace obcs {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial_big(unsigned n, unsigned k);

// num / 2^den_pow2, kept unreduced; all Rademacher probabilities have this form.
struct ExactRational {
    BigInt num;
    unsigned den_pow2 = 0;

    double to_double() const;
    bool operator==(const ExactRational& other) const;
};

enum class ProbMethod { exact_rational, closed_form, quadrature, monte_carlo };

struct ProbabilityEstimate {
    double value = 0.0;
    double standard_error = 0.0;  // 0 for exact methods
    std::uint64_t trials = 0;     // 0 unless monte_carlo
    ProbMethod method = ProbMethod::closed_form;
    std::optional<ExactRational> exact;
};

// Bounds on Pr[|N(0,s^2)| <= delta*s]: sqrt(2/pi)*delta - delta^3/sqrt(2*pi)
// below, sqrt(2/pi)*delta above; requires 0 < delta < 1.
std::pair<double, double> gaussian_small_ball_bounds(double delta);

// Pr[|N(0,k)| <= d] = erf(d / sqrt(2k)).
ProbabilityEstimate gaussian_single_exact(int k, double d);

// Pr[|Z_s| <= d and |Z_t| <= d] for subset sums sharing beta*k coordinates;
// quadrature over the shared component, target relative error 1e-10.
// Requires beta*k integral.
ProbabilityEstimate gaussian_joint_exact(int k, double d, double beta);

// Pr[sum of k Rademachers = 0] = C(k, k/2) * 2^-k; k must be even.
ProbabilityEstimate rademacher_small_ball_exact(int k);

// Joint version with overlap beta*k (integral); k must be even.
ProbabilityEstimate rademacher_joint_exact(int k, double beta);

// Two-term Stirling approximation of C(2n, n): 4^n / sqrt(pi*n) * (1 - 1/(8n)).
double central_binomial_stirling(int n);
double log_central_binomial_stirling(int n);

struct FailureModel {
    int k = 1;
    double d = 0.0;
    int m = 0;
    Ensemble ensemble = Ensemble::gaussian;

    void validate() const {
        if (k < 1 || d < 0.0 || m < 0)
            throw std::invalid_argument("FailureModel: need k >= 1, d >= 0, m >= 0");
    }
};

// Monte Carlo estimate of Pr[F_s] (no overlap) or Pr_beta[F_s ∩ F_t]
// (overlap given), sampling m fresh vectors per trial.
ProbabilityEstimate mc_failure_prob(const FailureModel& model, std::optional<double> overlap_beta,
                                    const RngSpec& rng, std::uint64_t trials);

// de Caen's lower bound on Pr[union A_i] from individual probabilities p_i
// and pairwise intersection probabilities p_ij (with p_ii = p_i).
double decaen_lower_bound(const std::vector<double>& event_probs,
                          const std::vector<std::vector<double>>& pairwise_probs);

}  // namespace obcs
