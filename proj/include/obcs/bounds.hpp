#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "obcs/core.hpp"
#include "obcs/prob.hpp"

// Bound-evaluation machinery for the union-of-failures argument: the alpha
// numerator, the per-overlap v_beta terms, their A/B/C partition by overlap
// fraction, the assembled de Caen lower bound, and the m/d threshold and
// admissibility formulas. Every asymptotic O(.) is instantiated with a named
// configurable constant; exact quantities and bound forms are reported side
// by side.

namespace obcs {

struct BoundConstants {
    double c = 1.0;             // lower-bound threshold constant
    double c_prime = 1.0;       // intermediate m-condition constant
    double c_doubleprime = 1.0; // final m-condition constant
    double big_C = 1.0;         // instantiates O(m/k_tilde) style terms
};

struct BoundParams {
    int n = 0;
    int k = 0;
    int m = 0;
    double d = 0.0;
    double epsilon = 0.1;  // must lie in (0, 2/3)
    double R = 1.0;
    Ensemble ensemble = Ensemble::gaussian;
    BoundConstants constants;

    void validate() const;
    // k_tilde = k / d^2 for Gaussian; simplifies to k for Rademacher.
    double k_tilde() const;
    double r() const { return std::sqrt(2.0 / (std::numbers::pi * k_tilde())); }
    // A/B cut: k_tilde^-0.5 (Gaussian) or k^-0.5 (Rademacher).
    double beta_cut() const;
};

// log C(n,k); exact big-integer path for n <= 60, log-gamma otherwise.
double log_binomial(int n, int k);

// H2(p) in nats, with 0 log(1/0) := 0.
double binary_entropy(double p);

struct AdmissibilityCheck {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct AlphaBound {
    double explicit_form = 0.0;  // log C(n,k) + m log(1 - 2r + r^2)
    double loose_form = 0.0;     // log C(n,k) - 2mr - 2mr^2
    double r = 0.0;
};

// Requires r < 1/2 (throws otherwise: d too large relative to k).
AlphaBound eval_log_alpha_lower(const BoundParams& params);

struct VBetaResult {
    double beta = 0.0;
    double log_exact = 0.0;        // -inf when the overlap count is zero
    double log_bound = 0.0;        // closed-form upper bound (beta <= 0.9 only)
    bool bound_applicable = false;
};

VBetaResult eval_log_vbeta_upper(const BoundParams& params, double beta);

struct PartitionSums {
    double log_A = 0.0;
    double log_B = 0.0;
    double log_C = 0.0;
    double log_total = 0.0;
};

// Log-domain sums of the EXACT v_beta terms over the three overlap ranges;
// a beta landing on a cut belongs to the lower range only.
PartitionSums eval_partition_sums(const BoundParams& params);

struct BoundEvaluation {
    double log_alpha_exact = 0.0;
    double log_alpha_lower = 0.0;  // NaN when r >= 1/2
    std::vector<VBetaResult> vbeta_table;
    PartitionSums sums;
    double decaen_value = 0.0;  // clamped to [0,1]
    std::vector<AdmissibilityCheck> admissibility;
};

BoundEvaluation union_failure_lower_bound(const BoundParams& params);

double f_beta(const BoundParams& params, double beta);
// Signed infinity at beta in {0, 1}.
double f_beta_derivative(const BoundParams& params, double beta);

struct MonotoneReport {
    bool admissible = false;
    bool pass = false;
    int points_checked = 0;
    std::string note;
};

MonotoneReport check_f_monotone(const BoundParams& params);

struct ThresholdReport {
    double lower_threshold = 0.0;  // c R (k/log k)^1.5 min(R^2, log^2 k)
    double upper_threshold = 0.0;  // C R k^1.5 log n
    double induced_d = 0.0;        // sqrt(4 log m)/R at m = lower_threshold
    std::vector<AdmissibilityCheck> assumptions;
};

ThresholdReport m_thresholds(int n, int k, double R, double epsilon,
                             const BoundConstants& constants = {});

struct LogDiffBinomial {
    double lhs = 0.0;  // log C(n,k) - log C(n-k,(1-beta)k)
    double rhs = 0.0;  // beta k log((n-k)/k)
    bool holds = false;
};

// Requires beta*k integral and n > 2k; exact big-integer verification for
// n <= 60.
LogDiffBinomial log_diff_binomial_lower(int n, int k, double beta);

}  // namespace obcs
