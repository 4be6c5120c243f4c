#include "obcs/bounds.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

namespace obcs {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_big(const BigInt& v) {
    return boost::multiprecision::log(BigFloat(v)).convert_to<double>();
}

// log(sum exp(terms)) with the max trick; -inf terms are skipped.
double log_sum_exp(const std::vector<double>& terms) {
    double peak = kNegInf;
    for (double t : terms) peak = std::max(peak, t);
    if (peak == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double t : terms)
        if (t != kNegInf) acc += std::exp(t - peak);
    return peak + std::log(acc);
}

// Single- and joint-event small-ball probabilities for the parameter set.
double p_single(const BoundParams& params) {
    if (params.ensemble == Ensemble::gaussian)
        return gaussian_single_exact(params.k, params.d).value;
    return rademacher_small_ball_exact(params.k).value;
}

double p_joint(const BoundParams& params, double beta) {
    if (params.ensemble == Ensemble::gaussian)
        return gaussian_joint_exact(params.k, params.d, beta).value;
    return rademacher_joint_exact(params.k, beta).value;
}

// log Pr_beta[F_s ∩ F_t] = m log(1 - 2p + p_joint) by row independence and
// inclusion-exclusion within each row.
double log_joint_failure(const BoundParams& params, double beta, double p) {
    const double pj = p_joint(params, beta);
    return params.m * std::log1p(-2.0 * p + pj);
}

int beta_to_overlap(int k, double beta, const char* who) {
    const double bk = beta * k;
    const double rounded = std::round(bk);
    if (beta < 0.0 || beta > 1.0 || std::abs(bk - rounded) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": beta*k must be an integer in [0,k]");
    return static_cast<int>(rounded);
}

}  // namespace

void BoundParams::validate() const {
    if (n < 1 || k < 1 || k > n || m < 0)
        throw std::invalid_argument("BoundParams: need 1 <= k <= n, m >= 0");
    if (!(epsilon > 0.0 && epsilon < 2.0 / 3.0))
        throw std::invalid_argument("BoundParams: need epsilon in (0, 2/3)");
    if (d < 0.0 || R < 1.0)
        throw std::invalid_argument("BoundParams: need d >= 0, R >= 1");
    if (ensemble == Ensemble::rademacher) {
        if (k % 2 != 0)
            throw std::invalid_argument("BoundParams: rademacher kernels need even k");
        if (d >= 2.0)
            throw std::invalid_argument(
                "BoundParams: rademacher exact kernels cover d < 2 (|sum| <= d means sum = 0)");
    }
}

double BoundParams::k_tilde() const {
    if (ensemble == Ensemble::rademacher) return static_cast<double>(k);
    return static_cast<double>(k) / (d * d);
}

double BoundParams::beta_cut() const { return 1.0 / std::sqrt(k_tilde()); }

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("log_binomial: need 0 <= k <= n");
    if (n <= 60)
        return log_big(binomial_big(static_cast<unsigned>(n), static_cast<unsigned>(k)));
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: need p in [0,1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

AlphaBound eval_log_alpha_lower(const BoundParams& params) {
    params.validate();
    AlphaBound out;
    out.r = params.r();
    if (out.r >= 0.5)
        throw std::invalid_argument("eval_log_alpha_lower: need r < 1/2 (d too large for k)");
    const double log_c = log_binomial(params.n, params.k);
    out.explicit_form = log_c + params.m * std::log1p(-2.0 * out.r + out.r * out.r);
    out.loose_form = log_c - 2.0 * params.m * out.r - 2.0 * params.m * out.r * out.r;
    return out;
}

VBetaResult eval_log_vbeta_upper(const BoundParams& params, double beta) {
    params.validate();
    const int t = beta_to_overlap(params.k, beta, "eval_log_vbeta_upper");
    const int l = params.k - t;  // (1 - beta) k

    VBetaResult out;
    out.beta = beta;

    const double p = p_single(params);
    if (l > params.n - params.k) {
        out.log_exact = kNegInf;  // no x_t with this overlap exists
    } else {
        out.log_exact = log_binomial(params.k, l) + log_binomial(params.n - params.k, l) +
                        log_joint_failure(params, beta, p);
    }

    out.bound_applicable = (beta <= 0.9);
    if (out.bound_applicable && l <= params.n - params.k) {
        const double kt = params.k_tilde();
        out.log_bound = (1.0 + params.epsilon) * params.k * binary_entropy(beta) +
                        log_binomial(params.n - params.k, l) - 2.0 * params.m * params.r() +
                        params.constants.big_C * params.m / kt;
    } else {
        out.log_bound = std::numeric_limits<double>::quiet_NaN();
        out.bound_applicable = false;
    }
    return out;
}

PartitionSums eval_partition_sums(const BoundParams& params) {
    params.validate();
    const double cut = params.beta_cut();
    const double p = p_single(params);

    std::vector<double> terms_a, terms_b, terms_c, all;
    for (int t = 0; t <= params.k; ++t) {
        const double beta = static_cast<double>(t) / params.k;
        const int l = params.k - t;
        if (l > params.n - params.k) continue;
        const double log_v = log_binomial(params.k, l) + log_binomial(params.n - params.k, l) +
                             log_joint_failure(params, beta, p);
        all.push_back(log_v);
        if (beta <= cut)
            terms_a.push_back(log_v);
        else if (beta <= 0.9)
            terms_b.push_back(log_v);
        else
            terms_c.push_back(log_v);
    }

    PartitionSums sums;
    sums.log_A = log_sum_exp(terms_a);
    sums.log_B = log_sum_exp(terms_b);
    sums.log_C = log_sum_exp(terms_c);
    sums.log_total = log_sum_exp(all);
    return sums;
}

BoundEvaluation union_failure_lower_bound(const BoundParams& params) {
    params.validate();
    BoundEvaluation eval;

    const double p = p_single(params);
    eval.log_alpha_exact = log_binomial(params.n, params.k) + 2.0 * params.m * std::log1p(-p);
    if (params.r() < 0.5) {
        eval.log_alpha_lower = eval_log_alpha_lower(params).explicit_form;
    } else {
        eval.log_alpha_lower = std::numeric_limits<double>::quiet_NaN();
    }

    for (int t = 0; t <= params.k; ++t)
        eval.vbeta_table.push_back(
            eval_log_vbeta_upper(params, static_cast<double>(t) / params.k));

    eval.sums = eval_partition_sums(params);

    if (params.m == 0) {
        // all probability factors are exactly 1; the partition sum collapses
        // to the Vandermonde identity sum_l C(k,l) C(n-k,l) = C(n,k)
        eval.decaen_value = 1.0;
    } else {
        eval.decaen_value =
            std::clamp(std::exp(eval.log_alpha_exact - eval.sums.log_total), 0.0, 1.0);
    }

    // admissibility ledger (reported, never thrown)
    auto add_check = [&](const std::string& name, double lhs, double rhs, bool pass) {
        eval.admissibility.push_back({name, pass, lhs, rhs});
    };
    const double n = params.n, k = params.k, eps = params.epsilon;
    add_check("k <= n^(2/3 - eps)", k, std::pow(n, 2.0 / 3.0 - eps),
              k <= std::pow(n, 2.0 / 3.0 - eps));
    add_check("r < 1/2", params.r(), 0.5, params.r() < 0.5);
    if (params.m >= 2) {
        const double tail = std::sqrt(4.0 * std::log(static_cast<double>(params.m)));
        const double lower1 =
            std::pow(4.0, 1.0 / (1.0 + eps)) * std::pow(k, 1.5) / std::pow(n, 1.0 / (1.0 + eps));
        const double lower2 = std::pow(k, eps - 0.5) * tail;
        add_check("d >= 4^(1/(1+eps)) k^1.5 / n^(1/(1+eps))", params.d, lower1, params.d >= lower1);
        add_check("d >= k^(eps-0.5) sqrt(4 log m)", params.d, lower2, params.d >= lower2);
        add_check("d <= sqrt(4 log m)", params.d, tail, params.d <= tail);
        const double lemmad_lhs = std::pow(tail / params.R, 1.0 + eps);
        const double lemmad_rhs = 4.0 * std::pow(k, 1.5 * (1.0 + eps)) / n;
        add_check("(sqrt(4 log m)/R)^(1+eps) >= 4 k^(1.5(1+eps))/n", lemmad_lhs, lemmad_rhs,
                  lemmad_lhs >= lemmad_rhs);
    }
    add_check("R <= n^(0.5 eps)", params.R, std::pow(n, 0.5 * eps),
              params.R <= std::pow(n, 0.5 * eps));
    const auto monotone = check_f_monotone(params);
    add_check("f monotone on [cut, 0.9]", monotone.pass ? 1.0 : 0.0, 1.0, monotone.pass);
    return eval;
}

double f_beta(const BoundParams& params, double beta) {
    params.validate();
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("f_beta: need beta in [0,1]");
    const double n = params.n, k = params.k;
    return beta * k * std::log((n - k) / k) - (1.0 + params.epsilon) * k * binary_entropy(beta);
}

double f_beta_derivative(const BoundParams& params, double beta) {
    params.validate();
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("f_beta_derivative: need beta in [0,1]");
    if (beta == 0.0) return kNegInf;
    if (beta == 1.0) return std::numeric_limits<double>::infinity();
    const double n = params.n, k = params.k;
    return k * (std::log((n - k) / k) + (1.0 + params.epsilon) * std::log(beta / (1.0 - beta)));
}

MonotoneReport check_f_monotone(const BoundParams& params) {
    params.validate();
    MonotoneReport report;

    const double eps = params.epsilon;
    const double n = params.n, k = params.k;
    if (params.ensemble == Ensemble::rademacher) {
        report.admissible = (k <= std::pow(n, 2.0 / 3.0 - eps));
        if (!report.admissible) report.note = "k > n^(2/3 - eps)";
    } else {
        bool ok = k <= std::pow(n, 2.0 / 3.0 - eps);
        if (params.m >= 2) {
            const double tail = std::sqrt(4.0 * std::log(static_cast<double>(params.m)));
            const double lower1 = std::pow(4.0, 1.0 / (1.0 + eps)) * std::pow(k, 1.5) /
                                  std::pow(n, 1.0 / (1.0 + eps));
            const double lower2 = std::pow(k, eps - 0.5) * tail;
            ok = ok && params.d >= lower1 && params.d >= lower2 && params.d <= tail;
        } else {
            ok = false;
        }
        report.admissible = ok;
        if (!ok) report.note = "d outside the admissible range (or m < 2)";
    }
    if (!report.admissible) return report;

    const double cut = params.beta_cut();
    const bool strict = (params.ensemble == Ensemble::gaussian);
    report.pass = true;
    for (int t = 0; t <= params.k; ++t) {
        const double beta = static_cast<double>(t) / params.k;
        if (beta < cut || beta > 0.9) continue;
        if (beta == 0.0 || beta == 1.0) continue;
        ++report.points_checked;
        const double deriv = f_beta_derivative(params, beta);
        if (strict ? !(deriv > 0.0) : !(deriv >= 0.0)) {
            report.pass = false;
            report.note = "derivative non-positive at beta = " + std::to_string(beta);
            return report;
        }
    }
    if (report.points_checked == 0) {
        report.pass = true;
        report.note = "no well-defined beta in range: vacuous pass";
    }
    return report;
}

ThresholdReport m_thresholds(int n, int k, double R, double epsilon,
                             const BoundConstants& constants) {
    if (k < 2 || n <= k) throw std::invalid_argument("m_thresholds: need k >= 2, n > k");
    ThresholdReport report;
    const double logk = std::log(static_cast<double>(k));
    report.lower_threshold =
        constants.c * R * std::pow(k / logk, 1.5) * std::min(R * R, logk * logk);
    report.upper_threshold =
        constants.big_C * R * std::pow(static_cast<double>(k), 1.5) * std::log(static_cast<double>(n));
    if (report.lower_threshold > 1.0) {
        report.induced_d = std::sqrt(4.0 * std::log(report.lower_threshold)) / R;
    } else {
        report.induced_d = std::numeric_limits<double>::quiet_NaN();
    }

    auto add = [&](const std::string& name, double lhs, double rhs) {
        report.assumptions.push_back({name, lhs <= rhs, lhs, rhs});
    };
    add("k <= n^(2/3 - eps)", k, std::pow(static_cast<double>(n), 2.0 / 3.0 - epsilon));
    add("R <= n^(0.5 eps)", R, std::pow(static_cast<double>(n), 0.5 * epsilon));
    add("R <= k^(0.5 - eps)", R, std::pow(static_cast<double>(k), 0.5 - epsilon));
    if (report.lower_threshold > 1.0) {
        const double tail = std::sqrt(4.0 * std::log(report.lower_threshold));
        const double lhs = 4.0 * std::pow(static_cast<double>(k), 1.5 * (1.0 + epsilon)) / n;
        report.assumptions.push_back({"(sqrt(4 log m)/R)^(1+eps) >= 4 k^(1.5(1+eps))/n",
                                      std::pow(tail / R, 1.0 + epsilon) >= lhs,
                                      std::pow(tail / R, 1.0 + epsilon), lhs});
    }
    return report;
}

LogDiffBinomial log_diff_binomial_lower(int n, int k, double beta) {
    if (n <= 2 * k) throw std::invalid_argument("log_diff_binomial_lower: need n > 2k");
    const int t = beta_to_overlap(k, beta, "log_diff_binomial_lower");
    const int l = k - t;

    LogDiffBinomial out;
    out.lhs = log_binomial(n, k) - log_binomial(n - k, l);
    out.rhs = t * std::log(static_cast<double>(n - k) / k);

    if (n <= 60) {
        // exact integer comparison: C(n,k) k^t >= C(n-k,l) (n-k)^t
        BigInt left = binomial_big(static_cast<unsigned>(n), static_cast<unsigned>(k));
        BigInt right = binomial_big(static_cast<unsigned>(n - k), static_cast<unsigned>(l));
        for (int i = 0; i < t; ++i) {
            left *= k;
            right *= n - k;
        }
        out.holds = (left >= right);
    } else {
        out.holds = (out.lhs >= out.rhs - 1e-9 * std::max(1.0, std::abs(out.rhs)));
    }
    return out;
}

}  // namespace obcs
