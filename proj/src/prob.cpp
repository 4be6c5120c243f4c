#include "obcs/prob.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

namespace obcs {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)
constexpr double kInvSqrt2Pi = 0.39894228040143267794;   // 1/sqrt(2*pi)

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

int beta_to_int(int k, double beta, const char* who) {
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument(std::string(who) + ": need beta in [0,1]");
    const double bk = beta * k;
    const double rounded = std::round(bk);
    if (std::abs(bk - rounded) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": beta*k must be a nonnegative integer");
    return static_cast<int>(rounded);
}

// Adaptive Gauss-Legendre: 15-point rule per panel, bisecting until the
// two-half refinement agrees with the parent panel.
const double kGL15Nodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
const double kGL15Weights[15] = {
    0.03075324199611727, 0.07036604748810812, 0.10715922046717194, 0.13957067792615432,
    0.16626920581699392, 0.18616100001556221, 0.19843148532711158, 0.20257824192556127,
    0.19843148532711158, 0.18616100001556221, 0.16626920581699392, 0.13957067792615432,
    0.10715922046717194, 0.07036604748810812, 0.03075324199611727};

template <typename F>
double gl15(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (int i = 0; i < 15; ++i) acc += kGL15Weights[i] * f(mid + half * kGL15Nodes[i]);
    return acc * half;
}

template <typename F>
double adaptive_gl(const F& f, double a, double b, double whole, double abs_tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    if (depth > 48 || std::abs(left + right - whole) <= abs_tol) return left + right;
    return adaptive_gl(f, a, mid, left, 0.5 * abs_tol, depth + 1) +
           adaptive_gl(f, mid, b, right, 0.5 * abs_tol, depth + 1);
}

}  // namespace

BigInt binomial_big(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

double ExactRational::to_double() const {
    BigFloat f(num);
    f = boost::multiprecision::ldexp(f, -static_cast<int>(den_pow2));
    return f.convert_to<double>();
}

bool ExactRational::operator==(const ExactRational& other) const {
    // cross-multiply; representations are unreduced
    return num * (BigInt(1) << other.den_pow2) == other.num * (BigInt(1) << den_pow2);
}

std::pair<double, double> gaussian_small_ball_bounds(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("gaussian_small_ball_bounds: need delta in (0,1)");
    const double upper = kSqrt2OverPi * delta;
    const double lower = upper - delta * delta * delta * kInvSqrt2Pi;
    return {lower, upper};
}

ProbabilityEstimate gaussian_single_exact(int k, double d) {
    if (k < 1 || d < 0.0)
        throw std::invalid_argument("gaussian_single_exact: need k >= 1, d >= 0");
    ProbabilityEstimate p;
    p.method = ProbMethod::closed_form;
    p.value = std::erf(d / std::sqrt(2.0 * k));
    return p;
}

ProbabilityEstimate gaussian_joint_exact(int k, double d, double beta) {
    if (k < 1 || d < 0.0)
        throw std::invalid_argument("gaussian_joint_exact: need k >= 1, d >= 0");
    const int bk = beta_to_int(k, beta, "gaussian_joint_exact");

    if (bk == 0) {
        auto single = gaussian_single_exact(k, d);
        single.value *= single.value;
        return single;
    }
    if (bk == k) return gaussian_single_exact(k, d);
    if (d == 0.0) {
        ProbabilityEstimate p;
        p.method = ProbMethod::quadrature;
        return p;
    }

    // shared component Z ~ N(0, beta*k); each exclusive sum ~ N(0, k - beta*k)
    const double shared_sd = std::sqrt(static_cast<double>(bk));
    const double excl_sd = std::sqrt(static_cast<double>(k - bk));
    const auto integrand = [&](double z) {
        const double density = kInvSqrt2Pi / shared_sd * std::exp(-0.5 * (z / shared_sd) * (z / shared_sd));
        const double q = normal_cdf((-z + d) / excl_sd) - normal_cdf((-z - d) / excl_sd);
        return density * q * q;
    };
    // integrand is even in z; tails beyond 12 shared standard deviations are negligible
    const double limit = 12.0 * shared_sd;
    const double whole = gl15(integrand, 0.0, limit);
    const double value = 2.0 * adaptive_gl(integrand, 0.0, limit, whole, 1e-10 * std::abs(whole), 0);

    ProbabilityEstimate p;
    p.method = ProbMethod::quadrature;
    p.value = value;
    return p;
}

ProbabilityEstimate rademacher_small_ball_exact(int k) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("rademacher_small_ball_exact: k must be even and >= 2");
    ProbabilityEstimate p;
    p.method = ProbMethod::exact_rational;
    p.exact = ExactRational{binomial_big(static_cast<unsigned>(k), static_cast<unsigned>(k / 2)),
                            static_cast<unsigned>(k)};
    p.value = p.exact->to_double();
    return p;
}

ProbabilityEstimate rademacher_joint_exact(int k, double beta) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("rademacher_joint_exact: k must be even and >= 2");
    const int dd = beta_to_int(k, beta, "rademacher_joint_exact");

    // sum over i = number of +1s in the shared region:
    //   C(dd, i) 2^-dd * (C(k-dd, k/2-i) 2^-(k-dd))^2
    BigInt num = 0;
    for (int i = 0; i <= dd; ++i) {
        const int need = k / 2 - i;
        if (need < 0 || need > k - dd) continue;
        const BigInt excl = binomial_big(static_cast<unsigned>(k - dd), static_cast<unsigned>(need));
        num += binomial_big(static_cast<unsigned>(dd), static_cast<unsigned>(i)) * excl * excl;
    }
    ProbabilityEstimate p;
    p.method = ProbMethod::exact_rational;
    p.exact = ExactRational{num, static_cast<unsigned>(2 * k - dd)};
    p.value = p.exact->to_double();
    return p;
}

double log_central_binomial_stirling(int n) {
    if (n < 1) throw std::invalid_argument("central_binomial_stirling: need n >= 1");
    return n * std::log(4.0) - 0.5 * std::log(std::numbers::pi * n) + std::log1p(-1.0 / (8.0 * n));
}

double central_binomial_stirling(int n) { return std::exp(log_central_binomial_stirling(n)); }

ProbabilityEstimate mc_failure_prob(const FailureModel& model, std::optional<double> overlap_beta,
                                    const RngSpec& rng, std::uint64_t trials) {
    model.validate();
    if (trials < 1) throw std::invalid_argument("mc_failure_prob: need trials >= 1");

    const int k = model.k;
    int bk = 0;
    if (overlap_beta) bk = beta_to_int(k, *overlap_beta, "mc_failure_prob");
    const bool gaussian = (model.ensemble == Ensemble::gaussian);
    const double shared_sd = std::sqrt(static_cast<double>(bk));
    const double excl_sd = std::sqrt(static_cast<double>(k - bk));

    auto rademacher_sum = [](SplitMix64& g, int count) {
        int s = 0;
        for (int i = 0; i < count; ++i) s += g.next_rademacher();
        return static_cast<double>(s);
    };

    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 g(derive_substream(rng, t));
        bool fs = true;
        bool ft = true;
        for (int i = 0; i < model.m && (fs && ft); ++i) {
            if (!overlap_beta) {
                const double sum = gaussian ? excl_sd * g.next_gaussian() : rademacher_sum(g, k);
                if (std::abs(sum) <= model.d) fs = false;
            } else {
                const double shared =
                    gaussian ? shared_sd * g.next_gaussian() : rademacher_sum(g, bk);
                const double xs = gaussian ? excl_sd * g.next_gaussian() : rademacher_sum(g, k - bk);
                const double xt = gaussian ? excl_sd * g.next_gaussian() : rademacher_sum(g, k - bk);
                if (std::abs(shared + xs) <= model.d) fs = false;
                if (std::abs(shared + xt) <= model.d) ft = false;
            }
        }
        if (fs && ft) ++successes;
    }

    ProbabilityEstimate p;
    p.method = ProbMethod::monte_carlo;
    p.trials = trials;
    p.value = static_cast<double>(successes) / static_cast<double>(trials);
    p.standard_error = std::sqrt(p.value * (1.0 - p.value) / static_cast<double>(trials));
    return p;
}

double decaen_lower_bound(const std::vector<double>& event_probs,
                          const std::vector<std::vector<double>>& pairwise_probs) {
    const std::size_t n = event_probs.size();
    if (pairwise_probs.size() != n)
        throw std::invalid_argument("decaen_lower_bound: matrix row count != event count");
    for (std::size_t i = 0; i < n; ++i) {
        if (pairwise_probs[i].size() != n)
            throw std::invalid_argument("decaen_lower_bound: matrix must be square");
        if (event_probs[i] < 0.0 || event_probs[i] > 1.0)
            throw std::invalid_argument("decaen_lower_bound: probability out of [0,1]");
        for (std::size_t j = 0; j < n; ++j) {
            const double cap = std::min(event_probs[i], event_probs[j]);
            if (pairwise_probs[i][j] < 0.0 || pairwise_probs[i][j] > cap + 1e-12)
                throw std::invalid_argument(
                    "decaen_lower_bound: p_ij must lie in [0, min(p_i, p_j)]");
        }
    }

    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (event_probs[i] == 0.0) continue;  // zero-probability events contribute nothing
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) denom += pairwise_probs[i][j];
        bound += event_probs[i] * event_probs[i] / denom;
    }
    return bound;
}

}  // namespace obcs
