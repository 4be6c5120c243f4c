#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "obcs/core.hpp"

// The (n, ell, d)-balancing problem: a family V is balanced if every size-ell
// coordinate subset S has some v in V with |sum_{i in S} v_i| <= d.
// Exhaustive checking, unbalanced-set search, and the reduction from an
// unbalanced subset to a confusable signal pair (an invalidity certificate).

namespace obcs {

struct BalanceSpec {
    int n = 0;
    int ell = 0;
    double d = 0.0;

    void validate() const {
        if (ell < 1 || ell > n)
            throw std::invalid_argument("BalanceSpec: need 1 <= ell <= n");
        if (d < 0.0)
            throw std::invalid_argument("BalanceSpec: need d >= 0");
    }
};

// x has value R on S and 1 at coordinate n-2 (0-based); y has value R on S
// and 1 at coordinate n-1. Different supports, both in X_k(R) with k = |S|+1.
struct WitnessPair {
    std::vector<int> S;  // 0-based, subset of [0, n-3]
    SparseSignal x;
    SparseSignal y;
    double R = 1.0;
    // True iff every row satisfies |R * sum_{j in S} a_ij| > max(|a_i,n-2|, |a_i,n-1|),
    // which forces sign_measure(A,x) == sign_measure(A,y).
    bool dominance_holds = false;
};

inline constexpr std::uint64_t kDefaultSubsetBudget = 100'000'000;

struct BalanceResult {
    bool balanced = true;
    std::optional<std::vector<int>> witness;  // lexicographically smallest violating S (0-based)
    std::uint64_t subsets_checked = 0;
};

BalanceResult is_balanced(const std::vector<std::vector<double>>& V, const BalanceSpec& spec,
                          std::uint64_t budget = kDefaultSubsetBudget);

// Violating subsets up to `limit`, lexicographic order; empty iff balanced.
std::vector<std::vector<int>> find_unbalanced_sets(const std::vector<std::vector<double>>& V,
                                                   const BalanceSpec& spec, std::size_t limit,
                                                   std::uint64_t budget = kDefaultSubsetBudget);

WitnessPair build_witness_pair(const MeasurementMatrix& A, const std::vector<int>& S, double R);

// True iff |a_ij| <= sqrt(4 log m) for all rows i and the last two columns j.
bool column_tail_check(const MeasurementMatrix& A);

struct PipelineResult {
    std::optional<WitnessPair> certificate;
    bool tail_check_passed = false;
    double d_used = 0.0;
    std::uint64_t subsets_checked = 0;
};

// Forms the balancing instance from A per its ensemble, searches for an
// unbalanced subset whose rows also satisfy the dominance condition, and
// returns a verified confusable pair if one exists. A missing certificate
// does NOT assert validity.
PipelineResult invalidity_pipeline(const MeasurementMatrix& A, int k, double R,
                                   std::uint64_t budget = kDefaultSubsetBudget);

}  // namespace obcs
