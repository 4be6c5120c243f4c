#include "obcs/balance.hpp"

#include <algorithm>
#include <cmath>

namespace obcs {

namespace {

// Lexicographic enumeration of size-ell subsets with incrementally maintained
// subset sums (one per vector in V). Advancing the combination touches an
// amortized O(1) suffix of positions, so each step costs O(|V|) on average.
// The visitor sees (indices, sums) and returns false to stop early.
template <typename Visitor>
std::uint64_t enumerate_subset_sums(const std::vector<std::vector<double>>& V, int n, int ell,
                                    std::uint64_t budget, Visitor&& visit) {
    const std::size_t mv = V.size();
    std::vector<int> idx(static_cast<std::size_t>(ell));
    std::vector<double> sums(mv, 0.0);
    for (int p = 0; p < ell; ++p) idx[static_cast<std::size_t>(p)] = p;
    for (std::size_t v = 0; v < mv; ++v)
        for (int p = 0; p < ell; ++p) sums[v] += V[v][static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])];

    std::uint64_t checked = 0;
    while (true) {
        if (checked >= budget)
            throw BudgetExceeded("subset enumeration budget exceeded after " +
                                 std::to_string(checked) + " subsets");
        ++checked;
        if (!visit(idx, sums)) return checked;

        // advance to the next combination in lex order
        int p = ell - 1;
        while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - ell + p) --p;
        if (p < 0) return checked;
        for (std::size_t v = 0; v < mv; ++v) sums[v] -= V[v][static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])];
        ++idx[static_cast<std::size_t>(p)];
        for (std::size_t v = 0; v < mv; ++v) sums[v] += V[v][static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])];
        for (int q = p + 1; q < ell; ++q) {
            const int old = idx[static_cast<std::size_t>(q)];
            const int neu = idx[static_cast<std::size_t>(q - 1)] + 1;
            idx[static_cast<std::size_t>(q)] = neu;
            for (std::size_t v = 0; v < mv; ++v)
                sums[v] += V[v][static_cast<std::size_t>(neu)] - V[v][static_cast<std::size_t>(old)];
        }
    }
}

bool violates(const std::vector<double>& sums, double d) {
    // The subset fails iff no vector balances it.
    for (double s : sums)
        if (std::abs(s) <= d) return false;
    return true;
}

void check_inputs(const std::vector<std::vector<double>>& V, const BalanceSpec& spec) {
    spec.validate();
    for (const auto& v : V)
        if (v.size() != static_cast<std::size_t>(spec.n))
            throw std::invalid_argument("balance: vector length != spec.n");
}

WitnessPair make_pair(const MeasurementMatrix& A, const std::vector<int>& S, double R, int g1,
                      int g2) {
    WitnessPair w;
    w.S = S;
    w.R = R;

    std::vector<int> sup_x(S);
    sup_x.push_back(g1);
    std::sort(sup_x.begin(), sup_x.end());
    std::vector<int> sup_y(S);
    sup_y.push_back(g2);
    std::sort(sup_y.begin(), sup_y.end());

    auto values_for = [&](const std::vector<int>& sup, int unit_coord) {
        std::vector<double> vals;
        vals.reserve(sup.size());
        for (int i : sup) vals.push_back(i == unit_coord ? 1.0 : R);
        return vals;
    };
    w.x = SparseSignal(static_cast<int>(A.n), sup_x, values_for(sup_x, g1));
    w.y = SparseSignal(static_cast<int>(A.n), sup_y, values_for(sup_y, g2));

    w.dominance_holds = true;
    for (std::size_t i = 0; i < A.m; ++i) {
        const double* a = A.row(i);
        double s = 0.0;
        for (int j : S) s += a[j];
        const double lhs = std::abs(R * s);
        const double rhs = std::max(std::abs(a[g1]), std::abs(a[g2]));
        if (!(lhs > rhs)) {
            w.dominance_holds = false;
            break;
        }
    }
    return w;
}

}  // namespace

BalanceResult is_balanced(const std::vector<std::vector<double>>& V, const BalanceSpec& spec,
                          std::uint64_t budget) {
    check_inputs(V, spec);
    BalanceResult result;
    result.subsets_checked =
        enumerate_subset_sums(V, spec.n, spec.ell, budget, [&](const std::vector<int>& idx, const std::vector<double>& sums) {
            if (violates(sums, spec.d)) {
                result.balanced = false;
                result.witness = idx;
                return false;
            }
            return true;
        });
    return result;
}

std::vector<std::vector<int>> find_unbalanced_sets(const std::vector<std::vector<double>>& V,
                                                   const BalanceSpec& spec, std::size_t limit,
                                                   std::uint64_t budget) {
    check_inputs(V, spec);
    std::vector<std::vector<int>> out;
    if (limit == 0) return out;
    enumerate_subset_sums(V, spec.n, spec.ell, budget, [&](const std::vector<int>& idx, const std::vector<double>& sums) {
        if (violates(sums, spec.d)) {
            out.push_back(idx);
            if (out.size() >= limit) return false;
        }
        return true;
    });
    return out;
}

WitnessPair build_witness_pair(const MeasurementMatrix& A, const std::vector<int>& S, double R) {
    if (A.n < 2 || S.size() + 2 > A.n)
        throw std::invalid_argument("build_witness_pair: need |S| + 2 <= n");
    if (R < 1.0) throw std::invalid_argument("build_witness_pair: need R >= 1");
    const int g1 = static_cast<int>(A.n) - 2;
    const int g2 = static_cast<int>(A.n) - 1;
    for (int j : S) {
        if (j < 0 || j >= g1)
            throw std::invalid_argument("build_witness_pair: S overlaps reserved coordinates");
    }
    return make_pair(A, S, R, g1, g2);
}

bool column_tail_check(const MeasurementMatrix& A) {
    if (A.m < 2) throw std::invalid_argument("column_tail_check: need m >= 2");
    const double bound = std::sqrt(4.0 * std::log(static_cast<double>(A.m)));
    for (std::size_t i = 0; i < A.m; ++i) {
        const double* a = A.row(i);
        if (std::abs(a[A.n - 2]) > bound || std::abs(a[A.n - 1]) > bound) return false;
    }
    return true;
}

PipelineResult invalidity_pipeline(const MeasurementMatrix& A, int k, double R,
                                   std::uint64_t budget) {
    if (k < 2) throw std::invalid_argument("invalidity_pipeline: need k >= 2");
    if (A.n < static_cast<std::size_t>(k) + 1)
        throw std::invalid_argument("invalidity_pipeline: need n >= k + 1");
    if (R < 1.0) throw std::invalid_argument("invalidity_pipeline: need R >= 1");

    PipelineResult result;
    const bool rademacher = (A.ensemble == Ensemble::rademacher);

    std::vector<std::vector<double>> V;
    BalanceSpec spec;
    bool full_rows;

    if (rademacher && R == 1.0) {
        // Rademacher reduction: full rows must be (n, k-1, 1)-balanced; any
        // two coordinates outside S can play the distinguishing role.
        V = A.full_rows();
        spec = BalanceSpec{static_cast<int>(A.n), k - 1, 1.0};
        full_rows = true;
        result.tail_check_passed = true;
    } else if (rademacher) {
        // +/-1 entries make the reserved-column bound exactly 1, so the
        // balance margin is 1/R instead of sqrt(4 log m)/R.
        V = A.truncated_rows();
        spec = BalanceSpec{static_cast<int>(A.n) - 2, k - 1, 1.0 / R};
        full_rows = false;
        result.tail_check_passed = true;
    } else {
        if (A.m < 2) throw std::invalid_argument("invalidity_pipeline: need m >= 2");
        V = A.truncated_rows();
        const double d = std::sqrt(4.0 * std::log(static_cast<double>(A.m))) / R;
        spec = BalanceSpec{static_cast<int>(A.n) - 2, k - 1, d};
        full_rows = false;
        result.tail_check_passed = column_tail_check(A);
    }
    result.d_used = spec.d;

    result.subsets_checked = enumerate_subset_sums(
        V, spec.n, spec.ell, budget, [&](const std::vector<int>& idx, const std::vector<double>& sums) {
            if (!violates(sums, spec.d)) return true;
            int g1, g2;
            if (!full_rows) {
                g1 = static_cast<int>(A.n) - 2;
                g2 = static_cast<int>(A.n) - 1;
            } else {
                // two largest coordinates not in S
                g2 = static_cast<int>(A.n) - 1;
                while (std::binary_search(idx.begin(), idx.end(), g2)) --g2;
                g1 = g2 - 1;
                while (std::binary_search(idx.begin(), idx.end(), g1)) --g1;
            }
            WitnessPair w = make_pair(A, idx, R, g1, g2);
            if (w.dominance_holds && confusable(A, w.x, w.y)) {
                result.certificate = std::move(w);
                return false;
            }
            return true;
        });
    return result;
}

}  // namespace obcs
