#include "obcs/validity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace obcs {

namespace {

// One closed half-space g . w <= h.
struct Constraint {
    std::vector<double> g;
    double h = 0.0;
};

// Gaussian elimination with partial pivoting; nullopt on (near-)singularity.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> M,
                                                std::vector<double> rhs) {
    const std::size_t s = rhs.size();
    for (std::size_t col = 0; col < s; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < s; ++r)
            if (std::abs(M[r][col]) > std::abs(M[pivot][col])) pivot = r;
        if (std::abs(M[pivot][col]) < 1e-12) return std::nullopt;
        std::swap(M[col], M[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < s; ++r) {
            const double factor = M[r][col] / M[col][col];
            for (std::size_t c = col; c < s; ++c) M[r][c] -= factor * M[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    std::vector<double> w(s);
    for (std::size_t i = s; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t j = i + 1; j < s; ++j) acc -= M[i][j] * w[j];
        w[i] = acc / M[i][i];
    }
    return w;
}

bool satisfies_all(const std::vector<Constraint>& cons, const std::vector<double>& w, double R) {
    for (const auto& c : cons) {
        double lhs = 0.0;
        double scale = 1.0 + std::abs(c.h);
        for (std::size_t j = 0; j < w.size(); ++j) {
            lhs += c.g[j] * w[j];
            scale += std::abs(c.g[j]) * R;
        }
        if (lhs > c.h + 1e-9 * scale) return false;
    }
    return true;
}

// Feasible point of the closed polytope (box [1,R]^s intersected with the
// half-spaces), found by enumerating candidate vertices: every solvable
// choice of s active constraints. The box keeps the region bounded, so a
// nonempty region has such a vertex.
std::optional<std::vector<double>> find_feasible_point(const std::vector<Constraint>& cons,
                                                       std::size_t s, double R) {
    if (s == 0) return std::vector<double>{};
    // quick accept: the all-ones corner (covers m = 0 and R = 1 instantly)
    std::vector<double> ones(s, 1.0);
    if (satisfies_all(cons, ones, R)) return ones;

    std::vector<std::size_t> pick(s);
    const std::size_t total = cons.size();
    if (total < s) return std::nullopt;  // cannot happen: box contributes 2s facets
    for (std::size_t i = 0; i < s; ++i) pick[i] = i;
    while (true) {
        std::vector<std::vector<double>> M;
        std::vector<double> rhs;
        M.reserve(s);
        for (std::size_t i : pick) {
            M.push_back(cons[i].g);
            rhs.push_back(cons[i].h);
        }
        if (auto w = solve_square(std::move(M), std::move(rhs))) {
            if (satisfies_all(cons, *w, R)) return w;
        }
        std::size_t p = s;
        while (p-- > 0 && pick[p] == total - s + p) {}
        if (p == static_cast<std::size_t>(-1)) break;
        ++pick[p];
        for (std::size_t q = p + 1; q < s; ++q) pick[q] = pick[q - 1] + 1;
    }
    return std::nullopt;
}

SparseSignal signal_from_point(int n, const std::vector<int>& support,
                               const std::vector<int>& signs, const std::vector<double>& w) {
    std::vector<double> values(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) values[j] = signs[j] * w[j];
    return SparseSignal(n, support, values);
}

// Realizes b on support S with sign assignment `signs` if possible; the
// returned signal is re-verified against sign_measure so an invalid verdict
// is always machine-checked.
std::optional<SparseSignal> realize_pattern(const MeasurementMatrix& A,
                                            const std::vector<int>& support,
                                            const std::vector<int>& signs, std::uint64_t pattern,
                                            double R) {
    const std::size_t s = support.size();
    std::vector<Constraint> cons;
    cons.reserve(2 * s + A.m);
    for (std::size_t j = 0; j < s; ++j) {
        Constraint lo;  // -w_j <= -1
        lo.g.assign(s, 0.0);
        lo.g[j] = -1.0;
        lo.h = -1.0;
        cons.push_back(std::move(lo));
        Constraint hi;  // w_j <= R
        hi.g.assign(s, 0.0);
        hi.g[j] = 1.0;
        hi.h = R;
        cons.push_back(std::move(hi));
    }
    const double sqrt_s = std::sqrt(static_cast<double>(std::max<std::size_t>(s, 1)));
    for (std::size_t i = 0; i < A.m; ++i) {
        const double* a = A.row(i);
        double row_norm = 0.0;
        for (std::size_t j = 0; j < A.n; ++j) row_norm += a[j] * a[j];
        row_norm = std::sqrt(row_norm);
        std::vector<double> coeff(s);
        for (std::size_t j = 0; j < s; ++j) coeff[j] = a[support[j]] * signs[j];
        Constraint c;
        if ((pattern >> i) & 1) {
            // b_i = -1: a_i . x < 0, encoded a_i . x <= -delta
            c.g = std::move(coeff);
            c.h = -1e-9 * row_norm * R * sqrt_s;
        } else {
            // b_i = +1: a_i . x >= 0
            c.g.resize(s);
            for (std::size_t j = 0; j < s; ++j) c.g[j] = -coeff[j];
            c.h = 0.0;
        }
        cons.push_back(std::move(c));
    }
    auto w = find_feasible_point(cons, s, R);
    if (!w) return std::nullopt;
    SparseSignal x = signal_from_point(static_cast<int>(A.n), support, signs, *w);
    const SignPattern measured = sign_measure(A, x);
    for (std::size_t i = 0; i < A.m; ++i) {
        const int want = ((pattern >> i) & 1) ? -1 : 1;
        if (measured.bits[i] != want) return std::nullopt;
    }
    return x;
}

std::vector<std::vector<int>> supports_of_size(int n, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (size == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(idx);
        int p = size - 1;
        while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - size + p) --p;
        if (p < 0) break;
        ++idx[static_cast<std::size_t>(p)];
        for (int q = p + 1; q < size; ++q)
            idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
    return out;
}

std::vector<std::vector<int>> class_supports(const SignalClassSpec& spec, bool include_empty) {
    std::vector<std::vector<int>> out;
    if (spec.support_size_mode == SupportSizeMode::exactly_k) {
        return supports_of_size(spec.n, spec.k);
    }
    if (include_empty) out.push_back({});
    for (int size = 1; size <= spec.k; ++size) {
        auto part = supports_of_size(spec.n, size);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace

ValidityReport validate_universal(const MeasurementMatrix& A, const SignalClassSpec& spec,
                                  const ValidityOptions& opts) {
    spec.validate();
    if (A.n != static_cast<std::size_t>(spec.n))
        throw std::invalid_argument("validate_universal: matrix/spec dimension mismatch");
    if (A.m >= 62) throw std::invalid_argument("validate_universal: m too large for exhaustion");

    ValidityReport report;
    report.method_notes = "vertex enumeration over [1,R]^k intersected with sign half-spaces";
    const std::uint64_t num_patterns = std::uint64_t{1} << A.m;
    const auto supports = class_supports(spec, opts.include_empty_support);

    // realizable patterns per support, with one witness signal per pattern
    std::vector<std::map<std::uint64_t, SparseSignal>> realizable(supports.size());
    std::uint64_t work = 0;

    for (std::size_t si = 0; si < supports.size(); ++si) {
        const auto& S = supports[si];
        const std::size_t sz = S.size();
        const std::uint64_t num_signs = std::uint64_t{1} << sz;
        for (std::uint64_t sig = 0; sig < num_signs; ++sig) {
            std::vector<int> signs(sz);
            for (std::size_t j = 0; j < sz; ++j) signs[j] = ((sig >> j) & 1) ? -1 : 1;
            for (std::uint64_t pat = 0; pat < num_patterns; ++pat) {
                if (++work > opts.budget) {
                    report.verdict = Verdict::inconclusive;
                    report.method_notes += "; budget exhausted after " + std::to_string(work - 1) +
                                           " feasibility calls";
                    report.pairs_checked = 0;
                    return report;
                }
                if (realizable[si].count(pat)) continue;
                if (auto x = realize_pattern(A, S, signs, pat, spec.R))
                    realizable[si].emplace(pat, std::move(*x));
            }
        }
    }

    for (std::size_t si = 0; si < supports.size(); ++si) {
        for (std::size_t ti = si + 1; ti < supports.size(); ++ti) {
            ++report.pairs_checked;
            for (const auto& [pat, x] : realizable[si]) {
                auto it = realizable[ti].find(pat);
                if (it != realizable[ti].end()) {
                    report.verdict = Verdict::invalid;
                    report.counterexample = {x, it->second};
                    return report;
                }
            }
        }
    }
    report.verdict = Verdict::valid;
    return report;
}

std::vector<std::vector<int>> decode_support(const MeasurementMatrix& A, const SignPattern& b,
                                             const SignalClassSpec& spec,
                                             const ValidityOptions& opts) {
    spec.validate();
    if (A.n != static_cast<std::size_t>(spec.n))
        throw std::invalid_argument("decode_support: matrix/spec dimension mismatch");
    if (b.bits.size() != A.m)
        throw std::invalid_argument("decode_support: pattern length != row count");

    std::uint64_t pattern = 0;
    for (std::size_t i = 0; i < A.m; ++i)
        if (b.bits[i] == -1) pattern |= std::uint64_t{1} << i;

    std::vector<std::vector<int>> consistent;
    std::uint64_t work = 0;
    for (const auto& S : class_supports(spec, opts.include_empty_support)) {
        const std::size_t sz = S.size();
        if (sz == 0) {
            // zero signal measures all-+1
            if (pattern == 0) consistent.push_back(S);
            continue;
        }
        const std::uint64_t num_signs = std::uint64_t{1} << sz;
        bool found = false;
        for (std::uint64_t sig = 0; sig < num_signs && !found; ++sig) {
            if (++work > opts.budget)
                throw BudgetExceeded("decode_support: budget exceeded");
            std::vector<int> signs(sz);
            for (std::size_t j = 0; j < sz; ++j) signs[j] = ((sig >> j) & 1) ? -1 : 1;
            found = realize_pattern(A, S, signs, pattern, spec.R).has_value();
        }
        if (found) consistent.push_back(S);
    }
    return consistent;
}

double min_support_separation(int k, double R) {
    if (k < 1 || R < 1.0)
        throw std::invalid_argument("min_support_separation: need k >= 1, R >= 1");
    return 1.0 / std::sqrt((k - 1) * R * R + 1.0);
}

double required_m_upper(int n, int k, double R, double constant) {
    if (n < 2) throw std::invalid_argument("required_m_upper: need n >= 2");
    return constant * R * std::pow(static_cast<double>(k), 1.5) * std::log(static_cast<double>(n));
}

}  // namespace obcs
