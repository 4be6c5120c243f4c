#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obcs/core.hpp"

// Exact desk-scale universal-validity checking and support decoding: sign
// patterns are enumerated and each (support, sign assignment, pattern) triple
// is decided by linear feasibility over the magnitude box [1, R]^k.

namespace obcs {

enum class Verdict { valid, invalid, inconclusive };

struct ValidityReport {
    Verdict verdict = Verdict::inconclusive;
    std::optional<std::pair<SparseSignal, SparseSignal>> counterexample;
    std::uint64_t pairs_checked = 0;
    std::string method_notes;
};

struct ValidityOptions {
    // Work budget counted in feasibility calls.
    std::uint64_t budget = 100'000'000;
    // Under at_most_k, whether the zero signal takes part in pair enumeration
    // (its sign pattern is degenerate under sign(0) = +1).
    bool include_empty_support = false;
};

// Decides whether A distinguishes every pair of class members with different
// supports. invalid comes with a verified confusable counterexample; valid
// means every support pair was refuted; inconclusive only on budget exhaustion.
ValidityReport validate_universal(const MeasurementMatrix& A, const SignalClassSpec& spec,
                                  const ValidityOptions& opts = {});

// Every support S (sized per support_size_mode) realizable by some class
// member whose measurement equals b.
std::vector<std::vector<int>> decode_support(const MeasurementMatrix& A, const SignPattern& b,
                                             const SignalClassSpec& spec,
                                             const ValidityOptions& opts = {});

// 1 / sqrt((k-1) R^2 + 1): the minimum distance between unit-normalized class
// members with different supports.
double min_support_separation(int k, double R);

// constant * R * k^1.5 * log n: the sufficiency-side measurement count.
double required_m_upper(int n, int k, double R, double constant);

}  // namespace obcs
