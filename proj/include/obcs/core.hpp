#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Domain types for sparse signals, measurement matrices, and sign patterns,
// plus the 1-bit measurement operator b = sign(Ax) with sign(0) = +1.

namespace obcs {

// Enumeration budgets are explicit; exceeding one is an error, never a
// silent fallback to sampling or truncation.
class BudgetExceeded : public std::runtime_error {
  public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class Ensemble { gaussian, rademacher, explicit_matrix };

std::string to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& s);

enum class SupportSizeMode { exactly_k, at_most_k };

// The signal class X_k(R): k-sparse vectors in R^n whose nonzero magnitudes
// have ratio at most R.
struct SignalClassSpec {
    int n = 0;
    int k = 0;
    double R = 1.0;
    SupportSizeMode support_size_mode = SupportSizeMode::exactly_k;

    void validate() const {
        if (n < 1 || k < 1 || k > n)
            throw std::invalid_argument("SignalClassSpec: need 1 <= k <= n");
        if (R < 1.0)
            throw std::invalid_argument("SignalClassSpec: need R >= 1");
    }
};

// A vector with explicit support (sorted, 0-based) and one nonzero value per
// support index.
struct SparseSignal {
    int n = 0;
    std::vector<int> support;
    std::vector<double> values;

    SparseSignal() = default;
    SparseSignal(int n_, std::vector<int> support_, std::vector<double> values_);

    // Dense constructor; zero entries are dropped.
    static SparseSignal from_dense(const std::vector<double>& dense);

    std::vector<double> to_dense() const;

    bool in_class(const SignalClassSpec& spec) const;
};

// max|value| / min|value| over the support; throws on empty support.
double dynamic_range(const SparseSignal& x);

struct MeasurementMatrix {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<double> entries;  // row-major, m*n
    Ensemble ensemble = Ensemble::explicit_matrix;
    std::optional<std::uint64_t> seed;

    MeasurementMatrix() = default;
    MeasurementMatrix(std::size_t m_, std::size_t n_, std::vector<double> entries_,
                      Ensemble ensemble_ = Ensemble::explicit_matrix,
                      std::optional<std::uint64_t> seed_ = std::nullopt);

    double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    const double* row(std::size_t i) const { return entries.data() + i * n; }

    // First n-2 coordinates of row i (the v_i of the balancing reduction).
    std::vector<double> truncated_row(std::size_t i) const;
    std::vector<std::vector<double>> truncated_rows() const;
    std::vector<std::vector<double>> full_rows() const;
};

struct SignPattern {
    std::vector<std::int8_t> bits;  // each +1 or -1

    bool operator==(const SignPattern& other) const { return bits == other.bits; }
};

// b_i = +1 iff a_i . x >= 0; inner product over the support only.
SignPattern sign_measure(const MeasurementMatrix& A, const SparseSignal& x);

// True iff supp(x) != supp(y) and both measure to the same sign pattern.
bool confusable(const MeasurementMatrix& A, const SparseSignal& x, const SparseSignal& y);

}  // namespace obcs
