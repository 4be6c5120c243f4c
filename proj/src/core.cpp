#include "obcs/core.hpp"

#include <algorithm>
#include <cmath>

namespace obcs {

std::string to_string(Ensemble e) {
    switch (e) {
        case Ensemble::gaussian: return "gaussian";
        case Ensemble::rademacher: return "rademacher";
        case Ensemble::explicit_matrix: return "explicit";
    }
    throw std::logic_error("unknown ensemble");
}

Ensemble ensemble_from_string(const std::string& s) {
    if (s == "gaussian") return Ensemble::gaussian;
    if (s == "rademacher") return Ensemble::rademacher;
    if (s == "explicit") return Ensemble::explicit_matrix;
    throw std::invalid_argument("unknown ensemble: " + s);
}

SparseSignal::SparseSignal(int n_, std::vector<int> support_, std::vector<double> values_)
    : n(n_), support(std::move(support_)), values(std::move(values_)) {
    if (support.size() != values.size())
        throw std::invalid_argument("SparseSignal: support/value length mismatch");
    if (!std::is_sorted(support.begin(), support.end()))
        throw std::invalid_argument("SparseSignal: support must be sorted");
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw std::invalid_argument("SparseSignal: duplicate support index");
    for (int i : support)
        if (i < 0 || i >= n) throw std::invalid_argument("SparseSignal: index out of range");
    for (double v : values)
        if (v == 0.0) throw std::invalid_argument("SparseSignal: zero value on support");
}

SparseSignal SparseSignal::from_dense(const std::vector<double>& dense) {
    SparseSignal s;
    s.n = static_cast<int>(dense.size());
    for (int i = 0; i < s.n; ++i) {
        if (dense[i] != 0.0) {
            s.support.push_back(i);
            s.values.push_back(dense[i]);
        }
    }
    return s;
}

std::vector<double> SparseSignal::to_dense() const {
    std::vector<double> dense(static_cast<std::size_t>(n), 0.0);
    for (std::size_t j = 0; j < support.size(); ++j)
        dense[static_cast<std::size_t>(support[j])] = values[j];
    return dense;
}

bool SparseSignal::in_class(const SignalClassSpec& spec) const {
    spec.validate();
    if (n != spec.n) return false;
    const auto sz = static_cast<int>(support.size());
    if (spec.support_size_mode == SupportSizeMode::exactly_k) {
        if (sz != spec.k) return false;
    } else {
        if (sz > spec.k) return false;
    }
    if (sz == 0) return true;  // vacuously within dynamic range
    return dynamic_range(*this) <= spec.R;
}

double dynamic_range(const SparseSignal& x) {
    if (x.support.empty())
        throw std::domain_error("dynamic_range: empty support");
    double lo = std::abs(x.values[0]);
    double hi = lo;
    for (double v : x.values) {
        const double a = std::abs(v);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return hi / lo;
}

MeasurementMatrix::MeasurementMatrix(std::size_t m_, std::size_t n_, std::vector<double> entries_,
                                     Ensemble ensemble_, std::optional<std::uint64_t> seed_)
    : m(m_), n(n_), entries(std::move(entries_)), ensemble(ensemble_), seed(seed_) {
    if (entries.size() != m * n)
        throw std::invalid_argument("MeasurementMatrix: entry count != m*n");
    if (ensemble == Ensemble::rademacher) {
        for (double e : entries)
            if (e != 1.0 && e != -1.0)
                throw std::invalid_argument("MeasurementMatrix: rademacher entries must be +/-1");
    }
}

std::vector<double> MeasurementMatrix::truncated_row(std::size_t i) const {
    if (n < 2) throw std::invalid_argument("truncated_row: need n >= 2");
    return std::vector<double>(row(i), row(i) + (n - 2));
}

std::vector<std::vector<double>> MeasurementMatrix::truncated_rows() const {
    std::vector<std::vector<double>> rows;
    rows.reserve(m);
    for (std::size_t i = 0; i < m; ++i) rows.push_back(truncated_row(i));
    return rows;
}

std::vector<std::vector<double>> MeasurementMatrix::full_rows() const {
    std::vector<std::vector<double>> rows;
    rows.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        rows.emplace_back(row(i), row(i) + n);
    return rows;
}

SignPattern sign_measure(const MeasurementMatrix& A, const SparseSignal& x) {
    if (static_cast<std::size_t>(x.n) != A.n)
        throw std::invalid_argument("sign_measure: dimension mismatch");
    SignPattern b;
    b.bits.resize(A.m);
    for (std::size_t i = 0; i < A.m; ++i) {
        const double* a = A.row(i);
        long double acc = 0.0L;
        for (std::size_t j = 0; j < x.support.size(); ++j)
            acc += static_cast<long double>(a[x.support[j]]) * x.values[j];
        b.bits[i] = (acc >= 0.0L) ? std::int8_t{1} : std::int8_t{-1};
    }
    return b;
}

bool confusable(const MeasurementMatrix& A, const SparseSignal& x, const SparseSignal& y) {
    if (static_cast<std::size_t>(x.n) != A.n || static_cast<std::size_t>(y.n) != A.n)
        throw std::invalid_argument("confusable: dimension mismatch");
    if (x.support == y.support) return false;
    return sign_measure(A, x) == sign_measure(A, y);
}

}  // namespace obcs
