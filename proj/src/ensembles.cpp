#include "obcs/ensembles.hpp"

#include <cmath>
#include <numbers>

namespace obcs {

double SplitMix64::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

RngSpec derive_substream(const RngSpec& rng, std::uint64_t index) {
    return RngSpec{rng.seed, splitmix64_mix(rng.stream ^ splitmix64_mix(index))};
}

MeasurementMatrix gen_gaussian_matrix(const RngSpec& rng, std::size_t m, std::size_t n) {
    if (n < 1) throw std::invalid_argument("gen_gaussian_matrix: need n >= 1");
    SplitMix64 g(rng);
    std::vector<double> entries(m * n);
    for (double& e : entries) e = g.next_gaussian();
    return MeasurementMatrix(m, n, std::move(entries), Ensemble::gaussian, rng.seed);
}

MeasurementMatrix gen_rademacher_matrix(const RngSpec& rng, std::size_t m, std::size_t n) {
    if (n < 1) throw std::invalid_argument("gen_rademacher_matrix: need n >= 1");
    SplitMix64 g(rng);
    std::vector<double> entries(m * n);
    for (double& e : entries) e = static_cast<double>(g.next_rademacher());
    return MeasurementMatrix(m, n, std::move(entries), Ensemble::rademacher, rng.seed);
}

MeasurementMatrix gen_matrix(const RngSpec& rng, std::size_t m, std::size_t n, Ensemble ensemble) {
    switch (ensemble) {
        case Ensemble::gaussian: return gen_gaussian_matrix(rng, m, n);
        case Ensemble::rademacher: return gen_rademacher_matrix(rng, m, n);
        default: throw std::invalid_argument("gen_matrix: ensemble must be gaussian or rademacher");
    }
}

std::vector<std::vector<double>> gen_vectors(const RngSpec& rng, std::size_t m, std::size_t n,
                                             Ensemble ensemble) {
    SplitMix64 g(rng);
    std::vector<std::vector<double>> vecs(m, std::vector<double>(n));
    for (auto& v : vecs) {
        for (double& e : v) {
            e = (ensemble == Ensemble::gaussian) ? g.next_gaussian()
                                                 : static_cast<double>(g.next_rademacher());
        }
    }
    return vecs;
}

}  // namespace obcs
