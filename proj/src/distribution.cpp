#include "pla/distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pla {

UnackedDistribution UnackedDistribution::delta0(std::size_t k_max) {
    std::vector<double> v(k_max + 1, 0.0);
    v[0] = 1.0;
    return UnackedDistribution(std::move(v), 0.0);
}

UnackedDistribution UnackedDistribution::from_probs(std::vector<double> probs,
                                                    double tail_mass) {
    if (probs.empty()) throw std::invalid_argument("empty distribution");
    double sum = 0.0;
    for (double v : probs) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("distribution entries must be finite and >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("distribution mass deviates from 1 beyond 1e-9");
    if (sum != 1.0) {
        for (double& v : probs) v /= sum;
    }
    return UnackedDistribution(std::move(probs), tail_mass);
}

UnackedDistribution UnackedDistribution::from_normalized(std::vector<double> probs,
                                                         double tail_mass) {
    return UnackedDistribution(std::move(probs), tail_mass);
}

double UnackedDistribution::sum() const {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

}  // namespace pla
