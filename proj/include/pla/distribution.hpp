#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace pla {

// Finite probability distribution over the number of unacked messages.
// Index k holds P(X = k) for k = 0..k_max; queries outside that range are 0.
// Mass that an operator would push past k_max is folded into the top bucket
// and tracked in tail_mass.
class UnackedDistribution {
public:
    static UnackedDistribution delta0(std::size_t k_max);

    // Validating constructor: rejects negative entries, renormalizes when
    // |sum - 1| <= 1e-9 and throws std::invalid_argument otherwise.
    static UnackedDistribution from_probs(std::vector<double> probs,
                                          double tail_mass = 0.0);

    // Trusted fast path for operator results; caller guarantees the entries
    // are non-negative and sum to 1.
    static UnackedDistribution from_normalized(std::vector<double> probs,
                                               double tail_mass = 0.0);

    double operator[](std::int64_t k) const {
        if (k < 0 || k >= static_cast<std::int64_t>(probs_.size())) return 0.0;
        return probs_[static_cast<std::size_t>(k)];
    }

    std::size_t k_max() const { return probs_.empty() ? 0 : probs_.size() - 1; }
    const std::vector<double>& probs() const { return probs_; }
    double tail_mass() const { return tail_mass_; }
    double sum() const;
    double top_bucket() const { return probs_.empty() ? 0.0 : probs_.back(); }

private:
    UnackedDistribution(std::vector<double> probs, double tail_mass)
        : probs_(std::move(probs)), tail_mass_(tail_mass) {}

    std::vector<double> probs_;
    double tail_mass_ = 0.0;
};

}  // namespace pla
