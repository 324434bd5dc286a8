#pragma once

#include <vector>

#include "pla/distribution.hpp"

namespace pla {

// P(exactly `failed` of `total` packets are lost) when each packet is
// delivered independently with probability p. Binomial pmf; mid-range terms
// go through log-space so totals up to a few thousand stay finite.
// Throws std::domain_error for failed < 0, total < 0 or failed > total.
double pr_fail(int failed, int total, double p);

// Probability that x unacked messages become k after one retransmission
// round, with up to `msgs_per_packet` messages batched per packet. Upper
// triangular: zero for k > x.
double gamma_kernel(int x, int k, int msgs_per_packet, double p);

// Memoized gamma rows for a fixed (msgs_per_packet, p). Rows are built
// lazily; row(x) has x+1 entries for k = 0..x. One instance per solve, not
// shared across threads.
class RetransmitKernel {
public:
    RetransmitKernel(int msgs_per_packet, double p);

    const std::vector<double>& row(int x) const;
    int msgs_per_packet() const { return msgs_per_packet_; }
    double p() const { return p_; }

private:
    int msgs_per_packet_;
    double p_;
    mutable std::vector<std::vector<double>> rows_;
};

// Publish operator: convolve with the binomial loss count of the
// packets_per_publish packets. Mass shifted past k_max folds into the top
// bucket. result[0] == P[0] * p^u exactly.
UnackedDistribution pub_apply(const UnackedDistribution& P,
                              int packets_per_publish, double p);

// Heartbeat operator: with probability 1-p^2 the heartbeat/acknack round is
// lost and P is unchanged; otherwise the retransmission kernel applies.
UnackedDistribution hb_apply(const UnackedDistribution& P,
                             int msgs_per_retx_packet, double p);
UnackedDistribution hb_apply(const UnackedDistribution& P,
                             const RetransmitKernel& kernel);

namespace detail {

// In-place kernels used by the solver and the latency series.
// pub weights: w[x] = pr_fail(x, u, p) for x = 0..u.
std::vector<double> pub_weights(int packets_per_publish, double p);
// out = Pub(P); folded mass accumulated into *folded when non-null.
void pub_into(const std::vector<double>& P, const std::vector<double>& w,
              std::vector<double>& out, double* folded);
// out = Hb(P).
void hb_into(const std::vector<double>& P, const RetransmitKernel& kernel,
             std::vector<double>& out);

}  // namespace detail

}  // namespace pla
