#include "pla/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace pla {

double pr_fail(int failed, int total, double p) {
    if (failed < 0 || total < 0 || failed > total)
        throw std::domain_error("pr_fail: need 0 <= failed <= total");
    if (total == 0) return 1.0;
    if (p >= 1.0) return failed == 0 ? 1.0 : 0.0;
    if (failed == 0) return std::pow(p, total);
    if (failed == total) return std::pow(1.0 - p, total);
    double log_choose = std::lgamma(total + 1.0) - std::lgamma(failed + 1.0) -
                        std::lgamma(total - failed + 1.0);
    return std::exp(log_choose + (total - failed) * std::log(p) +
                    failed * std::log1p(-p));
}

double gamma_kernel(int x, int k, int msgs_per_packet, double p) {
    if (x < 0 || k < 0 || msgs_per_packet < 1)
        throw std::domain_error("gamma_kernel: bad arguments");
    if (x == 0) return k == 0 ? 1.0 : 0.0;
    if (k > x) return 0.0;

    const int cap = msgs_per_packet;
    const int full_packets = (x + cap - 1) / cap;  // f
    const int residual = x % cap;                  // n

    if (k == x) return std::pow(1.0 - p, full_packets);

    if (residual == 0) {
        // x fills complete packets; k survivors must be whole packets too
        return (k % cap == 0) ? pr_fail(k / cap, full_packets, p) : 0.0;
    }
    // f-1 full packets plus one residual packet of `residual` messages
    double prob = 0.0;
    if (k % cap == 0)
        prob += p * pr_fail(k / cap, full_packets - 1, p);
    if (k >= residual && (k - residual) % cap == 0)
        prob += (1.0 - p) * pr_fail((k - residual) / cap, full_packets - 1, p);
    return prob;
}

RetransmitKernel::RetransmitKernel(int msgs_per_packet, double p)
    : msgs_per_packet_(msgs_per_packet), p_(p) {
    if (msgs_per_packet < 1)
        throw std::domain_error("RetransmitKernel: msgs_per_packet < 1");
}

const std::vector<double>& RetransmitKernel::row(int x) const {
    const auto need = static_cast<std::size_t>(x) + 1;
    while (rows_.size() < need) {
        const int xi = static_cast<int>(rows_.size());
        std::vector<double> r(xi + 1);
        for (int k = 0; k <= xi; ++k) r[k] = gamma_kernel(xi, k, msgs_per_packet_, p_);
        rows_.push_back(std::move(r));
    }
    return rows_[static_cast<std::size_t>(x)];
}

namespace detail {

std::vector<double> pub_weights(int packets_per_publish, double p) {
    std::vector<double> w(packets_per_publish + 1);
    for (int x = 0; x <= packets_per_publish; ++x)
        w[x] = pr_fail(x, packets_per_publish, p);
    return w;
}

void pub_into(const std::vector<double>& P, const std::vector<double>& w,
              std::vector<double>& out, double* folded) {
    const std::size_t n = P.size();
    const std::size_t kmax = n - 1;
    out.assign(n, 0.0);
    for (std::size_t x = 0; x < w.size(); ++x) {
        const double wx = w[x];
        if (wx == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) {
            const double pk = P[k];
            if (pk == 0.0) continue;
            std::size_t dst = k + x;
            if (dst > kmax) {
                dst = kmax;  // fold past the truncation bound
                if (folded) *folded += wx * pk;
            }
            out[dst] += wx * pk;
        }
    }
}

void hb_into(const std::vector<double>& P, const RetransmitKernel& kernel,
             std::vector<double>& out) {
    const double p = kernel.p();
    const double round_ok = p * p;  // heartbeat and acknack both arrive
    const std::size_t n = P.size();
    out.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        const double px = P[x];
        if (px == 0.0) continue;
        out[x] += (1.0 - round_ok) * px;
        const auto& row = kernel.row(static_cast<int>(x));
        const double scaled = round_ok * px;
        for (std::size_t k = 0; k <= x; ++k) out[k] += scaled * row[k];
    }
}

}  // namespace detail

UnackedDistribution pub_apply(const UnackedDistribution& P,
                              int packets_per_publish, double p) {
    auto w = detail::pub_weights(packets_per_publish, p);
    std::vector<double> out;
    double folded = 0.0;
    detail::pub_into(P.probs(), w, out, &folded);
    return UnackedDistribution::from_normalized(std::move(out),
                                                P.tail_mass() + folded);
}

UnackedDistribution hb_apply(const UnackedDistribution& P,
                             const RetransmitKernel& kernel) {
    std::vector<double> out;
    detail::hb_into(P.probs(), kernel, out);
    return UnackedDistribution::from_normalized(std::move(out), P.tail_mass());
}

UnackedDistribution hb_apply(const UnackedDistribution& P,
                             int msgs_per_retx_packet, double p) {
    RetransmitKernel kernel(msgs_per_retx_packet, p);
    return hb_apply(P, kernel);
}

}  // namespace pla
