#include "divlab/numkit/occupancy.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "divlab/error.hpp"

namespace divlab::numkit {

namespace {

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log S2(n, k) via the row recurrence S2(n,k) = k*S2(n-1,k) + S2(n-1,k-1),
// carried in log space so n up to ~1e4 stays in range.
double log_stirling2(std::int64_t n, std::int64_t k) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> row(static_cast<std::size_t>(k) + 1, neg_inf);
    row[0] = 0.0; // S2(0,0) = 1
    for (std::int64_t m = 1; m <= n; ++m) {
        std::int64_t top = std::min<std::int64_t>(k, m);
        for (std::int64_t j = top; j >= 1; --j)
            row[j] = log_add_exp(std::log(static_cast<double>(j)) + row[j], row[j - 1]);
        row[0] = neg_inf; // S2(m,0) = 0 for m >= 1
    }
    return row[static_cast<std::size_t>(k)];
}

void check_domain(std::int64_t k, std::int64_t n, std::int64_t s) {
    if (k < 1 || n < 1 || s < 1)
        raise(ErrorKind::DomainError, "occupancy: k, n, s must be >= 1");
    if (k > n)
        raise(ErrorKind::DomainError,
              "occupancy: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    if (k > s)
        raise(ErrorKind::DomainError,
              "occupancy: k=" + std::to_string(k) + " exceeds s=" + std::to_string(s));
}

// log [ C(s,k) * k! ] + logS2 - n log s, with C(s,k)*k! = s!/(s-k)!.
double log_prob_given_ls2(std::int64_t k, std::int64_t n, std::int64_t s, double ls2) {
    double lfalling = std::lgamma(static_cast<double>(s) + 1.0) -
                      std::lgamma(static_cast<double>(s - k) + 1.0);
    return lfalling + ls2 - static_cast<double>(n) * std::log(static_cast<double>(s));
}

} // namespace

double occupancy_log_prob(std::int64_t k, std::int64_t n, std::int64_t s) {
    check_domain(k, n, s);
    return log_prob_given_ls2(k, n, s, log_stirling2(n, k));
}

std::int64_t occupancy_mle(std::int64_t k, std::int64_t n, std::int64_t s_max) {
    check_domain(k, n, s_max);
    double ls2 = log_stirling2(n, k); // independent of s, hoisted out of the scan
    std::int64_t best_s = k;
    double best = log_prob_given_ls2(k, n, k, ls2);
    for (std::int64_t s = k + 1; s <= s_max; ++s) {
        double lp = log_prob_given_ls2(k, n, s, ls2);
        if (lp > best) {
            best = lp;
            best_s = s;
        }
    }
    return best_s;
}

} // namespace divlab::numkit
