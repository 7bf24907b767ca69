#pragma once

#include <cstdint>

namespace divlab::numkit {

// log P(exactly k distinct values in n iid uniform draws over s categories)
//   = log [ C(s,k) * k! * S2(n,k) / s^n ]
// with S2 the Stirling partition numbers, evaluated in log space throughout.
double occupancy_log_prob(std::int64_t k, std::int64_t n, std::int64_t s);

// Integer maximum-likelihood support size: argmax over s in [k, s_max] of
// occupancy_log_prob(k, n, s); ties resolve to the smallest s.
std::int64_t occupancy_mle(std::int64_t k, std::int64_t n, std::int64_t s_max);

} // namespace divlab::numkit
