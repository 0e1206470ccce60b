#pragma once

#include <cstdint>
#include <vector>

namespace biphoton {

// Independent Poisson draws with mean rate * peak_rate * integration_time
// per point, from a fixed algorithm (mt19937_64 stream, inversion below
// mean 10, Hormann's PTRS transformed rejection above). The sequence is
// fully determined by the seed.
std::vector<long long> poisson_counts(const std::vector<double>& rates,
                                      double integration_time, double peak_rate,
                                      std::uint64_t seed);

}  // namespace biphoton
