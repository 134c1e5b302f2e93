#pragma once

#include <cstdint>

namespace riskkit::stats {

/// P(X <= k) for X ~ Binomial(n, p).
double binomial_cdf(std::uint64_t k, std::uint64_t n, double p);
/// P(X >= k) for X ~ Binomial(n, p).
double binomial_upper(std::uint64_t k, std::uint64_t n, double p);

/// Upper tail P(X >= x) of the chi-square law with the given degrees of freedom.
double chi_square_sf(double x, double degrees_of_freedom);

double normal_cdf(double x);
double normal_sf(double x);

}  // namespace riskkit::stats
