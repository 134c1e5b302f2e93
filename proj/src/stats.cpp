#include "riskkit/stats.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace riskkit::stats {

double binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  if (k >= n) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  return boost::math::cdf(dist, static_cast<double>(k));
}

double binomial_upper(std::uint64_t k, std::uint64_t n, double p) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
}

double chi_square_sf(double x, double degrees_of_freedom) {
  if (x <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(degrees_of_freedom);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double normal_cdf(double x) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double normal_sf(double x) {
  return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(), x));
}

}  // namespace riskkit::stats
