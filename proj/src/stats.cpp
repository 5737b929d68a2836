#include "tlx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace tlx {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: lengths differ");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0 || syy == 0) throw std::domain_error("zero variance");
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double p_value(double r, std::size_t n) {
  if (n < 3) throw std::invalid_argument("insufficient samples");
  double a = std::fabs(r);
  if (a >= 1) return 0.0;
  if (a == 0) return 1.0;
  double df = static_cast<double>(n - 2);
  double t2 = r * r * df / (1 - r * r);
  // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2)
  return boost::math::ibeta(df / 2, 0.5, df / (df + t2));
}

}  // namespace tlx
