#include "uavroute/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "uavroute/simplex.hpp"

namespace uavroute {
namespace {
constexpr double kSampleFloor = 1e-12;

using DoublePolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }
}  // namespace

double digamma(double x) { return boost::math::digamma(x, DoublePolicy()); }
double trigamma(double x) { return boost::math::trigamma(x, DoublePolicy()); }

Concentration build_concentration(std::span<const double> beta, int valid_dims,
                                  const SimplexParams& params) {
  if (valid_dims < 1 || valid_dims > static_cast<int>(beta.size())) {
    throw std::invalid_argument("build_concentration: valid_dims out of range");
  }
  Concentration c;
  c.valid_dims = valid_dims;
  c.projected = sparsemax(beta);
  c.alpha.assign(beta.size(), params.mask_eps);
  for (int n = 0; n < valid_dims; ++n) c.alpha[n] = params.rho * c.projected[n] + params.alpha_min;
  return c;
}

std::vector<double> concentration_backward(const Concentration& c, std::span<const double> d_alpha,
                                           const SimplexParams& params) {
  std::vector<double> d_projected(c.alpha.size(), 0.0);
  for (int n = 0; n < c.valid_dims; ++n) d_projected[n] = params.rho * d_alpha[n];
  return sparsemax_backward(c.projected, d_projected);
}

double sample_log_gamma(double alpha, RandomStream& rng) {
  if (alpha < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log space so tiny a does not underflow.
    const double u = 1.0 - rng.uniform();
    return sample_log_gamma(alpha + 1.0, rng) + std::log(u) / alpha;
  }
  // Marsaglia-Tsang.
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = 1.0 - rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d * v);
  }
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, RandomStream& rng) {
  std::vector<double> logs(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) logs[n] = sample_log_gamma(alpha[n], rng);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> a(alpha.size());
  double total = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    a[n] = std::exp(logs[n] - top);
    total += a[n];
  }
  double clamped_total = 0.0;
  for (double& v : a) {
    v = std::max(v / total, kSampleFloor);
    clamped_total += v;
  }
  for (double& v : a) v /= clamped_total;
  return a;
}

double dirichlet_log_prob(std::span<const double> a, std::span<const double> alpha) {
  if (a.size() != alpha.size()) throw std::invalid_argument("dirichlet_log_prob: size mismatch");
  double lp = std::lgamma(sum_of(alpha));
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n] > 0.0)) throw std::domain_error("boundary sample");
    lp += (alpha[n] - 1.0) * std::log(a[n]) - std::lgamma(alpha[n]);
  }
  return lp;
}

std::vector<double> dirichlet_log_prob_grad(std::span<const double> a,
                                            std::span<const double> alpha) {
  const double psi_total = digamma(sum_of(alpha));
  std::vector<double> g(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    g[n] = psi_total - digamma(alpha[n]) + std::log(a[n]);
  }
  return g;
}

double dirichlet_entropy(std::span<const double> alpha) {
  const double total = sum_of(alpha);
  const double psi_total = digamma(total);
  // -ln C(alpha) = sum lnGamma(alpha_n) - lnGamma(total)
  double h = -std::lgamma(total);
  for (double an : alpha) h += std::lgamma(an) - (an - 1.0) * (digamma(an) - psi_total);
  return h;
}

std::vector<double> dirichlet_entropy_grad(std::span<const double> alpha) {
  const double total = sum_of(alpha);
  const double shared = (total - static_cast<double>(alpha.size())) * trigamma(total);
  std::vector<double> g(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    g[n] = shared - (alpha[n] - 1.0) * trigamma(alpha[n]);
  }
  return g;
}

std::vector<double> dirichlet_mean(std::span<const double> alpha) {
  const double total = sum_of(alpha);
  std::vector<double> m(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) m[n] = alpha[n] / total;
  return m;
}

std::vector<double> dirichlet_variance(std::span<const double> alpha) {
  const double total = sum_of(alpha);
  std::vector<double> v(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    v[n] = alpha[n] * (total - alpha[n]) / (total * total * (total + 1.0));
  }
  return v;
}

}  // namespace uavroute
