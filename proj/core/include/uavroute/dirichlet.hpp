#pragma once

#include <span>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/rng.hpp"

namespace uavroute {

/// Dirichlet concentrations built from an actor output. Dimensions at or beyond
/// `valid_dims` hold the mask constant.
struct Concentration {
  std::vector<double> alpha;
  /// sparsemax(beta), kept for the backward pass.
  std::vector<double> projected;
  int valid_dims = 1;
};

/// alpha = rho * sparsemax(beta) + alpha_min on the first `valid_dims` entries, mask_eps
/// elsewhere.
Concentration build_concentration(std::span<const double> beta, int valid_dims,
                                  const SimplexParams& params);

/// Pulls dL/dalpha back to dL/dbeta. Masked dimensions are constants.
std::vector<double> concentration_backward(const Concentration& c, std::span<const double> d_alpha,
                                           const SimplexParams& params);

/// Draw from Dir(alpha) through log-space Gamma variates (boosted for alpha < 1);
/// components are clamped to at least 1e-12 and renormalized.
std::vector<double> sample_dirichlet(std::span<const double> alpha, RandomStream& rng);

/// log Gamma(alpha, 1) variate.
double sample_log_gamma(double alpha, RandomStream& rng);

/// Log-density at an interior point. Throws std::domain_error("boundary sample") if any
/// component is not strictly positive.
double dirichlet_log_prob(std::span<const double> a, std::span<const double> alpha);

/// d log p / d alpha_n = psi(sum alpha) - psi(alpha_n) + log a_n.
std::vector<double> dirichlet_log_prob_grad(std::span<const double> a,
                                            std::span<const double> alpha);

double dirichlet_entropy(std::span<const double> alpha);

/// dH / d alpha_n = (sum alpha - K) psi'(sum alpha) - (alpha_n - 1) psi'(alpha_n).
std::vector<double> dirichlet_entropy_grad(std::span<const double> alpha);

std::vector<double> dirichlet_mean(std::span<const double> alpha);
std::vector<double> dirichlet_variance(std::span<const double> alpha);

double digamma(double x);
double trigamma(double x);

}  // namespace uavroute
