#ifndef MLSM_EXPFAM_HPP
#define MLSM_EXPFAM_HPP

#include <Eigen/Core>
#include <string>

#include "mlsm/rng.hpp"

namespace mlsm {

// One-parameter natural exponential families used for edge weights.
// nu is the log-partition function, nu' the mean, nu'' the variance,
// and the link is (nu')^{-1}.
enum class Family { Gaussian, Bernoulli, Poisson };

std::string to_string(Family fam);
Family family_from_string(const std::string& name);

// Bernoulli and Poisson layers carry integer weights.
inline bool is_count_family(Family fam) { return fam != Family::Gaussian; }

// nu(theta): theta^2/2, log(1+e^theta), e^theta
double log_partition(double theta, Family fam);

// nu'(theta): theta, sigmoid(theta), e^theta
double mean(double theta, Family fam);

// nu''(theta): 1, sigmoid(theta)(1-sigmoid(theta)), e^theta
double variance(double theta, Family fam);

// (nu')^{-1}(mu). Domain: R (Gaussian), (0,1) (Bernoulli), (0,inf) (Poisson);
// callers clip before calling.
double link(double mu, Family fam);

// One draw from F_nu(.; theta): N(theta,1), Bernoulli(sigmoid(theta)),
// Poisson(e^theta).
double sample_edge(double theta, Family fam, RandomStream& rng);

// Entrywise matrix versions, keeping the family dispatch out of hot loops.
Eigen::MatrixXd apply_log_partition(const Eigen::MatrixXd& theta, Family fam);
Eigen::MatrixXd apply_mean(const Eigen::MatrixXd& theta, Family fam);
Eigen::MatrixXd apply_variance(const Eigen::MatrixXd& theta, Family fam);

}  // namespace mlsm

#endif
