#ifndef MLSM_FIT_SINGLE_HPP
#define MLSM_FIT_SINGLE_HPP

#include <Eigen/Core>
#include <vector>

#include "mlsm/expfam.hpp"

namespace mlsm {

struct SingleFitConfig {
    int d = 1;             // latent dimension of [Z, W_t]
    double eta = 1.0;      // step constant; per-iteration step is eta/n
    int max_iter = 2000;
    double M1 = 1.0;       // row-norm constraint radius
    double tol = 1e-9;     // relative likelihood-change stopping tolerance
    bool backtrack = true; // step halving on likelihood decrease
};

// sum over i <= j of A_ij theta_ij - nu(theta_ij), theta = Y Y^T
double single_loglik(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& A,
                     Family fam);

// Gradient of single_loglik in Y: (R + diag(R)) Y with R = A - nu'(Y Y^T).
// The diagonal is doubled because theta_ii is quadratic in y_i.
Eigen::MatrixXd single_grad(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& A,
                            Family fam);

// Entrywise link of the (clipped) adjacency matrix followed by a rank-d
// eigen square root with negative eigenvalues clamped.
Eigen::MatrixXd spectral_init(const Eigen::MatrixXd& A, int d, Family fam);

// Euclidean projection onto the 2->infinity ball: oversized rows are
// rescaled to norm exactly M1, rows inside are untouched.
void project_rows(Eigen::MatrixXd& X, double M1);

// Projected gradient ascent on the single-network likelihood from
// spectral_init. Accepted iterations are non-decreasing in likelihood
// when backtracking is on.
Eigen::MatrixXd fit_individual(const Eigen::MatrixXd& A,
                               const SingleFitConfig& cfg, Family fam,
                               std::vector<double>* loglik_trace = nullptr);

}  // namespace mlsm

#endif
