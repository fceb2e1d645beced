#ifndef MLSM_METRICS_HPP
#define MLSM_METRICS_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mlsm/netdata.hpp"

namespace mlsm {

enum class Stage { hunt, pgd, onestep };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& name);

// min over orthogonal Q of ||X - Y Q||_F^2, closed form via the nuclear
// norm of Y^T X.
double procrustes_distance2(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// ||X X^T - Y Y^T||_F^2 / n; column counts may differ.
double gram_error(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

struct ErrorRecord {
    double dist2_Z = 0.0;
    double max_dist2_W = 0.0;
    double gram_err_Z = 0.0;
    std::vector<double> per_layer_gram_err;
    Stage stage = Stage::hunt;
};

ErrorRecord evaluate(const LatentFactors& f_hat, const LatentFactors& f_star,
                     Stage stage);

}  // namespace mlsm

#endif
