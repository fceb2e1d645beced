#include "mlsm/metrics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace mlsm {

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::hunt: return "hunt";
        case Stage::pgd: return "pgd";
        case Stage::onestep: return "onestep";
    }
    throw std::logic_error("unknown stage");
}

Stage stage_from_string(const std::string& name) {
    if (name == "hunt") return Stage::hunt;
    if (name == "pgd") return Stage::pgd;
    if (name == "onestep") return Stage::onestep;
    throw std::invalid_argument("unknown stage: " + name);
}

double procrustes_distance2(const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols())
        throw std::invalid_argument("procrustes_distance2: shape mismatch");
    const Eigen::MatrixXd cross = Y.transpose() * X;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
    const double nuclear = svd.singularValues().sum();
    const double v = X.squaredNorm() + Y.squaredNorm() - 2.0 * nuclear;
    return std::max(v, 0.0);
}

double gram_error(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows())
        throw std::invalid_argument("gram_error: row count mismatch");
    const Eigen::MatrixXd diff = X * X.transpose() - Y * Y.transpose();
    return diff.squaredNorm() / static_cast<double>(X.rows());
}

ErrorRecord evaluate(const LatentFactors& f_hat, const LatentFactors& f_star,
                     Stage stage) {
    if (f_hat.T() != f_star.T())
        throw std::invalid_argument("evaluate: layer count mismatch");
    ErrorRecord rec;
    rec.stage = stage;
    rec.dist2_Z = procrustes_distance2(f_hat.Z, f_star.Z);
    rec.gram_err_Z = gram_error(f_hat.Z, f_star.Z);
    for (int t = 0; t < f_hat.T(); ++t) {
        rec.max_dist2_W = std::max(
            rec.max_dist2_W, procrustes_distance2(f_hat.W[t], f_star.W[t]));
        rec.per_layer_gram_err.push_back(gram_error(f_hat.W[t], f_star.W[t]));
    }
    return rec;
}

}  // namespace mlsm
