#include "mlsm/fit_single.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "mlsm/errors.hpp"

namespace mlsm {

double single_loglik(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& A,
                     Family fam) {
    const Eigen::MatrixXd theta = Y * Y.transpose();
    const Eigen::MatrixXd terms =
        A.cwiseProduct(theta) - apply_log_partition(theta, fam);
    // full sum counts off-diagonal pairs twice
    return 0.5 * (terms.sum() + terms.trace());
}

Eigen::MatrixXd single_grad(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& A,
                            Family fam) {
    const Eigen::MatrixXd theta = Y * Y.transpose();
    Eigen::MatrixXd R = A - apply_mean(theta, fam);
    R.diagonal() *= 2.0;
    return R * Y;
}

Eigen::MatrixXd spectral_init(const Eigen::MatrixXd& A, int d, Family fam) {
    const int n = static_cast<int>(A.rows());
    if (d > n) throw std::invalid_argument("spectral_init: d > n");
    Eigen::MatrixXd E;
    switch (fam) {
        case Family::Gaussian:
            E = A;
            break;
        case Family::Bernoulli: {
            const double lo = 1.0 / n, hi = 1.0 - 1.0 / n;
            E = A.unaryExpr([lo, hi](double a) {
                const double p = std::min(std::max(a, lo), hi);
                return std::log(p / (1.0 - p));
            });
            break;
        }
        case Family::Poisson: {
            const double lo = 1.0 / n;
            E = A.unaryExpr(
                [lo](double a) { return std::log(std::max(a, lo)); });
            break;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E);
    Eigen::MatrixXd Y(n, d);
    for (int c = 0; c < d; ++c) {
        const int idx = n - 1 - c;  // eigenvalues ascend; take the top d
        const double lam = std::max(es.eigenvalues()(idx), 0.0);
        Y.col(c) = es.eigenvectors().col(idx) * std::sqrt(lam);
    }
    return Y;
}

void project_rows(Eigen::MatrixXd& X, double M1) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double r = X.row(i).norm();
        if (r > M1) X.row(i) *= M1 / r;
    }
}

Eigen::MatrixXd fit_individual(const Eigen::MatrixXd& A,
                               const SingleFitConfig& cfg, Family fam,
                               std::vector<double>* loglik_trace) {
    if (cfg.d < 1) throw std::invalid_argument("fit_individual: d < 1");
    if (cfg.eta <= 0.0) throw std::invalid_argument("fit_individual: eta <= 0");
    if (cfg.tol < 0.0) throw std::invalid_argument("fit_individual: tol < 0");
    const int n = static_cast<int>(A.rows());

    Eigen::MatrixXd Y = spectral_init(A, cfg.d, fam);
    project_rows(Y, cfg.M1);
    double L = single_loglik(Y, A, fam);
    if (!std::isfinite(L))
        throw NumericalError("non-finite likelihood at initialization", 0);
    if (loglik_trace) loglik_trace->push_back(L);

    const double base_step = cfg.eta / n;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const Eigen::MatrixXd G = single_grad(Y, A, fam);
        double step = base_step;
        Eigen::MatrixXd cand = Y + step * G;
        project_rows(cand, cfg.M1);
        double Lc = single_loglik(cand, A, fam);

        if (cfg.backtrack) {
            int halvings = 0;
            while ((!std::isfinite(Lc) || Lc < L) && halvings < 30) {
                step *= 0.5;
                cand = Y + step * G;
                project_rows(cand, cfg.M1);
                Lc = single_loglik(cand, A, fam);
                ++halvings;
            }
            if (!std::isfinite(Lc) || Lc < L) break;  // no ascent possible
        } else if (!std::isfinite(Lc)) {
            throw NumericalError("non-finite likelihood", iter);
        }

        Y = cand;
        if (loglik_trace) loglik_trace->push_back(Lc);
        const bool converged = std::fabs(Lc - L) / (1.0 + std::fabs(L)) < cfg.tol;
        L = Lc;
        if (converged) break;
    }
    return Y;
}

}  // namespace mlsm
