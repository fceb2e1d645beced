#include "mlsm/expfam.hpp"

#include <cmath>
#include <stdexcept>

namespace mlsm {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void require_finite(double theta) {
    if (!std::isfinite(theta))
        throw std::domain_error("non-finite natural parameter");
}

// Knuth inversion, usable for small means.
long poisson_inversion(double lambda, RandomStream& rng) {
    const double limit = std::exp(-lambda);
    long k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform01();
    } while (p > limit);
    return k - 1;
}

// Hormann's PTRS transformed rejection, for large means.
long poisson_ptrs(double lambda, RandomStream& rng) {
    const double log_lambda = std::log(lambda);
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform01() - 0.5;
        const double v = rng.uniform01();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_lambda - lambda - std::lgamma(kf + 1.0))
            return static_cast<long>(kf);
    }
}

}  // namespace

std::string to_string(Family fam) {
    switch (fam) {
        case Family::Gaussian: return "gaussian";
        case Family::Bernoulli: return "bernoulli";
        case Family::Poisson: return "poisson";
    }
    throw std::logic_error("unknown family");
}

Family family_from_string(const std::string& name) {
    if (name == "gaussian") return Family::Gaussian;
    if (name == "bernoulli") return Family::Bernoulli;
    if (name == "poisson") return Family::Poisson;
    throw std::invalid_argument("unknown family: " + name);
}

double log_partition(double theta, Family fam) {
    require_finite(theta);
    switch (fam) {
        case Family::Gaussian:
            return 0.5 * theta * theta;
        case Family::Bernoulli:
            // log(1+e^theta), overflow-safe
            return std::max(theta, 0.0) + std::log1p(std::exp(-std::fabs(theta)));
        case Family::Poisson:
            return std::exp(theta);
    }
    throw std::logic_error("unknown family");
}

double mean(double theta, Family fam) {
    require_finite(theta);
    switch (fam) {
        case Family::Gaussian: return theta;
        case Family::Bernoulli: return sigmoid(theta);
        case Family::Poisson: return std::exp(theta);
    }
    throw std::logic_error("unknown family");
}

double variance(double theta, Family fam) {
    require_finite(theta);
    switch (fam) {
        case Family::Gaussian: return 1.0;
        case Family::Bernoulli: {
            const double p = sigmoid(theta);
            return p * (1.0 - p);
        }
        case Family::Poisson: return std::exp(theta);
    }
    throw std::logic_error("unknown family");
}

double link(double mu, Family fam) {
    if (!std::isfinite(mu)) throw std::domain_error("non-finite mean value");
    switch (fam) {
        case Family::Gaussian:
            return mu;
        case Family::Bernoulli:
            if (mu <= 0.0 || mu >= 1.0)
                throw std::domain_error("Bernoulli link needs mu in (0,1)");
            return std::log(mu / (1.0 - mu));
        case Family::Poisson:
            if (mu <= 0.0)
                throw std::domain_error("Poisson link needs mu > 0");
            return std::log(mu);
    }
    throw std::logic_error("unknown family");
}

double sample_edge(double theta, Family fam, RandomStream& rng) {
    require_finite(theta);
    switch (fam) {
        case Family::Gaussian:
            return theta + rng.normal();
        case Family::Bernoulli:
            return rng.uniform01() < sigmoid(theta) ? 1.0 : 0.0;
        case Family::Poisson: {
            const double lambda = std::exp(theta);
            if (lambda < 30.0)
                return static_cast<double>(poisson_inversion(lambda, rng));
            return static_cast<double>(poisson_ptrs(lambda, rng));
        }
    }
    throw std::logic_error("unknown family");
}

Eigen::MatrixXd apply_log_partition(const Eigen::MatrixXd& theta, Family fam) {
    switch (fam) {
        case Family::Gaussian:
            return (0.5 * theta.array().square()).matrix();
        case Family::Bernoulli:
            return (theta.array().max(0.0) +
                    (-theta.array().abs()).exp().log1p()).matrix();
        case Family::Poisson:
            return theta.array().exp().matrix();
    }
    throw std::logic_error("unknown family");
}

Eigen::MatrixXd apply_mean(const Eigen::MatrixXd& theta, Family fam) {
    switch (fam) {
        case Family::Gaussian:
            return theta;
        case Family::Bernoulli:
            return theta.unaryExpr([](double x) { return sigmoid(x); });
        case Family::Poisson:
            return theta.array().exp().matrix();
    }
    throw std::logic_error("unknown family");
}

Eigen::MatrixXd apply_variance(const Eigen::MatrixXd& theta, Family fam) {
    switch (fam) {
        case Family::Gaussian:
            return Eigen::MatrixXd::Ones(theta.rows(), theta.cols());
        case Family::Bernoulli:
            return theta.unaryExpr([](double x) {
                const double p = sigmoid(x);
                return p * (1.0 - p);
            });
        case Family::Poisson:
            return theta.array().exp().matrix();
    }
    throw std::logic_error("unknown family");
}

}  // namespace mlsm
