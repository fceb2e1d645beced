#include "mlsm/simgen.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace mlsm {

namespace {

// symmetric (pseudo-)roots via eigendecomposition
Eigen::MatrixXd sym_sqrt_clamped(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() <= 1e-12 * std::max(lam.maxCoeff(), 1.0))
        throw std::runtime_error("singular raw Gram matrix");
    return es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

std::string to_string(GramCase c) {
    switch (c) {
        case GramCase::A: return "A";
        case GramCase::B: return "B";
        case GramCase::C: return "C";
    }
    throw std::logic_error("unknown case");
}

GramCase gram_case_from_string(const std::string& name) {
    if (name == "A" || name == "a") return GramCase::A;
    if (name == "B" || name == "b") return GramCase::B;
    if (name == "C" || name == "c") return GramCase::C;
    throw std::invalid_argument("unknown case: " + name);
}

Eigen::MatrixXd build_omega(const GramDesign& d) {
    if (d.T < 1) throw std::invalid_argument("need T >= 1");
    const int m = 1 + d.T;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(m, m);
    switch (d.kase) {
        case GramCase::A:
            break;
        case GramCase::B:
            for (int t = 1; t < m; ++t) {
                omega(0, t) = d.phi;
                omega(t, 0) = d.phi;
                for (int s = t + 1; s < m; ++s) {
                    omega(t, s) = d.rho;
                    omega(s, t) = d.rho;
                }
            }
            break;
        case GramCase::C: {
            if (d.T_o >= d.T || d.T_o < 0)
                throw std::invalid_argument("Case C needs 0 <= T_o < T");
            for (int t = 1 + d.T_o; t < m; ++t)
                for (int s = 1 + d.T_o; s < m; ++s) omega(t, s) = 1.0;
            break;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("Omega is not positive semidefinite");
    return omega;
}

Eigen::MatrixXd sample_raw_factors(int n, int k, int T, RandomStream& rng) {
    if (k < 1 || T < 1) throw std::invalid_argument("need k >= 1 and T >= 1");
    if (n <= k * (1 + T))
        throw std::invalid_argument("need n > k(1+T) for an invertible raw Gram");
    const double bound = static_cast<double>(k);
    Eigen::MatrixXd raw(n, k * (1 + T));
    Eigen::VectorXd x(k);
    for (int b = 0; b <= T; ++b)
        for (int i = 0; i < n; ++i) {
            do {
                for (int c = 0; c < k; ++c) x(c) = rng.normal();
            } while (x.squaredNorm() > bound);
            raw.row(i).segment(b * k, k) = x.transpose();
        }
    return raw;
}

LatentFactors impose_gram(const Eigen::MatrixXd& raw, const GramDesign& d) {
    const int m = d.k * (1 + d.T);
    if (raw.cols() != m)
        throw std::invalid_argument("raw factor matrix has wrong width");
    const double n = static_cast<double>(raw.rows());

    const Eigen::MatrixXd omega = build_omega(d);
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(m, m);
    const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(d.k)));
    for (int a = 0; a <= d.T; ++a)
        for (int b = 0; b <= d.T; ++b)
            for (int c = 0; c < d.k; ++c)
                target(a * d.k + c, b * d.k + c) = omega(a, b) * scale;

    const Eigen::MatrixXd raw_gram = raw.transpose() * raw / n;
    const Eigen::MatrixXd X = raw * sym_inv_sqrt(raw_gram) * sym_sqrt_clamped(target);

    LatentFactors f;
    f.Z = X.leftCols(d.k);
    for (int t = 1; t <= d.T; ++t) f.W.push_back(X.middleCols(t * d.k, d.k));
    return f;
}

MultiplexNetwork generate_networks(const LatentFactors& f, Family fam,
                                   RandomStream& rng) {
    const auto theta = theta_from_factors(f);
    MultiplexNetwork net;
    net.n = f.n();
    net.T = f.T();
    net.family = fam;
    net.layers.assign(net.T, Eigen::MatrixXd::Zero(net.n, net.n));
    for (int t = 0; t < net.T; ++t) {
        RandomStream layer_rng = rng.derive(t, 0x6c617965);  // per-layer stream
        for (int j = 0; j < net.n; ++j)
            for (int i = 0; i <= j; ++i) {
                const double a = sample_edge(theta[t](i, j), fam, layer_rng);
                net.layers[t](i, j) = a;
                net.layers[t](j, i) = a;
            }
    }
    return net;
}

double suggest_m1(const LatentFactors& f) {
    double m = f.Z.rowwise().norm().maxCoeff();
    for (const auto& Wt : f.W)
        m = std::max(m, Wt.rowwise().norm().maxCoeff());
    return m * 1.05;
}

}  // namespace mlsm
