#include "mlsm/hunt.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mlsm {

namespace {

void check_inputs(const std::vector<Eigen::MatrixXd>& Ys, int k,
                  const std::vector<int>& dims) {
    if (Ys.size() < 2)
        throw std::invalid_argument("screening needs at least two layers");
    if (dims.size() != Ys.size())
        throw std::invalid_argument("dims size does not match layer count");
    for (std::size_t t = 0; t < Ys.size(); ++t) {
        if (Ys[t].rows() != Ys[0].rows())
            throw std::invalid_argument("layer estimates have different n");
        if (Ys[t].cols() != k + dims[t])
            throw std::invalid_argument("layer " + std::to_string(t) +
                                        " estimate is not n x (k + k_t)");
    }
}

}  // namespace

std::string ScreeningSet::table() const {
    std::ostringstream os;
    os << "pair\tratio\tincluded (tau1 = " << tau1 << ")\n";
    for (const auto& p : all) {
        char buf[64];
        if (std::isinf(p.ratio))
            std::snprintf(buf, sizeof(buf), "inf");
        else
            std::snprintf(buf, sizeof(buf), "%.6g", p.ratio);
        os << "(" << p.t << "," << p.s << ")\t" << buf << "\t"
           << (p.included ? "yes" : "no") << "\n";
    }
    return os.str();
}

double default_tau1(int n) { return std::sqrt(2.0 * std::log(n)); }

ScreeningSet screen_pairs(const std::vector<Eigen::MatrixXd>& Ys, int k,
                          const std::vector<int>& dims, double tau1) {
    check_inputs(Ys, k, dims);
    if (tau1 < 1.0) throw std::invalid_argument("tau1 must be >= 1");
    const int T = static_cast<int>(Ys.size());
    const int n = static_cast<int>(Ys[0].rows());

    ScreeningSet out;
    out.tau1 = tau1;
    for (int t = 0; t < T; ++t)
        for (int s = t + 1; s < T; ++s) {
            const int dt = k + dims[t], ds = k + dims[s];
            const int j = k + dims[t] + dims[s];  // index of the tested value
            if (j > std::min(n, dt + ds))
                throw std::invalid_argument(
                    "screening ratio undefined: k + k_t + k_s exceeds the "
                    "number of singular values");
            Eigen::MatrixXd stacked(n, dt + ds);
            stacked.leftCols(dt) = Ys[t];
            stacked.rightCols(ds) = Ys[s];
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
            const Eigen::VectorXd sv = svd.singularValues();
            const double s1 = sv(0);
            const double sj = sv(j - 1);
            double ratio;
            if (sj <= 1e-14 * s1)
                ratio = std::numeric_limits<double>::infinity();
            else
                ratio = s1 / sj;
            const bool inc = ratio <= tau1;
            out.all.push_back({t, s, ratio, inc});
            if (inc) out.pairs.emplace_back(t, s);
        }
    return out;
}

Eigen::MatrixXd null_basis(const Eigen::MatrixXd& Yts, int k) {
    const int D = static_cast<int>(Yts.cols());
    if (k < 0 || k > D) throw std::invalid_argument("null_basis: bad k");
    if (k == 0) return Eigen::MatrixXd(D, 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Yts, Eigen::ComputeFullV);
    // singular values descend, so the trailing k columns of V span the
    // smallest-singular-value subspace
    return svd.matrixV().rightCols(k);
}

Eigen::MatrixXd aggregate_F(const std::vector<Eigen::MatrixXd>& Ys,
                            const ScreeningSet& S, int k) {
    if (S.pairs.empty()) throw NoIdentifiablePair(S);
    const int n = static_cast<int>(Ys[0].rows());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [t, s] : S.pairs) {
        const int dt = static_cast<int>(Ys[t].cols());
        const int ds = static_cast<int>(Ys[s].cols());
        Eigen::MatrixXd stacked(n, dt + ds);
        stacked.leftCols(dt) = Ys[t];
        stacked.rightCols(ds) = Ys[s];
        const Eigen::MatrixXd V = null_basis(stacked, k);
        stacked.rightCols(ds) = -Ys[s];  // Y_{t,-s}
        const Eigen::MatrixXd B = stacked * V;
        F.noalias() += B * B.transpose();
    }
    F /= 2.0 * static_cast<double>(S.pairs.size());
    return 0.5 * (F + F.transpose());
}

Eigen::MatrixXd sqrt_top_k(const Eigen::MatrixXd& F, int k) {
    const int n = static_cast<int>(F.rows());
    if (k > n) throw std::invalid_argument("sqrt_top_k: k > n");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F);
    Eigen::MatrixXd X(n, k);
    for (int c = 0; c < k; ++c) {
        const int idx = n - 1 - c;
        const double lam = std::max(es.eigenvalues()(idx), 0.0);
        Eigen::VectorXd u = es.eigenvectors().col(idx);
        for (int i = 0; i < n; ++i) {
            if (u(i) != 0.0) {
                if (u(i) < 0.0) u = -u;
                break;
            }
        }
        X.col(c) = u * std::sqrt(lam);
    }
    return X;
}

HuntResult hunt_shared(const std::vector<Eigen::MatrixXd>& Ys, int k,
                       const std::vector<int>& dims, double tau1) {
    check_inputs(Ys, k, dims);
    HuntResult res;
    res.screening = screen_pairs(Ys, k, dims, tau1);
    res.F = aggregate_F(Ys, res.screening, k);
    res.factors.Z = sqrt_top_k(res.F, k);
    for (std::size_t t = 0; t < Ys.size(); ++t) {
        const Eigen::MatrixXd G = Ys[t] * Ys[t].transpose() - res.F;
        res.factors.W.push_back(sqrt_top_k(G, dims[t]));
    }
    return res;
}

}  // namespace mlsm
