#include "mlsm/netdata.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mlsm {

namespace {

bool is_integer_value(double w) {
    return std::isfinite(w) && w == std::floor(w);
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

// round-trip exact for IEEE doubles
void print_double(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    os << buf;
}

}  // namespace

void MultiplexNetwork::validate() const {
    if (static_cast<int>(layers.size()) != T)
        throw std::invalid_argument("layer count does not match T");
    for (int t = 0; t < T; ++t) {
        const Eigen::MatrixXd& A = layers[t];
        if (A.rows() != n || A.cols() != n)
            throw std::invalid_argument("layer " + std::to_string(t) +
                                        " is not n x n");
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i) {
                const double w = A(i, j);
                if (A(j, i) != w)
                    throw std::invalid_argument(
                        "layer " + std::to_string(t) + " asymmetric at (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
                if (family == Family::Bernoulli && w != 0.0 && w != 1.0)
                    throw std::invalid_argument(
                        "Bernoulli layer with entry outside {0,1}");
                if (family == Family::Poisson &&
                    (w < 0.0 || !is_integer_value(w)))
                    throw std::invalid_argument(
                        "Poisson layer with non-count entry");
            }
    }
}

int LatentFactors::k_sum() const {
    int s = 0;
    for (const auto& Wt : W) s += static_cast<int>(Wt.cols());
    return s;
}

Eigen::MatrixXd LatentFactors::Y(int t) const {
    Eigen::MatrixXd out(n(), k() + k_t(t));
    out.leftCols(k()) = Z;
    out.rightCols(k_t(t)) = W[t];
    return out;
}

std::vector<Eigen::MatrixXd> theta_from_factors(const LatentFactors& f) {
    const int nn = f.n();
    for (const auto& Wt : f.W)
        if (Wt.rows() != nn)
            throw std::invalid_argument("factor row counts differ");
    std::vector<Eigen::MatrixXd> theta;
    theta.reserve(f.T());
    const Eigen::MatrixXd ZZt = f.Z * f.Z.transpose();
    for (int t = 0; t < f.T(); ++t)
        theta.push_back(ZZt + f.W[t] * f.W[t].transpose());
    return theta;
}

ConditionReport validate_conditions(const LatentFactors& f, double M1,
                                    double pair_tol) {
    ConditionReport rep;
    rep.pair_tol = pair_tol;
    rep.max_row_norm_Z = f.Z.rowwise().norm().maxCoeff();
    rep.row_bound_ok = rep.max_row_norm_Z <= M1;
    for (int t = 0; t < f.T(); ++t) {
        const double m = f.W[t].rowwise().norm().maxCoeff();
        rep.max_row_norm_W.push_back(m);
        if (m > M1) rep.row_bound_ok = false;
    }

    const double n = static_cast<double>(f.n());
    for (int t = 0; t < f.T(); ++t) {
        const Eigen::MatrixXd Yt = f.Y(t);
        const Eigen::MatrixXd G = Yt.transpose() * Yt / n;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
        rep.sigma_min_Gt.push_back(svd.singularValues().minCoeff());
    }
    for (int t = 0; t < f.T(); ++t)
        for (int s = t + 1; s < f.T(); ++s) {
            Eigen::MatrixXd X(f.n(), f.k() + f.k_t(t) + f.k_t(s));
            X.leftCols(f.k()) = f.Z;
            X.middleCols(f.k(), f.k_t(t)) = f.W[t];
            X.rightCols(f.k_t(s)) = f.W[s];
            const Eigen::MatrixXd G = X.transpose() * X / n;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
            const double sm = svd.singularValues().minCoeff();
            rep.sigma_min_Gts.push_back({t, s, sm});
            if (sm > pair_tol) rep.any_identifiable_pair = true;
        }
    return rep;
}

MultiplexNetwork load_multiplex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    MultiplexNetwork net;
    std::string line;
    bool have_header = false;
    std::vector<Eigen::MatrixXd> seen;  // NaN marks "not listed yet"

    while (std::getline(in, line)) {
        const std::string body = strip_comment(line);
        if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(body);
        if (!have_header) {
            std::string famtok;
            if (!(ss >> net.n >> net.T >> famtok))
                throw std::runtime_error("bad header in " + path);
            if (net.n <= 0 || net.T <= 0)
                throw std::runtime_error("bad dimensions in header of " + path);
            net.family = family_from_string(famtok);
            net.layers.assign(net.T, Eigen::MatrixXd::Zero(net.n, net.n));
            seen.assign(net.T, Eigen::MatrixXd::Constant(
                                   net.n, net.n,
                                   std::numeric_limits<double>::quiet_NaN()));
            have_header = true;
            continue;
        }
        int t, i, j;
        double w;
        if (!(ss >> t >> i >> j >> w))
            throw std::runtime_error("bad edge line: " + line);
        if (t < 0 || t >= net.T)
            throw std::runtime_error("layer index out of range: " +
                                     std::to_string(t));
        if (i < 0 || j < 0 || i >= net.n || j >= net.n)
            throw std::runtime_error("node index out of range in line: " + line);
        if (i > j) std::swap(i, j);
        if (is_count_family(net.family) && !is_integer_value(w))
            throw std::runtime_error("non-integer weight in count layer: " +
                                     line);
        double& mark = seen[t](i, j);
        if (!std::isnan(mark) && mark != w)
            throw std::runtime_error("conflicting duplicate entry for (" +
                                     std::to_string(t) + "," +
                                     std::to_string(i) + "," +
                                     std::to_string(j) + ")");
        mark = w;
        net.layers[t](i, j) = w;
        net.layers[t](j, i) = w;
    }
    if (!have_header) throw std::runtime_error("missing header in " + path);
    net.validate();
    return net;
}

MultiplexNetwork load_multiplex(const std::string& path, Family expected) {
    MultiplexNetwork net = load_multiplex(path);
    if (net.family != expected)
        throw std::runtime_error("file family " + to_string(net.family) +
                                 " does not match expected " +
                                 to_string(expected));
    return net;
}

void save_multiplex(const MultiplexNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << net.n << ' ' << net.T << ' ' << to_string(net.family) << '\n';
    for (int t = 0; t < net.T; ++t)
        for (int j = 0; j < net.n; ++j)
            for (int i = 0; i <= j; ++i) {
                const double w = net.layers[t](i, j);
                if (w == 0.0) continue;
                out << t << ' ' << i << ' ' << j << ' ';
                print_double(out, w);
                out << '\n';
            }
    if (!out) throw std::runtime_error("write failed for " + path);
}

Eigen::MatrixXd load_factor_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    int n = -1, k = -1;
    std::string line;
    Eigen::MatrixXd X;
    int row = 0;
    while (std::getline(in, line)) {
        const std::string body = strip_comment(line);
        if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(body);
        if (n < 0) {
            if (!(ss >> n >> k))
                throw std::runtime_error("bad factor header in " + path);
            if (n <= 0 || k < 0)
                throw std::runtime_error("bad factor dimensions in " + path);
            X.resize(n, k);
            continue;
        }
        if (row >= n) throw std::runtime_error("too many rows in " + path);
        for (int c = 0; c < k; ++c)
            if (!(ss >> X(row, c)))
                throw std::runtime_error("short row in " + path);
        ++row;
    }
    if (n < 0 || row != n)
        throw std::runtime_error("row count mismatch in " + path);
    return X;
}

void save_factor_matrix(const Eigen::MatrixXd& X, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << X.rows() << ' ' << X.cols() << '\n';
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (j) out << ' ';
            print_double(out, X(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace mlsm
