#include "rrsense/ssa.hpp"

#include <Eigen/Dense>

#include "rrsense/types.hpp"

namespace rrsense {

namespace {

// Diagonal averaging of the rank-one matrix u * w^T back to a series of
// length n, where u is L x 1 and w is K x 1 (n = L + K - 1).
std::vector<double> diagonal_average(const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    const long L = u.size();
    const long K = w.size();
    const long n = L + K - 1;
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    std::vector<double> counts(static_cast<std::size_t>(n), 0.0);
    for (long i = 0; i < L; ++i) {
        const double ui = u[i];
        for (long j = 0; j < K; ++j) {
            out[static_cast<std::size_t>(i + j)] += ui * w[j];
            counts[static_cast<std::size_t>(i + j)] += 1.0;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= counts[i];
    return out;
}

}  // namespace

SsaDecomposition ssa_decompose(const std::vector<double>& series,
                               std::size_t window_length,
                               std::size_t max_components) {
    const std::size_t n = series.size();
    if (window_length < 2 || window_length > n / 2)
        throw parameter_error("ssa_decompose: window_length out of [2, n/2]");
    if (max_components < 1 || max_components > window_length)
        throw parameter_error("ssa_decompose: max_components out of [1, window_length]");

    const long L = static_cast<long>(window_length);
    const long K = static_cast<long>(n - window_length + 1);

    Eigen::MatrixXd X(L, K);  // trajectory matrix
    for (long i = 0; i < L; ++i)
        for (long j = 0; j < K; ++j)
            X(i, j) = series[static_cast<std::size_t>(i + j)];

    // Eigendecomposition of the L x L lag-covariance matrix; cheaper than a
    // full SVD of X for long series and gives the same eigentriples.
    const Eigen::MatrixXd C = X * X.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    // eigenvalues ascend; walk them from the back

    SsaDecomposition out;
    out.window_length = window_length;

    const std::size_t n_lead = std::min<std::size_t>(max_components, window_length);
    std::vector<double> partial(n, 0.0);
    for (std::size_t c = 0; c < n_lead; ++c) {
        const long idx = L - 1 - static_cast<long>(c);
        const Eigen::VectorXd u = eig.eigenvectors().col(idx);
        const Eigen::VectorXd w = X.transpose() * u;  // = sigma * v
        auto comp = diagonal_average(u, w);
        for (std::size_t i = 0; i < n; ++i) partial[i] += comp[i];
        out.components.push_back(std::move(comp));
    }

    // Residual of everything beyond max_components; keeps the component sum
    // equal to the input even when the decomposition is truncated.
    if (n_lead < window_length) {
        std::vector<double> residual(n);
        for (std::size_t i = 0; i < n; ++i) residual[i] = series[i] - partial[i];
        out.components.push_back(std::move(residual));
    }
    return out;
}

}  // namespace rrsense
