#include "jade.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ippg::detail {

Eigen::MatrixXd jade_unmixing(const Eigen::MatrixXd& x) {
    const Eigen::Index m = x.rows();
    const Eigen::Index n = x.cols();
    if (m < 2 || n < 8 * m) throw std::invalid_argument("jade: too few samples");

    // Whitening from the covariance eigendecomposition.
    const Eigen::MatrixXd cov = x * x.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw std::runtime_error("jade: eigendecomposition failed");
    const Eigen::VectorXd evals = eig.eigenvalues();
    if (evals(0) <= 1e-12 * evals(m - 1) || evals(m - 1) <= 0.0)
        throw std::runtime_error("degenerate channels");
    const Eigen::MatrixXd whitener =
        evals.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::MatrixXd z = whitener * x;

    // Parallel set of fourth-order cumulant matrices.
    const Eigen::MatrixXd r = z * z.transpose() / static_cast<double>(n);
    std::vector<Eigen::MatrixXd> cm;
    cm.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
    const double sqrt2 = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto zi = z.row(i).array();
        {
            const Eigen::MatrixXd weighted = z.array().rowwise() * (zi * zi);
            Eigen::MatrixXd q = weighted * z.transpose() / static_cast<double>(n) - r -
                                2.0 * r.col(i) * r.col(i).transpose();
            cm.push_back(std::move(q));
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            const auto zj = z.row(j).array();
            const Eigen::MatrixXd weighted = z.array().rowwise() * (zi * zj);
            Eigen::MatrixXd q = sqrt2 * (weighted * z.transpose() / static_cast<double>(n) -
                                         r.col(i) * r.col(j).transpose() -
                                         r.col(j) * r.col(i).transpose());
            cm.push_back(std::move(q));
        }
    }

    // Joint diagonalization by Jacobi rotations.
    constexpr double kThreshold = 1e-8;
    constexpr int kMaxSweeps = 100;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(m, m);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p < m - 1; ++p) {
            for (Eigen::Index q = p + 1; q < m; ++q) {
                double g11 = 0.0, g12 = 0.0, g22 = 0.0;
                for (const auto& c : cm) {
                    const double a = c(p, p) - c(q, q);
                    const double b = c(p, q) + c(q, p);
                    g11 += a * a;
                    g12 += a * b;
                    g22 += b * b;
                }
                const double ton = g11 - g22;
                const double toff = 2.0 * g12;
                const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
                if (std::abs(theta) <= kThreshold) continue;
                rotated = true;
                const double c0 = std::cos(theta), s0 = std::sin(theta);
                for (auto& c : cm) {
                    for (Eigen::Index k = 0; k < m; ++k) {  // rotate rows p,q
                        const double cp = c(p, k), cq = c(q, k);
                        c(p, k) = c0 * cp + s0 * cq;
                        c(q, k) = -s0 * cp + c0 * cq;
                    }
                    for (Eigen::Index k = 0; k < m; ++k) {  // rotate cols p,q
                        const double cp = c(k, p), cq = c(k, q);
                        c(k, p) = c0 * cp + s0 * cq;
                        c(k, q) = -s0 * cp + c0 * cq;
                    }
                }
                for (Eigen::Index k = 0; k < m; ++k) {
                    const double vp = v(k, p), vq = v(k, q);
                    v(k, p) = c0 * vp + s0 * vq;
                    v(k, q) = -s0 * vp + c0 * vq;
                }
            }
        }
        if (!rotated) break;
    }

    return v.transpose() * whitener;
}

}  // namespace ippg::detail
