#include "rffmd/normal_equations.hpp"

#include <vector>

#include "rffmd/errors.hpp"
#include "rffmd/parallel.hpp"

namespace rffmd {

namespace {

// Fixed so that the reduction order never depends on the worker count.
constexpr std::size_t kPartitions = 8;
constexpr Eigen::Index kBlockRows = 1024;

void check_shapes(const Eigen::MatrixXd& freqs, const Eigen::MatrixXd& points) {
    if (freqs.cols() != points.cols())
        throw InvalidArgument("frequency and data dimensions differ");
    if (freqs.rows() < 1) throw InvalidArgument("need at least one frequency");
}

} // namespace

Eigen::MatrixXcd feature_block(const Eigen::MatrixXd& freqs, const Eigen::MatrixXd& points,
                               Eigen::Index begin, Eigen::Index end) {
    const Eigen::Index rows = end - begin;
    const Eigen::Index K = freqs.rows();
    const Eigen::MatrixXd phase = points.middleRows(begin, rows) * freqs.transpose();
    Eigen::MatrixXcd phi(rows, K);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index j = 0; j < rows; ++j) {
            const double t = phase(j, k);
            phi(j, k) = Complex(std::cos(t), std::sin(t));
        }
    return phi;
}

double NormalEquations::loss(const Eigen::VectorXcd& eta) const {
    const double quad = eta.dot(gram * eta).real();
    const double lin = rhs.dot(eta).real();
    return quad - 2.0 * lin + data_constant;
}

NormalEquations build_normal_equations(const Eigen::MatrixXd& freqs, const Dataset& data,
                                       const RegularizationParams& r) {
    check_shapes(freqs, data.points());
    const Eigen::Index K = freqs.rows();
    const Eigen::Index d = freqs.cols();
    const Eigen::Index J = data.size();

    // Right-hand side columns [v, dv/dx1, ..., dv/dxd].
    Eigen::MatrixXd targets(J, d + 1);
    targets.col(0) = data.values();
    targets.rightCols(d) = data.grads();

    std::vector<Eigen::MatrixXcd> grams(kPartitions);
    std::vector<Eigen::MatrixXcd> projs(kPartitions);
    parallel_for(kPartitions, [&](std::size_t p) {
        const Range range = partition_range(static_cast<std::size_t>(J), kPartitions, p);
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(K, K);
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(K, d + 1);
        for (auto b = static_cast<Eigen::Index>(range.begin); b < static_cast<Eigen::Index>(range.end);
             b += kBlockRows) {
            const Eigen::Index e = std::min<Eigen::Index>(b + kBlockRows, range.end);
            const Eigen::MatrixXcd phi = feature_block(freqs, data.points(), b, e);
            g.selfadjointView<Eigen::Lower>().rankUpdate(phi.adjoint());
            proj.noalias() += phi.adjoint() * targets.middleRows(b, e - b).cast<Complex>();
        }
        grams[p] = std::move(g);
        projs[p] = std::move(proj);
    });

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(K, K);
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(K, d + 1);
    for (std::size_t p = 0; p < kPartitions; ++p) {
        gram += grams[p];
        proj += projs[p];
    }
    gram = gram.selfadjointView<Eigen::Lower>();

    const double inv_j = 1.0 / static_cast<double>(J);
    const Eigen::MatrixXd weight =
        (r.alpha2 * (freqs * freqs.transpose())).array() + r.alpha1;

    NormalEquations ne;
    ne.gram = (gram.array() * weight.array().cast<Complex>()).matrix() * inv_j;
    // b_k = (1/J) [a1 (Phi^H v)_k - i a2 sum_a omega_ka (Phi^H dv_a)_k]
    Eigen::VectorXcd grad_part = Eigen::VectorXcd::Zero(K);
    for (Eigen::Index a = 0; a < d; ++a)
        grad_part += (freqs.col(a).cast<Complex>().array() * proj.col(a + 1).array()).matrix();
    ne.rhs = (r.alpha1 * proj.col(0) - Complex(0.0, r.alpha2) * grad_part) * inv_j;
    ne.data_constant = (r.alpha1 * data.values().squaredNorm() + r.alpha2 * data.grads().squaredNorm()) * inv_j;
    return ne;
}

NetworkOutputs evaluate_on_data(const Eigen::MatrixXd& freqs, const Eigen::VectorXcd& amps,
                                const Eigen::MatrixXd& points) {
    check_shapes(freqs, points);
    if (amps.size() != freqs.rows()) throw InvalidArgument("amplitude count mismatch");
    const Eigen::Index J = points.rows();
    const Eigen::Index d = freqs.cols();

    // Column 0: eta, column 1 + a: i omega_a eta.
    Eigen::MatrixXcd coef(freqs.rows(), d + 1);
    coef.col(0) = amps;
    for (Eigen::Index a = 0; a < d; ++a)
        coef.col(a + 1) = Complex(0.0, 1.0) * (freqs.col(a).cast<Complex>().array() * amps.array()).matrix();

    Eigen::MatrixXcd out(J, d + 1);
    const std::size_t blocks = static_cast<std::size_t>((J + kBlockRows - 1) / kBlockRows);
    parallel_for(blocks, [&](std::size_t i) {
        const Eigen::Index b = static_cast<Eigen::Index>(i) * kBlockRows;
        const Eigen::Index e = std::min<Eigen::Index>(b + kBlockRows, J);
        out.middleRows(b, e - b).noalias() = feature_block(freqs, points, b, e) * coef;
    });

    NetworkOutputs res;
    res.values = out.col(0);
    res.grads = out.rightCols(d);
    return res;
}

} // namespace rffmd
