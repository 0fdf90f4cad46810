#include "rffmd/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "rffmd/csv.hpp"
#include "rffmd/errors.hpp"
#include "rffmd/parallel.hpp"

namespace rffmd {

int GridSpec::index_of(double w) const {
    if (!(w >= -omega_max) || !(w <= omega_max)) return -1;
    const int i = static_cast<int>(std::floor((w + omega_max) / cell_width()));
    return std::min(i, n - 1);
}

double DensityGrid::at(const Vec2& w) const {
    const int i = spec.index_of(w[0]);
    const int j = spec.index_of(w[1]);
    if (i < 0 || j < 0) return 0.0;
    return values(i, j);
}

namespace {

void check_grid(const GridSpec& g) {
    if (!(g.omega_max > 0.0) || g.n < 1) throw InvalidArgument("density grid: need omega_max > 0 and n >= 1");
}

Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
    Eigen::MatrixXcd e(w.size(), x.size());
    for (Eigen::Index b = 0; b < x.size(); ++b)
        for (Eigen::Index a = 0; a < w.size(); ++a) e(a, b) = std::polar(1.0, -w[a] * x[b]);
    return e;
}

} // namespace

FourierOracle::FourierOracle(const std::function<double(const Vec2&)>& f, const QuadratureSpec& q) {
    if (!(q.extent > 0.0) || q.points < 2) throw InvalidArgument("quadrature: need extent > 0 and points >= 2");
    const int n = q.points;
    const double h = 2.0 * q.extent / (n - 1);
    nodes_.resize(n);
    weights_.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes_[i] = -q.extent + i * h;
        weights_[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    samples_.resize(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t b) {
        for (int a = 0; a < n; ++a)
            samples_(a, b) = f(Vec2(nodes_[a], nodes_[b])) * weights_[a] * weights_[b];
    });
    if (!samples_.allFinite()) throw NumericError("Fourier oracle: integrand is not finite on the lattice");
}

Complex FourierOracle::operator()(const Vec2& w) const {
    Eigen::VectorXd w1(1), w2(1);
    w1[0] = w[0];
    w2[0] = w[1];
    const Eigen::MatrixXcd e1 = phase_matrix(w1, nodes_);
    const Eigen::MatrixXcd e2 = phase_matrix(w2, nodes_);
    const Complex s = (e1 * samples_.cast<Complex>() * e2.transpose())(0, 0);
    return s / (4.0 * std::numbers::pi * std::numbers::pi);
}

Eigen::MatrixXcd FourierOracle::on_grid(const GridSpec& grid) const {
    check_grid(grid);
    Eigen::VectorXd centers(grid.n);
    for (int i = 0; i < grid.n; ++i) centers[i] = grid.center(i);
    const Eigen::MatrixXcd e = phase_matrix(centers, nodes_);
    const Eigen::MatrixXcd out = e * samples_.cast<Complex>() * e.transpose();
    return out / (4.0 * std::numbers::pi * std::numbers::pi);
}

namespace {

Eigen::MatrixXd unnormalized_optimal(const FourierOracle& oracle, const GridSpec& grid) {
    const Eigen::MatrixXcd vhat = oracle.on_grid(grid);
    Eigen::MatrixXd rho(grid.n, grid.n);
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            const double w1 = grid.center(i), w2 = grid.center(j);
            rho(i, j) = std::abs(vhat(i, j)) * std::sqrt(1.0 + w1 * w1 + w2 * w2);
        }
    return rho;
}

} // namespace

DensityGrid optimal_density(const std::function<double(const Vec2&)>& v, const GridSpec& grid,
                            const QuadratureSpec& quad, bool diagnostic) {
    check_grid(grid);
    const FourierOracle oracle(v, quad);
    Eigen::MatrixXd rho = unnormalized_optimal(oracle, grid);
    const double mass = rho.sum() * grid.cell_area();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericError("optimal density: zero or non-finite mass");

    if (diagnostic) {
        GridSpec fine = grid;
        fine.n = 2 * grid.n;
        const double fine_mass = unnormalized_optimal(oracle, fine).sum() * fine.cell_area();
        const double change = std::abs(fine_mass - mass) / mass;
        if (change > 0.01)
            throw GridTooCoarse(fmt::format("optimal density: normalization changes by {:.3g}% under refinement",
                                            100.0 * change));
    }
    return DensityGrid{grid, rho / mass};
}

DensityGrid optimal_density(const TargetPotential& target, const GridSpec& grid,
                            const QuadratureSpec& quad, bool diagnostic) {
    return optimal_density([&target](const Vec2& x) { return target.inner(x).value; }, grid, quad,
                           diagnostic);
}

DensityGrid empirical_frequency_density(std::span<const Eigen::MatrixXd> freq_sets, const GridSpec& grid) {
    check_grid(grid);
    if (freq_sets.empty()) throw InvalidArgument("empirical density: no frequency sets");
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(grid.n, grid.n);
    double total = 0.0;
    for (const auto& w : freq_sets) {
        if (w.cols() != 2) throw InvalidArgument("empirical density: frequencies must be 2-D");
        for (Eigen::Index k = 0; k < w.rows(); ++k) {
            const int i = grid.index_of(w(k, 0));
            const int j = grid.index_of(w(k, 1));
            if (i < 0 || j < 0) continue;
            counts(i, j) += 1.0;
            total += 1.0;
        }
    }
    if (total == 0.0) throw InvalidArgument("empirical density: no frequency falls inside the grid");
    return DensityGrid{grid, counts / (total * grid.cell_area())};
}

DensityGrid empirical_frequency_density(std::span<const FourierFeatureModel> models, const GridSpec& grid) {
    std::vector<Eigen::MatrixXd> sets;
    sets.reserve(models.size());
    for (const auto& m : models) sets.push_back(m.freqs());
    return empirical_frequency_density(std::span<const Eigen::MatrixXd>(sets), grid);
}

double total_variation(const DensityGrid& p, const DensityGrid& q) {
    if (!(p.spec == q.spec)) throw GridMismatch("total variation: densities live on different grids");
    return 0.5 * (p.values - q.values).cwiseAbs().sum() * p.spec.cell_area();
}

DensitySampler::DensitySampler(const DensityGrid& grid) : spec_(grid.spec) {
    check_grid(spec_);
    cumulative_.reserve(static_cast<std::size_t>(spec_.n) * spec_.n);
    double acc = 0.0;
    for (int i = 0; i < spec_.n; ++i)
        for (int j = 0; j < spec_.n; ++j) {
            const double v = grid.values(i, j);
            if (!(v >= 0.0)) throw InvalidArgument("density sampler: negative or non-finite density");
            acc += v;
            cumulative_.push_back(acc);
        }
    if (!(acc > 0.0)) throw InvalidArgument("density sampler: zero mass");
}

Vec2 DensitySampler::operator()(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double target = u(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    const auto cell = static_cast<int>(it - cumulative_.begin());
    const int i = cell / spec_.n, j = cell % spec_.n;
    const double h = spec_.cell_width();
    return Vec2(-spec_.omega_max + (i + u(rng)) * h, -spec_.omega_max + (j + u(rng)) * h);
}

void save_density_csv(const std::filesystem::path& path, const DensityGrid& grid) {
    CsvWriter w(path, {"omega1", "omega2", "density"});
    for (int i = 0; i < grid.spec.n; ++i)
        for (int j = 0; j < grid.spec.n; ++j)
            w.field(grid.spec.center(i)).field(grid.spec.center(j)).field(grid.values(i, j)).end_row();
}

DensityGrid load_density_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t rows = t.rows.size();
    const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
    if (n < 2 || static_cast<std::size_t>(n) * n != rows)
        throw ParseError(path.string() + ": density CSV is not a square lattice of at least 2x2 cells");
    const double first = t.number(0, "omega1");
    GridSpec spec;
    spec.n = n;
    // first center = -omega_max (n - 1) / n
    spec.omega_max = -first * n / (n - 1);
    DensityGrid g{spec, Eigen::MatrixXd(n, n)};
    for (std::size_t r = 0; r < rows; ++r)
        g.values(static_cast<int>(r) / n, static_cast<int>(r) % n) = t.number(r, "density");
    return g;
}

} // namespace rffmd
