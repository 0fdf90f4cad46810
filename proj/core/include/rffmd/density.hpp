#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rffmd/potential.hpp"
#include "rffmd/random.hpp"
#include "rffmd/rff_model.hpp"
#include "rffmd/types.hpp"

namespace rffmd {

/// Regular n x n lattice of cells covering [-omega_max, omega_max]^2.
struct GridSpec {
    double omega_max = 8.0;
    int n = 256;

    double cell_width() const { return 2.0 * omega_max / n; }
    double cell_area() const { return cell_width() * cell_width(); }
    double center(int i) const { return -omega_max + (i + 0.5) * cell_width(); }
    /// Cell index along one axis, or -1 outside the lattice.
    int index_of(double w) const;
    /// Equal cell counts and extents equal to 1e-12 relative (extents read back from CSV).
    bool operator==(const GridSpec& o) const {
        return n == o.n && std::abs(omega_max - o.omega_max) <= 1e-12 * std::abs(omega_max);
    }
};

/// Real-space quadrature lattice: `points` nodes per axis on [-extent, extent]^2.
struct QuadratureSpec {
    double extent = 8.0;
    int points = 512;
};

/// Piecewise-constant density over a GridSpec; values(i1, i2) at cell (i1, i2).
struct DensityGrid {
    GridSpec spec;
    Eigen::MatrixXd values;

    double integral() const { return values.sum() * spec.cell_area(); }
    /// Density of the cell containing w, 0 outside the lattice.
    double at(const Vec2& w) const;
};

/// Numerical Fourier transform
///   fhat(w) = (2 pi)^-2 int f(x) exp(-i w.x) dx
/// by trapezoidal quadrature on a QuadratureSpec lattice.
class FourierOracle {
public:
    FourierOracle(const std::function<double(const Vec2&)>& f, const QuadratureSpec& q = {});

    Complex operator()(const Vec2& w) const;
    /// Transform at every cell center of `grid`.
    Eigen::MatrixXcd on_grid(const GridSpec& grid) const;

private:
    Eigen::VectorXd nodes_;
    Eigen::VectorXd weights_;
    Eigen::MatrixXd samples_;  // f(nodes_[a], nodes_[b]) * w_a * w_b
};

/// rho*(w) proportional to |vhat(w)| sqrt(1 + |w|^2), normalized on the grid.
/// With `diagnostic`, throws GridTooCoarse when the normalization integral
/// moves by more than 1% when the frequency lattice is refined by 2.
DensityGrid optimal_density(const std::function<double(const Vec2&)>& v, const GridSpec& grid,
                            const QuadratureSpec& quad = {}, bool diagnostic = false);
DensityGrid optimal_density(const TargetPotential& target, const GridSpec& grid,
                            const QuadratureSpec& quad = {}, bool diagnostic = false);

/// Normalized histogram of frequency samples; samples outside the lattice are
/// dropped before normalizing.
DensityGrid empirical_frequency_density(std::span<const Eigen::MatrixXd> freq_sets,
                                        const GridSpec& grid);
DensityGrid empirical_frequency_density(std::span<const FourierFeatureModel> models,
                                        const GridSpec& grid);

/// Total-variation distance 1/2 int |p - q|. Throws GridMismatch on different lattices.
double total_variation(const DensityGrid& p, const DensityGrid& q);

/// Draws from a DensityGrid: a cell by its mass, then uniformly inside the cell.
class DensitySampler {
public:
    explicit DensitySampler(const DensityGrid& grid);
    Vec2 operator()(Rng& rng) const;

private:
    GridSpec spec_;
    std::vector<double> cumulative_;
};

/// Columns omega1, omega2, density (cell centers).
void save_density_csv(const std::filesystem::path& path, const DensityGrid& grid);
DensityGrid load_density_csv(const std::filesystem::path& path);

} // namespace rffmd
