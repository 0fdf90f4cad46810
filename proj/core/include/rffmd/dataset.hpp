#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace rffmd {

/// How a dataset was produced; written to the sidecar metadata file.
struct DatasetMeta {
    std::uint64_t seed = 0;
    std::vector<double> betas;
    std::vector<double> fractions;
    double dt = 0.0;
    long burn_in = 0;
    long thinning = 0;
};

/// J training triples (x_j, v(x_j), grad v(x_j)).
class Dataset {
public:
    Dataset(Eigen::MatrixXd points, Eigen::VectorXd values, Eigen::MatrixXd grads,
            DatasetMeta meta = {});

    Eigen::Index size() const noexcept { return points_.rows(); }
    Eigen::Index dim() const noexcept { return points_.cols(); }
    const Eigen::MatrixXd& points() const noexcept { return points_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    const Eigen::MatrixXd& grads() const noexcept { return grads_; }
    const DatasetMeta& meta() const noexcept { return meta_; }

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd values_;
    Eigen::MatrixXd grads_;
    DatasetMeta meta_;
};

/// Writes "x1,...,xd,v,dvdx1,...,dvdxd" with 17 significant digits and a
/// sidecar "<path>.meta" with key=value lines.
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

std::filesystem::path meta_path(const std::filesystem::path& csv_path);

} // namespace rffmd
