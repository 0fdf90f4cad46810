#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "rffmd/types.hpp"

namespace rffmd {

/// Random Fourier feature network vbar(x) = sum_k eta_k exp(i omega_k . x).
///
/// Frequencies are stored as a K x d matrix (one row per omega_k), amplitudes
/// as a complex K-vector. Instances are immutable.
class FourierFeatureModel {
public:
    FourierFeatureModel(Eigen::MatrixXd freqs, Eigen::VectorXcd amps);

    Eigen::Index size() const noexcept { return freqs_.rows(); }
    Eigen::Index dim() const noexcept { return freqs_.cols(); }
    const Eigen::MatrixXd& freqs() const noexcept { return freqs_; }
    const Eigen::VectorXcd& amps() const noexcept { return amps_; }

    Complex eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Complex gradient sum_k i omega_k eta_k exp(i omega_k . x).
    Eigen::VectorXcd grad(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// Re(vbar) and grad Re(vbar) for d = 2; the hot path of the dynamics.
    ValueGrad eval_real(const Vec2& x) const;

    FourierFeatureModel with_amps(Eigen::VectorXcd amps) const;
    FourierFeatureModel with_freqs(Eigen::MatrixXd freqs) const;

private:
    Eigen::MatrixXd freqs_;
    Eigen::VectorXcd amps_;
};

/// Text format: "rffmodel v1 d=<d> K=<K>" then K lines
/// "omega_1 ... omega_d eta_re eta_im", all with 17 significant digits.
std::string serialize_model(const FourierFeatureModel& model);
FourierFeatureModel parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const FourierFeatureModel& model);
FourierFeatureModel load_model(const std::filesystem::path& path);

} // namespace rffmd
