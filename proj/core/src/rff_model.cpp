#include "rffmd/rff_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "rffmd/csv.hpp"
#include "rffmd/errors.hpp"

namespace rffmd {

FourierFeatureModel::FourierFeatureModel(Eigen::MatrixXd freqs, Eigen::VectorXcd amps)
    : freqs_(std::move(freqs)), amps_(std::move(amps)) {
    if (freqs_.rows() < 1 || freqs_.cols() < 1)
        throw InvalidArgument("FourierFeatureModel: need K >= 1 frequencies of dimension >= 1");
    if (freqs_.rows() != amps_.size())
        throw InvalidArgument(fmt::format("FourierFeatureModel: {} frequencies but {} amplitudes",
                                          freqs_.rows(), amps_.size()));
    if (!freqs_.allFinite() || !amps_.allFinite())
        throw InvalidArgument("FourierFeatureModel: non-finite parameter");
}

Complex FourierFeatureModel::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != dim()) throw InvalidArgument("FourierFeatureModel::eval: dimension mismatch");
    const Eigen::VectorXd phase = freqs_ * x;
    Complex sum = 0.0;
    for (Eigen::Index k = 0; k < size(); ++k) sum += amps_[k] * std::polar(1.0, phase[k]);
    return sum;
}

Eigen::VectorXcd FourierFeatureModel::grad(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != dim()) throw InvalidArgument("FourierFeatureModel::grad: dimension mismatch");
    const Eigen::VectorXd phase = freqs_ * x;
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dim());
    for (Eigen::Index k = 0; k < size(); ++k) {
        const Complex w = Complex(0.0, 1.0) * amps_[k] * std::polar(1.0, phase[k]);
        for (Eigen::Index a = 0; a < dim(); ++a) g[a] += freqs_(k, a) * w;
    }
    return g;
}

ValueGrad FourierFeatureModel::eval_real(const Vec2& x) const {
    if (dim() != 2) throw InvalidArgument("FourierFeatureModel::eval_real: model must be 2-D");
    const double* w1 = freqs_.col(0).data();
    const double* w2 = freqs_.col(1).data();
    const Complex* eta = amps_.data();
    double value = 0.0, g1 = 0.0, g2 = 0.0;
    for (Eigen::Index k = 0; k < size(); ++k) {
        const double theta = w1[k] * x[0] + w2[k] * x[1];
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double a = eta[k].real(), b = eta[k].imag();
        value += a * c - b * s;
        // d/dx Re(eta e^{i theta}) = -omega (a sin + b cos)
        const double d = -(a * s + b * c);
        g1 += w1[k] * d;
        g2 += w2[k] * d;
    }
    return {value, Vec2(g1, g2)};
}

FourierFeatureModel FourierFeatureModel::with_amps(Eigen::VectorXcd amps) const {
    return FourierFeatureModel(freqs_, std::move(amps));
}

FourierFeatureModel FourierFeatureModel::with_freqs(Eigen::MatrixXd freqs) const {
    return FourierFeatureModel(std::move(freqs), amps_);
}

std::string serialize_model(const FourierFeatureModel& model) {
    std::string out = fmt::format("rffmodel v1 d={} K={}\n", model.dim(), model.size());
    for (Eigen::Index k = 0; k < model.size(); ++k) {
        for (Eigen::Index a = 0; a < model.dim(); ++a) {
            out += format_exact(model.freqs()(k, a));
            out += ' ';
        }
        out += format_exact(model.amps()[k].real());
        out += ' ';
        out += format_exact(model.amps()[k].imag());
        out += '\n';
    }
    return out;
}

FourierFeatureModel parse_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string magic, version, dtok, ktok;
    if (!(in >> magic >> version >> dtok >> ktok) || magic != "rffmodel" || version != "v1" ||
        dtok.rfind("d=", 0) != 0 || ktok.rfind("K=", 0) != 0)
        throw ParseError("rffmodel: bad header");
    const long long d = parse_int(dtok.substr(2));
    const long long K = parse_int(ktok.substr(2));
    if (d < 1 || K < 1) throw ParseError("rffmodel: d and K must be positive");

    Eigen::MatrixXd freqs(K, d);
    Eigen::VectorXcd amps(K);
    std::string tok;
    auto next = [&]() {
        if (!(in >> tok)) throw ParseError("rffmodel: truncated body");
        return parse_double(tok);
    };
    for (long long k = 0; k < K; ++k) {
        for (long long a = 0; a < d; ++a) freqs(k, a) = next();
        const double re = next();
        const double im = next();
        amps[k] = Complex(re, im);
    }
    if (in >> tok) throw ParseError("rffmodel: trailing content");
    return FourierFeatureModel(std::move(freqs), std::move(amps));
}

void save_model(const std::filesystem::path& path, const FourierFeatureModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << serialize_model(model);
    if (!out) throw Error("write failed: " + path.string());
}

FourierFeatureModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

} // namespace rffmd
