#include <filesystem>

#include <gtest/gtest.h>

#include "rffmd/errors.hpp"
#include "rffmd/rff_model.hpp"
#include "test_util.hpp"

using namespace rffmd;

namespace {

FourierFeatureModel model_with(std::uint64_t seed, int K, int d) {
    Rng rng(seed);
    std::normal_distribution<double> n;
    Eigen::MatrixXd w(K, d);
    Eigen::VectorXcd eta(K);
    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < d; ++a) w(k, a) = n(rng);
        const double re = n(rng), im = n(rng);
        eta[k] = Complex(re, im);
    }
    return FourierFeatureModel(w, eta);
}

} // namespace

TEST(FourierFeatureModel, SingleFeature) {
    Eigen::MatrixXd w(1, 2);
    w << 1.0, 0.0;
    const FourierFeatureModel m(w, Eigen::VectorXcd::Constant(1, Complex(2.0, 0.0)));
    const Vec2 x(0.4, 9.0);
    EXPECT_NEAR(m.eval(x).real(), 2.0 * std::cos(0.4), 1e-15);
    EXPECT_NEAR(m.eval(x).imag(), 2.0 * std::sin(0.4), 1e-15);
    const ValueGrad vg = m.eval_real(x);
    EXPECT_NEAR(vg.grad[0], -2.0 * std::sin(0.4), 1e-15);
    EXPECT_EQ(vg.grad[1], 0.0);
}

TEST(FourierFeatureModel, ComplexGradientMatchesFiniteDifferences) {
    const FourierFeatureModel m = model_with(2, 20, 2);
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const Vec2 x = rffmd::test::random_point(rng, 4.0);
        const Eigen::VectorXcd g = m.grad(x);
        for (int a = 0; a < 2; ++a) {
            Vec2 xp = x, xm = x;
            xp[a] += 1e-5;
            xm[a] -= 1e-5;
            const Complex fd = (m.eval(xp) - m.eval(xm)) / 2e-5;
            EXPECT_LT(std::abs(g[a] - fd) / std::max(1.0, std::abs(fd)), 1e-5);
        }
    }
}

TEST(FourierFeatureModel, RealPathAgreesWithComplexPath) {
    const FourierFeatureModel m = model_with(4, 33, 2);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const Vec2 x = rffmd::test::random_point(rng, 5.0);
        const ValueGrad vg = m.eval_real(x);
        EXPECT_NEAR(vg.value, m.eval(x).real(), 1e-12);
        EXPECT_NEAR(vg.grad[0], m.grad(x)[0].real(), 1e-12);
        EXPECT_NEAR(vg.grad[1], m.grad(x)[1].real(), 1e-12);
    }
}

TEST(FourierFeatureModel, RejectsInconsistentShapes) {
    EXPECT_THROW(FourierFeatureModel(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXcd::Zero(2)), InvalidArgument);
    EXPECT_THROW(FourierFeatureModel(Eigen::MatrixXd::Zero(0, 2), Eigen::VectorXcd::Zero(0)), InvalidArgument);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(1, 2);
    w(0, 0) = std::nan("");
    EXPECT_THROW(FourierFeatureModel(w, Eigen::VectorXcd::Zero(1)), InvalidArgument);
}

TEST(ModelFormat, RoundTripIsBitExact) {
    const FourierFeatureModel m = model_with(7, 17, 2);
    const FourierFeatureModel back = parse_model(serialize_model(m));
    EXPECT_EQ(back.freqs(), m.freqs());
    EXPECT_EQ(back.amps(), m.amps());

    const auto path = std::filesystem::temp_directory_path() / "rffmd_model_roundtrip.txt";
    save_model(path, m);
    const FourierFeatureModel loaded = load_model(path);
    EXPECT_EQ(loaded.freqs(), m.freqs());
    EXPECT_EQ(loaded.amps(), m.amps());
    std::filesystem::remove(path);
}

TEST(ModelFormat, HigherDimensionsRoundTrip) {
    const FourierFeatureModel m = model_with(8, 5, 3);
    const FourierFeatureModel back = parse_model(serialize_model(m));
    EXPECT_EQ(back.dim(), 3);
    EXPECT_EQ(back.freqs(), m.freqs());
}

TEST(ModelFormat, RejectsMalformedInput) {
    EXPECT_THROW(parse_model("nonsense"), ParseError);
    EXPECT_THROW(parse_model("rffmodel v1 d=2 K=2\n1 2 3 4\n"), ParseError);
    EXPECT_THROW(parse_model("rffmodel v1 d=2 K=1\n1 2 3 4 5\n"), ParseError);
    EXPECT_THROW(parse_model("rffmodel v1 d=2 K=1\n1 x 3 4\n"), ParseError);
}
