#pragma once

#include <complex>

#include <Eigen/Core>

namespace rffmd {

using Vec2 = Eigen::Vector2d;
using Complex = std::complex<double>;

struct ValueGrad {
    double value = 0.0;
    Vec2 grad = Vec2::Zero();
};

/// Point z = (x, p) in the 4-dimensional phase space of the 2-D model.
struct PhaseState {
    Vec2 x = Vec2::Zero();
    Vec2 p = Vec2::Zero();
};

inline bool is_finite(const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }
inline bool is_finite(const PhaseState& z) { return is_finite(z.x) && is_finite(z.p); }

} // namespace rffmd
