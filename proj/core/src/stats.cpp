#include "rffmd/stats.hpp"

#include <cmath>

#include "rffmd/errors.hpp"

namespace rffmd {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

ReplicaStats summarize(std::span<const double> xs) {
    ReplicaStats r;
    r.count = xs.size();
    r.mean = mean(xs);
    if (xs.size() >= 2) r.std_error = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
    r.half_width = kZ95 * r.std_error;
    return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("loglog_slope: need at least two matching points");
    double mx = 0, my = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("loglog_slope: non-positive value");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double autocorrelation(std::span<const double> xs, std::size_t lag) {
    if (xs.size() <= lag + 1) return 0.0;
    const double m = mean(xs);
    CompensatedSum num, den;
    for (std::size_t i = 0; i < xs.size(); ++i) den.add((xs[i] - m) * (xs[i] - m));
    for (std::size_t i = 0; i + lag < xs.size(); ++i) num.add((xs[i] - m) * (xs[i + lag] - m));
    return num.value() / den.value();
}

} // namespace rffmd
