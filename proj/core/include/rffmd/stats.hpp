#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rffmd {

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);
double mean(std::span<const double> xs);

/// Unbiased sample variance (divides by n - 1). Returns 0 for n < 2.
double sample_variance(std::span<const double> xs);

/// Normal-approximation summary of independent estimates.
struct ReplicaStats {
    double mean = 0.0;
    double std_error = 0.0;  ///< standard error of the mean
    double half_width = 0.0; ///< 95% half-width, 1.96 * stderr
    std::size_t count = 0;
};

inline constexpr double kZ95 = 1.96;

ReplicaStats summarize(std::span<const double> xs);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Sample autocorrelation of a series at the given lag.
double autocorrelation(std::span<const double> xs, std::size_t lag);

} // namespace rffmd
