#pragma once

#include <span>
#include <string>
#include <vector>

namespace imgtn {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept. Needs two distinct x values.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct ScalingPoint {
    double x = 0.0;
    double value = 0.0;
};

/// A measured series with its log2-log2 least-squares fit over the positive points.
struct ScalingReport {
    std::string quantity;
    std::vector<ScalingPoint> series;
    LinearFit fit;
};

/// Fits log2(value) against log2(x); throws precondition_error with fewer than two
/// positive points.
ScalingReport make_scaling_report(std::string quantity, std::vector<ScalingPoint> series);

} // namespace imgtn
