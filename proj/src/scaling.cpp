#include "imgtn/scaling.hpp"

#include <cmath>

#include "imgtn/error.hpp"

namespace imgtn {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw precondition_error("fit needs paired samples");
    if (x.size() < 2) throw precondition_error("a slope needs at least 2 points");
    const double count = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        mx += x[t];
        my += y[t];
    }
    mx /= count;
    my /= count;
    double sxx = 0, sxy = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        sxx += (x[t] - mx) * (x[t] - mx);
        sxy += (x[t] - mx) * (y[t] - my);
    }
    if (sxx == 0) throw precondition_error("a slope needs at least 2 distinct x values");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx, x.size()};
}

ScalingReport make_scaling_report(std::string quantity, std::vector<ScalingPoint> series) {
    std::vector<double> lx, ly;
    for (const auto& p : series)
        if (p.x > 0 && p.value > 0) {
            lx.push_back(std::log2(p.x));
            ly.push_back(std::log2(p.value));
        }
    if (lx.size() < 2)
        throw precondition_error("scaling fit for '" + quantity + "' needs at least 2 positive points");
    ScalingReport report{std::move(quantity), std::move(series), {}};
    report.fit = fit_line(lx, ly);
    return report;
}

} // namespace imgtn
