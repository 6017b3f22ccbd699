#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/error.hpp"
#include "mtrd/grid.hpp"

namespace mtrd {

/// Residual summary over a grid.
///
/// points_evaluated + points_masked equals the grid size and
/// pass == (max_abs_residual <= tolerance).
struct Report {
    std::string subject;
    double max_abs_residual = 0.0;
    double rms_residual = 0.0;
    std::size_t points_evaluated = 0;
    std::size_t points_masked = 0;
    std::vector<Axis> axes;
    double tolerance = 0.0;
    bool pass = false;
    /// Coordinates where the largest residual occurred.
    std::vector<double> worst_point;
};

/// Accumulates pointwise residuals. The reduction sorts magnitudes before
/// summing so the result does not depend on traversal order.
class ResidualAccumulator {
public:
    void add(double residual, const std::vector<double>& where) {
        const double a = std::abs(residual);
        // A NaN residual sticks as the maximum so it can never pass.
        if (!std::isnan(max_) && (values_.empty() || std::isnan(a) || a > max_)) {
            max_ = a;
            worst_ = where;
        }
        values_.push_back(std::isnan(a) ? std::numeric_limits<double>::infinity() : a);
    }
    void mask() { ++masked_; }

    Report finish(std::string subject, std::vector<Axis> axes, double tolerance) && {
        if (values_.empty()) throw Error(ErrorCode::EmptyGrid, "every grid point was masked for " + subject);
        std::sort(values_.begin(), values_.end());
        double sum_sq = 0.0;
        for (double v : values_) sum_sq += v * v;
        Report r;
        r.subject = std::move(subject);
        r.max_abs_residual = max_;
        r.rms_residual = std::sqrt(sum_sq / static_cast<double>(values_.size()));
        r.points_evaluated = values_.size();
        r.points_masked = masked_;
        r.axes = std::move(axes);
        r.tolerance = tolerance;
        r.pass = max_ <= tolerance;
        r.worst_point = std::move(worst_);
        return r;
    }

private:
    std::vector<double> values_;
    std::size_t masked_ = 0;
    double max_ = 0.0;
    std::vector<double> worst_;
};

}  // namespace mtrd
