#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/error.hpp"
#include "mtrd/field.hpp"

namespace mtrd {

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    double spacing() const { return (hi - lo) / static_cast<double>(count - 1); }
    double sample(std::size_t i) const { return i + 1 == count ? hi : lo + static_cast<double>(i) * spacing(); }
};

/// Uniform tensor-product grid. For field grids the axes are ordered
/// (tau^1, ..., tau^m, x).
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
        for (const Axis& a : axes_) {
            if (!(a.lo < a.hi) || a.count < 2) {
                throw Error(ErrorCode::BadRange, "axis [" + std::to_string(a.lo) + ", " + std::to_string(a.hi) +
                                                     "] with " + std::to_string(a.count) + " samples");
            }
        }
    }

    std::size_t dimension() const { return axes_.size(); }
    const std::vector<Axis>& axes() const { return axes_; }

    std::size_t size() const {
        if (axes_.empty()) return 0;
        std::size_t n = 1;
        for (const Axis& a : axes_) n *= a.count;
        return n;
    }

    /// Coordinates of the flat index; the last axis varies fastest.
    std::vector<double> coordinates(std::size_t index) const {
        std::vector<double> c(axes_.size());
        for (std::size_t d = axes_.size(); d-- > 0;) {
            const Axis& a = axes_[d];
            c[d] = a.sample(index % a.count);
            index /= a.count;
        }
        return c;
    }

    /// Field point for the flat index: all but the last coordinate are times.
    Point point(std::size_t index) const {
        std::vector<double> c = coordinates(index);
        Point p;
        p.x = c.back();
        c.pop_back();
        p.tau = std::move(c);
        return p;
    }

    std::vector<double> samples(std::size_t axis) const {
        const Axis& a = axes_.at(axis);
        std::vector<double> s(a.count);
        for (std::size_t i = 0; i < a.count; ++i) s[i] = a.sample(i);
        return s;
    }

private:
    std::vector<Axis> axes_;
};

inline Grid make_grid(const std::vector<std::array<double, 2>>& ranges, const std::vector<std::size_t>& counts) {
    if (ranges.size() != counts.size() || ranges.empty()) {
        throw Error(ErrorCode::BadRange, "ranges and counts must be non-empty and of equal length");
    }
    std::vector<Axis> axes;
    axes.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) axes.push_back({ranges[i][0], ranges[i][1], counts[i]});
    return Grid(std::move(axes));
}

}  // namespace mtrd
