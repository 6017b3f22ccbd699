#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "mtrd/field.hpp"
#include "mtrd/grid.hpp"

namespace mtrd::test_support {

/// Uniform random points inside a grid's box that the field does not mask.
inline std::vector<Point> random_unmasked_points(const ScalarField& field, const Grid& box, std::size_t count,
                                                 unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<Point> pts;
    while (pts.size() < count) {
        Point p;
        for (std::size_t d = 0; d + 1 < box.dimension(); ++d) {
            const Axis& a = box.axes()[d];
            p.tau.push_back(std::uniform_real_distribution<double>(a.lo, a.hi)(rng));
        }
        const Axis& ax = box.axes().back();
        p.x = std::uniform_real_distribution<double>(ax.lo, ax.hi)(rng);
        if (field.in_domain(p) && !field.is_singular(p)) pts.push_back(p);
    }
    return pts;
}

/// The field with every point where |u| > bound added to its singular set.
/// For the pole-type catalog entries u ~ sqrt2 / d near a pole at distance d,
/// so |u| <= 5 keeps d >= 0.28. There the O(h^2) truncation error of a
/// central second difference at h = 1e-5 (about 2.8e-10 / d^5) stays below 1e-6.
inline ScalarField bounded_part(const ScalarField& f, double bound) {
    return f.with_singular_set([f, bound](const Point& p) { return f.is_singular(p) || std::abs(f(p)) > bound; });
}

}  // namespace mtrd::test_support
