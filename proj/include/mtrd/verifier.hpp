#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mtrd/error.hpp"
#include "mtrd/field.hpp"
#include "mtrd/grid.hpp"
#include "mtrd/pde.hpp"
#include "mtrd/report.hpp"

namespace mtrd {

/// Default pass thresholds for jet-based and finite-difference residuals.
inline constexpr double kJetTolerance = 1e-8;
inline constexpr double kFiniteDifferenceTolerance = 1e-5;

struct ResidualOptions {
    JetMethod method = JetMethod::Dual;
    double fd_step = 1e-5;
};

/// Residual over an explicit list of points; singular points are masked.
inline Report residual_report(const PDESpec& pde, const ScalarField& field, std::span<const Point> points, double tol,
                              std::vector<Axis> axes = {}, const ResidualOptions& opt = {}) {
    pde.validate();
    ResidualAccumulator acc;
    for (const Point& p : points) {
        if (p.tau.size() != static_cast<std::size_t>(pde.m)) {
            throw Error(ErrorCode::DimensionMismatch, "grid dimension must be m + 1");
        }
        if (!field.in_domain(p)) throw Error(ErrorCode::OutOfDomain, "verification point outside the field domain");
        if (field.is_singular(p)) {
            acc.mask();
            continue;
        }
        double r;
        try {
            r = residual(pde, field, p, opt.method, opt.fd_step);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularStencil) throw;
            acc.mask();
            continue;
        }
        std::vector<double> where = p.tau;
        where.push_back(p.x);
        acc.add(r, where);
    }
    return std::move(acc).finish(field.name(), std::move(axes), tol);
}

/// Pointwise residual at every grid point; max/RMS over the unmasked ones.
inline Report residual_report(const PDESpec& pde, const ScalarField& field, const Grid& grid, double tol = kJetTolerance,
                              const ResidualOptions& opt = {}) {
    if (grid.dimension() != static_cast<std::size_t>(pde.m) + 1) {
        throw Error(ErrorCode::DimensionMismatch, "grid dimension must be m + 1");
    }
    std::vector<Point> points;
    points.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) points.push_back(grid.point(i));
    return residual_report(pde, field, std::span<const Point>(points), tol, grid.axes(), opt);
}

struct ConvergenceSample {
    double h = 0.0;
    /// max over jet components of |dual - finite difference|
    double jet_error = 0.0;
    /// |residual(dual) - residual(finite difference)|
    double residual_error = 0.0;
};

/// Finite-difference jets against the dual jet for a sequence of steps.
inline std::vector<ConvergenceSample> convergence_study(const PDESpec& pde, const ScalarField& field, const Point& p,
                                                        const std::vector<double>& steps) {
    if (steps.size() < 3) throw Error(ErrorCode::BadParameter, "need at least three steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0) || (i > 0 && !(steps[i] < steps[i - 1]))) {
            throw Error(ErrorCode::BadParameter, "steps must be positive and strictly decreasing");
        }
    }
    pde.validate();
    const JetValue exact = eval_jet(field, p, pde.n);
    const double exact_residual = residual_from_jet(pde, exact, p);
    std::vector<ConvergenceSample> out;
    for (double h : steps) {
        const JetValue fd = finite_diff_jet(field, p, h, pde.n);
        double err = 0.0;
        for (std::size_t j = 0; j < exact.spatial.size(); ++j) err = std::max(err, std::abs(exact.spatial[j] - fd.spatial[j]));
        for (std::size_t j = 0; j < exact.d_tau.size(); ++j) err = std::max(err, std::abs(exact.d_tau[j] - fd.d_tau[j]));
        out.push_back({h, err, std::abs(exact_residual - residual_from_jet(pde, fd, p))});
    }
    return out;
}

}  // namespace mtrd
