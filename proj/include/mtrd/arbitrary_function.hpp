#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"

namespace mtrd {

/// Smooth functions P(omega_1, ..., omega_{m-1}) drawn from a fixed library
/// so that every instance is dual-evaluable and reproducible.
class ArbitraryFunction {
public:
    enum class Kind { Constant, Linear, Sine, ExpQuad, Polynomial, Sum, Product };

    /// P = c
    static ArbitraryFunction constant(double c) {
        ArbitraryFunction f(Kind::Constant);
        f.scalar_ = c;
        return f;
    }
    /// P = offset + sum_j coeffs[j] omega_j
    static ArbitraryFunction linear(std::vector<double> coeffs, double offset = 0.0) {
        ArbitraryFunction f(Kind::Linear);
        f.coeffs_ = std::move(coeffs);
        f.scalar_ = offset;
        return f;
    }
    /// P = amplitude sin(sum_j frequencies[j] omega_j + phase)
    static ArbitraryFunction sine(double amplitude, std::vector<double> frequencies, double phase = 0.0) {
        ArbitraryFunction f(Kind::Sine);
        f.scalar_ = amplitude;
        f.coeffs_ = std::move(frequencies);
        f.phase_ = phase;
        return f;
    }
    /// P = amplitude exp(sum_j coeffs[j] omega_j^2)
    static ArbitraryFunction expquad(std::vector<double> coeffs, double amplitude = 1.0) {
        ArbitraryFunction f(Kind::ExpQuad);
        f.coeffs_ = std::move(coeffs);
        f.scalar_ = amplitude;
        return f;
    }
    /// P = sum_j sum_k rows[j][k] omega_j^k
    static ArbitraryFunction polynomial(std::vector<std::vector<double>> rows) {
        ArbitraryFunction f(Kind::Polynomial);
        f.rows_ = std::move(rows);
        return f;
    }
    static ArbitraryFunction sum(const ArbitraryFunction& a, const ArbitraryFunction& b) {
        ArbitraryFunction f(Kind::Sum);
        f.lhs_ = std::make_shared<const ArbitraryFunction>(a);
        f.rhs_ = std::make_shared<const ArbitraryFunction>(b);
        return f;
    }
    static ArbitraryFunction product(const ArbitraryFunction& a, const ArbitraryFunction& b) {
        ArbitraryFunction f(Kind::Product);
        f.lhs_ = std::make_shared<const ArbitraryFunction>(a);
        f.rhs_ = std::make_shared<const ArbitraryFunction>(b);
        return f;
    }

    /// Number of omega variables the function reads (0 for constants).
    std::size_t min_arity() const {
        switch (kind_) {
            case Kind::Constant: return 0;
            case Kind::Linear:
            case Kind::Sine:
            case Kind::ExpQuad: return coeffs_.size();
            case Kind::Polynomial: return rows_.size();
            case Kind::Sum:
            case Kind::Product: return std::max(lhs_->min_arity(), rhs_->min_arity());
        }
        return 0;
    }

    template <class T>
    T operator()(std::span<const T> omega) const {
        if (omega.size() < min_arity()) {
            throw Error(ErrorCode::DimensionMismatch, "P reads " + std::to_string(min_arity()) +
                                                          " omega variables, got " + std::to_string(omega.size()));
        }
        switch (kind_) {
            case Kind::Constant: return T(scalar_);
            case Kind::Linear: {
                T s(scalar_);
                for (std::size_t j = 0; j < coeffs_.size(); ++j) s = s + coeffs_[j] * omega[j];
                return s;
            }
            case Kind::Sine: {
                T arg(phase_);
                for (std::size_t j = 0; j < coeffs_.size(); ++j) arg = arg + coeffs_[j] * omega[j];
                return scalar_ * sin(arg);
            }
            case Kind::ExpQuad: {
                T arg(0.0);
                for (std::size_t j = 0; j < coeffs_.size(); ++j) arg = arg + coeffs_[j] * (omega[j] * omega[j]);
                return scalar_ * exp(arg);
            }
            case Kind::Polynomial: {
                T s(0.0);
                for (std::size_t j = 0; j < rows_.size(); ++j) {
                    // Horner per variable.
                    T acc(0.0);
                    for (std::size_t k = rows_[j].size(); k-- > 0;) acc = acc * omega[j] + rows_[j][k];
                    s = s + acc;
                }
                return s;
            }
            case Kind::Sum: return (*lhs_)(omega) + (*rhs_)(omega);
            case Kind::Product: return (*lhs_)(omega) * (*rhs_)(omega);
        }
        return T(0.0);
    }

    double operator()(const std::vector<double>& omega) const {
        return (*this)(std::span<const double>(omega));
    }

    Kind kind() const { return kind_; }
    double scalar() const { return scalar_; }
    double phase() const { return phase_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const ArbitraryFunction& lhs() const { return *lhs_; }
    const ArbitraryFunction& rhs() const { return *rhs_; }

    std::string describe() const {
        auto list = [](const std::vector<double>& v) {
            std::string s = "[";
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
            return s + "]";
        };
        switch (kind_) {
            case Kind::Constant: return "constant(" + std::to_string(scalar_) + ")";
            case Kind::Linear: return "linear(" + list(coeffs_) + ", " + std::to_string(scalar_) + ")";
            case Kind::Sine:
                return "sine(" + std::to_string(scalar_) + ", " + list(coeffs_) + ", " + std::to_string(phase_) + ")";
            case Kind::ExpQuad: return "expquad(" + list(coeffs_) + ", " + std::to_string(scalar_) + ")";
            case Kind::Polynomial: {
                std::string s = "polynomial(";
                for (std::size_t j = 0; j < rows_.size(); ++j) s += (j ? ", " : "") + list(rows_[j]);
                return s + ")";
            }
            case Kind::Sum: return "(" + lhs_->describe() + " + " + rhs_->describe() + ")";
            case Kind::Product: return "(" + lhs_->describe() + " * " + rhs_->describe() + ")";
        }
        return "?";
    }

private:
    explicit ArbitraryFunction(Kind kind) : kind_(kind) {}

    Kind kind_;
    double scalar_ = 0.0;
    double phase_ = 0.0;
    std::vector<double> coeffs_;
    std::vector<std::vector<double>> rows_;
    std::shared_ptr<const ArbitraryFunction> lhs_;
    std::shared_ptr<const ArbitraryFunction> rhs_;
};

inline ArbitraryFunction operator+(const ArbitraryFunction& a, const ArbitraryFunction& b) {
    return ArbitraryFunction::sum(a, b);
}
inline ArbitraryFunction operator*(const ArbitraryFunction& a, const ArbitraryFunction& b) {
    return ArbitraryFunction::product(a, b);
}

}  // namespace mtrd
