#pragma once

#include <functional>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>

#include "mtrd/dual.hpp"

namespace mtrd {

/// Type-erased callable instantiated for every scalar type used by the jet
/// machinery: double, long double (finite-difference stencils) and nested
/// duals up to depth kMaxJetOrder.
///
/// Construct it from a generic lambda; each instantiation is stored
/// separately so the closed form can be re-evaluated at any nesting depth.
template <template <class> class Sig>
class PolyFunction {
public:
    PolyFunction() = default;

    template <class F>
        requires(!std::is_same_v<std::decay_t<F>, PolyFunction>)
    PolyFunction(F f, std::string description = "<callable>")  // NOLINT: implicit from lambdas
        : fns_{std::function<Sig<double>>(f), std::function<Sig<long double>>(f), std::function<Sig<D1>>(f), std::function<Sig<D2>>(f),
               std::function<Sig<D3>>(f), std::function<Sig<D4>>(f)},
          description_(std::move(description)) {}

    template <class T>
    const std::function<Sig<T>>& get() const {
        return std::get<std::function<Sig<T>>>(fns_);
    }

    template <class T, class... Args>
    decltype(auto) call(Args&&... args) const {
        return get<T>()(std::forward<Args>(args)...);
    }

    explicit operator bool() const { return static_cast<bool>(std::get<0>(fns_)); }

    const std::string& description() const { return description_; }

private:
    std::tuple<std::function<Sig<double>>, std::function<Sig<long double>>, std::function<Sig<D1>>, std::function<Sig<D2>>,
               std::function<Sig<D3>>, std::function<Sig<D4>>>
        fns_;
    std::string description_;
};

template <class T> using UnarySig = T(const T&);
template <class T> using BinarySig = T(const T&, const T&);
template <class T> using VectorSig = T(std::span<const T>);

/// f(s) of a single variable.
using UnaryFunction = PolyFunction<UnarySig>;
/// f(a, b) of two variables.
using BinaryFunction = PolyFunction<BinarySig>;
/// f(v) of a vector argument, e.g. h^i(t^1, ..., t^m).
using VectorFunction = PolyFunction<VectorSig>;

}  // namespace mtrd
