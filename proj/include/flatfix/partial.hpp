#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <utility>

#include "flatfix/errors.hpp"

namespace flatfix {

/// A value of the lifted flat domain V_bot: either Bottom (the least element,
/// standing for a computation that has not produced a result) or Value(v).
/// Distinct proper values are incomparable. V needs decidable equality so
/// stabilization and antisymmetry are checkable.
template <typename V>
    requires std::equality_comparable<V>
class Partial {
public:
    Partial() = default;  // Bottom

    static Partial bottom() { return Partial{}; }
    static Partial value(V v) { return Partial{std::optional<V>{std::move(v)}}; }

    bool is_bottom() const { return !v_.has_value(); }
    bool is_value() const { return v_.has_value(); }

    const V& get() const {
        if (!v_) throw Error("Partial: get() on Bottom");
        return *v_;
    }

    friend bool operator==(const Partial&, const Partial&) = default;

private:
    explicit Partial(std::optional<V> v) : v_(std::move(v)) {}
    std::optional<V> v_;
};

/// The flat order: the reflexive closure of "Bottom below everything".
template <typename V>
bool leq(const Partial<V>& a, const Partial<V>& b) {
    return a.is_bottom() || a == b;
}

/// True iff leq holds between each adjacent pair (vacuously true when the
/// prefix has fewer than two elements).
template <typename V>
bool is_ascending(std::span<const Partial<V>> prefix) {
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
        if (!leq(prefix[i], prefix[i + 1])) return false;
    }
    return true;
}

/// Least upper bound of a flat chain, up to a finite horizon: the first Value
/// taken at an index <= horizon, else Bottom. Throws NotAChain if the scanned
/// prefix is not a chain (two distinct Values, or a Value followed by Bottom)
/// -- that indicates a non-monotone functional upstream.
template <typename V>
Partial<V> chain_lub(const std::function<Partial<V>(std::size_t)>& seq, std::size_t horizon) {
    Partial<V> lub = Partial<V>::bottom();
    for (std::size_t n = 0; n <= horizon; ++n) {
        Partial<V> cur = seq(n);
        if (lub.is_value()) {
            if (cur != lub) throw NotAChain("chain_lub: sequence is not a chain at index " + std::to_string(n));
        } else if (cur.is_value()) {
            lub = cur;
        }
    }
    return lub;
}

template <typename V>
    requires requires(std::ostream& os, const V& v) { os << v; }
std::ostream& operator<<(std::ostream& os, const Partial<V>& p) {
    if (p.is_bottom()) return os << "_|_";
    return os << p.get();
}

}  // namespace flatfix
