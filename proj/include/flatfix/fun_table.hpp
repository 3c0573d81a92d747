#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flatfix/errors.hpp"
#include "flatfix/partial.hpp"

namespace flatfix {

/// An explicit element of the function space A -> B_bot for a small finite A:
/// an ordered, duplicate-free domain and one Partial<B> entry per domain
/// element. Fresh tables start Bottom-everywhere.
template <typename A, typename B>
class FiniteFunTable {
public:
    explicit FiniteFunTable(std::vector<A> domain)
        : domain_(std::move(domain)), entries_(domain_.size()) {
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            for (std::size_t j = i + 1; j < domain_.size(); ++j) {
                if (domain_[i] == domain_[j]) throw IllFormed("FiniteFunTable: duplicate domain element");
            }
        }
    }

    const std::vector<A>& domain() const { return domain_; }
    std::size_t size() const { return domain_.size(); }

    const Partial<B>& at(const A& a) const { return entries_[index_of(a)]; }
    void set(const A& a, Partial<B> v) { entries_[index_of(a)] = std::move(v); }

    // Positional access; parallel to domain().
    const Partial<B>& entry(std::size_t i) const { return entries_[i]; }
    void set_entry(std::size_t i, Partial<B> v) { entries_[i] = std::move(v); }

    bool same_domain(const FiniteFunTable& other) const { return domain_ == other.domain_; }

    bool is_bottom_everywhere() const {
        for (const auto& e : entries_) {
            if (e.is_value()) return false;
        }
        return true;
    }

    friend bool operator==(const FiniteFunTable&, const FiniteFunTable&) = default;

private:
    std::size_t index_of(const A& a) const {
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            if (domain_[i] == a) return i;
        }
        throw DomainMismatch("FiniteFunTable: lookup outside the table domain");
    }

    std::vector<A> domain_;
    std::vector<Partial<B>> entries_;
};

/// Pointwise lifting of the flat order to tables. Requires equal domains.
template <typename A, typename B>
bool fun_leq(const FiniteFunTable<A, B>& f, const FiniteFunTable<A, B>& g) {
    if (!f.same_domain(g)) throw DomainMismatch("fun_leq: tables have different domains");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!leq(f.entry(i), g.entry(i))) return false;
    }
    return true;
}

}  // namespace flatfix
