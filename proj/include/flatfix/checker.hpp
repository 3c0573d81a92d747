#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flatfix/errors.hpp"
#include "flatfix/fun_table.hpp"
#include "flatfix/partial.hpp"

namespace flatfix {

/// The full enumeration of all tables A -> B_bot over finite domain and
/// codomain lists: (|B|+1)^|A| elements, duplicate-free. Element 0 is the
/// Bottom-everywhere table. Enumeration order is mixed-radix with digit 0 =
/// Bottom, which is a linear extension of the pointwise order.
template <typename A, typename B>
class FiniteFunSpace {
public:
    FiniteFunSpace(std::vector<A> domain, std::vector<B> codomain, std::size_t max_elements = 100000)
        : domain_(std::move(domain)), codomain_(std::move(codomain)) {
        if (domain_.empty()) throw IllFormed("FiniteFunSpace: empty domain");
        for (std::size_t i = 0; i < codomain_.size(); ++i) {
            for (std::size_t j = i + 1; j < codomain_.size(); ++j) {
                if (codomain_[i] == codomain_[j]) throw IllFormed("FiniteFunSpace: duplicate codomain element");
            }
        }
        std::size_t count = 1;
        const std::size_t radix = codomain_.size() + 1;
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            if (count > max_elements / radix) throw IllFormed("FiniteFunSpace: space too large to enumerate");
            count *= radix;
        }
        elements_.reserve(count);
        std::vector<std::size_t> digits(domain_.size(), 0);
        for (std::size_t idx = 0; idx < count; ++idx) {
            FiniteFunTable<A, B> t(domain_);
            for (std::size_t i = 0; i < domain_.size(); ++i) {
                if (digits[i] > 0) t.set_entry(i, Partial<B>::value(codomain_[digits[i] - 1]));
            }
            elements_.push_back(std::move(t));
            for (std::size_t i = domain_.size(); i-- > 0;) {
                if (++digits[i] < radix) break;
                digits[i] = 0;
            }
        }
    }

    const std::vector<A>& domain() const { return domain_; }
    const std::vector<B>& codomain() const { return codomain_; }
    std::size_t size() const { return elements_.size(); }
    const FiniteFunTable<A, B>& element(std::size_t i) const { return elements_[i]; }
    const FiniteFunTable<A, B>& bottom() const { return elements_[0]; }

    /// Index of a table in the enumeration; nullopt if the table does not
    /// belong to the space (wrong domain or out-of-codomain value).
    std::optional<std::size_t> index_of(const FiniteFunTable<A, B>& t) const {
        if (t.domain() != domain_) return std::nullopt;
        std::size_t idx = 0;
        const std::size_t radix = codomain_.size() + 1;
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            std::size_t digit = 0;
            if (t.entry(i).is_value()) {
                const B& v = t.entry(i).get();
                bool found = false;
                for (std::size_t k = 0; k < codomain_.size(); ++k) {
                    if (codomain_[k] == v) {
                        digit = k + 1;
                        found = true;
                        break;
                    }
                }
                if (!found) return std::nullopt;
            }
            idx = idx * radix + digit;
        }
        return idx;
    }

private:
    std::vector<A> domain_;
    std::vector<B> codomain_;
    std::vector<FiniteFunTable<A, B>> elements_;
};

/// Verdict of one brute-force check. On failure the counterexample is filled
/// in and independently re-checkable: `pair` holds the violating tables and
/// `input` the domain element where they differ, when one is singled out.
template <typename A, typename B>
struct CheckReport {
    bool pass = true;
    std::string detail;
    std::optional<std::pair<FiniteFunTable<A, B>, FiniteFunTable<A, B>>> pair;
    std::optional<A> input;

    static CheckReport ok() { return CheckReport{}; }
};

enum class LfpStatus { Found, NoFixpoint, NoLeast };

template <typename A, typename B>
struct LfpResult {
    LfpStatus status = LfpStatus::NoFixpoint;
    std::optional<FiniteFunTable<A, B>> table;  // present iff status == Found
};

namespace detail {

template <typename A, typename B>
std::vector<FiniteFunTable<A, B>> image_of_space(const std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)>& F,
                                                 const FiniteFunSpace<A, B>& space) {
    std::vector<FiniteFunTable<A, B>> images;
    images.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        FiniteFunTable<A, B> img = F(space.element(i));
        if (img.domain() != space.domain()) throw IllFormed("checker: functional changed the table domain");
        images.push_back(std::move(img));
    }
    return images;
}

}  // namespace detail

/// pass iff F(f) <= F(g) pointwise for every pair f <= g in the space. The
/// first violating pair in enumeration order is reported.
template <typename A, typename B>
CheckReport<A, B> check_monotone(const std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)>& F,
                                 const FiniteFunSpace<A, B>& space) {
    auto images = detail::image_of_space(F, space);
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = 0; j < space.size(); ++j) {
            if (!fun_leq(space.element(i), space.element(j))) continue;
            if (!fun_leq(images[i], images[j])) {
                CheckReport<A, B> r;
                r.pass = false;
                r.detail = "monotonicity violated: f <= g but F(f) !<= F(g)";
                r.pair = {space.element(i), space.element(j)};
                for (std::size_t k = 0; k < space.domain().size(); ++k) {
                    if (!leq(images[i].entry(k), images[j].entry(k))) {
                        r.input = space.domain()[k];
                        break;
                    }
                }
                return r;
            }
        }
    }
    return CheckReport<A, B>::ok();
}

/// pass iff F is monotone and, for every maximal ascending chain of tables,
/// F at the chain's top equals the lub of F's images along the chain. On a
/// finite poset the second condition is implied by the first; it is checked
/// explicitly anyway as a cross-validation of that reduction.
template <typename A, typename B>
CheckReport<A, B> check_continuous(const std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)>& F,
                                   const FiniteFunSpace<A, B>& space) {
    CheckReport<A, B> mono = check_monotone(F, space);
    if (!mono.pass) {
        mono.detail = "not continuous: " + mono.detail;
        return mono;
    }

    // Walk every maximal chain: start at the bottom table and fill one
    // coordinate at a time, in every order, with every codomain value.
    std::vector<FiniteFunTable<A, B>> chain;
    chain.push_back(space.bottom());
    CheckReport<A, B> report = CheckReport<A, B>::ok();

    auto lub_of_images = [&](const std::vector<FiniteFunTable<A, B>>& links) {
        std::vector<FiniteFunTable<A, B>> images;
        images.reserve(links.size());
        for (const auto& f : links) images.push_back(F(f));
        FiniteFunTable<A, B> lub(space.domain());
        for (std::size_t k = 0; k < space.domain().size(); ++k) {
            std::function<Partial<B>(std::size_t)> seq = [&](std::size_t n) { return images[n].entry(k); };
            lub.set_entry(k, chain_lub(seq, links.size() - 1));
        }
        return lub;
    };

    std::function<bool()> walk = [&]() {
        const FiniteFunTable<A, B> top = chain.back();  // copy: push_back below reallocates
        bool maximal = true;
        for (std::size_t k = 0; k < space.domain().size(); ++k) {
            if (top.entry(k).is_value()) continue;
            maximal = false;
            for (const B& v : space.codomain()) {
                FiniteFunTable<A, B> next = top;
                next.set_entry(k, Partial<B>::value(v));
                chain.push_back(std::move(next));
                if (!walk()) return false;
                chain.pop_back();
            }
        }
        if (!maximal) return true;
        FiniteFunTable<A, B> f_top = F(top);
        FiniteFunTable<A, B> lub = lub_of_images(chain);
        if (f_top != lub) {
            report.pass = false;
            report.detail = "continuity violated: F(top of chain) differs from lub of image chain";
            report.pair = {std::move(f_top), std::move(lub)};
            return false;
        }
        return true;
    };

    try {
        walk();
    } catch (const NotAChain&) {
        report.pass = false;
        report.detail = "continuity violated: image of a chain is not a chain";
    }
    return report;
}

/// pass iff bot <= F(bot) <= F^2(bot) <= ... <= F^n_max(bot).
template <typename A, typename B>
CheckReport<A, B> iterates_are_chain(const std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)>& F,
                                     const FiniteFunSpace<A, B>& space, std::size_t n_max) {
    FiniteFunTable<A, B> cur = space.bottom();
    for (std::size_t n = 0; n < n_max; ++n) {
        FiniteFunTable<A, B> next = F(cur);
        if (next.domain() != space.domain()) throw IllFormed("checker: functional changed the table domain");
        if (!fun_leq(cur, next)) {
            CheckReport<A, B> r;
            r.pass = false;
            r.detail = "iterates are not a chain at step " + std::to_string(n);
            r.pair = {std::move(cur), std::move(next)};
            return r;
        }
        cur = std::move(next);
    }
    return CheckReport<A, B>::ok();
}

/// Enumerate all tables, collect the fixpoints of F, and return the one below
/// all others. NoFixpoint / NoLeast signal a non-monotone or ill-formed F.
template <typename A, typename B>
LfpResult<A, B> least_fixpoint_bruteforce(const std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)>& F,
                                          const FiniteFunSpace<A, B>& space) {
    auto images = detail::image_of_space(F, space);
    std::vector<std::size_t> fixpoints;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (images[i] == space.element(i)) fixpoints.push_back(i);
    }
    if (fixpoints.empty()) return {LfpStatus::NoFixpoint, std::nullopt};
    for (std::size_t i : fixpoints) {
        bool least = true;
        for (std::size_t j : fixpoints) {
            if (!fun_leq(space.element(i), space.element(j))) {
                least = false;
                break;
            }
        }
        if (least) return {LfpStatus::Found, space.element(i)};
    }
    return {LfpStatus::NoLeast, std::nullopt};
}

/// pass iff the iterated sequence F^n(bot) stabilizes within n_max steps and
/// the stable table equals the brute-force least fixpoint.
/// Precondition: check_monotone(F, space) passes.
template <typename A, typename B>
CheckReport<A, B> check_tarski(const std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)>& F,
                               const FiniteFunSpace<A, B>& space, std::size_t n_max) {
    FiniteFunTable<A, B> cur = space.bottom();
    std::optional<FiniteFunTable<A, B>> stable;
    for (std::size_t n = 0; n < n_max; ++n) {
        FiniteFunTable<A, B> next = F(cur);
        if (next.domain() != space.domain()) throw IllFormed("checker: functional changed the table domain");
        if (next == cur) {
            stable = std::move(next);
            break;
        }
        cur = std::move(next);
    }
    CheckReport<A, B> r;
    if (!stable) {
        r.pass = false;
        r.detail = "iterates did not stabilize within " + std::to_string(n_max) + " steps";
        return r;
    }
    LfpResult<A, B> lfp = least_fixpoint_bruteforce(F, space);
    if (lfp.status != LfpStatus::Found) {
        r.pass = false;
        r.detail = lfp.status == LfpStatus::NoFixpoint ? "no fixpoint exists in the space"
                                                       : "fixpoints exist but none is least";
        return r;
    }
    if (*stable != *lfp.table) {
        r.pass = false;
        r.detail = "stabilized iterate differs from the brute-force least fixpoint";
        r.pair = {std::move(*stable), std::move(*lfp.table)};
        return r;
    }
    return CheckReport<A, B>::ok();
}

/// Sample a random monotone functional on the space, as a total table-to-table
/// map. Free choices are completed to a monotone assignment by propagating
/// each chosen Value upward as a constraint and never choosing against an
/// existing constraint, so the result is monotone by construction.
template <typename A, typename B, typename Rng>
std::function<FiniteFunTable<A, B>(const FiniteFunTable<A, B>&)> sample_monotone_functional(
    const FiniteFunSpace<A, B>& space, Rng& rng) {
    const std::size_t count = space.size();
    const std::size_t width = space.domain().size();

    // leq_matrix[i*count + j] <=> element(i) <= element(j)
    std::vector<bool> leq_matrix(count * count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            leq_matrix[i * count + j] = fun_leq(space.element(i), space.element(j));
        }
    }

    std::vector<std::optional<B>> constraint(count * width);
    auto images = std::make_shared<std::vector<FiniteFunTable<A, B>>>();
    images->reserve(count);

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        FiniteFunTable<A, B> img(space.domain());
        for (std::size_t k = 0; k < width; ++k) {
            if (constraint[i * width + k]) {
                img.set_entry(k, Partial<B>::value(*constraint[i * width + k]));
                continue;
            }
            if (coin(rng) < 0.4) continue;  // stay Bottom
            std::vector<B> candidates;
            for (const B& v : space.codomain()) {
                bool ok = true;
                for (std::size_t j = 0; j < count; ++j) {
                    if (!leq_matrix[i * count + j]) continue;
                    const auto& c = constraint[j * width + k];
                    if (c && !(*c == v)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) candidates.push_back(v);
            }
            if (candidates.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            const B v = candidates[pick(rng)];
            img.set_entry(k, Partial<B>::value(v));
            for (std::size_t j = 0; j < count; ++j) {
                if (leq_matrix[i * count + j]) constraint[j * width + k] = v;
            }
        }
        images->push_back(std::move(img));
    }

    // Capture the space by value so the functional owns everything it needs.
    auto space_copy = std::make_shared<FiniteFunSpace<A, B>>(space);
    return [images, space_copy](const FiniteFunTable<A, B>& f) {
        auto idx = space_copy->index_of(f);
        if (!idx) throw IllFormed("sampled functional applied outside its space");
        return (*images)[*idx];
    };
}

}  // namespace flatfix
