#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/linalg.hpp"
#include "hackability/lp.hpp"
#include "hackability/mdp.hpp"
#include "hackability/ordering.hpp"

namespace hackability::repr {

using core::rank_of_vectors;

// Outcome of asking whether some reward realizes a given ordering. Exactly one
// of witness/certificate is present: a realizing reward, or a Gordan-style
// proof that none exists (nonnegative weights on the strict constraint vectors
// whose weighted sum lies in the span of the equality constraint vectors).
struct RepresentabilityResult {
    bool representable = false;
    std::optional<core::RewardTable> witness;
    struct Certificate {
        std::vector<core::Rational> strict_coeffs;    // one per adjacent class pair, >= 0
        std::vector<core::Rational> equality_coeffs;  // one per within-class equality
    };
    std::optional<Certificate> certificate;
};

struct SimplificationExistence {
    bool exists = false;
    int dim_z = 0;
    // Number of independent directions in which the occupancies differ (rank
    // of {F(pi) - F(pi_0)}), not the rank of the raw occupancy vectors: all
    // occupancies share the same total mass, and no reward ordering can use
    // that common offset to separate policies, so counting it would overstate
    // the room available for collapsing classes.
    int dim_f = 0;
    std::vector<int> partition_sizes;
};

namespace detail {

struct OrderingConstraints {
    core::Mat strict;  // F(rep of class i+1) - F(rep of class i)
    core::Mat equal;   // F(member) - F(rep of its class), per non-representative
};

inline OrderingConstraints ordering_constraints(const ordering::PolicySet& pset,
                                                const ordering::PolicyOrdering& o,
                                                const std::vector<int>* reps = nullptr) {
    OrderingConstraints out;
    const auto& occ = pset.occupancies;
    auto diff = [&](int hi, int lo) {
        core::Vec d(occ[hi].counts.size());
        for (std::size_t k = 0; k < d.size(); ++k)
            d[k] = occ[hi].counts[k] - occ[lo].counts[k];
        return d;
    };
    std::vector<int> rep(o.num_classes());
    for (int c = 0; c < o.num_classes(); ++c)
        rep[c] = reps ? (*reps)[c] : o.classes[c][0];
    for (int c = 0; c + 1 < o.num_classes(); ++c)
        out.strict.push_back(diff(rep[c + 1], rep[c]));
    for (int c = 0; c < o.num_classes(); ++c)
        for (int member : o.classes[c])
            if (member != rep[c]) out.equal.push_back(diff(member, rep[c]));
    return out;
}

}  // namespace detail

// True iff the coefficients prove the ordering unrealizable: strict weights
// nonnegative and not all zero, and the weighted sum of strict vectors plus
// the equality combination vanishes.
inline bool verify_certificate(const ordering::PolicySet& pset,
                               const ordering::PolicyOrdering& o,
                               const RepresentabilityResult::Certificate& cert) {
    auto cons = detail::ordering_constraints(pset, o);
    if (cert.strict_coeffs.size() != cons.strict.size() ||
        cert.equality_coeffs.size() != cons.equal.size())
        return false;
    core::Rational total(0);
    for (const auto& l : cert.strict_coeffs) {
        if (l < 0) return false;
        total += l;
    }
    if (total == 0) return false;
    const std::size_t width = pset.occupancies[0].counts.size();
    core::Vec sum(width, core::Rational(0));
    for (std::size_t i = 0; i < cons.strict.size(); ++i)
        for (std::size_t k = 0; k < width; ++k)
            sum[k] += cert.strict_coeffs[i] * cons.strict[i][k];
    for (std::size_t j = 0; j < cons.equal.size(); ++j)
        for (std::size_t k = 0; k < width; ++k)
            sum[k] += cert.equality_coeffs[j] * cons.equal[j][k];
    for (const auto& v : sum)
        if (v != 0) return false;
    return true;
}

// Decides whether some reward realizes the ordering: maximize t subject to
// <R, d_i> >= t for each adjacent-class difference d_i, <R, e_j> = 0 for each
// within-class difference e_j, and -1 <= R <= 1. The box keeps the program
// bounded, 0 is always feasible, and the ordering is realizable iff the
// optimum is strictly positive. On failure the optimal dual weights of the
// strict rows form the certificate, recovered here by a small feasibility
// program.
inline RepresentabilityResult check_representable(const ordering::PolicySet& pset,
                                                  const ordering::PolicyOrdering& o,
                                                  std::uint64_t max_pivots = 200000) {
    if (o.num_policies != pset.size())
        throw SetMismatch("check_representable: ordering covers a different policy set");
    const int s_count = pset.occupancies[0].num_states;
    const int a_count = pset.occupancies[0].num_actions;
    const int dims = s_count * a_count;

    RepresentabilityResult result;
    if (o.num_classes() == 1) {
        result.representable = true;
        result.witness = core::RewardTable::zero(s_count, a_count);
        return result;
    }

    auto cons = detail::ordering_constraints(pset, o);
    const int n_strict = static_cast<int>(cons.strict.size());
    const int n_equal = static_cast<int>(cons.equal.size());

    // Variables: x_k = R_k + 1 in [0,2] (dims), then t+ and t-, then strict
    // slacks, then box slacks.
    const int var_x = 0;
    const int var_tp = dims;
    const int var_tm = dims + 1;
    const int var_slack = dims + 2;
    const int var_box = var_slack + n_strict;
    const int n_vars = var_box + dims;

    core::Mat a;
    core::Vec b;
    auto shifted_rhs = [&](const core::Vec& v) {
        // <v, R> with R = x - 1 contributes -sum(v); move it to the rhs.
        core::Rational offset(0);
        for (const auto& value : v) offset += value;
        return offset;
    };
    for (int i = 0; i < n_strict; ++i) {
        core::Vec row(n_vars, core::Rational(0));
        for (int k = 0; k < dims; ++k) row[var_x + k] = cons.strict[i][k];
        row[var_tp] = -1;
        row[var_tm] = 1;
        row[var_slack + i] = -1;
        a.push_back(std::move(row));
        b.push_back(shifted_rhs(cons.strict[i]));
    }
    for (int j = 0; j < n_equal; ++j) {
        core::Vec row(n_vars, core::Rational(0));
        for (int k = 0; k < dims; ++k) row[var_x + k] = cons.equal[j][k];
        a.push_back(std::move(row));
        b.push_back(shifted_rhs(cons.equal[j]));
    }
    for (int k = 0; k < dims; ++k) {
        core::Vec row(n_vars, core::Rational(0));
        row[var_x + k] = 1;
        row[var_box + k] = 1;
        a.push_back(std::move(row));
        b.push_back(core::Rational(2));
    }
    core::Vec c(n_vars, core::Rational(0));
    c[var_tp] = -1;
    c[var_tm] = 1;

    auto solved = lp::solve_lp(std::move(a), std::move(b), std::move(c), max_pivots);
    if (solved.status != lp::LpStatus::optimal)
        throw Error("internal: representability program must have an optimum");
    const core::Rational t_star = solved.x[var_tp] - solved.x[var_tm];
    if (t_star < 0) throw Error("internal: representability optimum below zero");

    if (t_star > 0) {
        core::RewardTable witness = core::RewardTable::zero(s_count, a_count);
        for (int k = 0; k < dims; ++k) witness.values[k] = solved.x[var_x + k] - 1;
        if (!(ordering_from_reward(witness, pset) == o))
            throw Error("internal: representability witness fails to reproduce the ordering");
        result.representable = true;
        result.witness = std::move(witness);
        return result;
    }

    // Feasibility program for the certificate: lambda >= 0 and mu with
    // sum(lambda) = 1 and sum(lambda_i d_i) + sum(mu_j e_j) = 0.
    const int cert_lambda = 0;
    const int cert_mup = n_strict;
    const int cert_mum = n_strict + n_equal;
    const int cert_vars = n_strict + 2 * n_equal;
    core::Mat ca;
    core::Vec cb;
    for (int k = 0; k < dims; ++k) {
        core::Vec row(cert_vars, core::Rational(0));
        for (int i = 0; i < n_strict; ++i) row[cert_lambda + i] = cons.strict[i][k];
        for (int j = 0; j < n_equal; ++j) {
            row[cert_mup + j] = cons.equal[j][k];
            row[cert_mum + j] = -cons.equal[j][k];
        }
        ca.push_back(std::move(row));
        cb.push_back(core::Rational(0));
    }
    {
        core::Vec row(cert_vars, core::Rational(0));
        for (int i = 0; i < n_strict; ++i) row[cert_lambda + i] = 1;
        ca.push_back(std::move(row));
        cb.push_back(core::Rational(1));
    }
    auto cert_solved = lp::solve_lp(std::move(ca), std::move(cb),
                                    core::Vec(cert_vars, core::Rational(0)), max_pivots);
    if (cert_solved.status != lp::LpStatus::optimal)
        throw Error("internal: infeasibility certificate must exist when the optimum is zero");
    RepresentabilityResult::Certificate cert;
    cert.strict_coeffs.assign(cert_solved.x.begin() + cert_lambda,
                              cert_solved.x.begin() + cert_lambda + n_strict);
    for (int j = 0; j < n_equal; ++j)
        cert.equality_coeffs.push_back(cert_solved.x[cert_mup + j] - cert_solved.x[cert_mum + j]);
    if (!verify_certificate(pset, o, cert))
        throw Error("internal: produced certificate fails verification");
    result.representable = false;
    result.certificate = std::move(cert);
    return result;
}

// Rank test for the existence of a non-trivial simplification: partition by
// class, subtract each class representative from its class, and compare the
// rank of the union against the occupancy direction rank minus two. The
// within-class difference span is independent of the representative choice.
inline SimplificationExistence simplification_exists(const ordering::PolicySet& pset,
                                                     const ordering::PolicyOrdering& o,
                                                     bool assume_representable = false,
                                                     std::uint64_t max_pivots = 200000) {
    if (o.num_policies != pset.size())
        throw SetMismatch("simplification_exists: ordering covers a different policy set");
    if (!assume_representable && !check_representable(pset, o, max_pivots).representable)
        throw NotRepresentable("simplification_exists: ordering has no realizing reward");

    auto cons = detail::ordering_constraints(pset, o);
    SimplificationExistence out;
    out.dim_z = rank_of_vectors(cons.equal);
    core::Mat points;
    points.reserve(pset.occupancies.size());
    for (const auto& occ : pset.occupancies) points.push_back(occ.counts);
    out.dim_f = core::rank_of_differences(points);
    out.exists = out.dim_z <= out.dim_f - 2;
    for (const auto& cls : o.classes) out.partition_sizes.push_back(static_cast<int>(cls.size()));
    return out;
}

struct RepresentableOrdering {
    ordering::PolicyOrdering ordering;
    core::RewardTable witness;
};

// Filters the candidate orderings (all weak orders, or strict permutations
// only) through check_representable. Deterministic candidate order.
inline std::vector<RepresentableOrdering> enumerate_representable_orderings(
    const ordering::PolicySet& pset, bool strict_only = false, std::uint64_t cap = 50000) {
    const int n = pset.size();
    std::vector<ordering::PolicyOrdering> candidates;
    if (strict_only) {
        core::Int total = 1;
        for (int i = 2; i <= n; ++i) total *= i;
        if (total > core::Int(cap))
            throw CapExceeded("enumerate_representable_orderings: " + total.str() +
                              " permutations exceed cap " + std::to_string(cap));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            ordering::PolicyOrdering o;
            o.num_policies = n;
            for (int idx : perm) o.classes.push_back({idx});
            candidates.push_back(std::move(o));
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        candidates = ordering::enumerate_weak_orders(n, cap);
    }
    std::vector<RepresentableOrdering> out;
    for (auto& cand : candidates) {
        auto rr = check_representable(pset, cand);
        if (rr.representable) out.push_back({std::move(cand), std::move(*rr.witness)});
    }
    return out;
}

// Non-trivial representable coarsenings of the ordering, with witnesses. The
// list is nonempty exactly when simplification_exists reports true (for a
// representable input ordering).
inline std::vector<RepresentableOrdering> find_representable_simplifications(
    const ordering::PolicySet& pset, const ordering::PolicyOrdering& o,
    std::uint64_t max_pivots = 200000) {
    if (o.num_policies != pset.size())
        throw SetMismatch("find_representable_simplifications: ordering covers a different set");
    std::vector<RepresentableOrdering> out;
    for (auto& cand : ordering::enumerate_coarsenings(o)) {
        if (cand.num_classes() < 2) continue;
        auto rr = check_representable(pset, cand, max_pivots);
        if (rr.representable) out.push_back({std::move(cand), std::move(*rr.witness)});
    }
    return out;
}

// Negating a reward reverses its ordering; this is the ordering-level mirror.
inline ordering::PolicyOrdering reward_negation_duality(const ordering::PolicyOrdering& o) {
    ordering::PolicyOrdering reversed;
    reversed.num_policies = o.num_policies;
    reversed.classes.assign(o.classes.rbegin(), o.classes.rend());
    if (o.values) {
        std::vector<core::Rational> negated;
        negated.reserve(o.values->size());
        for (const auto& v : *o.values) negated.push_back(-v);
        reversed.values = std::move(negated);
    }
    if (o.source) {
        core::RewardTable neg = *o.source;
        for (auto& v : neg.values) v = -v;
        reversed.source = std::move(neg);
    }
    return reversed;
}

struct UnhackablePair {
    core::RewardTable reward;
    ordering::PolicyOrdering ordering;
};

// Finds a non-trivial reward whose ordering is unhackable with, and not
// equivalent to, the ordering of r1. Searches representable non-trivial
// coarsenings of r1's ordering first, then every weak order. Throws
// SearchExhausted when the complete search proves no such reward exists
// (possible when the occupancies span fewer than two directions).
inline UnhackablePair find_unhackable_noneq(const ordering::PolicySet& pset,
                                            const core::RewardTable& r1,
                                            std::uint64_t cap = 50000) {
    bool distinct = false;
    for (const auto& occ : pset.occupancies)
        if (!(occ == pset.occupancies[0])) {
            distinct = true;
            break;
        }
    if (!distinct)
        throw NoDistinctOccupancies("find_unhackable_noneq: all occupancies are equal");

    const auto o1 = ordering_from_reward(r1, pset);
    auto finish = [&](const core::RewardTable& witness) {
        auto o2 = ordering_from_reward(witness, pset);
        if (ordering::is_trivial(o2) || ordering::is_equivalent(o1, o2) ||
            ordering::check_hackable(o1, o2))
            throw Error("internal: find_unhackable_noneq postcondition failed");
        return UnhackablePair{witness, std::move(o2)};
    };

    if (!ordering::is_trivial(o1)) {
        for (const auto& cand : ordering::enumerate_coarsenings(o1)) {
            if (cand.num_classes() < 2) continue;
            auto rr = check_representable(pset, cand);
            if (rr.representable) return finish(*rr.witness);
        }
    }
    for (const auto& cand : ordering::enumerate_weak_orders(pset.size(), cap)) {
        if (cand.num_classes() < 2) continue;
        if (cand.classes == o1.classes) continue;
        if (ordering::check_hackable(o1, cand)) continue;
        auto rr = check_representable(pset, cand);
        if (rr.representable) return finish(*rr.witness);
    }
    throw SearchExhausted(
        "find_unhackable_noneq: no non-trivial unhackable non-equivalent reward exists "
        "for this policy set");
}

}  // namespace hackability::repr
