#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/mdp.hpp"
#include "hackability/ordering.hpp"
#include "hackability/rng.hpp"

namespace hackability::search {

struct SearchBudget {
    std::uint64_t num_samples = 10000;
    std::uint64_t num_refinement_steps = 100;
    std::uint64_t seed = 1;
};

// Restricts sampling to a policy subset: everything, the policies within eps
// of the optimal return under a fixed reward, or the policies that put at
// least delta probability on one action in every state.
struct PolicyFilter {
    enum class Kind { all, eps_suboptimal, delta_deterministic };
    Kind kind = Kind::all;
    core::Rational eps;
    std::optional<core::RewardTable> wrt;
    core::Rational delta;

    static PolicyFilter all() { return {}; }
    static PolicyFilter eps_suboptimal(const core::Rational& eps, core::RewardTable wrt) {
        if (eps <= 0) throw ParseError("eps_suboptimal filter: eps must be positive");
        PolicyFilter f;
        f.kind = Kind::eps_suboptimal;
        f.eps = eps;
        f.wrt = std::move(wrt);
        return f;
    }
    static PolicyFilter delta_deterministic(const core::Rational& delta) {
        if (delta < 0 || delta >= 1)
            throw ParseError("delta_deterministic filter: delta must lie in [0, 1)");
        PolicyFilter f;
        f.kind = Kind::delta_deterministic;
        f.delta = delta;
        return f;
    }
};

// Exact optimal return over deterministic policies. Some deterministic
// stationary policy attains the optimum over all stationary policies, so
// enumeration gives the true maximum.
inline core::Rational optimal_return(const core::ValidatedMdp& mdp, const core::RewardTable& reward,
                                     std::uint64_t cap = 1000000) {
    std::optional<core::Rational> best;
    for (const auto& policy : core::enumerate_deterministic_policies(mdp, cap)) {
        core::Rational j = core::policy_return(mdp, policy, reward);
        if (!best || j > *best) best = j;
    }
    return *best;
}

inline bool is_eps_suboptimal(const core::ValidatedMdp& mdp, const core::RewardTable& reward,
                              const core::StationaryPolicy& policy, const core::Rational& eps,
                              std::uint64_t cap = 1000000) {
    if (eps <= 0) throw ParseError("is_eps_suboptimal: eps must be positive");
    return core::policy_return(mdp, policy, reward) >= optimal_return(mdp, reward, cap) - eps;
}

inline bool is_delta_deterministic(const core::StationaryPolicy& policy,
                                   const core::Rational& delta) {
    if (delta < 0 || delta >= 1)
        throw ParseError("is_delta_deterministic: delta must lie in [0, 1)");
    for (const auto& row : policy.action_probs) {
        core::Rational row_max(0);
        for (const auto& p : row)
            if (p > row_max) row_max = p;
        if (row_max < delta) return false;
    }
    return true;
}

namespace detail {

// Filter evaluation with the optimal return precomputed once, so rejection
// sampling costs one occupancy solve per attempt instead of a full
// deterministic enumeration.
struct FilterRuntime {
    const core::ValidatedMdp& mdp;
    const PolicyFilter& filter;
    std::optional<core::Rational> threshold;  // J* - eps

    FilterRuntime(const core::ValidatedMdp& m, const PolicyFilter& f) : mdp(m), filter(f) {
        if (filter.kind == PolicyFilter::Kind::eps_suboptimal) {
            if (filter.eps <= 0) throw ParseError("eps_suboptimal filter: eps must be positive");
            threshold = optimal_return(mdp, *filter.wrt) - filter.eps;
        } else if (filter.kind == PolicyFilter::Kind::delta_deterministic) {
            if (filter.delta < 0 || filter.delta >= 1)
                throw ParseError("delta_deterministic filter: delta must lie in [0, 1)");
        }
    }

    bool passes(const core::StationaryPolicy& policy) const {
        switch (filter.kind) {
            case PolicyFilter::Kind::all:
                return true;
            case PolicyFilter::Kind::eps_suboptimal:
                return core::policy_return(mdp, policy, *filter.wrt) >= *threshold;
            case PolicyFilter::Kind::delta_deterministic:
                return is_delta_deterministic(policy, filter.delta);
        }
        return false;
    }
};

inline core::StationaryPolicy draw_policy(core::DetRng& rng, int num_states, int num_actions) {
    // Integer weights in 0..M per action keep every probability a rational
    // with denominator at most num_actions * M <= 1000.
    const std::uint64_t weight_max = std::max<std::uint64_t>(
        1, 1000 / static_cast<std::uint64_t>(num_actions));
    std::vector<std::vector<core::Rational>> rows(num_states);
    for (int s = 0; s < num_states; ++s) {
        std::vector<std::uint64_t> w(num_actions);
        std::uint64_t total = 0;
        for (int a = 0; a < num_actions; ++a) {
            w[a] = rng.below(weight_max + 1);
            total += w[a];
        }
        if (total == 0) {
            w[0] = 1;
            total = 1;
        }
        rows[s].resize(num_actions);
        for (int a = 0; a < num_actions; ++a) rows[s][a] = core::Rational(w[a], total);
    }
    return core::StationaryPolicy::from_rows(rows);
}

}  // namespace detail

// Reproducible rejection sampling: sample i always comes from the same RNG
// substream regardless of the total count, so larger budgets extend smaller
// ones instead of reshuffling them.
inline std::vector<core::StationaryPolicy> sample_policies(const core::ValidatedMdp& mdp,
                                                           const PolicyFilter& filter,
                                                           const SearchBudget& budget) {
    detail::FilterRuntime rt(mdp, filter);
    std::vector<core::StationaryPolicy> out;
    out.reserve(budget.num_samples);
    for (std::uint64_t i = 0; i < budget.num_samples; ++i) {
        core::DetRng rng = core::DetRng::substream(budget.seed, i);
        bool accepted = false;
        for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
            auto policy = detail::draw_policy(rng, mdp.num_states(), mdp.num_actions());
            if (rt.passes(policy)) {
                out.push_back(std::move(policy));
                accepted = true;
            }
        }
        if (!accepted)
            throw FilterTooTight("sample_policies: no acceptance within 1000 attempts for sample " +
                                 std::to_string(i));
    }
    return out;
}

// A pair of sampled (possibly refined) policies with opposite strict return
// orderings under the two rewards: j1 of pi is below pi_prime while j2 of pi
// is above pi_prime. All values are exact.
struct WitnessPair {
    core::StationaryPolicy pi;
    core::StationaryPolicy pi_prime;
    core::Rational j1_pi, j1_pi_prime;
    core::Rational j2_pi, j2_pi_prime;
};

namespace detail {

struct Scored {
    std::uint64_t index = 0;
    core::StationaryPolicy policy;
    core::Rational j1, j2;
};

inline Scored score_policy(const core::ValidatedMdp& mdp, core::StationaryPolicy policy,
                           const core::RewardTable& r1, const core::RewardTable& r2,
                           std::uint64_t index) {
    auto occ = core::occupancy(mdp, policy);
    Scored s{index, std::move(policy), core::Rational(0), core::Rational(0)};
    for (std::size_t k = 0; k < occ.counts.size(); ++k) {
        s.j1 += occ.counts[k] * r1.values[k];
        s.j2 += occ.counts[k] * r2.values[k];
    }
    return s;
}

// Scans for the deterministically-first witness among the scored samples:
// sort by (j1, j2, index), then sweep with a running best j2 over all
// strictly-lower-j1 samples. Returns indices into `scored`.
inline std::optional<std::pair<std::size_t, std::size_t>> scan_for_witness(
    std::vector<const Scored*>& order) {
    std::sort(order.begin(), order.end(), [](const Scored* a, const Scored* b) {
        if (a->j1 != b->j1) return a->j1 < b->j1;
        if (a->j2 != b->j2) return a->j2 < b->j2;
        return a->index < b->index;
    });
    std::optional<std::size_t> best;       // position in `order`
    std::optional<std::size_t> group_best; // best j2 within the current j1 group
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const bool new_group = pos == 0 || order[pos]->j1 != order[pos - 1]->j1;
        if (new_group && group_best) {
            if (!best || order[*group_best]->j2 > order[*best]->j2) best = *group_best;
            group_best.reset();
        }
        if (best && order[*best]->j2 > order[pos]->j2) return std::make_pair(*best, pos);
        if (!group_best || order[pos]->j2 > order[*group_best]->j2) group_best = pos;
    }
    return std::nullopt;
}

inline core::Rational pair_score(const Scored& p, const Scored& q) {
    return std::min(q.j1 - p.j1, p.j2 - q.j2);
}

}  // namespace detail

// Samples filtered policies in blocks, scanning after each block so a
// witness early in the stream is found without spending the whole budget.
// If sampling alone finds none, deterministic hill-climbing perturbs the
// closest near-miss pairs: moves of 1/k probability mass between two actions
// of one state, coarse k first, accepting any move that increases
// min(j1 gap, j2 gap) while keeping both policies inside the filter.
inline std::optional<WitnessPair> search_hackability_witness(const core::ValidatedMdp& mdp,
                                                             const core::RewardTable& r1,
                                                             const core::RewardTable& r2,
                                                             const PolicyFilter& filter,
                                                             const SearchBudget& budget) {
    detail::FilterRuntime rt(mdp, filter);
    std::vector<detail::Scored> scored;
    scored.reserve(budget.num_samples);

    auto make_result = [&](const detail::Scored& p, const detail::Scored& q) {
        return WitnessPair{p.policy, q.policy, p.j1, q.j1, p.j2, q.j2};
    };

    constexpr std::uint64_t block = 512;
    for (std::uint64_t start = 0; start < budget.num_samples; start += block) {
        const std::uint64_t stop = std::min(budget.num_samples, start + block);
        for (std::uint64_t i = start; i < stop; ++i) {
            core::DetRng rng = core::DetRng::substream(budget.seed, i);
            std::optional<core::StationaryPolicy> policy;
            for (int attempt = 0; attempt < 1000 && !policy; ++attempt) {
                auto candidate = detail::draw_policy(rng, mdp.num_states(), mdp.num_actions());
                if (rt.passes(candidate)) policy = std::move(candidate);
            }
            if (!policy)
                throw FilterTooTight(
                    "search_hackability_witness: no acceptance within 1000 attempts for sample " +
                    std::to_string(i));
            scored.push_back(detail::score_policy(mdp, std::move(*policy), r1, r2, i));
        }
        std::vector<const detail::Scored*> order;
        order.reserve(scored.size());
        for (const auto& s : scored) order.push_back(&s);
        if (auto hit = detail::scan_for_witness(order))
            return make_result(*order[hit->first], *order[hit->second]);
    }

    if (scored.size() < 2 || budget.num_refinement_steps == 0) return std::nullopt;

    // Near-miss pairs: for each sample, its best partner is the highest-j2
    // sample with strictly lower j1, which the sorted sweep yields directly.
    std::vector<const detail::Scored*> order;
    order.reserve(scored.size());
    for (const auto& s : scored) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const detail::Scored* a, const detail::Scored* b) {
        if (a->j1 != b->j1) return a->j1 < b->j1;
        if (a->j2 != b->j2) return a->j2 < b->j2;
        return a->index < b->index;
    });
    std::vector<std::pair<const detail::Scored*, const detail::Scored*>> pairs;
    {
        const detail::Scored* best = nullptr;
        const detail::Scored* group_best = nullptr;
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            if (pos > 0 && order[pos]->j1 != order[pos - 1]->j1 && group_best) {
                if (!best || group_best->j2 > best->j2) best = group_best;
                group_best = nullptr;
            }
            if (best) pairs.emplace_back(best, order[pos]);
            if (!group_best || order[pos]->j2 > group_best->j2) group_best = order[pos];
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return detail::pair_score(*a.first, *a.second) > detail::pair_score(*b.first, *b.second);
    });
    if (pairs.size() > 8) pairs.resize(8);

    std::uint64_t steps_left = budget.num_refinement_steps;
    for (const auto& [p0, q0] : pairs) {
        detail::Scored p = *p0;
        detail::Scored q = *q0;
        core::Rational score = detail::pair_score(p, q);
        bool improved = true;
        while (improved && steps_left > 0 && score <= 0) {
            improved = false;
            for (detail::Scored* side : {&p, &q}) {
                for (int s = 0; s < mdp.num_states() && !improved; ++s) {
                    for (int from = 0; from < mdp.num_actions() && !improved; ++from) {
                        for (int to = 0; to < mdp.num_actions() && !improved; ++to) {
                            if (from == to) continue;
                            for (std::uint64_t k : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
                                core::Rational step(1, k);
                                if (side->policy.action_probs[s][from] < step) continue;
                                auto rows = side->policy.action_probs;
                                rows[s][from] -= step;
                                rows[s][to] += step;
                                auto moved = core::StationaryPolicy::from_rows(rows);
                                if (!rt.passes(moved)) continue;
                                auto rescored =
                                    detail::score_policy(mdp, std::move(moved), r1, r2, side->index);
                                detail::Scored& other = (side == &p) ? q : p;
                                core::Rational trial = (side == &p)
                                                           ? detail::pair_score(rescored, other)
                                                           : detail::pair_score(other, rescored);
                                if (trial > score) {
                                    *side = std::move(rescored);
                                    score = trial;
                                    improved = true;
                                    --steps_left;
                                    break;
                                }
                            }
                        }
                    }
                }
                if (improved) break;
            }
        }
        if (score > 0) return make_result(p, q);
        if (steps_left == 0) break;
    }
    return std::nullopt;
}

struct ProbeReport {
    std::optional<WitnessPair> witness;
    // Whether r1 and r2 sorted the sampled policies into identical ordered
    // partitions. Evidence of equivalence on the sampled set, never a proof.
    bool orderings_agree_on_sample = false;
    SearchBudget budget;
};

inline ProbeReport equivalence_probe(const core::ValidatedMdp& mdp, const core::RewardTable& r1,
                                     const core::RewardTable& r2, const PolicyFilter& filter,
                                     const SearchBudget& budget) {
    ProbeReport report;
    report.budget = budget;
    report.witness = search_hackability_witness(mdp, r1, r2, filter, budget);

    auto policies = sample_policies(mdp, filter, budget);
    auto pset = ordering::PolicySet::make(mdp, policies);
    auto o1 = ordering::ordering_from_reward(r1, pset);
    auto o2 = ordering::ordering_from_reward(r2, pset);
    report.orderings_agree_on_sample = o1.classes == o2.classes;
    return report;
}

}  // namespace hackability::search
