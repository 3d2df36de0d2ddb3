#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/mdp.hpp"
#include "hackability/rng.hpp"

namespace hackability::envs {

// Two states, two actions: action a moves to state a from anywhere
// (T(s,a) = a, deterministic), uniform start, discount 1/2. Small enough
// that every quantity in the library can be checked by hand.
inline core::ValidatedMdp build_two_state() {
    core::MdpSpec spec;
    spec.num_states = 2;
    spec.num_actions = 2;
    spec.discount = core::Rational(1, 2);
    spec.initial = {core::Rational(1, 2), core::Rational(1, 2)};
    spec.transition.assign(2, std::vector<std::vector<core::Rational>>(
                                  2, std::vector<core::Rational>(2, core::Rational(0))));
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) spec.transition[s][a][a] = 1;
    return core::validate_mdp(spec);
}

struct CleaningSpec {
    // Per-room values under the true and the proxy reward, same length,
    // nonnegative. A subset policy's return under either reward is the sum
    // of that reward's values over the rooms it cleans.
    std::vector<core::Rational> room_rewards_true;
    std::vector<core::Rational> room_rewards_proxy;
};

struct CleaningBandit {
    core::ValidatedMdp mdp;
    // One deterministic policy per room subset; policy index == subset mask.
    std::vector<core::StationaryPolicy> policies;
    std::vector<std::string> policy_names;
    core::RewardTable reward_true;
    core::RewardTable reward_proxy;
};

namespace detail {

inline core::Rational subset_value(const std::vector<core::Rational>& room_values,
                                   std::uint64_t mask) {
    core::Rational total(0);
    for (std::size_t r = 0; r < room_values.size(); ++r)
        if (mask >> r & 1) total += room_values[r];
    return total;
}

inline std::string subset_name(std::uint64_t mask, int rooms) {
    std::string name = "{";
    bool first = true;
    for (int r = 0; r < rooms; ++r)
        if (mask >> r & 1) {
            if (!first) name += ",";
            name += std::to_string(r);
            first = false;
        }
    return name + "}";
}

}  // namespace detail

// One-shot cleaning task as a two-state MDP: from the start state every
// action (one per room subset) moves to an absorbing done state, and reward
// is collected only on that first step. With discount 1/2 the return of the
// subset-mask policy equals the subset's summed room value exactly.
inline CleaningBandit build_cleaning_bandit(const CleaningSpec& cspec, int room_cap = 12) {
    const int rooms = static_cast<int>(cspec.room_rewards_true.size());
    if (rooms < 1) throw ParseError("cleaning bandit: need at least one room");
    if (cspec.room_rewards_proxy.size() != cspec.room_rewards_true.size())
        throw DimensionMismatch("cleaning bandit: true and proxy room lists differ in length");
    if (rooms > room_cap)
        throw CapExceeded("cleaning bandit: " + std::to_string(rooms) + " rooms exceed cap " +
                          std::to_string(room_cap));
    for (const auto& values : {cspec.room_rewards_true, cspec.room_rewards_proxy})
        for (const auto& v : values)
            if (v < 0) throw ParseError("cleaning bandit: room rewards must be nonnegative");
    const std::uint64_t n_subsets = 1ull << rooms;

    core::MdpSpec spec;
    spec.num_states = 2;  // 0 = start, 1 = done
    spec.num_actions = static_cast<int>(n_subsets);
    spec.discount = core::Rational(1, 2);
    spec.initial = {core::Rational(1), core::Rational(0)};
    spec.transition.assign(2, std::vector<std::vector<core::Rational>>(
                                  n_subsets, std::vector<core::Rational>(2, core::Rational(0))));
    for (std::uint64_t a = 0; a < n_subsets; ++a) {
        spec.transition[0][a][1] = 1;
        spec.transition[1][a][1] = 1;
    }

    CleaningBandit bandit{core::validate_mdp(spec), {}, {}, core::RewardTable::zero(2, spec.num_actions),
                          core::RewardTable::zero(2, spec.num_actions)};
    for (std::uint64_t mask = 0; mask < n_subsets; ++mask) {
        bandit.reward_true.values[mask] = detail::subset_value(cspec.room_rewards_true, mask);
        bandit.reward_proxy.values[mask] = detail::subset_value(cspec.room_rewards_proxy, mask);
        bandit.policies.push_back(
            core::StationaryPolicy::deterministic({static_cast<int>(mask), 0}, spec.num_actions));
        bandit.policy_names.push_back(detail::subset_name(mask, rooms));
    }
    return bandit;
}

struct CleaningWitness {
    std::uint64_t s1 = 0;  // subset the proxy prefers
    std::uint64_t s2 = 0;  // subset the true reward prefers
};

// Scans subset pairs for proxy(s1) > proxy(s2) while true(s1) < true(s2),
// i.e. a pair on which optimizing the proxy reward inverts the true
// preference. Returns the lexicographically first such pair.
inline std::optional<CleaningWitness> cleaning_hackability_condition(const CleaningSpec& cspec,
                                                                     int room_cap = 12) {
    auto bandit = build_cleaning_bandit(cspec, room_cap);
    const std::uint64_t n = 1ull << cspec.room_rewards_true.size();
    for (std::uint64_t s1 = 0; s1 < n; ++s1)
        for (std::uint64_t s2 = 0; s2 < n; ++s2) {
            if (bandit.reward_proxy.values[s1] > bandit.reward_proxy.values[s2] &&
                bandit.reward_true.values[s1] < bandit.reward_true.values[s2])
                return CleaningWitness{s1, s2};
        }
    return std::nullopt;
}

namespace detail {

inline std::vector<core::Rational> random_stochastic_row(core::DetRng& rng, int n,
                                                         const core::Rational& density) {
    // Pick a support (each state kept with the given density, at least one
    // state always kept), then spread integer weight 64 over it.
    std::vector<int> support;
    const std::uint64_t den =
        boost::multiprecision::denominator(density).convert_to<std::uint64_t>();
    const std::uint64_t num =
        boost::multiprecision::numerator(density).convert_to<std::uint64_t>();
    for (int s = 0; s < n; ++s)
        if (rng.below(den) < num) support.push_back(s);
    if (support.empty()) support.push_back(static_cast<int>(rng.below(n)));
    std::vector<std::uint64_t> weight(support.size(), 1);
    for (std::uint64_t rest = 64 - support.size(); rest > 0; --rest)
        ++weight[rng.below(support.size())];
    std::vector<core::Rational> row(n, core::Rational(0));
    for (std::size_t i = 0; i < support.size(); ++i)
        row[support[i]] = core::Rational(weight[i], 64);
    return row;
}

}  // namespace detail

// Deterministic pseudo-random MDP: same seed, same MDP. Transition rows get
// a random support of the requested density; unreachable states are repaired
// by rerouting a row from an already reachable state. Discount cycles through
// {1/2, 3/4, 9/10}.
inline core::ValidatedMdp build_random_mdp(int num_states, int num_actions, std::uint64_t seed,
                                           const core::Rational& density = core::Rational(3, 4)) {
    if (num_states < 1 || num_actions < 2)
        throw DimensionMismatch("build_random_mdp: need >= 1 state and >= 2 actions");
    if (density <= 0 || density > 1)
        throw ParseError("build_random_mdp: density must lie in (0, 1]");
    core::DetRng rng = core::DetRng::substream(seed, 0);

    core::MdpSpec spec;
    spec.num_states = num_states;
    spec.num_actions = num_actions;
    const core::Rational gammas[3] = {core::Rational(1, 2), core::Rational(3, 4),
                                      core::Rational(9, 10)};
    spec.discount = gammas[rng.below(3)];

    spec.initial.assign(num_states, core::Rational(0));
    std::uint64_t init_count = 1 + rng.below(static_cast<std::uint64_t>(num_states));
    std::vector<int> order(num_states);
    for (int s = 0; s < num_states; ++s) order[s] = s;
    for (int s = num_states - 1; s > 0; --s)
        std::swap(order[s], order[rng.below(static_cast<std::uint64_t>(s) + 1)]);
    for (std::uint64_t i = 0; i < init_count; ++i)
        spec.initial[order[i]] = core::Rational(1, core::Int(init_count));

    spec.transition.assign(num_states,
                           std::vector<std::vector<core::Rational>>(num_actions));
    for (int s = 0; s < num_states; ++s)
        for (int a = 0; a < num_actions; ++a)
            spec.transition[s][a] = detail::random_stochastic_row(rng, num_states, density);

    // Repair reachability: while some state cannot be reached under any
    // action sequence from the initial support, blend a point mass on the
    // lowest unreachable state into one action row of the lowest reachable
    // state. Old edges survive the blend, so the reachable set strictly
    // grows and at most num_states repairs are needed.
    auto reachable_states = [&]() {
        std::vector<bool> seen(num_states, false);
        std::vector<int> stack;
        for (int s = 0; s < num_states; ++s)
            if (spec.initial[s] > 0) {
                seen[s] = true;
                stack.push_back(s);
            }
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (int a = 0; a < num_actions; ++a)
                for (int next = 0; next < num_states; ++next)
                    if (spec.transition[s][a][next] > 0 && !seen[next]) {
                        seen[next] = true;
                        stack.push_back(next);
                    }
        }
        return seen;
    };
    for (int iter = 0; iter < num_states; ++iter) {
        auto seen = reachable_states();
        int target = -1;
        for (int s = 0; s < num_states; ++s)
            if (!seen[s]) {
                target = s;
                break;
            }
        if (target < 0) break;
        int from = 0;
        while (!seen[from]) ++from;
        int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_actions)));
        auto& row = spec.transition[from][a];
        for (auto& p : row) p /= 2;
        row[target] += core::Rational(1, 2);
    }
    return core::validate_mdp(spec);
}

// Corridor of the given length with deterministic left/right actions clamped
// at the ends, uniform start distribution, discount 1/2.
inline core::ValidatedMdp build_hallway(int length) {
    if (length < 2) throw DimensionMismatch("build_hallway: need length >= 2");
    core::MdpSpec spec;
    spec.num_states = length;
    spec.num_actions = 2;
    spec.discount = core::Rational(1, 2);
    spec.initial.assign(length, core::Rational(1, core::Int(length)));
    spec.transition.assign(length, std::vector<std::vector<core::Rational>>(
                                       2, std::vector<core::Rational>(length, core::Rational(0))));
    for (int s = 0; s < length; ++s) {
        spec.transition[s][0][std::max(0, s - 1)] = 1;
        spec.transition[s][1][std::min(length - 1, s + 1)] = 1;
    }
    return core::validate_mdp(spec);
}

}  // namespace hackability::envs
