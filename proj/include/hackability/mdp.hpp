#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/linalg.hpp"
#include "hackability/rational.hpp"

namespace hackability::core {

// A rewardless MDP: states, actions, transition kernel, initial distribution,
// discount. All probabilities exact rationals.
struct MdpSpec {
    int num_states = 0;
    int num_actions = 0;
    // transition[s][a] is a distribution over next states.
    std::vector<std::vector<std::vector<Rational>>> transition;
    std::vector<Rational> initial;
    Rational discount;
};

class ValidatedMdp;
inline ValidatedMdp validate_mdp(MdpSpec raw);

// An MdpSpec that passed validate_mdp. Immutable.
class ValidatedMdp {
  public:
    const MdpSpec& spec() const { return spec_; }
    int num_states() const { return spec_.num_states; }
    int num_actions() const { return spec_.num_actions; }
    const Rational& trans(int s, int a, int next) const { return spec_.transition[s][a][next]; }
    const Rational& initial(int s) const { return spec_.initial[s]; }
    const Rational& discount() const { return spec_.discount; }

  private:
    friend ValidatedMdp validate_mdp(MdpSpec raw);
    explicit ValidatedMdp(MdpSpec s) : spec_(std::move(s)) {}
    MdpSpec spec_;
};

// Every violated invariant of the spec, in check order. Empty means valid.
inline std::vector<std::string> mdp_violations(const MdpSpec& raw) {
    std::vector<std::string> out;
    const int s_count = raw.num_states;
    const int a_count = raw.num_actions;
    if (s_count < 1) {
        out.push_back("dimension: num_states must be at least 1");
        return out;
    }
    if (a_count < 2) out.push_back("too_few_actions: num_actions must be at least 2");
    if (static_cast<int>(raw.transition.size()) != s_count ||
        static_cast<int>(raw.initial.size()) != s_count) {
        out.push_back("dimension: transition/initial tables do not match num_states");
        return out;
    }
    for (int s = 0; s < s_count; ++s) {
        if (static_cast<int>(raw.transition[s].size()) != a_count) {
            out.push_back("dimension: transition[" + std::to_string(s) +
                          "] does not match num_actions");
            return out;
        }
        for (int a = 0; a < a_count; ++a) {
            const auto& row = raw.transition[s][a];
            if (static_cast<int>(row.size()) != s_count) {
                out.push_back("dimension: transition row (" + std::to_string(s) + "," +
                              std::to_string(a) + ") does not match num_states");
                return out;
            }
            Rational sum(0);
            bool nonneg = true;
            for (const Rational& p : row) {
                if (p < 0) nonneg = false;
                sum += p;
            }
            if (!nonneg || sum != 1)
                out.push_back("non_stochastic_row: transition row (" + std::to_string(s) + "," +
                              std::to_string(a) + ") is not a probability distribution");
        }
    }
    {
        Rational sum(0);
        bool nonneg = true;
        for (const Rational& p : raw.initial) {
            if (p < 0) nonneg = false;
            sum += p;
        }
        if (!nonneg || sum != 1)
            out.push_back("non_stochastic_row: initial is not a probability distribution");
    }
    if (raw.discount < 0 || raw.discount >= 1)
        out.push_back("discount_out_of_range: discount must satisfy 0 <= g < 1");

    // Reachability from the support of initial, under the union of all actions.
    if (out.empty()) {
        std::vector<char> seen(s_count, 0);
        std::vector<int> stack;
        for (int s = 0; s < s_count; ++s)
            if (raw.initial[s] > 0) {
                seen[s] = 1;
                stack.push_back(s);
            }
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (int a = 0; a < a_count; ++a)
                for (int next = 0; next < s_count; ++next)
                    if (raw.transition[s][a][next] > 0 && !seen[next]) {
                        seen[next] = 1;
                        stack.push_back(next);
                    }
        }
        for (int s = 0; s < s_count; ++s)
            if (!seen[s])
                out.push_back("unreachable_state: state " + std::to_string(s) +
                              " cannot be reached from the initial distribution");
    }
    return out;
}

inline ValidatedMdp validate_mdp(MdpSpec raw) {
    auto violations = mdp_violations(raw);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            if (!msg.empty()) msg += "; ";
            msg += v;
        }
        const std::string& first = violations.front();
        if (first.rfind("too_few_actions", 0) == 0) throw TooFewActions(msg);
        if (first.rfind("non_stochastic_row", 0) == 0) throw NonStochasticRow(msg);
        if (first.rfind("discount_out_of_range", 0) == 0) throw DiscountOutOfRange(msg);
        if (first.rfind("unreachable_state", 0) == 0) throw UnreachableState(msg);
        throw DimensionMismatch(msg);
    }
    return ValidatedMdp(std::move(raw));
}

// A stationary policy: one action distribution per state.
struct StationaryPolicy {
    std::vector<std::vector<Rational>> action_probs;
    bool deterministic_flag = false;

    bool operator==(const StationaryPolicy& other) const {
        return action_probs == other.action_probs;
    }

    static StationaryPolicy from_rows(std::vector<std::vector<Rational>> rows) {
        if (rows.empty()) throw DimensionMismatch("policy: no states");
        const std::size_t a_count = rows[0].size();
        bool deterministic = true;
        for (std::size_t s = 0; s < rows.size(); ++s) {
            if (rows[s].size() != a_count)
                throw DimensionMismatch("policy: ragged action rows");
            Rational sum(0);
            bool unit = false;
            for (const Rational& p : rows[s]) {
                if (p < 0)
                    throw NonStochasticRow("policy: negative probability in state " +
                                           std::to_string(s));
                if (p == 1) unit = true;
                sum += p;
            }
            if (sum != 1)
                throw NonStochasticRow("policy: row for state " + std::to_string(s) +
                                       " does not sum to 1");
            deterministic = deterministic && unit;
        }
        StationaryPolicy p;
        p.action_probs = std::move(rows);
        p.deterministic_flag = deterministic;
        return p;
    }

    static StationaryPolicy deterministic(const std::vector<int>& actions, int num_actions) {
        std::vector<std::vector<Rational>> rows(actions.size(),
                                                std::vector<Rational>(num_actions, Rational(0)));
        for (std::size_t s = 0; s < actions.size(); ++s) rows[s][actions[s]] = 1;
        return from_rows(std::move(rows));
    }
};

// Discounted visit counts F(pi), indexed by (state, action). Entries are
// nonnegative and sum to exactly 1/(1 - discount).
struct OccupancyVector {
    int num_states = 0;
    int num_actions = 0;
    std::vector<Rational> counts;  // index s * num_actions + a

    const Rational& at(int s, int a) const { return counts[s * num_actions + a]; }
    Rational sum() const {
        Rational total(0);
        for (const Rational& c : counts) total += c;
        return total;
    }
    bool operator==(const OccupancyVector& other) const { return counts == other.counts; }
};

// A Markov reward R(s, a). When built by marginalizing a three-index table
// R(s, a, s'), the source table is retained.
struct RewardTable {
    int num_states = 0;
    int num_actions = 0;
    std::vector<Rational> values;  // index s * num_actions + a
    std::optional<std::vector<Rational>> source;  // index (s*A + a)*S + s'

    const Rational& at(int s, int a) const { return values[s * num_actions + a]; }
    Rational& at(int s, int a) { return values[s * num_actions + a]; }
    bool operator==(const RewardTable& other) const {
        return num_states == other.num_states && num_actions == other.num_actions &&
               values == other.values;
    }

    static RewardTable from_table(const std::vector<std::vector<Rational>>& rows) {
        if (rows.empty() || rows[0].empty())
            throw DimensionMismatch("reward: empty table");
        RewardTable r;
        r.num_states = static_cast<int>(rows.size());
        r.num_actions = static_cast<int>(rows[0].size());
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != r.num_actions)
                throw DimensionMismatch("reward: ragged table");
            r.values.insert(r.values.end(), row.begin(), row.end());
        }
        return r;
    }

    static RewardTable zero(int num_states, int num_actions) {
        RewardTable r;
        r.num_states = num_states;
        r.num_actions = num_actions;
        r.values.assign(static_cast<std::size_t>(num_states) * num_actions, Rational(0));
        return r;
    }
};

struct PotentialFunction {
    std::vector<Rational> phi;  // indexed by state
};

// Exact F(pi): solve w = initial + discount * P_pi^T w, then
// F[s, a] = w(s) * pi(a | s).
inline OccupancyVector occupancy(const ValidatedMdp& mdp, const StationaryPolicy& policy) {
    const int s_count = mdp.num_states();
    const int a_count = mdp.num_actions();
    if (static_cast<int>(policy.action_probs.size()) != s_count ||
        static_cast<int>(policy.action_probs[0].size()) != a_count)
        throw DimensionMismatch("occupancy: policy does not match MDP dimensions");

    // System matrix M[next][s] = delta(next, s) - g * sum_a pi(a|s) T(s,a,next).
    Mat m(s_count, Vec(s_count, Rational(0)));
    for (int s = 0; s < s_count; ++s) {
        m[s][s] = 1;
        for (int a = 0; a < a_count; ++a) {
            const Rational& pa = policy.action_probs[s][a];
            if (pa == 0) continue;
            for (int next = 0; next < s_count; ++next) {
                const Rational& t = mdp.trans(s, a, next);
                if (t != 0) m[next][s] -= mdp.discount() * pa * t;
            }
        }
    }
    Vec iota(s_count);
    for (int s = 0; s < s_count; ++s) iota[s] = mdp.initial(s);
    Vec w = solve_linear(m, iota);

    OccupancyVector f;
    f.num_states = s_count;
    f.num_actions = a_count;
    f.counts.resize(static_cast<std::size_t>(s_count) * a_count);
    for (int s = 0; s < s_count; ++s)
        for (int a = 0; a < a_count; ++a)
            f.counts[s * a_count + a] = w[s] * policy.action_probs[s][a];

    if (f.sum() != Rational(1) / (Rational(1) - mdp.discount()))
        throw Error("internal: occupancy normalization failed");
    return f;
}

// J(pi) = <R, F(pi)>, exact.
inline Rational policy_return(const RewardTable& reward, const OccupancyVector& occ) {
    if (reward.values.size() != occ.counts.size())
        throw DimensionMismatch("policy_return: reward and occupancy sizes differ");
    Rational total(0);
    for (std::size_t k = 0; k < occ.counts.size(); ++k)
        total += reward.values[k] * occ.counts[k];
    return total;
}

inline Rational policy_return(const ValidatedMdp& mdp, const StationaryPolicy& policy,
                              const RewardTable& reward) {
    return policy_return(reward, occupancy(mdp, policy));
}

// values[s, a] = sum_s' T(s'|s,a) * three_index[s][a][s']. Source retained.
inline RewardTable marginalize_reward(
    const ValidatedMdp& mdp, const std::vector<std::vector<std::vector<Rational>>>& three_index) {
    const int s_count = mdp.num_states();
    const int a_count = mdp.num_actions();
    if (static_cast<int>(three_index.size()) != s_count)
        throw DimensionMismatch("marginalize_reward: table does not match num_states");
    RewardTable r = RewardTable::zero(s_count, a_count);
    std::vector<Rational> source;
    source.reserve(static_cast<std::size_t>(s_count) * a_count * s_count);
    for (int s = 0; s < s_count; ++s) {
        if (static_cast<int>(three_index[s].size()) != a_count)
            throw DimensionMismatch("marginalize_reward: table does not match num_actions");
        for (int a = 0; a < a_count; ++a) {
            if (static_cast<int>(three_index[s][a].size()) != s_count)
                throw DimensionMismatch("marginalize_reward: inner row size mismatch");
            Rational acc(0);
            for (int next = 0; next < s_count; ++next) {
                acc += mdp.trans(s, a, next) * three_index[s][a][next];
                source.push_back(three_index[s][a][next]);
            }
            r.at(s, a) = acc;
        }
    }
    r.source = std::move(source);
    return r;
}

struct ShapeResult {
    RewardTable reward;
    // True iff E_{S0 ~ initial}[phi(S0)] = 0, in which case every policy's
    // return is unchanged by the shaping.
    bool invariance_holds = false;
};

// R'(s,a) = R(s,a) + discount * E_{S' ~ T(s,a)}[phi(S')] - phi(s).
inline ShapeResult shape_reward(const ValidatedMdp& mdp, const RewardTable& reward,
                                const PotentialFunction& phi) {
    const int s_count = mdp.num_states();
    const int a_count = mdp.num_actions();
    if (reward.num_states != s_count || reward.num_actions != a_count)
        throw DimensionMismatch("shape_reward: reward does not match MDP dimensions");
    if (static_cast<int>(phi.phi.size()) != s_count)
        throw DimensionMismatch("shape_reward: potential does not match num_states");
    ShapeResult result;
    result.reward = RewardTable::zero(s_count, a_count);
    for (int s = 0; s < s_count; ++s)
        for (int a = 0; a < a_count; ++a) {
            Rational expected(0);
            for (int next = 0; next < s_count; ++next)
                expected += mdp.trans(s, a, next) * phi.phi[next];
            result.reward.at(s, a) = reward.at(s, a) + mdp.discount() * expected - phi.phi[s];
        }
    Rational initial_expectation(0);
    for (int s = 0; s < s_count; ++s) initial_expectation += mdp.initial(s) * phi.phi[s];
    result.invariance_holds = initial_expectation == 0;
    return result;
}

// R(s,a,s') = 0 where pi(a|s) > 0, and -1 otherwise, marginalized. The input
// policy maximizes return; a deterministic input is the unique deterministic
// maximizer among policies with a different occupancy.
inline RewardTable rationalizing_reward(const ValidatedMdp& mdp, const StationaryPolicy& policy) {
    const int s_count = mdp.num_states();
    const int a_count = mdp.num_actions();
    if (static_cast<int>(policy.action_probs.size()) != s_count ||
        static_cast<int>(policy.action_probs[0].size()) != a_count)
        throw DimensionMismatch("rationalizing_reward: policy does not match MDP dimensions");
    std::vector<std::vector<std::vector<Rational>>> three_index(
        s_count, std::vector<std::vector<Rational>>(a_count, std::vector<Rational>(s_count)));
    for (int s = 0; s < s_count; ++s)
        for (int a = 0; a < a_count; ++a) {
            Rational value = policy.action_probs[s][a] > 0 ? Rational(0) : Rational(-1);
            for (int next = 0; next < s_count; ++next) three_index[s][a][next] = value;
        }
    return marginalize_reward(mdp, three_index);
}

// All |A|^|S| deterministic policies, lexicographic by action tuple with the
// state-0 action most significant.
inline std::vector<StationaryPolicy> enumerate_deterministic_policies(
    const ValidatedMdp& mdp, std::uint64_t cap = 1000000) {
    const int s_count = mdp.num_states();
    const int a_count = mdp.num_actions();
    Int total = 1;
    for (int s = 0; s < s_count; ++s) total *= a_count;
    if (total > Int(cap))
        throw CapExceeded("enumerate_deterministic_policies: " + total.str() +
                          " policies exceed cap " + std::to_string(cap));
    std::vector<StationaryPolicy> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<int> actions(s_count, 0);
    for (;;) {
        out.push_back(StationaryPolicy::deterministic(actions, a_count));
        int s = s_count - 1;
        while (s >= 0 && actions[s] == a_count - 1) actions[s--] = 0;
        if (s < 0) break;
        ++actions[s];
    }
    return out;
}

}  // namespace hackability::core
