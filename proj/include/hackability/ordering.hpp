#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hackability/errors.hpp"
#include "hackability/mdp.hpp"

namespace hackability::ordering {

// A finite policy set with occupancies computed once up front. Optional names
// feed reports and diagram labels.
struct PolicySet {
    std::vector<core::StationaryPolicy> policies;
    std::vector<core::OccupancyVector> occupancies;
    std::vector<std::string> names;  // empty, or one per policy

    int size() const { return static_cast<int>(policies.size()); }

    static PolicySet make(const core::ValidatedMdp& mdp,
                          std::vector<core::StationaryPolicy> policies,
                          std::vector<std::string> names = {}) {
        if (policies.empty()) throw DimensionMismatch("policy set must be nonempty");
        if (!names.empty() && names.size() != policies.size())
            throw DimensionMismatch("policy set: names do not match policies");
        PolicySet pset;
        pset.occupancies.reserve(policies.size());
        for (const auto& p : policies) pset.occupancies.push_back(core::occupancy(mdp, p));
        pset.policies = std::move(policies);
        pset.names = std::move(names);
        return pset;
    }
};

// A total preorder over a policy set, stored as ordered equivalence classes:
// classes[0] is the lowest-value class; indices ascend within each class.
struct PolicyOrdering {
    std::vector<std::vector<int>> classes;
    int num_policies = 0;
    std::optional<core::RewardTable> source;              // reward it was derived from
    std::optional<std::vector<core::Rational>> values;    // J per policy, if derived

    int num_classes() const { return static_cast<int>(classes.size()); }

    bool operator==(const PolicyOrdering& other) const {
        return num_policies == other.num_policies && classes == other.classes;
    }
    bool operator<(const PolicyOrdering& other) const { return classes < other.classes; }

    // classes must partition {0..n-1}; members are sorted here.
    static PolicyOrdering from_classes(std::vector<std::vector<int>> classes, int n) {
        std::vector<char> seen(n, 0);
        int covered = 0;
        for (auto& cls : classes) {
            if (cls.empty()) throw ParseError("ordering: empty class");
            std::sort(cls.begin(), cls.end());
            for (int idx : cls) {
                if (idx < 0 || idx >= n || seen[idx])
                    throw ParseError("ordering: classes do not partition the policy set");
                seen[idx] = 1;
                ++covered;
            }
        }
        if (covered != n) throw ParseError("ordering: classes do not cover the policy set");
        PolicyOrdering o;
        o.classes = std::move(classes);
        o.num_policies = n;
        return o;
    }
};

// rank[i] = index of the class containing policy i.
inline std::vector<int> class_ranks(const PolicyOrdering& o) {
    std::vector<int> ranks(o.num_policies, -1);
    for (int c = 0; c < o.num_classes(); ++c)
        for (int idx : o.classes[c]) ranks[idx] = c;
    return ranks;
}

// Groups policies by exactly equal return, lowest value first.
inline PolicyOrdering ordering_from_reward(const core::RewardTable& reward,
                                           const PolicySet& pset) {
    std::vector<core::Rational> values;
    values.reserve(pset.policies.size());
    for (const auto& occ : pset.occupancies)
        values.push_back(core::policy_return(reward, occ));

    std::map<core::Rational, std::vector<int>> grouped;
    for (int i = 0; i < pset.size(); ++i) grouped[values[i]].push_back(i);

    PolicyOrdering o;
    o.num_policies = pset.size();
    for (auto& [value, members] : grouped) o.classes.push_back(std::move(members));
    o.source = reward;
    o.values = std::move(values);
    return o;
}

inline bool is_trivial(const PolicyOrdering& o) { return o.num_classes() == 1; }

inline void require_same_set(const PolicyOrdering& o1, const PolicyOrdering& o2,
                             const char* who) {
    if (o1.num_policies != o2.num_policies)
        throw SetMismatch(std::string(who) + ": orderings cover different policy sets");
}

inline bool is_equivalent(const PolicyOrdering& o1, const PolicyOrdering& o2) {
    require_same_set(o1, o2, "is_equivalent");
    return o1.classes == o2.classes;
}

// A pair ordered strictly oppositely by two reward functions:
// J1(pi) < J1(pi') and J2(pi) > J2(pi'). Value pairs are present when the
// orderings were derived from rewards.
struct HackabilityWitness {
    int pi_index = -1;
    int pi_prime_index = -1;
    std::optional<std::pair<core::Rational, core::Rational>> j1_pair;  // (J1(pi), J1(pi'))
    std::optional<std::pair<core::Rational, core::Rational>> j2_pair;  // (J2(pi), J2(pi'))
};

// First pair (in index order) the two orderings rank oppositely, or nullopt.
inline std::optional<HackabilityWitness> check_hackable(const PolicyOrdering& o1,
                                                        const PolicyOrdering& o2) {
    require_same_set(o1, o2, "check_hackable");
    const auto r1 = class_ranks(o1);
    const auto r2 = class_ranks(o2);
    const int n = o1.num_policies;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (r1[i] < r1[j] && r2[i] > r2[j]) {
                HackabilityWitness w;
                w.pi_index = i;
                w.pi_prime_index = j;
                if (o1.values) w.j1_pair = {{(*o1.values)[i], (*o1.values)[j]}};
                if (o2.values) w.j2_pair = {{(*o2.values)[i], (*o2.values)[j]}};
                return w;
            }
        }
    return std::nullopt;
}

enum class SimplificationVerdict { not_simplification, simplification, trivial_simplification };

// o2 simplifies o1 iff every o2-class is a union of consecutive o1-classes
// (order preserved) and o2 has strictly fewer classes; the single-class
// coarsening is reported separately as trivial.
inline SimplificationVerdict check_simplification(const PolicyOrdering& o1,
                                                  const PolicyOrdering& o2) {
    require_same_set(o1, o2, "check_simplification");
    const auto r1 = class_ranks(o1);
    const auto r2 = class_ranks(o2);
    std::vector<int> image(o1.num_classes(), -1);  // o1 class -> o2 class
    for (int i = 0; i < o1.num_policies; ++i) {
        int& slot = image[r1[i]];
        if (slot == -1) slot = r2[i];
        else if (slot != r2[i]) return SimplificationVerdict::not_simplification;
    }
    for (int c = 1; c < o1.num_classes(); ++c)
        if (image[c] < image[c - 1]) return SimplificationVerdict::not_simplification;
    if (o2.num_classes() >= o1.num_classes()) return SimplificationVerdict::not_simplification;
    return o2.num_classes() == 1 ? SimplificationVerdict::trivial_simplification
                                 : SimplificationVerdict::simplification;
}

// All 2^(m-1) - 1 proper merges of consecutive classes, ordered by merge mask.
// Bit b of the mask merges classes b and b+1.
inline std::vector<PolicyOrdering> enumerate_coarsenings(const PolicyOrdering& o1,
                                                         int max_classes_cap = 16) {
    const int m = o1.num_classes();
    if (m > max_classes_cap)
        throw CapExceeded("enumerate_coarsenings: " + std::to_string(m) +
                          " classes exceed cap " + std::to_string(max_classes_cap));
    std::vector<PolicyOrdering> out;
    if (m <= 1) return out;
    const std::uint32_t mask_end = 1u << (m - 1);
    out.reserve(mask_end - 1);
    for (std::uint32_t mask = 1; mask < mask_end; ++mask) {
        PolicyOrdering merged;
        merged.num_policies = o1.num_policies;
        merged.classes.push_back(o1.classes[0]);
        for (int c = 1; c < m; ++c) {
            if (mask & (1u << (c - 1))) {
                auto& last = merged.classes.back();
                last.insert(last.end(), o1.classes[c].begin(), o1.classes[c].end());
                std::sort(last.begin(), last.end());
            } else {
                merged.classes.push_back(o1.classes[c]);
            }
        }
        out.push_back(std::move(merged));
    }
    return out;
}

// Weak orders on n items = ordered set partitions.
inline core::Int fubini_number(int n) {
    std::vector<core::Int> fub(n + 1);
    std::vector<std::vector<core::Int>> choose(n + 1, std::vector<core::Int>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        choose[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
    }
    fub[0] = 1;
    for (int k = 1; k <= n; ++k) {
        core::Int total = 0;
        for (int first = 1; first <= k; ++first) total += choose[k][first] * fub[k - first];
        fub[k] = total;
    }
    return fub[n];
}

// Every ordered set partition of {0..n-1}, exactly once, in a fixed order:
// the lowest class is chosen as an ascending bitmask, then recurse.
inline std::vector<PolicyOrdering> enumerate_weak_orders(int n, std::uint64_t cap = 50000) {
    if (n < 1) throw DimensionMismatch("enumerate_weak_orders: n must be at least 1");
    if (n > 62 || fubini_number(n) > core::Int(cap))
        throw CapExceeded("enumerate_weak_orders: Fubini(" + std::to_string(n) +
                          ") exceeds cap " + std::to_string(cap));
    std::vector<PolicyOrdering> out;
    std::vector<std::vector<int>> classes;
    const std::uint64_t full = (1ull << n) - 1;

    auto bits_to_indices = [](std::uint64_t bits) {
        std::vector<int> idx;
        for (int b = 0; bits; ++b, bits >>= 1)
            if (bits & 1) idx.push_back(b);
        return idx;
    };

    auto rec = [&](auto&& self, std::uint64_t remaining) -> void {
        if (remaining == 0) {
            PolicyOrdering o;
            o.classes = classes;
            o.num_policies = n;
            out.push_back(std::move(o));
            return;
        }
        for (std::uint64_t sub = 1; sub <= remaining; ++sub) {
            if ((sub & remaining) != sub) continue;
            classes.push_back(bits_to_indices(sub));
            self(self, remaining & ~sub);
            classes.pop_back();
        }
    };
    rec(rec, full);
    return out;
}

}  // namespace hackability::ordering
