#include <catch2/catch_amalgamated.hpp>

#include "hackability/environments.hpp"
#include "hackability/ordering.hpp"

using namespace hackability;
using core::Rational;

namespace {

bool same_spec(const core::MdpSpec& a, const core::MdpSpec& b) {
    return a.num_states == b.num_states && a.num_actions == b.num_actions &&
           a.discount == b.discount && a.initial == b.initial && a.transition == b.transition;
}

}  // namespace

TEST_CASE("build_two_state matches its documented dynamics") {
    auto mdp = envs::build_two_state();
    CHECK(mdp.num_states() == 2);
    CHECK(mdp.num_actions() == 2);
    CHECK(mdp.discount() == Rational(1, 2));
    CHECK(mdp.spec().initial == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            for (int next = 0; next < 2; ++next)
                CHECK(mdp.spec().transition[s][a][next] == Rational(next == a ? 1 : 0));
}

TEST_CASE("cleaning bandit returns equal the subset sums") {
    envs::CleaningSpec cspec{{Rational(1), Rational(2), Rational(3)},
                             {Rational(1), Rational(2), Rational(3)}};
    auto bandit = envs::build_cleaning_bandit(cspec);

    REQUIRE(bandit.policies.size() == 8);
    CHECK(bandit.policy_names[0] == "{}");
    CHECK(bandit.policy_names[0b101] == "{0,2}");
    CHECK(bandit.policy_names[0b111] == "{0,1,2}");

    auto j_true = [&](std::uint64_t mask) {
        return core::policy_return(bandit.reward_true,
                                   core::occupancy(bandit.mdp, bandit.policies[mask]));
    };
    CHECK(j_true(0b000) == Rational(0));
    CHECK(j_true(0b101) == Rational(4));
    CHECK(j_true(0b111) == Rational(6));
    // The occupancy route and the direct table lookup agree on every subset.
    for (std::uint64_t mask = 0; mask < 8; ++mask)
        CHECK(j_true(mask) == bandit.reward_true.at(0, static_cast<int>(mask)));

    SECTION("adding rooms never lowers the true return") {
        for (std::uint64_t sub = 0; sub < 8; ++sub)
            for (std::uint64_t sup = 0; sup < 8; ++sup)
                if ((sub & sup) == sub)
                    CHECK(bandit.reward_true.at(0, static_cast<int>(sub)) <=
                          bandit.reward_true.at(0, static_cast<int>(sup)));
    }
}

TEST_CASE("true and proxy rewards come from their own room values") {
    envs::CleaningSpec cspec{{Rational(1), Rational(2), Rational(3)},
                             {Rational(1), Rational(0), Rational(3)}};
    auto bandit = envs::build_cleaning_bandit(cspec);
    CHECK(bandit.reward_true.at(0, 0b010) == Rational(2));
    CHECK(bandit.reward_proxy.at(0, 0b010) == Rational(0));
    CHECK(bandit.reward_proxy.at(0, 0b101) == Rational(4));
    CHECK(bandit.reward_proxy.at(0, 0b111) == Rational(4));
}

TEST_CASE("pairwise inversion scan agrees with the ordering-level check") {
    std::vector<envs::CleaningSpec> specs = {
        {{Rational(1), Rational(1), Rational(1)}, {Rational(1), Rational(1), Rational(0)}},
        {{Rational(1), Rational(1), Rational(1)}, {Rational(1), Rational(0), Rational(0)}},
        {{Rational(1), Rational(3, 2), Rational(2)}, {Rational(1), Rational(1), Rational(1)}},
        {{Rational(1), Rational(3, 2), Rational(3)}, {Rational(1), Rational(1), Rational(1)}},
        {{Rational(5), Rational(1)}, {Rational(0), Rational(2)}},
        {{Rational(1), Rational(4), Rational(2), Rational(3)},
         {Rational(1), Rational(4), Rational(2), Rational(3)}},
    };
    for (const auto& cspec : specs) {
        auto bandit = envs::build_cleaning_bandit(cspec);
        auto pset = ordering::PolicySet::make(bandit.mdp, bandit.policies, bandit.policy_names);
        auto o_true = ordering::ordering_from_reward(bandit.reward_true, pset);
        auto o_proxy = ordering::ordering_from_reward(bandit.reward_proxy, pset);
        auto scan = envs::cleaning_hackability_condition(cspec);
        auto witness = ordering::check_hackable(o_true, o_proxy);
        CHECK(scan.has_value() == witness.has_value());
        if (scan) {
            CHECK(bandit.reward_proxy.at(0, static_cast<int>(scan->s1)) >
                  bandit.reward_proxy.at(0, static_cast<int>(scan->s2)));
            CHECK(bandit.reward_true.at(0, static_cast<int>(scan->s1)) <
                  bandit.reward_true.at(0, static_cast<int>(scan->s2)));
        }
    }
}

TEST_CASE("dropping one room from the proxy is safe only with equal stakes") {
    envs::CleaningSpec uneven{{Rational(1), Rational(2), Rational(3)},
                              {Rational(1), Rational(0), Rational(3)}};
    auto scan = envs::cleaning_hackability_condition(uneven);
    REQUIRE(scan.has_value());

    envs::CleaningSpec even{{Rational(1), Rational(1), Rational(1)},
                            {Rational(1), Rational(1), Rational(0)}};
    CHECK_FALSE(envs::cleaning_hackability_condition(even).has_value());
}

TEST_CASE("cleaning bandit rejects bad specs") {
    CHECK_THROWS_AS(envs::build_cleaning_bandit({{}, {}}), ParseError);
    CHECK_THROWS_AS(envs::build_cleaning_bandit({{Rational(1)}, {Rational(1), Rational(1)}}),
                    DimensionMismatch);
    CHECK_THROWS_AS(envs::build_cleaning_bandit({{Rational(-1)}, {Rational(1)}}), ParseError);
    CHECK_THROWS_AS(envs::build_cleaning_bandit({{Rational(1)}, {Rational(-1)}}), ParseError);
    envs::CleaningSpec wide{std::vector<Rational>(13, Rational(1)),
                            std::vector<Rational>(13, Rational(1))};
    CHECK_THROWS_AS(envs::build_cleaning_bandit(wide), CapExceeded);
    envs::CleaningSpec three{std::vector<Rational>(3, Rational(1)),
                             std::vector<Rational>(3, Rational(1))};
    CHECK_THROWS_AS(envs::build_cleaning_bandit(three, 2), CapExceeded);
}

TEST_CASE("build_random_mdp is deterministic and always valid") {
    auto a = envs::build_random_mdp(4, 3, 20260814);
    auto b = envs::build_random_mdp(4, 3, 20260814);
    CHECK(same_spec(a.spec(), b.spec()));
    auto c = envs::build_random_mdp(4, 3, 20260815);
    CHECK_FALSE(same_spec(a.spec(), c.spec()));

    const std::vector<std::pair<int, int>> sizes = {{1, 2}, {2, 2}, {3, 3}, {5, 4}, {8, 3}};
    for (std::uint64_t seed = 1; seed <= 8; ++seed)
        for (auto [s_count, a_count] : sizes) {
            auto m = envs::build_random_mdp(s_count, a_count, seed);
            CHECK(core::mdp_violations(m.spec()).empty());
            bool known = m.discount() == Rational(1, 2) || m.discount() == Rational(3, 4) ||
                         m.discount() == Rational(9, 10);
            CHECK(known);
        }

    CHECK_THROWS_AS(envs::build_random_mdp(0, 2, 1), DimensionMismatch);
    CHECK_THROWS_AS(envs::build_random_mdp(2, 1, 1), DimensionMismatch);
    CHECK_THROWS_AS(envs::build_random_mdp(2, 2, 1, Rational(0)), ParseError);
    CHECK_THROWS_AS(envs::build_random_mdp(2, 2, 1, Rational(9, 8)), ParseError);
}

TEST_CASE("sparse random MDPs stay fully reachable") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        auto m = envs::build_random_mdp(6, 2, seed, Rational(1, 4));
        CHECK(core::mdp_violations(m.spec()).empty());
    }
}

TEST_CASE("hallway clamps at both ends") {
    auto hall = envs::build_hallway(4);
    CHECK(hall.num_states() == 4);
    CHECK(hall.num_actions() == 2);
    CHECK(hall.discount() == Rational(1, 2));
    for (int s = 0; s < 4; ++s) CHECK(hall.spec().initial[s] == Rational(1, 4));
    CHECK(hall.spec().transition[0][0][0] == Rational(1));
    CHECK(hall.spec().transition[3][1][3] == Rational(1));
    CHECK(hall.spec().transition[1][0][0] == Rational(1));
    CHECK(hall.spec().transition[1][1][2] == Rational(1));
    CHECK(hall.spec().transition[2][0][1] == Rational(1));
    CHECK_THROWS_AS(envs::build_hallway(1), DimensionMismatch);
}
