#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include "hackability/environments.hpp"
#include "hackability/witness_search.hpp"

using namespace hackability;
using core::Rational;
using core::RewardTable;

namespace {

RewardTable reward_0321() {
    return RewardTable::from_table({{Rational(0), Rational(3)}, {Rational(2), Rational(1)}});
}

RewardTable negated(const RewardTable& r) {
    RewardTable out = r;
    for (auto& v : out.values) v = -v;
    return out;
}

}  // namespace

TEST_CASE("optimal_return and eps-suboptimality on the worked reward") {
    auto mdp = envs::build_two_state();
    auto r = reward_0321();
    CHECK(search::optimal_return(mdp, r) == Rational(5));

    auto worst = core::StationaryPolicy::deterministic({0, 0}, 2);  // J = 1
    CHECK_FALSE(search::is_eps_suboptimal(mdp, r, worst, Rational(1)));
    CHECK(search::is_eps_suboptimal(mdp, r, worst, Rational(5)));
    CHECK_THROWS_AS(search::is_eps_suboptimal(mdp, r, worst, Rational(0)), ParseError);
    CHECK_THROWS_AS(search::is_eps_suboptimal(mdp, r, worst, Rational(-1)), ParseError);
}

TEST_CASE("delta-determinism thresholds on max action probability") {
    auto det = core::StationaryPolicy::deterministic({0, 1}, 2);
    auto uniform = core::StationaryPolicy::from_rows(
        {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}});
    CHECK(search::is_delta_deterministic(det, Rational(99, 100)));
    CHECK(search::is_delta_deterministic(uniform, Rational(1, 2)));
    CHECK_FALSE(search::is_delta_deterministic(uniform, Rational(3, 5)));
    CHECK(search::is_delta_deterministic(uniform, Rational(0)));
    CHECK_THROWS_AS(search::is_delta_deterministic(det, Rational(1)), ParseError);
    CHECK_THROWS_AS(search::is_delta_deterministic(det, Rational(-1, 2)), ParseError);
    CHECK_THROWS_AS(search::PolicyFilter::eps_suboptimal(Rational(0), reward_0321()), ParseError);
    CHECK_THROWS_AS(search::PolicyFilter::delta_deterministic(Rational(1)), ParseError);
}

TEST_CASE("sample_policies returns valid policies that pass the public filter") {
    auto mdp = envs::build_two_state();
    search::SearchBudget budget{200, 0, 7};

    SECTION("eps filter") {
        auto filter = search::PolicyFilter::eps_suboptimal(Rational(2), reward_0321());
        auto sampled = search::sample_policies(mdp, filter, budget);
        REQUIRE(sampled.size() == 200);
        for (const auto& policy : sampled) {
            CHECK(search::is_eps_suboptimal(mdp, reward_0321(), policy, Rational(2)));
            for (const auto& row : policy.action_probs) {
                Rational total(0);
                for (const auto& p : row) {
                    total += p;
                    CHECK(boost::multiprecision::denominator(p) <= 1000);
                }
                CHECK(total == Rational(1));
            }
        }
    }
    SECTION("delta filter") {
        auto filter = search::PolicyFilter::delta_deterministic(Rational(3, 4));
        for (const auto& policy : search::sample_policies(mdp, filter, budget))
            CHECK(search::is_delta_deterministic(policy, Rational(3, 4)));
    }
    SECTION("three-action denominators stay within bounds") {
        auto wide = envs::build_random_mdp(3, 3, 7);
        for (const auto& policy :
             search::sample_policies(wide, search::PolicyFilter::all(), {64, 0, 7}))
            for (const auto& row : policy.action_probs)
                for (const auto& p : row) CHECK(boost::multiprecision::denominator(p) <= 1000);
    }
    SECTION("an unreachable eps region exhausts the attempt budget") {
        auto filter =
            search::PolicyFilter::eps_suboptimal(Rational(1, 1000000000), reward_0321());
        CHECK_THROWS_AS(search::sample_policies(mdp, filter, budget), FilterTooTight);
        CHECK_THROWS_AS(
            search::search_hackability_witness(mdp, reward_0321(), negated(reward_0321()),
                                               filter, budget),
            FilterTooTight);
    }
}

TEST_CASE("larger budgets extend smaller ones") {
    auto mdp = envs::build_two_state();
    auto filter = search::PolicyFilter::all();
    auto small = search::sample_policies(mdp, filter, {50, 0, 11});
    auto large = search::sample_policies(mdp, filter, {200, 0, 11});
    REQUIRE(large.size() == 200);
    for (std::size_t i = 0; i < small.size(); ++i)
        CHECK(small[i].action_probs == large[i].action_probs);

    auto r1 = reward_0321();
    auto r2 = negated(r1);
    auto w_small = search::search_hackability_witness(mdp, r1, r2, filter, {64, 0, 11});
    auto w_large = search::search_hackability_witness(mdp, r1, r2, filter, {400, 0, 11});
    REQUIRE(w_small.has_value());
    REQUIRE(w_large.has_value());

    // Budgets past the first block boundary replay it exactly.
    auto w6 = search::search_hackability_witness(mdp, r1, r2, filter, {600, 100, 11});
    auto w9 = search::search_hackability_witness(mdp, r1, r2, filter, {900, 100, 11});
    REQUIRE(w6.has_value());
    REQUIRE(w9.has_value());
    CHECK(w6->pi.action_probs == w9->pi.action_probs);
    CHECK(w6->pi_prime.action_probs == w9->pi_prime.action_probs);
    CHECK(w6->j1_pi == w9->j1_pi);
}

TEST_CASE("witnesses are exact and respect the filter") {
    auto mdp = envs::build_two_state();
    auto r1 = reward_0321();
    auto r2 = negated(r1);
    auto filter = search::PolicyFilter::eps_suboptimal(Rational(2), r1);
    auto witness = search::search_hackability_witness(mdp, r1, r2, filter, {256, 50, 3});
    REQUIRE(witness.has_value());

    CHECK(witness->j1_pi == core::policy_return(mdp, witness->pi, r1));
    CHECK(witness->j1_pi_prime == core::policy_return(mdp, witness->pi_prime, r1));
    CHECK(witness->j2_pi == core::policy_return(mdp, witness->pi, r2));
    CHECK(witness->j2_pi_prime == core::policy_return(mdp, witness->pi_prime, r2));
    CHECK(witness->j1_pi < witness->j1_pi_prime);
    CHECK(witness->j2_pi > witness->j2_pi_prime);
    CHECK(search::is_eps_suboptimal(mdp, r1, witness->pi, Rational(2)));
    CHECK(search::is_eps_suboptimal(mdp, r1, witness->pi_prime, Rational(2)));
}

TEST_CASE("identical rewards never produce a witness") {
    auto mdp = envs::build_two_state();
    auto r = reward_0321();
    auto witness =
        search::search_hackability_witness(mdp, r, r, search::PolicyFilter::all(), {128, 200, 5});
    CHECK_FALSE(witness.has_value());
}

TEST_CASE("equivalence_probe separates reshaped from inverted rewards") {
    auto mdp = envs::build_two_state();
    auto r1 = reward_0321();
    auto filter = search::PolicyFilter::all();
    search::SearchBudget budget{128, 50, 9};

    SECTION("positive scaling is equivalent") {
        RewardTable scaled = r1;
        for (auto& v : scaled.values) v *= 2;
        auto report = search::equivalence_probe(mdp, r1, scaled, filter, budget);
        CHECK_FALSE(report.witness.has_value());
        CHECK(report.orderings_agree_on_sample);
        CHECK(report.budget.num_samples == 128);
    }
    SECTION("return-invariant shaping is equivalent") {
        core::PotentialFunction phi{{Rational(1), Rational(-1)}};
        auto shaped = core::shape_reward(mdp, r1, phi);
        REQUIRE(shaped.invariance_holds);
        auto report = search::equivalence_probe(mdp, r1, shaped.reward, filter, budget);
        CHECK_FALSE(report.witness.has_value());
        CHECK(report.orderings_agree_on_sample);
    }
    SECTION("negation is caught immediately") {
        auto report = search::equivalence_probe(mdp, r1, negated(r1), filter, budget);
        REQUIRE(report.witness.has_value());
        CHECK_FALSE(report.orderings_agree_on_sample);
    }
}
