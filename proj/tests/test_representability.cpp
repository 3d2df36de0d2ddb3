#include <catch2/catch_amalgamated.hpp>

#include "hackability/environments.hpp"
#include "hackability/representability.hpp"
#include "hackability/rng.hpp"

using namespace hackability;
using core::Rational;
using core::RewardTable;
using ordering::PolicyOrdering;

namespace {

ordering::PolicySet two_state_set() {
    auto mdp = envs::build_two_state();
    return ordering::PolicySet::make(mdp, core::enumerate_deterministic_policies(mdp));
}

RewardTable reward_0321() {
    return RewardTable::from_table({{Rational(0), Rational(3)}, {Rational(2), Rational(1)}});
}

RewardTable random_reward(core::DetRng& rng, int s, int a) {
    RewardTable r = RewardTable::zero(s, a);
    for (auto& v : r.values)
        v = Rational(rng.range(-12, 12), static_cast<long long>(rng.range(1, 4)));
    return r;
}

}  // namespace

TEST_CASE("check_representable separates realizable from unrealizable orderings") {
    auto pset = two_state_set();

    SECTION("the worked strict ordering has a witness that round-trips") {
        auto o = PolicyOrdering::from_classes({{0}, {1}, {3}, {2}}, 4);
        auto rr = repr::check_representable(pset, o);
        REQUIRE(rr.representable);
        REQUIRE(rr.witness.has_value());
        CHECK(ordering::ordering_from_reward(*rr.witness, pset).classes == o.classes);
        CHECK_FALSE(rr.certificate.has_value());
    }
    SECTION("the worked tied ordering is realizable (it comes from a reward)") {
        auto o = ordering::ordering_from_reward(reward_0321(), pset);
        auto rr = repr::check_representable(pset, o);
        REQUIRE(rr.representable);
        CHECK(ordering::ordering_from_reward(*rr.witness, pset).classes == o.classes);
    }
    SECTION("equating the middle pair of the worked ordering is unrealizable") {
        auto o = PolicyOrdering::from_classes({{0}, {1, 3}, {2}}, 4);
        auto rr = repr::check_representable(pset, o);
        REQUIRE_FALSE(rr.representable);
        CHECK_FALSE(rr.witness.has_value());
        REQUIRE(rr.certificate.has_value());
        CHECK(repr::verify_certificate(pset, o, *rr.certificate));

        auto tampered = *rr.certificate;
        for (auto& l : tampered.strict_coeffs) l = 0;
        CHECK_FALSE(repr::verify_certificate(pset, o, tampered));
    }
    SECTION("the trivial ordering is always representable") {
        auto o = PolicyOrdering::from_classes({{0, 1, 2, 3}}, 4);
        auto rr = repr::check_representable(pset, o);
        REQUIRE(rr.representable);
        CHECK(*rr.witness == RewardTable::zero(2, 2));
    }
}

TEST_CASE("ordering is invariant under positive scaling and valid shaping") {
    auto mdp = envs::build_two_state();
    auto pset = two_state_set();
    core::DetRng rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        auto r = random_reward(rng, 2, 2);
        auto o = ordering::ordering_from_reward(r, pset);

        RewardTable doubled = r;
        for (auto& v : doubled.values) v *= Rational(7, 3);
        CHECK(ordering::ordering_from_reward(doubled, pset).classes == o.classes);

        core::PotentialFunction phi{{Rational(rng.range(-4, 4)), Rational(0)}};
        phi.phi[1] = -phi.phi[0];  // E_I[phi] = 0 under the uniform start
        auto shaped = core::shape_reward(mdp, r, phi);
        REQUIRE(shaped.invariance_holds);
        CHECK(ordering::ordering_from_reward(shaped.reward, pset).classes == o.classes);

        auto mirrored = repr::reward_negation_duality(o);
        RewardTable negated = r;
        for (auto& v : negated.values) v = -v;
        CHECK(ordering::ordering_from_reward(negated, pset).classes == mirrored.classes);
    }
}

TEST_CASE("simplification existence follows the rank test on the two-state set") {
    auto pset = two_state_set();

    SECTION("strict orderings leave room to merge") {
        auto ex = repr::simplification_exists(
            pset, PolicyOrdering::from_classes({{0}, {1}, {3}, {2}}, 4));
        CHECK(ex.exists);
        CHECK(ex.dim_z == 0);
        CHECK(ex.dim_f == 2);  // occupancy differences span a plane
        CHECK(ex.partition_sizes == std::vector<int>{1, 1, 1, 1});
    }
    SECTION("the worked tied ordering admits no further simplification") {
        auto o = ordering::ordering_from_reward(reward_0321(), pset);
        auto ex = repr::simplification_exists(pset, o, true);
        CHECK_FALSE(ex.exists);
        CHECK(ex.dim_z == 1);
        CHECK(ex.dim_f == 2);
        CHECK(repr::find_representable_simplifications(pset, o).empty());
    }
    SECTION("existence agrees with the explicit search on every weak order") {
        for (const auto& o : ordering::enumerate_weak_orders(4)) {
            auto rr = repr::check_representable(pset, o);
            if (!rr.representable) {
                CHECK_THROWS_AS(repr::simplification_exists(pset, o), NotRepresentable);
                continue;
            }
            auto ex = repr::simplification_exists(pset, o, true);
            auto sims = repr::find_representable_simplifications(pset, o);
            CHECK(ex.exists == !sims.empty());
            for (const auto& s : sims)
                CHECK(ordering::check_simplification(o, s.ordering) ==
                      ordering::SimplificationVerdict::simplification);
        }
    }
}

TEST_CASE("enumerate_representable_orderings matches the planar counts") {
    auto pset = two_state_set();
    auto strict = repr::enumerate_representable_orderings(pset, true);
    CHECK(strict.size() == 12);
    auto all = repr::enumerate_representable_orderings(pset, false);
    CHECK(all.size() == 25);  // 12 strict + 12 single-tie + trivial
    for (const auto& ro : all)
        CHECK(ordering::ordering_from_reward(ro.witness, pset).classes == ro.ordering.classes);
    CHECK_THROWS_AS(repr::enumerate_representable_orderings(pset, true, 10), CapExceeded);
}

TEST_CASE("find_unhackable_noneq returns a verified partner ordering") {
    auto mdp = envs::build_two_state();
    auto pset = two_state_set();

    SECTION("worked reward") {
        auto pair = repr::find_unhackable_noneq(pset, reward_0321());
        auto o1 = ordering::ordering_from_reward(reward_0321(), pset);
        CHECK_FALSE(ordering::is_trivial(pair.ordering));
        CHECK_FALSE(ordering::is_equivalent(o1, pair.ordering));
        CHECK_FALSE(ordering::check_hackable(o1, pair.ordering).has_value());
        CHECK(ordering::ordering_from_reward(pair.reward, pset).classes == pair.ordering.classes);
        // Deterministic search order: both coarsenings of the worked ordering
        // are unrealizable, so the scan settles on the first compatible
        // refinement instead.
        CHECK(pair.ordering.classes == std::vector<std::vector<int>>{{0}, {1}, {3}, {2}});
    }
    SECTION("a trivial input ordering still gets a non-trivial partner") {
        auto pair = repr::find_unhackable_noneq(pset, RewardTable::zero(2, 2));
        CHECK_FALSE(ordering::is_trivial(pair.ordering));
    }
    SECTION("identical occupancies leave nothing to order") {
        auto d00 = core::StationaryPolicy::deterministic({0, 0}, 2);
        auto same = ordering::PolicySet::make(mdp, {d00, d00});
        CHECK_THROWS_AS(repr::find_unhackable_noneq(same, RewardTable::zero(2, 2)),
                        NoDistinctOccupancies);
    }
    SECTION("two policies admit no unhackable non-equivalent partner") {
        auto d00 = core::StationaryPolicy::deterministic({0, 0}, 2);
        auto d01 = core::StationaryPolicy::deterministic({0, 1}, 2);
        auto duo = ordering::PolicySet::make(mdp, {d00, d01});
        auto r = RewardTable::from_table({{Rational(1), Rational(0)}, {Rational(0), Rational(0)}});
        CHECK_THROWS_AS(repr::find_unhackable_noneq(duo, r), SearchExhausted);
    }
}
