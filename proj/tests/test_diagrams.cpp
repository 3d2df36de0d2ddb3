#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "hackability/diagrams.hpp"
#include "hackability/representability.hpp"
#include "hackability/rng.hpp"

using namespace hackability;
using core::Rational;

namespace {

// One state, three actions, each action is an arm. Every ordering of the
// three arm policies is realizable by some reward, so the diagram over all
// thirteen weak orders is fully populated.
core::ValidatedMdp build_three_armed_bandit() {
    core::MdpSpec spec;
    spec.num_states = 1;
    spec.num_actions = 3;
    spec.discount = Rational(1, 2);
    spec.initial = {Rational(1)};
    spec.transition = {{{Rational(1)}, {Rational(1)}, {Rational(1)}}};
    return core::validate_mdp(spec);
}

ordering::PolicySet bandit_set() {
    auto mdp = build_three_armed_bandit();
    std::vector<core::StationaryPolicy> arms;
    for (int a = 0; a < 3; ++a) arms.push_back(core::StationaryPolicy::deterministic({a}, 3));
    return ordering::PolicySet::make(mdp, arms);
}

// Independent inversion scan, written against the class lists directly.
bool inverted_somewhere(const ordering::PolicyOrdering& a, const ordering::PolicyOrdering& b) {
    auto rank_of = [](const ordering::PolicyOrdering& o, int policy) {
        for (std::size_t c = 0; c < o.classes.size(); ++c)
            for (int member : o.classes[c])
                if (member == policy) return static_cast<int>(c);
        return -1;
    };
    for (int i = 0; i < a.num_policies; ++i)
        for (int j = 0; j < a.num_policies; ++j)
            if (rank_of(a, i) < rank_of(a, j) && rank_of(b, i) > rank_of(b, j)) return true;
    return false;
}

}  // namespace

TEST_CASE("three-armed bandit populates the full diagram") {
    auto pset = bandit_set();
    auto representable = repr::enumerate_representable_orderings(pset);
    REQUIRE(representable.size() == 13);  // every weak order on three arms

    std::vector<ordering::PolicyOrdering> orderings;
    for (const auto& ro : representable) orderings.push_back(ro.ordering);

    auto graph = diagrams::build_unhackability_graph(orderings);
    REQUIRE(graph.nodes.size() == 13);

    std::size_t oracle_edges = 0;
    int trivial_index = -1;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (ordering::is_trivial(graph.nodes[i])) trivial_index = static_cast<int>(i);
        for (std::size_t j = i + 1; j < graph.nodes.size(); ++j) {
            const bool edge = graph.undirected_edges.count(
                {static_cast<int>(i), static_cast<int>(j)}) > 0;
            CHECK(edge == !inverted_somewhere(graph.nodes[i], graph.nodes[j]));
            if (!inverted_somewhere(graph.nodes[i], graph.nodes[j])) ++oracle_edges;
        }
    }
    CHECK(graph.undirected_edges.size() == oracle_edges);
    CHECK(graph.undirected_edges.size() == 30);

    SECTION("the trivial ordering touches every other node") {
        REQUIRE(trivial_index >= 0);
        int degree = 0;
        for (const auto& [i, j] : graph.undirected_edges)
            if (i == trivial_index || j == trivial_index) ++degree;
        CHECK(degree == 12);
    }
    SECTION("opposite strict orders are not adjacent") {
        auto up = ordering::PolicyOrdering::from_classes({{0}, {1}, {2}}, 3);
        auto down = ordering::PolicyOrdering::from_classes({{2}, {1}, {0}}, 3);
        int up_idx = -1, down_idx = -1;
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            if (graph.nodes[i].classes == up.classes) up_idx = static_cast<int>(i);
            if (graph.nodes[i].classes == down.classes) down_idx = static_cast<int>(i);
        }
        REQUIRE(up_idx >= 0);
        REQUIRE(down_idx >= 0);
        CHECK_FALSE(graph.undirected_edges.count(
            {std::min(up_idx, down_idx), std::max(up_idx, down_idx)}));
    }

    auto digraph = diagrams::build_simplification_digraph(orderings);
    CHECK(digraph.directed_edges.size() == 24);  // 3 per strict order, 1 per tied pair
    for (const auto& [tail, head] : digraph.directed_edges) {
        CHECK(digraph.nodes[head].num_classes() < digraph.nodes[tail].num_classes());
        CHECK(digraph.undirected_edges.count({std::min(tail, head), std::max(tail, head)}) == 1);
    }
}

TEST_CASE("simplification edges follow merges, not refinements") {
    auto strict = ordering::PolicyOrdering::from_classes({{0}, {1}, {2}}, 3);
    auto merged = ordering::PolicyOrdering::from_classes({{0, 1}, {2}}, 3);
    auto graph = diagrams::build_simplification_digraph({strict, merged});
    REQUIRE(graph.nodes.size() == 2);
    int strict_idx = graph.nodes[0].classes == strict.classes ? 0 : 1;
    int merged_idx = 1 - strict_idx;
    CHECK(graph.directed_edges.count({strict_idx, merged_idx}) == 1);
    CHECK(graph.directed_edges.count({merged_idx, strict_idx}) == 0);
}

TEST_CASE("digraph edges always project into the unhackability graph") {
    core::DetRng rng(17);
    auto orders = ordering::enumerate_weak_orders(4);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<ordering::PolicyOrdering> sample;
        for (int k = 0; k < 6; ++k) sample.push_back(orders[rng.below(orders.size())]);
        auto graph = diagrams::build_simplification_digraph(sample);
        for (const auto& [tail, head] : graph.directed_edges)
            CHECK(graph.undirected_edges.count({std::min(tail, head), std::max(tail, head)}) == 1);
    }
}

TEST_CASE("labels use policy names when available") {
    auto o = ordering::PolicyOrdering::from_classes({{0, 2}, {1}}, 3);
    CHECK(diagrams::ordering_label(o) == "0=2<1");
    CHECK(diagrams::ordering_label(o, {"x", "y", "z"}) == "x=z<y");
}

TEST_CASE("emission is deterministic and structured") {
    auto pset = bandit_set();
    std::vector<ordering::PolicyOrdering> orderings;
    for (const auto& ro : repr::enumerate_representable_orderings(pset))
        orderings.push_back(ro.ordering);
    auto graph = diagrams::build_simplification_digraph(orderings, {"a", "b", "c"});

    auto dot1 = diagrams::emit_graph(graph, "dot");
    auto dot2 = diagrams::emit_graph(graph, "dot");
    CHECK(dot1 == dot2);
    CHECK(dot1.rfind("digraph simplification {", 0) == 0);
    std::size_t labels = 0;
    for (std::size_t at = dot1.find("label="); at != std::string::npos;
         at = dot1.find("label=", at + 1))
        ++labels;
    CHECK(labels == 13);

    auto json1 = diagrams::emit_graph(graph, "json");
    CHECK(json1 == diagrams::emit_graph(graph, "json"));
    auto doc = nlohmann::json::parse(json1);
    CHECK(doc["nodes"].size() == 13);
    CHECK(doc["undirected_edges"].size() == 30);
    CHECK(doc["directed_edges"].size() == 24);
    CHECK(doc["nodes"][0]["label"].is_string());

    auto undirected = diagrams::build_unhackability_graph(orderings);
    CHECK(diagrams::emit_graph(undirected, "dot").rfind("graph unhackability {", 0) == 0);

    CHECK_THROWS_AS(diagrams::emit_graph(graph, "svg"), UnknownFormat);
}

TEST_CASE("degenerate graphs are still valid") {
    auto empty = diagrams::build_unhackability_graph({});
    CHECK(empty.nodes.empty());
    CHECK(diagrams::emit_graph(empty, "dot") == "graph unhackability {\n}\n");

    auto solo = diagrams::build_simplification_digraph(
        {ordering::PolicyOrdering::from_classes({{0, 1}}, 2)});
    CHECK(solo.nodes.size() == 1);
    CHECK(solo.directed_edges.empty());
    auto doc = nlohmann::json::parse(diagrams::emit_graph(solo, "json"));
    CHECK(doc["nodes"].size() == 1);
}
