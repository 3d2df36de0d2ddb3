// Command-line surface for the hackability toolkit: generate environments,
// analyze reward pairs, enumerate representable orderings, test
// simplifications, emit diagrams, and run sampling probes.
//
// Exit codes: 0 = done / unhackable, 10 = hackable (witness found),
// 2 = input error, 3 = a cap or sampling budget was exhausted, 1 = internal.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <hackability/hackability.hpp>

namespace {

using namespace hackability;
using io::json;

struct Caps {
    std::uint64_t policy_enum = 1000000;
    std::uint64_t weak_orders = 50000;
    std::uint64_t lp_pivots = 200000;

    static Caps from_flag(std::uint64_t cap) {
        Caps c;
        if (cap > 0) c = Caps{cap, cap, cap};
        return c;
    }
};

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(0..n-1) across worker threads. Callers index into pre-sized output
// vectors, so the merge is deterministic regardless of scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::min<std::size_t>(std::max(jobs, 1), n == 0 ? 1 : n);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex failure_lock;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(failure_lock);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto& worker : pool) worker.join();
    if (failure) std::rethrow_exception(failure);
}

core::ValidatedMdp load_mdp(const std::string& path) {
    return core::validate_mdp(io::mdp_from_json(io::read_json_file(path)));
}

core::RewardTable load_reward(const std::string& path, const core::ValidatedMdp& mdp) {
    auto reward = io::reward_from_json(io::read_json_file(path));
    if (reward.num_states != mdp.num_states() || reward.num_actions != mdp.num_actions())
        throw DimensionMismatch("reward file '" + path + "' is " +
                                std::to_string(reward.num_states) + "x" +
                                std::to_string(reward.num_actions) + " but the MDP is " +
                                std::to_string(mdp.num_states()) + "x" +
                                std::to_string(mdp.num_actions()));
    return reward;
}

std::string subset_label(std::uint64_t mask, int rooms) {
    std::string out = "{";
    bool first = true;
    for (int r = 0; r < rooms; ++r)
        if (mask >> r & 1) {
            if (!first) out += ",";
            out += std::to_string(r);
            first = false;
        }
    return out + "}";
}

// policyset_spec: "deterministic" enumerates every deterministic policy,
// "subset-bandit" takes one policy per action of a two-state bandit, and
// anything else is read as a policy file path.
ordering::PolicySet build_policy_set(const core::ValidatedMdp& mdp, const std::string& spec,
                                     const Caps& caps) {
    std::vector<core::StationaryPolicy> policies;
    std::vector<std::string> names;
    if (spec == "deterministic") {
        policies = core::enumerate_deterministic_policies(mdp, caps.policy_enum);
        const bool compact = mdp.num_actions() <= 10;
        for (std::size_t i = 0; i < policies.size(); ++i) {
            if (compact) {
                std::string name = "d";
                for (const auto& row : policies[i].action_probs) {
                    int act = 0;
                    while (row[act] == 0) ++act;
                    name += std::to_string(act);
                }
                names.push_back(std::move(name));
            } else {
                names.push_back("p" + std::to_string(i));
            }
        }
    } else if (spec == "subset-bandit") {
        if (mdp.num_states() != 2)
            throw ParseError("policyset 'subset-bandit' requires a two-state bandit MDP");
        int rooms = 0;
        while ((1 << rooms) < mdp.num_actions()) ++rooms;
        if ((1 << rooms) != mdp.num_actions())
            throw ParseError("policyset 'subset-bandit' requires a power-of-two action count");
        for (int a = 0; a < mdp.num_actions(); ++a) {
            policies.push_back(core::StationaryPolicy::deterministic({a, 0}, mdp.num_actions()));
            names.push_back(subset_label(static_cast<std::uint64_t>(a), rooms));
        }
    } else {
        policies = io::policies_from_json(io::read_json_file(spec));
        for (std::size_t i = 0; i < policies.size(); ++i) names.push_back("p" + std::to_string(i));
    }
    return ordering::PolicySet::make(mdp, policies, names);
}

json ordering_report(const ordering::PolicyOrdering& o, const std::vector<std::string>& names) {
    json j;
    j["classes"] = io::ordering_to_json(o);
    j["label"] = diagrams::ordering_label(o, names);
    if (o.values) {
        j["class_values"] = json::array();
        for (const auto& v : *o.values) j["class_values"].push_back(io::rational_to_json(v));
    }
    return j;
}

const char* verdict_name(ordering::SimplificationVerdict v) {
    switch (v) {
        case ordering::SimplificationVerdict::not_simplification: return "not_simplification";
        case ordering::SimplificationVerdict::simplification: return "simplification";
        case ordering::SimplificationVerdict::trivial_simplification:
            return "trivial_simplification";
    }
    return "not_simplification";
}

json policy_rows_json(const core::StationaryPolicy& policy) {
    json rows = json::array();
    for (const auto& row : policy.action_probs) {
        json out_row = json::array();
        for (const auto& p : row) out_row.push_back(io::rational_to_json(p));
        rows.push_back(std::move(out_row));
    }
    return rows;
}

void write_report(const std::string& path, const json& doc) {
    io::write_json_file(path, doc);
    std::cout << "report written to " << path << "\n";
}

// All candidate weak orders over the policy set, filtered in parallel down
// to the representable ones. Candidate order is preserved in the output.
std::vector<repr::RepresentableOrdering> representable_orderings(
    const ordering::PolicySet& pset, bool strict_only, const Caps& caps, int jobs) {
    std::vector<ordering::PolicyOrdering> candidates;
    if (strict_only) {
        const int n = pset.size();
        core::Int total = 1;
        for (int i = 2; i <= n; ++i) total *= i;
        if (total > core::Int(caps.weak_orders))
            throw CapExceeded("enumerate: " + total.str() + " strict orderings exceed cap " +
                              std::to_string(caps.weak_orders));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            ordering::PolicyOrdering o;
            o.num_policies = n;
            for (int idx : perm) o.classes.push_back({idx});
            candidates.push_back(std::move(o));
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        candidates = ordering::enumerate_weak_orders(pset.size(), caps.weak_orders);
    }
    std::vector<std::optional<repr::RepresentableOrdering>> slots(candidates.size());
    parallel_for(candidates.size(), jobs, [&](std::size_t i) {
        auto rr = repr::check_representable(pset, candidates[i], caps.lp_pivots);
        if (rr.representable)
            slots[i] = repr::RepresentableOrdering{candidates[i], std::move(*rr.witness)};
    });
    std::vector<repr::RepresentableOrdering> out;
    for (auto& slot : slots)
        if (slot) out.push_back(std::move(*slot));
    return out;
}

search::PolicyFilter parse_filter(const std::string& spec, const core::RewardTable& r1) {
    if (spec == "all") return search::PolicyFilter::all();
    if (spec.rfind("eps:", 0) == 0)
        return search::PolicyFilter::eps_suboptimal(core::parse_rational(spec.substr(4)), r1);
    if (spec.rfind("delta:", 0) == 0)
        return search::PolicyFilter::delta_deterministic(core::parse_rational(spec.substr(6)));
    throw ParseError("unknown filter '" + spec + "' (expected all, eps:R, or delta:R)");
}

struct GenArgs {
    std::string kind;
    std::string rooms_true = "1,1,1";
    std::string rooms_proxy = "1,1,0";
    int states = 3;
    int actions = 2;
    std::uint64_t seed = 1;
    std::string density = "3/4";
    int length = 5;
    std::string out;
};

std::vector<core::Rational> parse_rational_list(const std::string& text) {
    std::vector<core::Rational> out;
    for (std::size_t pos = 0; pos < text.size();) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(core::parse_rational(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

int run_gen(const GenArgs& args) {
    if (args.kind == "two-state") {
        const std::string out = args.out.empty() ? "two_state_mdp.json" : args.out;
        io::write_json_file(out, io::mdp_to_json(envs::build_two_state().spec()));
        std::cout << "two-state MDP (2 states, 2 actions, discount 1/2) written to " << out << "\n";
        return 0;
    }
    if (args.kind == "cleaning") {
        envs::CleaningSpec cspec{parse_rational_list(args.rooms_true),
                                 parse_rational_list(args.rooms_proxy)};
        auto bandit = envs::build_cleaning_bandit(cspec);
        const std::string dir = args.out.empty() ? "cleaning_bandit" : args.out;
        std::filesystem::create_directories(dir);
        io::write_json_file(dir + "/mdp.json", io::mdp_to_json(bandit.mdp.spec()));
        io::write_json_file(dir + "/reward_true.json", io::reward_to_json(bandit.reward_true));
        io::write_json_file(dir + "/reward_proxy.json", io::reward_to_json(bandit.reward_proxy));
        const int rooms = static_cast<int>(cspec.room_rewards_true.size());
        std::cout << "cleaning bandit with " << rooms << " rooms (" << bandit.policies.size()
                  << " subset policies) written to " << dir << "/\n";
        if (auto w = envs::cleaning_hackability_condition(cspec))
            std::cout << "note: proxy prefers " << subset_label(w->s1, rooms) << " over "
                      << subset_label(w->s2, rooms)
                      << " against the true reward (hackable pair)\n";
        return 0;
    }
    if (args.kind == "random") {
        auto mdp = envs::build_random_mdp(args.states, args.actions, args.seed,
                                          core::parse_rational(args.density));
        const std::string out = args.out.empty() ? "random_mdp.json" : args.out;
        io::write_json_file(out, io::mdp_to_json(mdp.spec()));
        std::cout << "random MDP (" << args.states << " states, " << args.actions
                  << " actions, seed " << args.seed << ") written to " << out << "\n";
        return 0;
    }
    if (args.kind == "hallway") {
        const std::string out = args.out.empty() ? "hallway_mdp.json" : args.out;
        io::write_json_file(out, io::mdp_to_json(envs::build_hallway(args.length).spec()));
        std::cout << "hallway MDP (" << args.length << " states) written to " << out << "\n";
        return 0;
    }
    throw ParseError("unknown gen kind '" + args.kind +
                     "' (expected two-state, cleaning, random, or hallway)");
}

int run_analyze(const std::string& mdp_file, const std::string& r1_file,
                const std::string& r2_file, const std::string& pset_spec, const Caps& caps,
                const std::string& out_file) {
    auto mdp = load_mdp(mdp_file);
    auto r1 = load_reward(r1_file, mdp);
    auto r2 = load_reward(r2_file, mdp);
    auto pset = build_policy_set(mdp, pset_spec, caps);

    auto o1 = ordering::ordering_from_reward(r1, pset);
    auto o2 = ordering::ordering_from_reward(r2, pset);
    auto witness = ordering::check_hackable(o1, o2);
    auto simp12 = ordering::check_simplification(o1, o2);
    auto simp21 = ordering::check_simplification(o2, o1);
    const bool equivalent = ordering::is_equivalent(o1, o2);

    std::cout << "policy set: " << pset.size() << " policies (" << pset_spec << ")\n";
    std::cout << "ordering under reward 1: " << diagrams::ordering_label(o1, pset.names) << "\n";
    std::cout << "ordering under reward 2: " << diagrams::ordering_label(o2, pset.names) << "\n";
    std::cout << "equivalent: " << (equivalent ? "yes" : "no") << "\n";
    std::cout << "trivial: reward 1 " << (ordering::is_trivial(o1) ? "yes" : "no") << ", reward 2 "
              << (ordering::is_trivial(o2) ? "yes" : "no") << "\n";
    std::cout << "reward 2 vs reward 1: " << verdict_name(simp21) << ", reward 1 vs reward 2: "
              << verdict_name(simp12) << "\n";

    json doc;
    doc["policy_set"] = {{"spec", pset_spec}, {"size", pset.size()}, {"names", pset.names}};
    doc["ordering1"] = ordering_report(o1, pset.names);
    doc["ordering2"] = ordering_report(o2, pset.names);
    doc["equivalent"] = equivalent;
    doc["trivial1"] = ordering::is_trivial(o1);
    doc["trivial2"] = ordering::is_trivial(o2);
    doc["simplification_1_by_2"] = verdict_name(simp12);
    doc["simplification_2_by_1"] = verdict_name(simp21);
    doc["hackable"] = static_cast<bool>(witness);
    if (witness) {
        json w;
        w["pi"] = witness->pi_index;
        w["pi_prime"] = witness->pi_prime_index;
        w["pi_name"] = pset.names[witness->pi_index];
        w["pi_prime_name"] = pset.names[witness->pi_prime_index];
        if (witness->j1_pair) {
            w["j1_pi"] = io::rational_to_json(witness->j1_pair->first);
            w["j1_pi_prime"] = io::rational_to_json(witness->j1_pair->second);
        }
        if (witness->j2_pair) {
            w["j2_pi"] = io::rational_to_json(witness->j2_pair->first);
            w["j2_pi_prime"] = io::rational_to_json(witness->j2_pair->second);
        }
        doc["witness"] = std::move(w);
        std::cout << "hackable: yes, " << pset.names[witness->pi_index] << " vs "
                  << pset.names[witness->pi_prime_index]
                  << " (reward 1 prefers the second, reward 2 the first)\n";
    } else {
        doc["witness"] = nullptr;
        std::cout << "hackable: no\n";
    }
    write_report(out_file.empty() ? "analyze_report.json" : out_file, doc);
    return witness ? 10 : 0;
}

int run_enumerate(const std::string& mdp_file, const std::string& pset_spec, bool strict,
                  const Caps& caps, int jobs, const std::string& out_file) {
    auto mdp = load_mdp(mdp_file);
    auto pset = build_policy_set(mdp, pset_spec, caps);
    const std::size_t candidates =
        strict ? [&] {
            core::Int total = 1;
            for (int i = 2; i <= pset.size(); ++i) total *= i;
            return total.convert_to<std::size_t>();
        }()
               : static_cast<std::size_t>(
                     ordering::fubini_number(pset.size()).convert_to<std::uint64_t>());
    auto found = representable_orderings(pset, strict, caps, jobs);

    std::cout << found.size() << " of " << candidates << (strict ? " strict" : "")
              << " orderings over " << pset.size() << " policies are representable\n";
    for (const auto& ro : found)
        std::cout << "  " << diagrams::ordering_label(ro.ordering, pset.names) << "\n";

    json doc;
    doc["policy_set"] = {{"spec", pset_spec}, {"size", pset.size()}, {"names", pset.names}};
    doc["strict_only"] = strict;
    doc["candidates"] = candidates;
    doc["representable"] = found.size();
    doc["orderings"] = json::array();
    for (const auto& ro : found) {
        json entry = ordering_report(ro.ordering, pset.names);
        entry["witness_reward"] = io::reward_to_json(ro.witness);
        doc["orderings"].push_back(std::move(entry));
    }
    write_report(out_file.empty() ? "enumerate_report.json" : out_file, doc);
    return 0;
}

int run_simplify(const std::string& mdp_file, const std::string& reward_file,
                 const std::string& ordering_file, const std::string& pset_spec, const Caps& caps,
                 const std::string& out_file) {
    auto mdp = load_mdp(mdp_file);
    auto pset = build_policy_set(mdp, pset_spec, caps);

    ordering::PolicyOrdering o;
    bool assume_representable = false;
    if (!reward_file.empty()) {
        o = ordering::ordering_from_reward(load_reward(reward_file, mdp), pset);
        assume_representable = true;  // realized by the input reward itself
    } else {
        o = io::ordering_from_json(io::read_json_file(ordering_file), pset.size());
    }

    auto existence = repr::simplification_exists(pset, o, assume_representable, caps.lp_pivots);
    auto sims = repr::find_representable_simplifications(pset, o, caps.lp_pivots);
    if (existence.exists != !sims.empty())
        throw Error("internal: existence test and explicit search disagree");

    std::cout << "ordering: " << diagrams::ordering_label(o, pset.names) << "\n";
    std::cout << "simplification exists: " << (existence.exists ? "yes" : "no") << " (dim_z="
              << existence.dim_z << ", dim_f=" << existence.dim_f << ", need dim_z <= dim_f-2)\n";
    for (const auto& ro : sims)
        std::cout << "  " << diagrams::ordering_label(ro.ordering, pset.names) << "\n";

    json doc;
    doc["policy_set"] = {{"spec", pset_spec}, {"size", pset.size()}, {"names", pset.names}};
    doc["ordering"] = ordering_report(o, pset.names);
    doc["exists"] = existence.exists;
    doc["dim_z"] = existence.dim_z;
    doc["dim_f"] = existence.dim_f;
    doc["partition_sizes"] = existence.partition_sizes;
    doc["simplifications"] = json::array();
    for (const auto& ro : sims) {
        json entry = ordering_report(ro.ordering, pset.names);
        entry["witness_reward"] = io::reward_to_json(ro.witness);
        doc["simplifications"].push_back(std::move(entry));
    }
    write_report(out_file.empty() ? "simplify_report.json" : out_file, doc);
    return 0;
}

int run_diagram(const std::string& mdp_file, const std::string& pset_spec, const std::string& kind,
                const std::string& format, const Caps& caps, int jobs,
                const std::string& out_file) {
    if (kind != "unhackability" && kind != "simplification")
        throw ParseError("unknown diagram kind '" + kind +
                         "' (expected unhackability or simplification)");
    auto mdp = load_mdp(mdp_file);
    auto pset = build_policy_set(mdp, pset_spec, caps);
    auto found = representable_orderings(pset, false, caps, jobs);
    std::vector<ordering::PolicyOrdering> orderings;
    orderings.reserve(found.size());
    for (auto& ro : found) orderings.push_back(std::move(ro.ordering));

    auto graph = kind == "unhackability"
                     ? diagrams::build_unhackability_graph(orderings, pset.names)
                     : diagrams::build_simplification_digraph(orderings, pset.names);
    const std::string doc = diagrams::emit_graph(graph, format);
    const std::string out = out_file.empty() ? ("diagram." + format) : out_file;
    io::write_text_file(out, doc);
    std::cout << kind << " diagram: " << graph.nodes.size() << " nodes, "
              << graph.undirected_edges.size() << " unhackable pairs";
    if (kind == "simplification")
        std::cout << ", " << graph.directed_edges.size() << " simplification edges";
    std::cout << "\n";
    std::cout << "diagram written to " << out << "\n";
    return 0;
}

int run_probe(const std::string& mdp_file, const std::string& r1_file, const std::string& r2_file,
              const search::SearchBudget& budget, const std::string& filter_spec,
              const std::string& out_file) {
    auto mdp = load_mdp(mdp_file);
    auto r1 = load_reward(r1_file, mdp);
    auto r2 = load_reward(r2_file, mdp);
    auto filter = parse_filter(filter_spec, r1);
    auto report = search::equivalence_probe(mdp, r1, r2, filter, budget);

    json doc;
    doc["budget"] = {{"num_samples", budget.num_samples},
                     {"num_refinement_steps", budget.num_refinement_steps},
                     {"seed", budget.seed}};
    doc["filter"] = filter_spec;
    doc["orderings_agree_on_sample"] = report.orderings_agree_on_sample;
    if (report.witness) {
        const auto& w = *report.witness;
        doc["witness"] = {{"pi", policy_rows_json(w.pi)},
                          {"pi_prime", policy_rows_json(w.pi_prime)},
                          {"j1_pi", io::rational_to_json(w.j1_pi)},
                          {"j1_pi_prime", io::rational_to_json(w.j1_pi_prime)},
                          {"j2_pi", io::rational_to_json(w.j2_pi)},
                          {"j2_pi_prime", io::rational_to_json(w.j2_pi_prime)}};
        std::cout << "witness found: reward 1 ranks pi below pi_prime ("
                  << core::format_rational(w.j1_pi) << " < " << core::format_rational(w.j1_pi_prime)
                  << ") while reward 2 ranks pi above (" << core::format_rational(w.j2_pi) << " > "
                  << core::format_rational(w.j2_pi_prime) << ")\n";
    } else {
        doc["witness"] = nullptr;
        std::cout << "no witness found with " << budget.num_samples << " samples (seed "
                  << budget.seed << "); this is evidence, not a proof\n";
    }
    std::cout << "orderings agree on the sampled policies: "
              << (report.orderings_agree_on_sample ? "yes" : "no") << "\n";
    write_report(out_file.empty() ? "probe_report.json" : out_file, doc);
    return report.witness ? 10 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of reward hackability and simplification in finite MDPs"};
    app.require_subcommand(1);

    std::uint64_t cap_flag = 0;
    int jobs = 0;
    app.add_option("--cap", cap_flag,
                   "override enumeration / weak-order / LP pivot caps (0 = defaults)");
    app.add_option("--jobs", jobs, "worker threads for enumeration (0 = all cores)");

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate an environment as an MDP file");
    gen->add_option("kind", gen_args.kind, "two-state | cleaning | random | hallway")->required();
    gen->add_option("--true", gen_args.rooms_true, "cleaning: comma-separated true room values");
    gen->add_option("--proxy", gen_args.rooms_proxy,
                    "cleaning: comma-separated proxy room values");
    gen->add_option("--states", gen_args.states, "random: state count");
    gen->add_option("--actions", gen_args.actions, "random: action count");
    gen->add_option("--seed", gen_args.seed, "random: generator seed");
    gen->add_option("--density", gen_args.density, "random: transition support density");
    gen->add_option("--length", gen_args.length, "hallway: state count");
    gen->add_option("--out", gen_args.out, "output file (cleaning: output directory)");

    std::string an_mdp, an_r1, an_r2, an_pset = "deterministic", an_out;
    auto* analyze = app.add_subcommand("analyze", "compare two rewards over one policy set");
    analyze->add_option("mdp", an_mdp, "MDP file")->required();
    analyze->add_option("reward1", an_r1, "first reward file")->required();
    analyze->add_option("reward2", an_r2, "second reward file")->required();
    analyze->add_option("--policies", an_pset, "deterministic | subset-bandit | policy file");
    analyze->add_option("--out", an_out, "report file");

    std::string en_mdp, en_pset = "deterministic", en_out;
    bool en_strict = false;
    auto* enumerate = app.add_subcommand("enumerate", "list representable policy orderings");
    enumerate->add_option("mdp", en_mdp, "MDP file")->required();
    enumerate->add_flag("--strict", en_strict, "strict (untied) orderings only");
    enumerate->add_option("--policies", en_pset, "deterministic | subset-bandit | policy file");
    enumerate->add_option("--out", en_out, "report file");

    std::string si_mdp, si_reward, si_ordering, si_pset = "deterministic", si_out;
    auto* simplify = app.add_subcommand("simplify", "find simplifications of an ordering");
    simplify->add_option("mdp", si_mdp, "MDP file")->required();
    auto* si_r = simplify->add_option("--reward", si_reward, "reward file inducing the ordering");
    auto* si_o = simplify->add_option("--ordering", si_ordering, "explicit ordering file");
    si_r->excludes(si_o);
    si_o->excludes(si_r);
    simplify->add_option("--policies", si_pset, "deterministic | subset-bandit | policy file");
    simplify->add_option("--out", si_out, "report file");

    std::string di_mdp, di_pset = "deterministic", di_kind = "unhackability", di_format = "dot",
                di_out;
    auto* diagram = app.add_subcommand("diagram", "emit unhackability / simplification diagrams");
    diagram->add_option("mdp", di_mdp, "MDP file")->required();
    diagram->add_option("--kind", di_kind, "unhackability | simplification");
    diagram->add_option("--format", di_format, "dot | json");
    diagram->add_option("--policies", di_pset, "deterministic | subset-bandit | policy file");
    diagram->add_option("--out", di_out, "output file");

    std::string pr_mdp, pr_r1, pr_r2, pr_filter = "all", pr_out;
    search::SearchBudget pr_budget;
    auto* probe = app.add_subcommand("probe", "sample stochastic policies for witnesses");
    probe->add_option("mdp", pr_mdp, "MDP file")->required();
    probe->add_option("reward1", pr_r1, "first reward file")->required();
    probe->add_option("reward2", pr_r2, "second reward file")->required();
    probe->add_option("--samples", pr_budget.num_samples, "policies to sample");
    probe->add_option("--refine", pr_budget.num_refinement_steps, "hill-climbing step budget");
    probe->add_option("--seed", pr_budget.seed, "sampling seed");
    probe->add_option("--filter", pr_filter, "all | eps:R (within R of optimal under reward 1) | delta:R");
    probe->add_option("--out", pr_out, "report file");

    for (auto* sub : {gen, analyze, enumerate, simplify, diagram, probe}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const Caps caps = Caps::from_flag(cap_flag);
    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (analyze->parsed()) return run_analyze(an_mdp, an_r1, an_r2, an_pset, caps, an_out);
        if (enumerate->parsed())
            return run_enumerate(en_mdp, en_pset, en_strict, caps, effective_jobs(jobs), en_out);
        if (simplify->parsed()) {
            if (si_reward.empty() == si_ordering.empty())
                throw ParseError("simplify: exactly one of --reward / --ordering is required");
            return run_simplify(si_mdp, si_reward, si_ordering, si_pset, caps, si_out);
        }
        if (diagram->parsed())
            return run_diagram(di_mdp, di_pset, di_kind, di_format, caps, effective_jobs(jobs),
                               di_out);
        if (probe->parsed()) return run_probe(pr_mdp, pr_r1, pr_r2, pr_budget, pr_filter, pr_out);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FilterTooTight& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
