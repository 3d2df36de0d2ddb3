#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hackability/errors.hpp"
#include "hackability/mdp.hpp"
#include "hackability/ordering.hpp"
#include "hackability/rational.hpp"

namespace hackability::io {

using json = nlohmann::ordered_json;

// Rationals travel as "num/den" strings (integers also accepted). JSON
// floats are rejected rather than silently rounded: every value in a file is
// exact or the file is invalid.
inline json rational_to_json(const core::Rational& r) { return core::format_rational(r); }

inline core::Rational rational_from_json(const json& j) {
    if (j.is_string()) return core::parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return core::Rational(j.get<long long>());
    if (j.is_number_float())
        throw ParseError("io: floating-point literals are not exact; write \"" +
                         j.dump() + "\" as a rational string instead");
    throw ParseError("io: expected a rational (string or integer), got " + j.dump());
}

namespace detail {

inline const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        throw ParseError(std::string("io: missing field '") + name + "'");
    return j.at(name);
}

inline int int_field(const json& j, const char* name) {
    const json& f = field(j, name);
    if (!f.is_number_integer())
        throw ParseError(std::string("io: field '") + name + "' must be an integer");
    return f.get<int>();
}

inline std::vector<core::Rational> rational_row(const json& j) {
    if (!j.is_array()) throw ParseError("io: expected an array of rationals, got " + j.dump());
    std::vector<core::Rational> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(rational_from_json(v));
    return out;
}

}  // namespace detail

inline json mdp_to_json(const core::MdpSpec& spec) {
    json j;
    j["states"] = spec.num_states;
    j["actions"] = spec.num_actions;
    j["transition"] = json::array();
    for (const auto& per_state : spec.transition) {
        json rows = json::array();
        for (const auto& row : per_state) {
            json out_row = json::array();
            for (const auto& p : row) out_row.push_back(rational_to_json(p));
            rows.push_back(std::move(out_row));
        }
        j["transition"].push_back(std::move(rows));
    }
    j["initial"] = json::array();
    for (const auto& p : spec.initial) j["initial"].push_back(rational_to_json(p));
    j["discount"] = rational_to_json(spec.discount);
    return j;
}

inline core::MdpSpec mdp_from_json(const json& j) {
    core::MdpSpec spec;
    spec.num_states = detail::int_field(j, "states");
    spec.num_actions = detail::int_field(j, "actions");
    const json& trans = detail::field(j, "transition");
    if (!trans.is_array()) throw ParseError("io: 'transition' must be an array");
    for (const auto& per_state : trans) {
        if (!per_state.is_array()) throw ParseError("io: 'transition' entries must be arrays");
        std::vector<std::vector<core::Rational>> rows;
        for (const auto& row : per_state) rows.push_back(detail::rational_row(row));
        spec.transition.push_back(std::move(rows));
    }
    spec.initial = detail::rational_row(detail::field(j, "initial"));
    spec.discount = rational_from_json(detail::field(j, "discount"));
    return spec;
}

inline json reward_to_json(const core::RewardTable& r) {
    json j;
    j["values"] = json::array();
    for (int s = 0; s < r.num_states; ++s) {
        json row = json::array();
        for (int a = 0; a < r.num_actions; ++a) row.push_back(rational_to_json(r.at(s, a)));
        j["values"].push_back(std::move(row));
    }
    return j;
}

inline core::RewardTable reward_from_json(const json& j) {
    const json& values = detail::field(j, "values");
    if (!values.is_array() || values.empty())
        throw ParseError("io: 'values' must be a nonempty array of rows");
    std::vector<std::vector<core::Rational>> rows;
    for (const auto& row : values) rows.push_back(detail::rational_row(row));
    core::RewardTable out = core::RewardTable::zero(static_cast<int>(rows.size()),
                                                    static_cast<int>(rows[0].size()));
    for (int s = 0; s < out.num_states; ++s) {
        if (static_cast<int>(rows[s].size()) != out.num_actions)
            throw DimensionMismatch("io: reward rows have inconsistent lengths");
        for (int a = 0; a < out.num_actions; ++a) out.values[s * out.num_actions + a] = rows[s][a];
    }
    return out;
}

inline json policies_to_json(const std::vector<core::StationaryPolicy>& policies) {
    json j;
    j["policies"] = json::array();
    for (const auto& policy : policies) {
        json rows = json::array();
        for (const auto& row : policy.action_probs) {
            json out_row = json::array();
            for (const auto& p : row) out_row.push_back(rational_to_json(p));
            rows.push_back(std::move(out_row));
        }
        j["policies"].push_back(std::move(rows));
    }
    return j;
}

inline std::vector<core::StationaryPolicy> policies_from_json(const json& j) {
    const json& list = detail::field(j, "policies");
    if (!list.is_array() || list.empty())
        throw ParseError("io: 'policies' must be a nonempty array");
    std::vector<core::StationaryPolicy> out;
    for (const auto& entry : list) {
        if (!entry.is_array()) throw ParseError("io: each policy must be an array of rows");
        std::vector<std::vector<core::Rational>> rows;
        for (const auto& row : entry) rows.push_back(detail::rational_row(row));
        out.push_back(core::StationaryPolicy::from_rows(rows));
    }
    return out;
}

// Orderings serialize as the bare class list, lowest class first, e.g.
// [[0,1],[3],[2]]. An object wrapper {"classes": ...} is accepted on input.
inline json ordering_to_json(const ordering::PolicyOrdering& o) {
    json j = json::array();
    for (const auto& cls : o.classes) j.push_back(cls);
    return j;
}

inline ordering::PolicyOrdering ordering_from_json(const json& j, int num_policies) {
    const json* classes = &j;
    if (j.is_object()) classes = &detail::field(j, "classes");
    if (!classes->is_array()) throw ParseError("io: ordering must be an array of classes");
    std::vector<std::vector<int>> parsed;
    for (const auto& cls : *classes) {
        if (!cls.is_array()) throw ParseError("io: each ordering class must be an array");
        std::vector<int> members;
        for (const auto& m : cls) {
            if (!m.is_number_integer())
                throw ParseError("io: ordering class members must be integers");
            members.push_back(m.get<int>());
        }
        parsed.push_back(std::move(members));
    }
    return ordering::PolicyOrdering::from_classes(parsed, num_policies);
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("io: cannot open '" + path + "' for reading");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("io: '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io: cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("io: write to '" + path + "' failed");
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hackability::io
