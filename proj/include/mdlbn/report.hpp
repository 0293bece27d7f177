#pragma once

#include <mdlbn/discretization.hpp>
#include <mdlbn/graph.hpp>
#include <mdlbn/scoring.hpp>

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace mdlbn
{

using nlohmann::json;

// Serialized indices (nodes, edges, thresholds, winners) follow the text
// formats: nodes and candidates are 1-based, thresholds are gap positions.

inline json edges_to_json(const Dag& d)
{
    json a = json::array();
    for (const auto& e : d.edges())
        a.push_back({e.parent + 1, e.child + 1});
    return a;
}

inline Dag dag_from_json(std::size_t n, const json& edges)
{
    std::vector<Edge> es;
    for (const auto& e : edges)
        es.push_back({e.at(0).get<NodeId>() - 1, e.at(1).get<NodeId>() - 1});
    return Dag(n, es);
}

inline json to_json(const Policy& p)
{
    return {{"node", p.node() + 1}, {"m1", p.m1()}, {"thresholds", p.thresholds()}};
}

inline Policy policy_from_json(const json& j)
{
    return Policy(j.at("node").get<NodeId>() - 1, j.at("m1").get<std::size_t>(),
                  j.at("thresholds").get<std::vector<std::size_t>>());
}

inline json to_json(const ScoreReport& r)
{
    json j;
    j["criterion"] = std::string(to_string(r.criterion));
    j["m"] = r.m;
    j["n"] = r.candidates.empty() ? 0 : r.candidates.front().dag.size();
    j["candidates"] = json::array();
    for (const auto& c : r.candidates)
        j["candidates"].push_back({{"edges", edges_to_json(c.dag)},
                                   {"ll_nats", c.ll_nats},
                                   {"ll_bits", c.ll_bits},
                                   {"params", c.params},
                                   {"aic", c.aic},
                                   {"bic", c.bic},
                                   {"dl_net", c.dl_net},
                                   {"dl_data", c.dl_data},
                                   {"mdl", c.mdl}});
    j["rankings"] = json::object();
    for (auto c : all_criteria) {
        json order = json::array();
        for (auto i : r.ranking(c))
            order.push_back(i + 1);
        j["rankings"][std::string(to_string(c))] = order;
    }
    j["winners"] = json::array();
    for (const auto& cls : r.winners) {
        json a = json::array();
        for (auto i : cls)
            a.push_back(i + 1);
        j["winners"].push_back(a);
    }
    return j;
}

inline ScoreReport score_report_from_json(const json& j)
{
    ScoreReport r;
    r.criterion = parse_criterion(j.at("criterion").get<std::string>());
    r.m = j.at("m").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    for (const auto& c : j.at("candidates")) {
        NetworkScore s;
        s.dag = dag_from_json(n, c.at("edges"));
        s.ll_nats = c.at("ll_nats").get<double>();
        s.ll_bits = c.at("ll_bits").get<double>();
        s.params = c.at("params").get<std::size_t>();
        s.aic = c.at("aic").get<double>();
        s.bic = c.at("bic").get<double>();
        s.dl_net = c.at("dl_net").get<double>();
        s.dl_data = c.at("dl_data").get<double>();
        s.mdl = c.at("mdl").get<double>();
        r.candidates.push_back(std::move(s));
    }
    for (auto c : all_criteria) {
        auto& order = r.rankings[static_cast<std::size_t>(c)];
        for (const auto& i : j.at("rankings").at(std::string(to_string(c))))
            order.push_back(i.get<std::size_t>() - 1);
    }
    for (const auto& cls : j.at("winners")) {
        std::vector<std::size_t> v;
        for (const auto& i : cls)
            v.push_back(i.get<std::size_t>() - 1);
        r.winners.push_back(std::move(v));
    }
    return r;
}

namespace detail
{

inline std::string fixed(double x, int prec = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, x);
    return buf;
}

inline std::string pad_left(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace detail

/// Aligned table of every candidate, winners marked with '*'.
inline std::string format_score_table(const ScoreReport& r)
{
    using detail::fixed;
    using detail::pad_left;
    using detail::pad_right;

    const auto winners = r.winner_set();
    std::size_t edge_w = 5;
    for (const auto& c : r.candidates)
        edge_w = std::max(edge_w, describe_edges(c.dag).size());

    std::string out;
    out += pad_left("#", 4) + "  " + pad_right("edges", edge_w) + pad_left("ll_nats", 16) +
           pad_left("params", 8) + pad_left("AIC", 16) + pad_left("BIC", 16) +
           pad_left("MDL", 16) + "\n";
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        const auto& c = r.candidates[i];
        const bool win = std::binary_search(winners.begin(), winners.end(), i);
        out += pad_left(std::to_string(i + 1), 4) + (win ? "* " : "  ") +
               pad_right(describe_edges(c.dag), edge_w) + pad_left(fixed(c.ll_nats), 16) +
               pad_left(std::to_string(c.params), 8) + pad_left(fixed(c.aic), 16) +
               pad_left(fixed(c.bic), 16) + pad_left(fixed(c.mdl), 16) + "\n";
    }
    out += "winners (" + std::string(to_string(r.criterion)) + "):";
    for (const auto& cls : r.winners) {
        out += " {";
        for (std::size_t k = 0; k < cls.size(); ++k)
            out += (k ? ", " : "") + describe_edges(r.candidates[cls[k]].dag);
        out += "}";
    }
    return out + "\n";
}

/// Full-policy score, every single-removal score and the chosen policy.
struct DiscretizationReport
{
    struct Removal
    {
        std::size_t threshold = 0;
        std::string policy;
        double dl_local = 0.0;

        bool operator==(const Removal&) const = default;
    };

    struct Oracle
    {
        Policy policy;
        double dl_local = 0.0;
        std::size_t evaluations = 0;

        bool operator==(const Oracle&) const = default;
    };

    NodeId node = 0;
    std::size_t m = 0;
    std::size_t m1 = 1;
    std::string mode = "simultaneous";
    std::string full_policy;
    double baseline = 0.0;
    std::vector<Removal> removals;
    Policy chosen;
    double chosen_dl_local = 0.0;
    std::size_t evaluations = 0;
    std::optional<Oracle> exhaustive;

    bool agrees() const { return exhaustive && exhaustive->policy == chosen; }

    bool operator==(const DiscretizationReport&) const = default;
};

inline DiscretizationReport make_discretization_report(const LocalScorer& scorer,
                                                       const TopDownResult& td,
                                                       std::optional<ExhaustiveResult> oracle,
                                                       RemovalMode mode)
{
    DiscretizationReport rep;
    rep.node = scorer.node();
    rep.m = static_cast<std::size_t>(scorer.sample_size());
    rep.m1 = scorer.m1();
    rep.mode = mode == RemovalMode::simultaneous ? "simultaneous" : "sequential";
    const auto full = Policy::full(rep.node, rep.m1);
    rep.full_policy = full.bar_notation();
    rep.baseline = td.baseline;
    for (std::size_t r = 1; r < rep.m1; ++r)
        rep.removals.push_back(
            {r, td.removal_policies[r - 1].bar_notation(), td.removal_scores[r - 1]});
    rep.chosen = td.policy;
    rep.chosen_dl_local =
        dl_local(scorer.joint(), scorer.dag(), rep.node, td.policy, scorer.sample_size());
    rep.evaluations = td.evaluations;
    if (oracle)
        rep.exhaustive = DiscretizationReport::Oracle{oracle->policy, oracle->score,
                                                      oracle->evaluations};
    return rep;
}

inline json to_json(const DiscretizationReport& r)
{
    json j;
    j["node"] = r.node + 1;
    j["m"] = r.m;
    j["m1"] = r.m1;
    j["mode"] = r.mode;
    j["full_policy"] = r.full_policy;
    j["baseline"] = r.baseline;
    j["removals"] = json::array();
    for (const auto& x : r.removals)
        j["removals"].push_back(
            {{"threshold", x.threshold}, {"policy", x.policy}, {"dl_local", x.dl_local}});
    j["chosen"] = to_json(r.chosen);
    j["chosen_bar"] = r.chosen.bar_notation();
    j["chosen_dl_local"] = r.chosen_dl_local;
    j["evaluations"] = r.evaluations;
    if (r.exhaustive) {
        j["exhaustive"] = {{"policy", to_json(r.exhaustive->policy)},
                           {"bar", r.exhaustive->policy.bar_notation()},
                           {"dl_local", r.exhaustive->dl_local},
                           {"evaluations", r.exhaustive->evaluations},
                           {"agrees", r.agrees()}};
    }
    return j;
}

inline DiscretizationReport discretization_report_from_json(const json& j)
{
    DiscretizationReport r;
    r.node = j.at("node").get<NodeId>() - 1;
    r.m = j.at("m").get<std::size_t>();
    r.m1 = j.at("m1").get<std::size_t>();
    r.mode = j.at("mode").get<std::string>();
    r.full_policy = j.at("full_policy").get<std::string>();
    r.baseline = j.at("baseline").get<double>();
    for (const auto& x : j.at("removals"))
        r.removals.push_back({x.at("threshold").get<std::size_t>(),
                              x.at("policy").get<std::string>(), x.at("dl_local").get<double>()});
    r.chosen = policy_from_json(j.at("chosen"));
    r.chosen_dl_local = j.at("chosen_dl_local").get<double>();
    r.evaluations = j.at("evaluations").get<std::size_t>();
    if (j.contains("exhaustive")) {
        const auto& e = j.at("exhaustive");
        r.exhaustive = DiscretizationReport::Oracle{policy_from_json(e.at("policy")),
                                                    e.at("dl_local").get<double>(),
                                                    e.at("evaluations").get<std::size_t>()};
    }
    return r;
}

/// Two-column listing: discretization and its local score.
inline std::string format_discretization_table(const DiscretizationReport& r)
{
    using detail::fixed;
    using detail::pad_left;
    using detail::pad_right;

    std::size_t w = std::max<std::size_t>(14, r.full_policy.size() + 2);
    std::string out;
    out += "node " + std::to_string(r.node + 1) + ", m = " + std::to_string(r.m) +
           ", m1 = " + std::to_string(r.m1) + " (" + r.mode + ")\n";
    out += pad_right("discretization", w) + pad_left("DL_local", 16) + pad_left("delta", 14) + "\n";
    out += pad_right(r.full_policy, w) + pad_left(fixed(r.baseline, 2), 16) + "\n";
    for (const auto& x : r.removals)
        out += pad_right(x.policy, w) + pad_left(fixed(x.dl_local, 2), 16) +
               pad_left(fixed(x.dl_local - r.baseline, 2), 14) + "\n";
    out += pad_right("chosen " + r.chosen.bar_notation(), w) +
           pad_left(fixed(r.chosen_dl_local, 2), 16) + "\n";
    out += "evaluations: " + std::to_string(r.evaluations) + "\n";
    if (r.exhaustive) {
        out += "exhaustive: " + r.exhaustive->policy.bar_notation() + "  DL_local " +
               fixed(r.exhaustive->dl_local, 2) + "  evaluations " +
               std::to_string(r.exhaustive->evaluations) + "\n";
        out += std::string("top-down == exhaustive: ") + (r.agrees() ? "true" : "false") + "\n";
    }
    return out;
}

} // namespace mdlbn
