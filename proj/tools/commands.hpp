#pragma once

// Subcommand implementations for the mdlbn tool. Kept apart from main() so
// the tests can drive them directly.

#include <mdlbn/mdlbn.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mdlbn::cli
{

struct RunConfig
{
    std::string subcommand;
    std::string data;
    std::string spec;
    std::string explosion;
    std::string graph;
    std::vector<std::size_t> nodes; // 1-based, as given on the command line
    std::string criterion = "mdl";
    std::optional<std::uint64_t> seed;
    std::string out;
    std::size_t rows = 0;
    bool exhaustive = false;
    bool cycle = false;
    std::size_t max_passes = 10;
    std::string mode = "simultaneous";
    std::string m1_sweep = "4-12";
    std::size_t reps = 20;
};

namespace detail
{

inline void require(bool ok, const std::string& what)
{
    if (!ok)
        throw DomainError(what);
}

inline RemovalMode parse_mode(const std::string& s)
{
    if (s == "simultaneous")
        return RemovalMode::simultaneous;
    if (s == "sequential")
        return RemovalMode::sequential;
    throw ParseError("unknown mode '" + s + "' (expected simultaneous|sequential)");
}

inline Dag load_graph(const RunConfig& cfg, std::size_t n)
{
    if (cfg.graph.empty())
        return Dag(n, std::vector<Edge>{});
    return Dag(n, parse_edge_list(read_text(cfg.graph)));
}

inline std::pair<DiscreteDataset, std::vector<std::string>> load_data(const RunConfig& cfg)
{
    require(!cfg.data.empty(), "--data is required");
    auto raw = load_csv(cfg.data);
    auto names = raw.names;
    return {relabel(raw).first, std::move(names)};
}

} // namespace detail

/// Samples rows from a network spec and writes them as CSV.
inline int run_simulate(const RunConfig& cfg, std::ostream& log)
{
    detail::require(!cfg.spec.empty(), "simulate: --spec is required");
    detail::require(cfg.seed.has_value(), "simulate: --seed is required");
    detail::require(!cfg.out.empty(), "simulate: --out is required");
    detail::require(cfg.rows > 0, "simulate: --rows must be at least 1");
    const auto spec = parse_bn_spec(read_text(cfg.spec));
    const auto data = sample(spec, cfg.rows, *cfg.seed);
    write_text(cfg.out, format_csv(data, spec.names));
    log << "simulated m = " << data.rows() << ", n = " << data.cols() << ", cardinalities =";
    for (auto c : data.cardinalities())
        log << ' ' << c;
    log << "\n";
    return 0;
}

/// Explodes one column of a CSV dataset.
inline int run_explode(const RunConfig& cfg, std::ostream& log)
{
    detail::require(!cfg.explosion.empty(), "explode: --explosion is required");
    detail::require(cfg.seed.has_value(), "explode: --seed is required");
    detail::require(!cfg.out.empty(), "explode: --out is required");
    const auto [data, names] = detail::load_data(cfg);
    const auto spec = parse_explosion_spec(read_text(cfg.explosion));
    const auto out = explode(data, spec, *cfg.seed);
    write_text(cfg.out, format_csv(out, names));
    log << "exploded node " << spec.node + 1 << ": " << data.cardinality(spec.node) << " -> "
        << out.cardinality(spec.node) << " values, m = " << out.rows() << "\n";
    return 0;
}

inline ScoreReport recover_report(const RunConfig& cfg)
{
    const auto [data, names] = detail::load_data(cfg);
    const auto criterion = parse_criterion(cfg.criterion);
    std::vector<Dag> candidates;
    if (!cfg.graph.empty())
        candidates.push_back(detail::load_graph(cfg, data.cols()));
    else
        candidates = enumerate_dags(data.cols());
    return recover(data, candidates, criterion);
}

/// Scores every DAG on the data's columns (or the one given by --graph).
inline int run_recover(const RunConfig& cfg, std::ostream& log)
{
    const auto rep = recover_report(cfg);
    log << format_score_table(rep);
    if (!cfg.out.empty())
        write_text(cfg.out, to_json(rep).dump(2) + "\n");
    return 0;
}

inline json discretize_json(const RunConfig& cfg, std::ostream& log)
{
    const auto [data, names] = detail::load_data(cfg);
    const auto dag = detail::load_graph(cfg, data.cols());
    const auto mode = detail::parse_mode(cfg.mode);
    detail::require(!cfg.nodes.empty(), "discretize: --node is required");
    std::vector<NodeId> nodes;
    for (auto v : cfg.nodes) {
        detail::require(v >= 1 && v <= data.cols(), "discretize: --node out of range");
        nodes.push_back(v - 1);
    }
    if (cfg.graph.empty())
        log << "note: no --graph given; using the empty graph\n";

    auto report_for = [&](const DiscreteDataset& working, NodeId node) {
        if (!dag.connected(node))
            log << "note: node " << node + 1 << " has no neighbours in the graph\n";
        if (working.cardinality(node) == 1)
            log << "note: node " << node + 1
                << " has a single distinct value; nothing to discretize\n";
        LocalScorer scorer(working, dag, node);
        const auto td = top_down_search(scorer, mode);
        std::optional<ExhaustiveResult> oracle;
        if (cfg.exhaustive)
            oracle = exhaustive_search(scorer);
        auto rep = make_discretization_report(scorer, td, oracle, mode);
        log << format_discretization_table(rep);
        return rep;
    };

    json j;
    if (!cfg.cycle) {
        detail::require(nodes.size() == 1, "discretize: give one --node, or use --cycle");
        j = to_json(report_for(data, nodes.front()));
    } else {
        const auto res = cycle_discretize(data, dag, nodes, cfg.max_passes, mode);
        log << "cycle: " << res.passes << " pass(es), "
            << (res.converged ? "converged" : "not converged") << "\n";
        j["cycle"] = {{"passes", res.passes}, {"converged", res.converged}};
        j["policies"] = json::array();
        j["reports"] = json::array();
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            DiscreteDataset working = data;
            for (std::size_t b = 0; b < nodes.size(); ++b)
                if (b != a)
                    working = apply_policy(working, res.policies[b]);
            j["policies"].push_back(to_json(res.policies[a]));
            j["reports"].push_back(to_json(report_for(working, nodes[a])));
        }
    }
    return j;
}

/// Top-down discretization of one node, optionally checked against the
/// exhaustive oracle or cycled over several nodes.
inline int run_discretize(const RunConfig& cfg, std::ostream& log)
{
    const auto j = discretize_json(cfg, log);
    if (!cfg.out.empty())
        write_text(cfg.out, j.dump(2) + "\n");
    return 0;
}

/// Parses "4-12", "4,6,8" or a mix such as "2,4-6".
inline std::vector<std::size_t> parse_sweep(const std::string& s)
{
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos)
            comma = s.size();
        const auto item = s.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty())
            continue;
        try {
            const auto dash = item.find('-');
            if (dash == std::string::npos) {
                out.push_back(std::stoul(item));
            } else {
                const auto lo = std::stoul(item.substr(0, dash));
                const auto hi = std::stoul(item.substr(dash + 1));
                if (lo > hi)
                    throw ParseError("empty range in --m1-sweep");
                for (auto v = lo; v <= hi; ++v)
                    out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw ParseError("bad --m1-sweep item '" + item + "'");
        }
    }
    if (out.empty())
        throw ParseError("--m1-sweep is empty");
    return out;
}

struct BenchRow
{
    std::size_t m1 = 0;
    std::size_t reps = 0;
    std::size_t topdown_evaluations = 0;    // per instance
    std::size_t exhaustive_evaluations = 0; // per instance
    double topdown_ms = 0.0;                // mean per instance
    double exhaustive_ms = 0.0;
    std::size_t agree = 0;            // simultaneous removal == exhaustive argmin
    std::size_t agree_sequential = 0; // sequential removal == exhaustive argmin
    std::size_t correct = 0;          // exhaustive argmin == generating policy
};

/// Nominal sample size used for the distribution-exact bench instances.
inline constexpr double bench_sample_size = 1e7;

inline std::vector<BenchRow> bench(const std::vector<std::size_t>& sweep, std::size_t reps,
                                   std::uint64_t seed)
{
    using clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    for (auto m1 : sweep) {
        if (m1 < 2 || m1 > max_exhaustive_values)
            throw TooLarge("bench: m1 must lie in 2.." + std::to_string(max_exhaustive_values));
        BenchRow row;
        row.m1 = m1;
        row.reps = reps;
        Rng rng(seed + m1);
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto inst = random_exploded_instance(rng, m1, bench_sample_size);
            LocalScorer scorer(inst.joint, inst.dag(), inst.node, bench_sample_size);

            const auto t0 = clock::now();
            const auto td = top_down_search(scorer, RemovalMode::simultaneous);
            const auto t1 = clock::now();
            const auto ex = exhaustive_search(scorer);
            const auto t2 = clock::now();
            const auto seq = top_down_search(scorer, RemovalMode::sequential);

            row.topdown_evaluations = td.evaluations;
            row.exhaustive_evaluations = ex.evaluations;
            row.topdown_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
            row.exhaustive_ms += std::chrono::duration<double, std::milli>(t2 - t1).count();
            row.agree += td.policy == ex.policy;
            row.agree_sequential += seq.policy == ex.policy;
            row.correct += ex.policy == inst.correct;
        }
        if (reps > 0) {
            row.topdown_ms /= static_cast<double>(reps);
            row.exhaustive_ms /= static_cast<double>(reps);
        }
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const std::vector<BenchRow>& rows)
{
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"m1", r.m1},
                     {"reps", r.reps},
                     {"topdown_evaluations", r.topdown_evaluations},
                     {"exhaustive_evaluations", r.exhaustive_evaluations},
                     {"topdown_ms", r.topdown_ms},
                     {"exhaustive_ms", r.exhaustive_ms},
                     {"agree", r.agree},
                     {"agree_sequential", r.agree_sequential},
                     {"correct", r.correct}});
    return a;
}

/// Top-down versus exhaustive search on random exploded instances.
inline int run_bench(const RunConfig& cfg, std::ostream& log)
{
    const auto sweep = parse_sweep(cfg.m1_sweep);
    const auto rows = bench(sweep, cfg.reps, cfg.seed.value_or(1));
    using mdlbn::detail::fixed;
    using mdlbn::detail::pad_left;
    log << pad_left("m1", 4) << pad_left("reps", 6) << pad_left("td evals", 10)
        << pad_left("ex evals", 10) << pad_left("td ms", 10) << pad_left("ex ms", 12)
        << pad_left("agree", 8) << pad_left("agree seq", 11) << "\n";
    for (const auto& r : rows)
        log << pad_left(std::to_string(r.m1), 4) << pad_left(std::to_string(r.reps), 6)
            << pad_left(std::to_string(r.topdown_evaluations), 10)
            << pad_left(std::to_string(r.exhaustive_evaluations), 10)
            << pad_left(fixed(r.topdown_ms), 10) << pad_left(fixed(r.exhaustive_ms), 12)
            << pad_left(std::to_string(r.agree) + "/" + std::to_string(r.reps), 8)
            << pad_left(std::to_string(r.agree_sequential) + "/" + std::to_string(r.reps), 11)
            << "\n";
    if (!cfg.out.empty())
        write_text(cfg.out, to_json(rows).dump(2) + "\n");
    return 0;
}

inline int run(const RunConfig& cfg, std::ostream& log)
{
    if (cfg.subcommand == "simulate")
        return run_simulate(cfg, log);
    if (cfg.subcommand == "explode")
        return run_explode(cfg, log);
    if (cfg.subcommand == "recover")
        return run_recover(cfg, log);
    if (cfg.subcommand == "discretize")
        return run_discretize(cfg, log);
    if (cfg.subcommand == "bench")
        return run_bench(cfg, log);
    throw ParseError("unknown subcommand '" + cfg.subcommand + "'");
}

} // namespace mdlbn::cli
