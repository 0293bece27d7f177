#pragma once

#include <mdlbn/dataset.hpp>
#include <mdlbn/errors.hpp>
#include <mdlbn/graph.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace mdlbn
{

/// theta-hat for one node; rows whose parent configuration never occurs are
/// left at zero and flagged undefined.
struct NodeTheta
{
    std::size_t configs = 1;
    std::size_t card = 1;
    std::vector<double> theta;
    std::vector<bool> defined;

    double at(std::size_t j, std::size_t k) const { return theta[j * card + k]; }
};

struct ThetaTable
{
    std::vector<NodeTheta> nodes;
};

inline ThetaTable mle_theta(const CountTable& ct)
{
    ThetaTable tt;
    tt.nodes.reserve(ct.nodes.size());
    for (const auto& nc : ct.nodes) {
        NodeTheta nt;
        nt.configs = nc.configs;
        nt.card = nc.card;
        nt.theta.assign(nc.configs * nc.card, 0.0);
        nt.defined.assign(nc.configs, false);
        for (std::size_t j = 0; j < nc.configs; ++j) {
            if (nc.totals[j] == 0)
                continue;
            nt.defined[j] = true;
            const double total = static_cast<double>(nc.totals[j]);
            for (std::size_t k = 0; k < nc.card; ++k)
                nt.theta[j * nc.card + k] = static_cast<double>(nc.at(j, k)) / total;
        }
        tt.nodes.push_back(std::move(nt));
    }
    return tt;
}

struct LogLikelihood
{
    double nats = 0.0;
    double bits = 0.0;
};

/// sum_ijk n_ijk log theta-hat_ijk, with 0 log 0 = 0.
inline LogLikelihood log_likelihood(const CountTable& ct)
{
    double nats = 0.0;
    for (const auto& nc : ct.nodes)
        for (std::size_t j = 0; j < nc.configs; ++j) {
            if (nc.totals[j] == 0)
                continue;
            const double total = static_cast<double>(nc.totals[j]);
            for (std::size_t k = 0; k < nc.card; ++k)
                if (const auto n = nc.at(j, k))
                    nats += static_cast<double>(n) * std::log(static_cast<double>(n) / total);
        }
    return {nats, nats / std::log(2.0)};
}

inline LogLikelihood log_likelihood(const DiscreteDataset& data, const Dag& dag)
{
    return log_likelihood(counts(data, dag));
}

/// Free parameters sum_i ||Pi_i|| (||X_i|| - 1).
inline std::size_t parameter_count(const Dag& dag, std::span<const std::size_t> cards)
{
    std::size_t p = 0;
    for (NodeId i = 0; i < dag.size(); ++i)
        p += parent_configurations(dag, cards, i) * (cards[i] - 1);
    return p;
}

/// Bits for the structure and parameters:
/// sum log||X_i|| + sum (1 + |Pi_i|) log n + 1/2 log m * sum ||Pi_i|| (||X_i|| - 1).
inline double dl_net(const Dag& dag, std::span<const std::size_t> cards, std::size_t m)
{
    if (cards.size() != dag.size())
        throw SizeMismatch("dl_net: one cardinality per node is required");
    if (m == 0)
        throw EmptyData("dl_net: sample size must be at least 1");
    const double log_n = std::log2(static_cast<double>(dag.size()));
    double bits = 0.0;
    for (NodeId i = 0; i < dag.size(); ++i) {
        if (cards[i] == 0)
            throw DomainError("dl_net: cardinality must be at least 1");
        bits += std::log2(static_cast<double>(cards[i]));
        bits += (1.0 + static_cast<double>(dag.parents(i).size())) * log_n;
    }
    bits += 0.5 * std::log2(static_cast<double>(m)) *
            static_cast<double>(parameter_count(dag, cards));
    return bits;
}

/// Shannon code length of the data, -sum_rows log2 p-hat(row), evaluated row
/// by row from the plug-in factorised density.
inline double dl_data(const DiscreteDataset& data, const Dag& dag)
{
    const auto tt = mle_theta(counts(data, dag));
    double bits = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        double row_bits = 0.0;
        for (NodeId i = 0; i < dag.size(); ++i)
            row_bits -= std::log2(
                tt.nodes[i].at(parent_configuration(dag, data, i, r), data.value(r, i)));
        bits += row_bits;
    }
    return bits;
}

enum class Criterion
{
    ll,
    aic,
    bic,
    mdl
};

inline constexpr std::array<Criterion, 4> all_criteria{Criterion::ll, Criterion::aic,
                                                       Criterion::bic, Criterion::mdl};

inline std::string_view to_string(Criterion c)
{
    switch (c) {
    case Criterion::ll:
        return "ll";
    case Criterion::aic:
        return "aic";
    case Criterion::bic:
        return "bic";
    case Criterion::mdl:
        return "mdl";
    }
    return "?";
}

inline Criterion parse_criterion(std::string_view s)
{
    for (auto c : all_criteria)
        if (to_string(c) == s)
            return c;
    throw ParseError("unknown criterion '" + std::string(s) + "' (expected ll|aic|bic|mdl)");
}

/// Every score of one candidate graph.
struct NetworkScore
{
    Dag dag;
    double ll_nats = 0.0;
    double ll_bits = 0.0;
    std::size_t params = 0;
    double aic = 0.0;
    double bic = 0.0;
    double dl_net = 0.0;
    double dl_data = 0.0;
    double mdl = 0.0;

    /// Value as reported: ln L for LL, the criterion itself otherwise.
    double value(Criterion c) const
    {
        switch (c) {
        case Criterion::ll:
            return ll_nats;
        case Criterion::aic:
            return aic;
        case Criterion::bic:
            return bic;
        case Criterion::mdl:
            return mdl;
        }
        return 0.0;
    }

    /// Lower is better for every criterion.
    double objective(Criterion c) const { return c == Criterion::ll ? -ll_nats : value(c); }

    bool operator==(const NetworkScore&) const = default;
};

inline NetworkScore score_all(const DiscreteDataset& data, const Dag& dag)
{
    check_shape(data, dag);
    if (data.rows() == 0)
        throw EmptyData("cannot score an empty dataset");
    NetworkScore s;
    s.dag = dag;
    const auto ll = log_likelihood(data, dag);
    s.ll_nats = ll.nats;
    s.ll_bits = ll.bits;
    s.params = parameter_count(dag, data.cardinalities());
    const double p = static_cast<double>(s.params);
    const double m = static_cast<double>(data.rows());
    s.aic = -2.0 * ll.nats + 2.0 * p;
    s.bic = -2.0 * ll.nats + p * std::log(m);
    s.dl_net = mdlbn::dl_net(dag, data.cardinalities(), data.rows());
    s.dl_data = mdlbn::dl_data(data, dag);
    s.mdl = s.dl_net + s.dl_data;
    return s;
}

inline double score_network(const DiscreteDataset& data, const Dag& dag, Criterion c)
{
    return score_all(data, dag).value(c);
}

/// Relative tolerance under which two scores count as tied.
inline constexpr double score_tie_tolerance = 1e-9;

inline bool scores_tie(double a, double b)
{
    return std::abs(a - b) <= score_tie_tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

struct ScoreReport
{
    Criterion criterion = Criterion::mdl;
    std::size_t m = 0;
    std::vector<NetworkScore> candidates;
    /// Candidate indices best-first, one permutation per criterion (index by Criterion).
    std::array<std::vector<std::size_t>, 4> rankings;
    /// Candidates tied for the best score under `criterion`, grouped into
    /// Markov equivalence classes.
    std::vector<std::vector<std::size_t>> winners;

    const std::vector<std::size_t>& ranking(Criterion c) const
    {
        return rankings[static_cast<std::size_t>(c)];
    }

    std::vector<std::size_t> winner_set() const
    {
        std::vector<std::size_t> all;
        for (const auto& cls : winners)
            all.insert(all.end(), cls.begin(), cls.end());
        std::sort(all.begin(), all.end());
        return all;
    }

    bool operator==(const ScoreReport&) const = default;
};

/// Groups indices into Markov equivalence classes, preserving first-seen order.
inline std::vector<std::vector<std::size_t>> group_equivalent(const std::vector<Dag>& dags,
                                                              std::span<const std::size_t> idx)
{
    std::vector<std::vector<std::size_t>> classes;
    std::vector<EquivalenceKey> keys;
    for (auto i : idx) {
        auto key = equivalence_key(dags[i]);
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it == keys.end()) {
            keys.push_back(std::move(key));
            classes.push_back({i});
        } else {
            classes[static_cast<std::size_t>(it - keys.begin())].push_back(i);
        }
    }
    for (auto& cls : classes)
        std::sort(cls.begin(), cls.end());
    return classes;
}

/// Scores every candidate and picks the best set under `criterion`. Ties
/// keep candidate order.
inline ScoreReport recover(const DiscreteDataset& data, const std::vector<Dag>& candidates,
                           Criterion criterion)
{
    if (candidates.empty())
        throw DomainError("recover: no candidate graphs");
    ScoreReport rep;
    rep.criterion = criterion;
    rep.m = data.rows();
    rep.candidates.reserve(candidates.size());
    for (const auto& d : candidates)
        rep.candidates.push_back(score_all(data, d));

    for (auto c : all_criteria) {
        auto& order = rep.rankings[static_cast<std::size_t>(c)];
        order.resize(candidates.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rep.candidates[a].objective(c) < rep.candidates[b].objective(c);
        });
    }

    const auto& order = rep.ranking(criterion);
    const double best = rep.candidates[order.front()].objective(criterion);
    std::vector<std::size_t> best_set;
    for (auto i : order)
        if (scores_tie(rep.candidates[i].objective(criterion), best))
            best_set.push_back(i);
    std::sort(best_set.begin(), best_set.end());
    rep.winners = group_equivalent(candidates, best_set);
    return rep;
}

} // namespace mdlbn
