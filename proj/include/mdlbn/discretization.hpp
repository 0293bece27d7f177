#pragma once

#include <mdlbn/dataset.hpp>
#include <mdlbn/errors.hpp>
#include <mdlbn/graph.hpp>
#include <mdlbn/information.hpp>
#include <mdlbn/joint.hpp>
#include <mdlbn/scoring.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mdlbn
{

/// A discretization of one node: the retained thresholds among the m1 - 1
/// gaps between its ordered distinct values. Threshold r separates the r-th
/// and (r+1)-th values (1-based gap positions), so r values lie below it.
class Policy
{
public:
    Policy() = default;

    Policy(NodeId node, std::size_t m1, std::vector<std::size_t> thresholds)
        : node_(node), m1_(m1), thresholds_(std::move(thresholds))
    {
        if (m1_ == 0)
            throw PolicyMismatch("policy needs at least one value");
        for (std::size_t i = 0; i < thresholds_.size(); ++i) {
            const auto r = thresholds_[i];
            if (r < 1 || r >= m1_)
                throw PolicyMismatch("threshold " + std::to_string(r) + " outside 1.." +
                                     std::to_string(m1_ - 1));
            if (i > 0 && thresholds_[i - 1] >= r)
                throw PolicyMismatch("thresholds must be strictly increasing");
        }
    }

    /// Every gap kept: no discretization at all.
    static Policy full(NodeId node, std::size_t m1)
    {
        std::vector<std::size_t> t;
        for (std::size_t r = 1; r < m1; ++r)
            t.push_back(r);
        return Policy(node, m1, std::move(t));
    }

    /// No gaps kept: every value maps to 1.
    static Policy single_block(NodeId node, std::size_t m1) { return Policy(node, m1, {}); }

    /// Policy whose threshold set is the bit pattern of `mask` (bit r-1 for gap r).
    static Policy from_mask(NodeId node, std::size_t m1, std::uint64_t mask)
    {
        std::vector<std::size_t> t;
        for (std::size_t r = 1; r < m1; ++r)
            if (mask >> (r - 1) & 1u)
                t.push_back(r);
        return Policy(node, m1, std::move(t));
    }

    NodeId node() const { return node_; }
    std::size_t m1() const { return m1_; }
    std::size_t k() const { return thresholds_.size() + 1; }
    const std::vector<std::size_t>& thresholds() const { return thresholds_; }

    bool has(std::size_t r) const
    {
        return std::binary_search(thresholds_.begin(), thresholds_.end(), r);
    }

    Policy without(std::size_t r) const
    {
        auto t = thresholds_;
        t.erase(std::remove(t.begin(), t.end(), r), t.end());
        return Policy(node_, m1_, std::move(t));
    }

    /// Block (0-based) of every 0-based value.
    std::vector<std::uint32_t> mapping() const
    {
        std::vector<std::uint32_t> map(m1_);
        std::uint32_t block = 0;
        for (std::size_t v = 0; v < m1_; ++v) {
            map[v] = block;
            if (has(v + 1))
                ++block;
        }
        return map;
    }

    /// Display form, e.g. "12|345|6". Values above 9 are comma separated.
    std::string bar_notation() const
    {
        std::string out;
        const bool wide = m1_ > 9;
        for (std::size_t v = 1; v <= m1_; ++v) {
            if (v > 1)
                out += has(v - 1) ? "|" : (wide ? "," : "");
            out += std::to_string(v);
        }
        return out;
    }

    bool operator==(const Policy&) const = default;

private:
    NodeId node_ = 0;
    std::size_t m1_ = 1;
    std::vector<std::size_t> thresholds_;
};

/// Maps the node's column to block indices; the node's cardinality becomes k.
inline DiscreteDataset apply_policy(const DiscreteDataset& data, const Policy& p)
{
    if (p.node() >= data.cols())
        throw PolicyMismatch("policy node outside the dataset");
    if (data.cardinality(p.node()) != p.m1())
        throw PolicyMismatch("policy covers " + std::to_string(p.m1()) + " values but node " +
                             std::to_string(p.node() + 1) + " has " +
                             std::to_string(data.cardinality(p.node())));
    const auto map = p.mapping();
    const auto col = data.column(p.node());
    std::vector<std::uint32_t> out(col.size());
    for (std::size_t r = 0; r < col.size(); ++r)
        out[r] = map[col[r]];
    return data.with_column(p.node(), std::move(out), p.k());
}

/// The joint table with the policy's node regrouped into its blocks.
inline JointTable apply_policy(const JointTable& joint, const Policy& p)
{
    if (joint.cardinality(p.node()) != p.m1())
        throw PolicyMismatch("policy does not match the node's cardinality in the joint table");
    return joint.regroup(p.node(), p.mapping(), p.k());
}

/// Bits to encode which policy with k1 values was chosen:
/// (m1 - 1) H((k1 - 1) / (m1 - 1)).
inline double dl_dp(std::size_t m1, std::size_t k1)
{
    if (k1 < 1 || k1 > m1)
        throw DomainError("dl_dp: need 1 <= k1 <= m1");
    if (m1 == 1)
        return 0.0;
    const double gaps = static_cast<double>(m1 - 1);
    return gaps * entropy_h(static_cast<double>(k1 - 1) / gaps);
}

/// Bits to recover the original values from their blocks,
/// -sum_rows log2 P-hat(X | X*).
inline double dl_rec(std::span<const std::uint32_t> original, const Policy& p)
{
    std::vector<std::uint64_t> per_value(p.m1(), 0);
    for (auto v : original) {
        if (v >= p.m1())
            throw PolicyMismatch("dl_rec: value outside the policy's range");
        ++per_value[v];
    }
    const auto map = p.mapping();
    std::vector<std::uint64_t> per_block(p.k(), 0);
    for (std::size_t v = 0; v < p.m1(); ++v)
        per_block[map[v]] += per_value[v];
    double bits = 0.0;
    for (std::size_t v = 0; v < p.m1(); ++v)
        if (per_value[v] > 0)
            bits -= static_cast<double>(per_value[v]) *
                    std::log2(static_cast<double>(per_value[v]) /
                              static_cast<double>(per_block[map[v]]));
    return bits;
}

inline double dl_rec(const DiscreteDataset& original, const Policy& p)
{
    if (original.cardinality(p.node()) != p.m1())
        throw PolicyMismatch("dl_rec: policy does not match the original column");
    return dl_rec(original.column(p.node()), p);
}

/// Nodes whose joint distribution the local score depends on: the node, its
/// parents, its children and the children's other parents. Sorted.
inline std::vector<NodeId> local_variables(const Dag& dag, NodeId node)
{
    std::vector<NodeId> vars{node};
    for (NodeId p : dag.parents(node))
        vars.push_back(p);
    for (NodeId c : dag.children(node)) {
        vars.push_back(c);
        for (NodeId p : dag.parents(c))
            vars.push_back(p);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

namespace detail
{

/// I(X_node, Pi_node) + sum over children j of I(X_j, Pi_j), on a table whose
/// node axis is already discretized.
inline double connected_information(const JointTable& joint, const Dag& dag, NodeId node)
{
    const auto ps = dag.parents(node);
    const NodeId self[] = {node};
    double info = mutual_information(joint, self, ps);
    for (NodeId c : dag.children(node)) {
        const NodeId child[] = {c};
        info += mutual_information(joint, child, dag.parents(c));
    }
    return info;
}

inline void check_local(const JointTable& joint, const Dag& dag, NodeId node)
{
    if (node >= dag.size())
        throw SizeMismatch("node outside the graph");
    for (NodeId v : local_variables(dag, node))
        if (!joint.contains(v))
            throw SpecMismatch("joint table lacks variable " + std::to_string(v + 1) +
                               " needed by the local score of node " + std::to_string(node + 1));
}

} // namespace detail

/// The information part of the local score, evaluated after the policy is
/// applied to the node.
inline double info_sum(const JointTable& joint, const Dag& dag, NodeId node, const Policy& p)
{
    detail::check_local(joint, dag, node);
    if (p.node() != node)
        throw PolicyMismatch("policy belongs to another node");
    return detail::connected_information(apply_policy(joint, p), dag, node);
}

inline double info_sum(const DiscreteDataset& data, const Dag& dag, NodeId node, const Policy& p)
{
    check_shape(data, dag);
    return info_sum(joint_table(data, local_variables(dag, node)), dag, node, p);
}

/// Local description length of the node under policy p:
///   (m1-1) H((k1-1)/(m1-1)) + log k1
///   + 1/2 log m [ ||Pi_1|| (k1-1) + sum_j ||Pi_j*|| (||X_j||-1) ]
///   - m [ I(X1*, Pi_1) + sum_j I(X_j, Pi_j*) ]
/// where j runs over the node's children and Pi_j* counts the node with k1 values.
inline double dl_local(const JointTable& joint, const Dag& dag, NodeId node, const Policy& p,
                       double m)
{
    detail::check_local(joint, dag, node);
    if (p.node() != node)
        throw PolicyMismatch("policy belongs to another node");
    if (!(m >= 1.0))
        throw DomainError("dl_local: sample size must be at least 1");

    const double k1 = static_cast<double>(p.k());
    double parent_configs = 1.0;
    for (NodeId q : dag.parents(node))
        parent_configs *= static_cast<double>(joint.cardinality(q));
    double params = parent_configs * (k1 - 1.0);
    for (NodeId c : dag.children(node)) {
        double configs = 1.0;
        for (NodeId q : dag.parents(c))
            configs *= q == node ? k1 : static_cast<double>(joint.cardinality(q));
        params += configs * (static_cast<double>(joint.cardinality(c)) - 1.0);
    }

    const double info = detail::connected_information(apply_policy(joint, p), dag, node);
    return dl_dp(p.m1(), p.k()) + std::log2(k1) + 0.5 * std::log2(m) * params - m * info;
}

inline double dl_local(const DiscreteDataset& data, const Dag& dag, NodeId node, const Policy& p)
{
    check_shape(data, dag);
    return dl_local(joint_table(data, local_variables(dag, node)), dag, node, p,
                    static_cast<double>(data.rows()));
}

/// Full discretization score DL_DP + DL_net* + DL_data* + DL_rec. Differs
/// from dl_local by a policy-independent constant.
inline double dl_star(const DiscreteDataset& data, const Dag& dag, NodeId node, const Policy& p)
{
    check_shape(data, dag);
    if (p.node() != node)
        throw PolicyMismatch("dl_star: policy is for a different node");
    const auto disc = apply_policy(data, p);
    return dl_dp(p.m1(), p.k()) + dl_net(dag, disc.cardinalities(), disc.rows()) +
           dl_data(disc, dag) + dl_rec(data, p);
}

/// Evaluates dl_local for one node on a fixed joint table, counting calls.
class LocalScorer
{
public:
    LocalScorer(JointTable joint, Dag dag, NodeId node, double m)
        : joint_(std::move(joint)), dag_(std::move(dag)), node_(node), m_(m)
    {
        detail::check_local(joint_, dag_, node_);
    }

    LocalScorer(const DiscreteDataset& data, const Dag& dag, NodeId node)
        : LocalScorer((check_shape(data, dag), joint_table(data, local_variables(dag, node))), dag,
                      node, static_cast<double>(data.rows()))
    {
    }

    double operator()(const Policy& p) const
    {
        ++evaluations_;
        return dl_local(joint_, dag_, node_, p, m_);
    }

    NodeId node() const { return node_; }
    std::size_t m1() const { return joint_.cardinality(node_); }
    double sample_size() const { return m_; }
    std::size_t evaluations() const { return evaluations_; }
    const JointTable& joint() const { return joint_; }
    const Dag& dag() const { return dag_; }

private:
    JointTable joint_;
    Dag dag_;
    NodeId node_;
    double m_;
    mutable std::size_t evaluations_ = 0;
};

enum class RemovalMode
{
    /// Compare every single removal with the full baseline, then drop all
    /// qualifying thresholds at once.
    simultaneous,
    /// Walk the gaps in order, dropping a threshold when its removal does not
    /// worsen the current policy and re-baselining after each drop.
    sequential
};

struct TopDownResult
{
    Policy policy;
    double baseline = 0.0;              // DL_local with every threshold
    std::vector<double> removal_scores; // entry r-1: DL_local with gap r removed
    std::vector<Policy> removal_policies; // entry r-1: the policy that was scored
    std::size_t evaluations = 0;
};

/// Single-threshold top-down search. Exactly m1 evaluations of dl_local.
inline TopDownResult top_down_search(const LocalScorer& score,
                                     RemovalMode mode = RemovalMode::simultaneous)
{
    const auto start = score.evaluations();
    const std::size_t m1 = score.m1();
    TopDownResult res;
    const auto full = Policy::full(score.node(), m1);
    res.baseline = score(full);
    res.removal_scores.resize(m1 - 1);
    res.removal_policies.resize(m1 - 1);

    if (mode == RemovalMode::simultaneous) {
        std::vector<std::size_t> kept;
        for (std::size_t r = 1; r < m1; ++r) {
            res.removal_policies[r - 1] = full.without(r);
            res.removal_scores[r - 1] = score(res.removal_policies[r - 1]);
            if (!(res.removal_scores[r - 1] <= res.baseline))
                kept.push_back(r);
        }
        res.policy = Policy(score.node(), m1, std::move(kept));
    } else {
        Policy current = full;
        double current_score = res.baseline;
        for (std::size_t r = 1; r < m1; ++r) {
            auto candidate = current.without(r);
            const double s = score(candidate);
            res.removal_scores[r - 1] = s;
            res.removal_policies[r - 1] = candidate;
            if (s <= current_score) {
                current = std::move(candidate);
                current_score = s;
            }
        }
        res.policy = std::move(current);
    }
    res.evaluations = score.evaluations() - start;
    return res;
}

inline TopDownResult top_down_search(const JointTable& joint, const Dag& dag, NodeId node,
                                     double m, RemovalMode mode = RemovalMode::simultaneous)
{
    return top_down_search(LocalScorer(joint, dag, node, m), mode);
}

inline TopDownResult top_down_search(const DiscreteDataset& data, const Dag& dag, NodeId node,
                                     RemovalMode mode = RemovalMode::simultaneous)
{
    return top_down_search(LocalScorer(data, dag, node), mode);
}

/// Largest m1 accepted by exhaustive_search (2^15 policies).
inline constexpr std::size_t max_exhaustive_values = 16;

struct ExhaustiveResult
{
    Policy policy;
    double score = 0.0;
    std::size_t evaluations = 0;
};

/// Minimises dl_local over all 2^(m1-1) policies. Ties (relative 1e-12) go
/// to fewer thresholds, then to the lexicographically smallest threshold set.
inline ExhaustiveResult exhaustive_search(const LocalScorer& score)
{
    const std::size_t m1 = score.m1();
    if (m1 > max_exhaustive_values)
        throw TooLarge("exhaustive_search: m1 = " + std::to_string(m1) + " exceeds the cap of " +
                       std::to_string(max_exhaustive_values));
    const auto start = score.evaluations();
    std::optional<ExhaustiveResult> best;
    const std::uint64_t count = std::uint64_t{1} << (m1 - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        auto p = Policy::from_mask(score.node(), m1, mask);
        const double s = score(p);
        if (!best) {
            best = ExhaustiveResult{std::move(p), s, 0};
            continue;
        }
        const double tol = 1e-12 * std::max({1.0, std::abs(s), std::abs(best->score)});
        bool better = s < best->score - tol;
        if (!better && std::abs(s - best->score) <= tol) {
            const auto& a = p.thresholds();
            const auto& b = best->policy.thresholds();
            better = a.size() < b.size() || (a.size() == b.size() && a < b);
        }
        if (better)
            best = ExhaustiveResult{std::move(p), s, 0};
    }
    best->evaluations = score.evaluations() - start;
    return *best;
}

inline ExhaustiveResult exhaustive_search(const JointTable& joint, const Dag& dag, NodeId node,
                                          double m)
{
    return exhaustive_search(LocalScorer(joint, dag, node, m));
}

inline ExhaustiveResult exhaustive_search(const DiscreteDataset& data, const Dag& dag,
                                          NodeId node)
{
    return exhaustive_search(LocalScorer(data, dag, node));
}

struct CycleResult
{
    std::vector<Policy> policies; // same order as the requested nodes
    std::size_t passes = 0;
    bool converged = false;
};

/// Round-robin top-down search over several nodes. Each node is searched on
/// its original values with every other listed node held at its current
/// policy. Stops after a pass that changes nothing, or after max_passes.
inline CycleResult cycle_discretize(const DiscreteDataset& data, const Dag& dag,
                                    const std::vector<NodeId>& nodes, std::size_t max_passes,
                                    RemovalMode mode = RemovalMode::simultaneous)
{
    check_shape(data, dag);
    if (max_passes < 1)
        throw DomainError("cycle_discretize: max_passes must be at least 1");
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        if (nodes[a] >= data.cols())
            throw SizeMismatch("cycle_discretize: node outside the dataset");
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            if (nodes[a] == nodes[b])
                throw DomainError("cycle_discretize: nodes must be distinct");
    }

    CycleResult res;
    for (NodeId u : nodes)
        res.policies.push_back(Policy::full(u, data.cardinality(u)));

    while (res.passes < max_passes) {
        ++res.passes;
        bool changed = false;
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            DiscreteDataset working = data;
            for (std::size_t b = 0; b < nodes.size(); ++b)
                if (b != a)
                    working = apply_policy(working, res.policies[b]);
            auto found = top_down_search(working, dag, nodes[a], mode).policy;
            if (found != res.policies[a]) {
                res.policies[a] = std::move(found);
                changed = true;
            }
        }
        // with one node nothing else can move, so a single pass settles it
        if (!changed || nodes.size() <= 1) {
            res.converged = true;
            break;
        }
    }
    return res;
}

/// Leading (policy-size) part of dl_local as a function of k1:
/// D(k1) = (m1-1) H((k1-1)/(m1-1)) + log k1 + 1/2 log m (c k1 - ||Pi_1||).
struct PenaltyCurve
{
    std::size_t m1 = 1;
    double m = 1.0;
    double c = 0.0;
    double parent_configs = 1.0;
    std::vector<double> values; // entry k1-1
    bool strictly_increasing = false;
};

/// Linear coefficient c of the parameter bracket written as c k1 - ||Pi_1||:
/// c = ||Pi_1|| + sum over children j of (||X_j|| - 1) * product of the
/// cardinalities of j's other parents.
inline double penalty_coefficient(const Dag& dag, NodeId node, std::span<const std::size_t> cards)
{
    if (cards.size() != dag.size())
        throw SizeMismatch("penalty_coefficient: one cardinality per node is required");
    double c = static_cast<double>(parent_configurations(dag, cards, node));
    for (NodeId j : dag.children(node)) {
        double others = 1.0;
        for (NodeId q : dag.parents(j))
            if (q != node)
                others *= static_cast<double>(cards[q]);
        c += (static_cast<double>(cards[j]) - 1.0) * others;
    }
    return c;
}

inline PenaltyCurve penalty_curve(double c, double parent_configs, std::size_t m1, double m)
{
    if (m1 < 1)
        throw DomainError("penalty_curve: m1 must be at least 1");
    PenaltyCurve pc;
    pc.m1 = m1;
    pc.m = m;
    pc.c = c;
    pc.parent_configs = parent_configs;
    pc.values.reserve(m1);
    for (std::size_t k = 1; k <= m1; ++k) {
        const double kd = static_cast<double>(k);
        pc.values.push_back(dl_dp(m1, k) + std::log2(kd) +
                            0.5 * std::log2(m) * (c * kd - parent_configs));
    }
    pc.strictly_increasing = true;
    for (std::size_t k = 1; k < m1; ++k)
        if (!(pc.values[k] > pc.values[k - 1]))
            pc.strictly_increasing = false;
    return pc;
}

inline PenaltyCurve penalty_curve(const Dag& dag, NodeId node, std::span<const std::size_t> cards,
                                  std::size_t m1, double m)
{
    if (node >= dag.size())
        throw SizeMismatch("penalty_curve: node outside the graph");
    return penalty_curve(penalty_coefficient(dag, node, cards),
                         static_cast<double>(parent_configurations(dag, cards, node)), m1, m);
}

} // namespace mdlbn
