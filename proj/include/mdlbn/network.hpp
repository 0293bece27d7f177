#pragma once

#include <mdlbn/dataset.hpp>
#include <mdlbn/errors.hpp>
#include <mdlbn/graph.hpp>
#include <mdlbn/joint.hpp>
#include <mdlbn/rng.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace mdlbn
{

/// A fully specified discrete Bayesian network.
///
/// cpt[i] holds ||Pi_i|| rows of length ||X_i||, flattened row-major; the row
/// index is the mixed-radix parent configuration (lowest-indexed parent
/// fastest).
struct BnSpec
{
    Dag dag;
    std::vector<std::string> names;
    std::vector<std::size_t> cardinalities;
    std::vector<std::vector<double>> cpt;

    std::size_t size() const { return dag.size(); }

    std::span<const double> row(NodeId i, std::size_t config) const
    {
        return std::span<const double>(cpt[i]).subspan(config * cardinalities[i],
                                                        cardinalities[i]);
    }

    void validate() const
    {
        const std::size_t n = dag.size();
        if (cardinalities.size() != n || cpt.size() != n)
            throw SpecMismatch("network spec: one cardinality and one CPT per node");
        if (!names.empty() && names.size() != n)
            throw SpecMismatch("network spec: one name per node");
        for (NodeId i = 0; i < n; ++i) {
            if (cardinalities[i] == 0)
                throw SpecMismatch("network spec: cardinality must be at least 1");
            const auto q = parent_configurations(dag, cardinalities, i);
            if (cpt[i].size() != q * cardinalities[i])
                throw SpecMismatch("network spec: node " + std::to_string(i + 1) +
                                   " needs " + std::to_string(q) + " CPT rows of length " +
                                   std::to_string(cardinalities[i]));
            for (std::size_t j = 0; j < q; ++j) {
                double sum = 0.0;
                for (double x : row(i, j)) {
                    if (!(x >= 0.0))
                        throw SpecMismatch("network spec: negative probability");
                    sum += x;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    throw SpecMismatch("network spec: CPT row of node " + std::to_string(i + 1) +
                                       " does not sum to 1");
            }
        }
    }
};

/// Forward sampling in topological order. One uniform draw per (row, node),
/// rows outer, nodes in topological order inner.
inline DiscreteDataset sample(const BnSpec& spec, std::size_t m, std::uint64_t seed)
{
    spec.validate();
    if (m == 0)
        throw EmptyData("sample size must be at least 1");
    const std::size_t n = spec.size();
    Rng rng(seed);
    std::vector<std::vector<std::uint32_t>> cols(n, std::vector<std::uint32_t>(m));
    const auto order = spec.dag.topological_order();
    for (std::size_t r = 0; r < m; ++r) {
        for (NodeId i : order) {
            std::size_t j = 0, stride = 1;
            for (NodeId p : spec.dag.parents(i)) {
                j += cols[p][r] * stride;
                stride *= spec.cardinalities[p];
            }
            cols[i][r] = static_cast<std::uint32_t>(rng.categorical(spec.row(i, j)));
        }
    }
    return DiscreteDataset(spec.cardinalities, std::move(cols));
}

/// Exact joint distribution of a network over all of its nodes (in node order).
inline JointTable joint_distribution(const BnSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.size();
    std::size_t cells = 1;
    for (auto c : spec.cardinalities)
        cells *= c;
    std::vector<double> p(cells);
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        double prob = 1.0;
        for (NodeId i = 0; i < n; ++i) {
            std::size_t j = 0, stride = 1;
            for (NodeId par : spec.dag.parents(i)) {
                j += digit[par] * stride;
                stride *= spec.cardinalities[par];
            }
            prob *= spec.row(i, j)[digit[i]];
        }
        p[cell] = prob;
        for (std::size_t a = 0; a < n; ++a) {
            if (++digit[a] < spec.cardinalities[a])
                break;
            digit[a] = 0;
        }
    }
    std::vector<NodeId> vars(n);
    std::iota(vars.begin(), vars.end(), NodeId{0});
    return JointTable(std::move(vars), spec.cardinalities, std::move(p));
}

/// Replacement scheme for one node: original value v becomes one of
/// groups[v].size() consecutive new values with probabilities groups[v].
struct ExplosionSpec
{
    NodeId node = 0;
    std::vector<std::vector<double>> groups;

    /// Cardinality after explosion.
    std::size_t exploded_cardinality() const
    {
        std::size_t total = 0;
        for (const auto& g : groups)
            total += g.size();
        return total;
    }

    /// First new value of each group.
    std::vector<std::uint32_t> offsets() const
    {
        std::vector<std::uint32_t> out;
        std::uint32_t at = 0;
        for (const auto& g : groups) {
            out.push_back(at);
            at += static_cast<std::uint32_t>(g.size());
        }
        return out;
    }

    /// Original value of every exploded value.
    std::vector<std::uint32_t> collapse_map() const
    {
        std::vector<std::uint32_t> out;
        for (std::size_t v = 0; v < groups.size(); ++v)
            out.insert(out.end(), groups[v].size(), static_cast<std::uint32_t>(v));
        return out;
    }

    void validate(std::size_t cardinality) const
    {
        if (groups.size() != cardinality)
            throw SpecMismatch("explosion spec has " + std::to_string(groups.size()) +
                               " groups but the node has " + std::to_string(cardinality) +
                               " values");
        for (const auto& g : groups) {
            if (g.empty())
                throw SpecMismatch("explosion group is empty");
            double sum = 0.0;
            for (double q : g) {
                if (!(q >= 0.0))
                    throw SpecMismatch("explosion probability is negative");
                sum += q;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw SpecMismatch("explosion group probabilities do not sum to 1");
        }
    }
};

/// Replaces each instance of the node's value v by a member of group v. One
/// uniform draw per row.
inline DiscreteDataset explode(const DiscreteDataset& data, const ExplosionSpec& spec,
                               std::uint64_t seed)
{
    if (spec.node >= data.cols())
        throw SpecMismatch("explosion node outside the dataset");
    spec.validate(data.cardinality(spec.node));
    Rng rng(seed);
    const auto offsets = spec.offsets();
    const auto col = data.column(spec.node);
    std::vector<std::uint32_t> out(col.size());
    for (std::size_t r = 0; r < col.size(); ++r) {
        const auto v = col[r];
        out[r] = offsets[v] + static_cast<std::uint32_t>(rng.categorical(spec.groups[v]));
    }
    return data.with_column(spec.node, std::move(out), spec.exploded_cardinality());
}

/// Analytic explosion of a joint table: p~(member l of v, rest) = q(v, l) p(v, rest).
inline JointTable explode_joint(const JointTable& joint, const ExplosionSpec& spec)
{
    if (!joint.contains(spec.node))
        throw SpecMismatch("explosion node is not a variable of the joint table");
    const auto ax = joint.axis(spec.node);
    const auto old_card = joint.cardinalities()[ax];
    spec.validate(old_card);

    const std::size_t new_card = spec.exploded_cardinality();
    const std::size_t inner = joint.stride(ax);
    const std::size_t outer = joint.cells() / (inner * old_card);
    const auto offsets = spec.offsets();
    const auto src = joint.probabilities();

    std::vector<double> p(inner * new_card * outer, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t v = 0; v < old_card; ++v)
            for (std::size_t l = 0; l < spec.groups[v].size(); ++l)
                for (std::size_t i = 0; i < inner; ++i)
                    p[(o * new_card + offsets[v] + l) * inner + i] =
                        spec.groups[v][l] * src[(o * old_card + v) * inner + i];

    std::vector<NodeId> vars(joint.vars().begin(), joint.vars().end());
    std::vector<std::size_t> cards(joint.cardinalities().begin(), joint.cardinalities().end());
    cards[ax] = new_card;
    return JointTable(std::move(vars), std::move(cards), std::move(p));
}

} // namespace mdlbn
