#pragma once

#include <mdlbn/errors.hpp>
#include <mdlbn/graph.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mdlbn
{

/// Values as read from a CSV file, before relabeling.
struct RawDataset
{
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;

    std::size_t cols() const { return names.size(); }
    std::size_t size() const { return rows.size(); }
};

/// Sorted distinct raw values of one column; value i maps to rank i + 1.
struct ValueMap
{
    std::vector<double> values;

    std::size_t cardinality() const { return values.size(); }

    /// 0-based rank of a raw value present in the map.
    std::uint32_t rank(double raw) const
    {
        auto it = std::lower_bound(values.begin(), values.end(), raw);
        if (it == values.end() || *it != raw)
            throw DomainError("value not present in the value map");
        return static_cast<std::uint32_t>(it - values.begin());
    }
};

/// Column-major table of discrete values. Values are 0-based internally
/// (0 .. cardinality-1); CSV output adds one.
class DiscreteDataset
{
public:
    DiscreteDataset() = default;

    DiscreteDataset(std::vector<std::size_t> cardinalities,
                    std::vector<std::vector<std::uint32_t>> columns)
        : cards_(std::move(cardinalities)), cols_(std::move(columns))
    {
        if (cards_.size() != cols_.size())
            throw SizeMismatch("one cardinality per column is required");
        const std::size_t m = cols_.empty() ? 0 : cols_.front().size();
        for (std::size_t i = 0; i < cols_.size(); ++i) {
            if (cards_[i] == 0)
                throw DomainError("cardinality must be at least 1");
            if (cols_[i].size() != m)
                throw SizeMismatch("columns have different lengths");
            for (auto v : cols_[i])
                if (v >= cards_[i])
                    throw DomainError("value outside the cardinality of column " +
                                      std::to_string(i + 1));
        }
    }

    std::size_t rows() const { return cols_.empty() ? 0 : cols_.front().size(); }
    std::size_t cols() const { return cols_.size(); }

    std::size_t cardinality(NodeId i) const { return cards_.at(i); }
    std::span<const std::size_t> cardinalities() const { return cards_; }

    std::span<const std::uint32_t> column(NodeId i) const { return cols_.at(i); }
    std::uint32_t value(std::size_t row, NodeId col) const { return cols_[col][row]; }

    /// Copy with one column replaced.
    DiscreteDataset with_column(NodeId i, std::vector<std::uint32_t> values,
                                std::size_t cardinality) const
    {
        auto cards = cards_;
        auto cols = cols_;
        cards.at(i) = cardinality;
        cols.at(i) = std::move(values);
        return DiscreteDataset(std::move(cards), std::move(cols));
    }

    /// Copy with rows reordered; perm[r] is the source row of output row r.
    DiscreteDataset permuted(std::span<const std::size_t> perm) const
    {
        auto cols = cols_;
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < perm.size(); ++r)
                cols[c][r] = cols_[c][perm[r]];
        return DiscreteDataset(cards_, std::move(cols));
    }

    bool operator==(const DiscreteDataset&) const = default;

private:
    std::vector<std::size_t> cards_;
    std::vector<std::vector<std::uint32_t>> cols_;
};

/// Replaces each column's values by their rank among the column's distinct
/// values. Cardinality becomes the number of distinct values.
inline std::pair<DiscreteDataset, std::vector<ValueMap>> relabel(const RawDataset& raw)
{
    const std::size_t n = raw.cols();
    const std::size_t m = raw.size();
    if (m == 0)
        throw EmptyData("dataset has no rows");

    std::vector<ValueMap> maps(n);
    std::vector<std::vector<std::uint32_t>> cols(n, std::vector<std::uint32_t>(m));
    std::vector<std::size_t> cards(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto& vals = maps[c].values;
        vals.reserve(m);
        for (const auto& row : raw.rows) {
            if (row.size() != n)
                throw SizeMismatch("ragged row in raw dataset");
            vals.push_back(row[c]);
        }
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t r = 0; r < m; ++r)
            cols[c][r] = maps[c].rank(raw.rows[r][c]);
        cards[c] = vals.size();
    }
    return {DiscreteDataset(std::move(cards), std::move(cols)), std::move(maps)};
}

/// Number of parent configurations ||Pi_i||; 1 for a parentless node.
inline std::size_t parent_configurations(const Dag& dag, std::span<const std::size_t> cards,
                                         NodeId node)
{
    std::size_t q = 1;
    for (NodeId p : dag.parents(node))
        q *= cards[p];
    return q;
}

/// Mixed-radix parent configuration index, lowest-indexed parent fastest.
inline std::size_t parent_configuration(const Dag& dag, const DiscreteDataset& data, NodeId node,
                                        std::size_t row)
{
    std::size_t j = 0, stride = 1;
    for (NodeId p : dag.parents(node)) {
        j += data.value(row, p) * stride;
        stride *= data.cardinality(p);
    }
    return j;
}

/// n_ijk for one node, rows indexed by parent configuration.
struct NodeCounts
{
    std::size_t configs = 1;
    std::size_t card = 1;
    std::vector<std::uint64_t> n;      // configs x card, row-major
    std::vector<std::uint64_t> totals; // n_ij.

    std::uint64_t at(std::size_t j, std::size_t k) const { return n[j * card + k]; }
};

struct CountTable
{
    std::size_t m = 0;
    std::vector<NodeCounts> nodes;
};

inline void check_shape(const DiscreteDataset& data, const Dag& dag)
{
    if (data.cols() != dag.size())
        throw SizeMismatch("dataset has " + std::to_string(data.cols()) +
                           " columns but the graph has " + std::to_string(dag.size()) + " nodes");
}

inline CountTable counts(const DiscreteDataset& data, const Dag& dag)
{
    check_shape(data, dag);
    CountTable ct;
    ct.m = data.rows();
    ct.nodes.resize(dag.size());
    for (NodeId i = 0; i < dag.size(); ++i) {
        auto& nc = ct.nodes[i];
        nc.card = data.cardinality(i);
        nc.configs = parent_configurations(dag, data.cardinalities(), i);
        nc.n.assign(nc.configs * nc.card, 0);
        nc.totals.assign(nc.configs, 0);
        const auto col = data.column(i);
        for (std::size_t r = 0; r < ct.m; ++r) {
            const auto j = parent_configuration(dag, data, i, r);
            ++nc.n[j * nc.card + col[r]];
            ++nc.totals[j];
        }
    }
    return ct;
}

} // namespace mdlbn
