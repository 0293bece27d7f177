#pragma once

#include <mdlbn/errors.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdlbn
{

/// Nodes are 0-based inside the library; text formats and reports are 1-based.
using NodeId = std::size_t;

struct Edge
{
    NodeId parent;
    NodeId child;

    auto operator<=>(const Edge&) const = default;
};

/// Directed acyclic graph stored as sorted parent and child lists.
class Dag
{
public:
    Dag() = default;

    /// Throws InvalidEdge on self-loops, out-of-range or duplicate edges and
    /// CycleError if the edges contain a directed cycle.
    Dag(std::size_t n, std::span<const Edge> edges) : parents_(n), children_(n)
    {
        if (n == 0)
            throw InvalidEdge("a DAG needs at least one node");
        for (const auto& e : edges) {
            if (e.parent >= n || e.child >= n)
                throw InvalidEdge("edge endpoint out of range: " + describe(e));
            if (e.parent == e.child)
                throw InvalidEdge("self-loop on node " + std::to_string(e.parent + 1));
            auto& ps = parents_[e.child];
            if (std::find(ps.begin(), ps.end(), e.parent) != ps.end())
                throw InvalidEdge("duplicate edge " + describe(e));
            ps.push_back(e.parent);
            children_[e.parent].push_back(e.child);
        }
        for (auto& ps : parents_)
            std::sort(ps.begin(), ps.end());
        for (auto& cs : children_)
            std::sort(cs.begin(), cs.end());
        order_ = compute_order();
        if (order_.size() != n)
            throw CycleError("edges contain a directed cycle");
    }

    Dag(std::size_t n, std::initializer_list<Edge> edges)
        : Dag(n, std::span<const Edge>(edges.begin(), edges.size()))
    {
    }

    std::size_t size() const { return parents_.size(); }

    std::span<const NodeId> parents(NodeId i) const { return parents_.at(i); }
    std::span<const NodeId> children(NodeId i) const { return children_.at(i); }

    bool has_edge(NodeId parent, NodeId child) const
    {
        const auto& ps = parents_.at(child);
        return std::binary_search(ps.begin(), ps.end(), parent);
    }

    bool adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }

    /// True if the node has at least one parent or child.
    bool connected(NodeId i) const { return !parents_.at(i).empty() || !children_.at(i).empty(); }

    std::size_t edge_count() const
    {
        std::size_t total = 0;
        for (const auto& ps : parents_)
            total += ps.size();
        return total;
    }

    /// Edges sorted by (parent, child).
    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        for (NodeId p = 0; p < size(); ++p)
            for (NodeId c : children_[p])
                out.push_back({p, c});
        return out;
    }

    /// A topological order; parents always precede children.
    std::span<const NodeId> topological_order() const { return order_; }

    /// Bit (i * (n - 1) + j') set for edge i -> j, where j' skips the diagonal.
    /// Defines the canonical ordering of enumerated DAGs.
    std::uint64_t adjacency_mask() const
    {
        const std::size_t n = size();
        if (n * (n - 1) > 64)
            throw TooLarge("adjacency mask needs n(n-1) <= 64");
        std::uint64_t mask = 0;
        for (const auto& e : edges())
            mask |= std::uint64_t{1} << pair_bit(n, e.parent, e.child);
        return mask;
    }

    static std::size_t pair_bit(std::size_t n, NodeId from, NodeId to)
    {
        return from * (n - 1) + (to < from ? to : to - 1);
    }

    bool operator==(const Dag& other) const { return parents_ == other.parents_; }

private:
    static std::string describe(const Edge& e)
    {
        return "(" + std::to_string(e.parent + 1) + ", " + std::to_string(e.child + 1) + ")";
    }

    std::vector<NodeId> compute_order() const
    {
        const std::size_t n = size();
        std::vector<std::size_t> indeg(n);
        for (NodeId i = 0; i < n; ++i)
            indeg[i] = parents_[i].size();
        std::vector<NodeId> order;
        order.reserve(n);
        // smallest ready node first keeps the order deterministic
        for (std::size_t round = 0; round < n; ++round) {
            NodeId next = n;
            for (NodeId i = 0; i < n; ++i)
                if (indeg[i] == 0) {
                    next = i;
                    break;
                }
            if (next == n)
                break;
            indeg[next] = static_cast<std::size_t>(-1);
            order.push_back(next);
            for (NodeId c : children_[next])
                --indeg[c];
        }
        return order;
    }

    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> order_;
};

inline Dag make_dag(std::size_t n, std::span<const Edge> edges) { return Dag(n, edges); }

/// Skeleton plus v-structures; equal keys characterise Markov equivalence.
struct EquivalenceKey
{
    std::vector<std::pair<NodeId, NodeId>> skeleton;   // (a, b) with a < b
    std::vector<std::array<NodeId, 3>> v_structures;   // (a, c, b): a -> c <- b, a < b, a !~ b

    auto operator<=>(const EquivalenceKey&) const = default;
};

inline EquivalenceKey equivalence_key(const Dag& d)
{
    EquivalenceKey key;
    for (const auto& e : d.edges())
        key.skeleton.emplace_back(std::min(e.parent, e.child), std::max(e.parent, e.child));
    std::sort(key.skeleton.begin(), key.skeleton.end());

    for (NodeId c = 0; c < d.size(); ++c) {
        const auto ps = d.parents(c);
        for (std::size_t x = 0; x < ps.size(); ++x)
            for (std::size_t y = x + 1; y < ps.size(); ++y)
                if (!d.adjacent(ps[x], ps[y]))
                    key.v_structures.push_back({ps[x], c, ps[y]});
    }
    std::sort(key.v_structures.begin(), key.v_structures.end());
    return key;
}

inline bool markov_equivalent(const Dag& a, const Dag& b)
{
    if (a.size() != b.size())
        throw SizeMismatch("markov_equivalent: node counts differ");
    return equivalence_key(a) == equivalence_key(b);
}

/// Largest n accepted by enumerate_dags.
inline constexpr std::size_t max_enumeration_nodes = 5;

/// All labeled DAGs on n nodes, ordered by adjacency_mask().
inline std::vector<Dag> enumerate_dags(std::size_t n)
{
    if (n == 0)
        throw InvalidEdge("enumerate_dags: n must be at least 1");
    if (n > max_enumeration_nodes)
        throw TooLarge("enumerate_dags: n = " + std::to_string(n) + " exceeds the cap of " +
                       std::to_string(max_enumeration_nodes));

    const std::size_t bits = n * (n - 1);
    const std::uint32_t full = (1u << n) - 1;
    std::vector<Dag> out;
    std::vector<Edge> edges;

    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        // parent bitset per node
        std::array<std::uint32_t, max_enumeration_nodes> in{};
        for (NodeId from = 0; from < n; ++from)
            for (NodeId to = 0; to < n; ++to)
                if (from != to && (mask >> Dag::pair_bit(n, from, to) & 1u))
                    in[to] |= 1u << from;

        // peel off sources until nothing is left or a cycle blocks progress
        std::uint32_t remaining = full;
        while (remaining) {
            std::uint32_t sources = 0;
            for (NodeId i = 0; i < n; ++i)
                if ((remaining >> i & 1u) && (in[i] & remaining) == 0)
                    sources |= 1u << i;
            if (!sources)
                break;
            remaining &= ~sources;
        }
        if (remaining)
            continue;

        edges.clear();
        for (NodeId to = 0; to < n; ++to)
            for (NodeId from = 0; from < n; ++from)
                if (in[to] >> from & 1u)
                    edges.push_back({from, to});
        out.emplace_back(n, edges);
    }
    return out;
}

/// Parses the edge-list text format: one "parent child" pair of 1-based
/// indices per line. Blank lines and lines starting with '#' are skipped.
inline std::vector<Edge> parse_edge_list(std::string_view text)
{
    std::vector<Edge> edges;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        long long parent = 0, child = 0;
        std::string rest;
        if (!(fields >> parent >> child) || (fields >> rest))
            throw ParseError("edge list line " + std::to_string(lineno) +
                             ": expected two integers");
        if (parent < 1 || child < 1)
            throw InvalidEdge("edge list line " + std::to_string(lineno) +
                              ": node indices are 1-based");
        edges.push_back({static_cast<NodeId>(parent - 1), static_cast<NodeId>(child - 1)});
    }
    return edges;
}

inline std::string format_edge_list(const Dag& d)
{
    std::string out;
    for (const auto& e : d.edges())
        out += std::to_string(e.parent + 1) + " " + std::to_string(e.child + 1) + "\n";
    return out;
}

/// Compact display form, e.g. "1->2 1->3" or "(empty)".
inline std::string describe_edges(const Dag& d)
{
    std::string out;
    for (const auto& e : d.edges()) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(e.parent + 1) + "->" + std::to_string(e.child + 1);
    }
    return out.empty() ? "(empty)" : out;
}

} // namespace mdlbn
