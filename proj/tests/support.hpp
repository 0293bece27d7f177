#pragma once

// Helpers shared by the unit tests and the acceptance binary. Everything here
// is written independently of the library code it is used to check.

#include <mdlbn/mdlbn.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace mdlbn::testing
{

/// Acyclicity by depth-first search with white/grey/black colouring. Used
/// as a cross-check on the library's source-peeling enumeration.
inline bool acyclic_dfs(std::size_t n, const std::vector<std::vector<bool>>& adj)
{
    std::vector<int> colour(n, 0);
    std::function<bool(std::size_t)> visit = [&](std::size_t u) {
        colour[u] = 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (!adj[u][v])
                continue;
            if (colour[v] == 1)
                return false;
            if (colour[v] == 0 && !visit(v))
                return false;
        }
        colour[u] = 2;
        return true;
    };
    for (std::size_t u = 0; u < n; ++u)
        if (colour[u] == 0 && !visit(u))
            return false;
    return true;
}

/// Counts labeled DAGs by running acyclic_dfs on every directed graph
/// without 2-cycles or self-loops (each unordered pair: none, a->b, b->a).
inline std::size_t brute_force_dag_count(std::size_t n)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            pairs.emplace_back(a, b);
    std::size_t total = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        total *= 3;
    std::size_t count = 0;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        std::size_t c = code;
        for (const auto& [a, b] : pairs) {
            const auto digit = c % 3;
            c /= 3;
            if (digit == 1)
                adj[a][b] = true;
            else if (digit == 2)
                adj[b][a] = true;
        }
        count += acyclic_dfs(n, adj);
    }
    return count;
}

/// Robinson's recurrence for the number of labeled DAGs.
inline std::uint64_t robinson_count(std::size_t n)
{
    std::vector<double> a(n + 1, 0.0);
    a[0] = 1.0;
    auto binom = [](std::size_t nn, std::size_t kk) {
        double r = 1.0;
        for (std::size_t i = 1; i <= kk; ++i)
            r = r * static_cast<double>(nn - kk + i) / static_cast<double>(i);
        return r;
    };
    for (std::size_t m = 1; m <= n; ++m) {
        double s = 0.0;
        for (std::size_t k = 1; k <= m; ++k)
            s += ((k % 2) ? 1.0 : -1.0) * binom(m, k) *
                 std::pow(2.0, static_cast<double>(k * (m - k))) * a[m - k];
        a[m] = s;
    }
    return static_cast<std::uint64_t>(std::llround(a[n]));
}

/// Uniform random dataset with the given cardinalities.
inline DiscreteDataset random_dataset(Rng& rng, std::vector<std::size_t> cards, std::size_t m)
{
    std::vector<std::vector<std::uint32_t>> cols(cards.size(), std::vector<std::uint32_t>(m));
    for (std::size_t i = 0; i < cards.size(); ++i)
        for (auto& v : cols[i])
            v = static_cast<std::uint32_t>(rng.below(cards[i]));
    return DiscreteDataset(std::move(cards), std::move(cols));
}

/// Random dataset drawn from a random network on `dag`, so that the columns
/// are actually dependent.
inline DiscreteDataset dependent_dataset(Rng& rng, const Dag& dag, std::vector<std::size_t> cards,
                                         std::size_t m)
{
    BnSpec s;
    s.dag = dag;
    s.cardinalities = cards;
    for (std::size_t i = 0; i < dag.size(); ++i)
        s.names.push_back("X" + std::to_string(i + 1));
    s.cpt.resize(dag.size());
    for (NodeId i = 0; i < dag.size(); ++i) {
        const auto q = parent_configurations(dag, cards, i);
        for (std::size_t j = 0; j < q; ++j) {
            const auto row = mdlbn::detail::random_row(rng, cards[i]);
            s.cpt[i].insert(s.cpt[i].end(), row.begin(), row.end());
        }
    }
    return sample(s, m, rng.below(1u << 30));
}

/// Random strictly positive joint table.
inline JointTable random_joint(Rng& rng, std::vector<NodeId> vars, std::vector<std::size_t> cards)
{
    std::size_t cells = 1;
    for (auto c : cards)
        cells *= c;
    std::vector<double> p(cells);
    double sum = 0.0;
    for (auto& x : p) {
        x = rng.uniform(0.01, 1.0);
        sum += x;
    }
    for (auto& x : p)
        x /= sum;
    return JointTable(std::move(vars), std::move(cards), std::move(p));
}

/// The fork 2 <- 1 -> 3 on three ternary nodes with well-separated CPT rows.
inline BnSpec fork_spec()
{
    BnSpec s;
    s.dag = Dag(3, {{0, 1}, {0, 2}});
    s.names = {"X1", "X2", "X3"};
    s.cardinalities = {3, 3, 3};
    s.cpt = {
        {0.35, 0.40, 0.25},
        {0.70, 0.20, 0.10, //
         0.15, 0.70, 0.15, //
         0.10, 0.20, 0.70},
        {0.60, 0.25, 0.15, //
         0.20, 0.60, 0.20, //
         0.15, 0.20, 0.65},
    };
    s.validate();
    return s;
}

/// Largest total-variation distance between any two rows of a CPT; and the
/// smallest, which is what "rows separated by at least d" constrains.
inline double min_row_separation(const BnSpec& s, NodeId i)
{
    const auto q = parent_configurations(s.dag, s.cardinalities, i);
    double best = 1.0;
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a + 1; b < q; ++b) {
            const auto ra = s.row(i, a);
            const auto rb = s.row(i, b);
            double tv = 0.0;
            for (std::size_t k = 0; k < ra.size(); ++k)
                tv += std::abs(ra[k] - rb[k]);
            best = std::min(best, 0.5 * tv);
        }
    return best;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("mdlbn_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace mdlbn::testing
