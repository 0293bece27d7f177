#pragma once

#include <mdlbn/dataset.hpp>
#include <mdlbn/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace mdlbn
{

/// Dense joint probability table over a list of variables. Cells are laid out
/// in mixed radix with the first variable varying fastest.
class JointTable
{
public:
    JointTable() = default;

    JointTable(std::vector<NodeId> vars, std::vector<std::size_t> cards, std::vector<double> p)
        : vars_(std::move(vars)), cards_(std::move(cards)), p_(std::move(p))
    {
        if (vars_.size() != cards_.size())
            throw SizeMismatch("one cardinality per variable is required");
        for (std::size_t a = 0; a < vars_.size(); ++a)
            for (std::size_t b = a + 1; b < vars_.size(); ++b)
                if (vars_[a] == vars_[b])
                    throw OverlapError("joint table lists a variable twice");
        std::size_t cells = 1;
        for (auto c : cards_) {
            if (c == 0)
                throw DomainError("cardinality must be at least 1");
            cells *= c;
        }
        if (p_.size() != cells)
            throw SizeMismatch("joint table has the wrong number of cells");
        double mass = 0.0;
        for (double x : p_) {
            if (!(x >= 0.0))
                throw DomainError("joint table entries must be nonnegative");
            mass += x;
        }
        if (std::abs(mass - 1.0) > 1e-12)
            throw DomainError("joint table mass differs from 1");
    }

    std::span<const NodeId> vars() const { return vars_; }
    std::span<const std::size_t> cardinalities() const { return cards_; }
    std::span<const double> probabilities() const { return p_; }
    std::size_t cells() const { return p_.size(); }

    bool contains(NodeId var) const
    {
        return std::find(vars_.begin(), vars_.end(), var) != vars_.end();
    }

    /// Position of a variable in vars(); throws if absent.
    std::size_t axis(NodeId var) const
    {
        auto it = std::find(vars_.begin(), vars_.end(), var);
        if (it == vars_.end())
            throw SpecMismatch("variable " + std::to_string(var + 1) + " is not in the joint table");
        return static_cast<std::size_t>(it - vars_.begin());
    }

    std::size_t cardinality(NodeId var) const { return cards_[axis(var)]; }

    std::size_t stride(std::size_t axis_index) const
    {
        std::size_t s = 1;
        for (std::size_t a = 0; a < axis_index; ++a)
            s *= cards_[a];
        return s;
    }

    /// Marginal over `keep`, laid out in the order given.
    JointTable marginal(std::span<const NodeId> keep) const
    {
        std::vector<std::size_t> keep_axis(keep.size());
        std::vector<std::size_t> out_cards(keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a) {
            keep_axis[a] = axis(keep[a]);
            out_cards[a] = cards_[keep_axis[a]];
        }
        std::size_t out_cells = 1;
        for (auto c : out_cards)
            out_cells *= c;
        std::vector<double> q(out_cells, 0.0);

        // walk source cells with an odometer over all axes
        std::vector<std::size_t> digit(cards_.size(), 0);
        for (std::size_t cell = 0; cell < p_.size(); ++cell) {
            std::size_t idx = 0, s = 1;
            for (std::size_t a = 0; a < keep.size(); ++a) {
                idx += digit[keep_axis[a]] * s;
                s *= out_cards[a];
            }
            q[idx] += p_[cell];
            for (std::size_t a = 0; a < digit.size(); ++a) {
                if (++digit[a] < cards_[a])
                    break;
                digit[a] = 0;
            }
        }
        JointTable out;
        out.vars_.assign(keep.begin(), keep.end());
        out.cards_ = std::move(out_cards);
        out.p_ = std::move(q);
        return out;
    }

    /// Copy with the values of one variable regrouped: `target[v]` is the new
    /// value of old value v, and the variable gets `new_card` values.
    JointTable regroup(NodeId var, std::span<const std::uint32_t> target,
                       std::size_t new_card) const
    {
        const auto ax = axis(var);
        if (target.size() != cards_[ax])
            throw SizeMismatch("regroup map must cover every value");
        const std::size_t inner = stride(ax);
        const std::size_t outer = p_.size() / (inner * cards_[ax]);
        JointTable out;
        out.vars_ = vars_;
        out.cards_ = cards_;
        out.cards_[ax] = new_card;
        out.p_.assign(inner * new_card * outer, 0.0);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t v = 0; v < cards_[ax]; ++v)
                for (std::size_t i = 0; i < inner; ++i)
                    out.p_[(o * new_card + target[v]) * inner + i] +=
                        p_[(o * cards_[ax] + v) * inner + i];
        return out;
    }

    double total_mass() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

private:
    std::vector<NodeId> vars_;
    std::vector<std::size_t> cards_;
    std::vector<double> p_;
};

/// Empirical relative frequencies over the listed columns.
inline JointTable joint_table(const DiscreteDataset& data, std::span<const NodeId> vars)
{
    if (vars.empty())
        throw DomainError("joint_table needs at least one variable");
    if (data.rows() == 0)
        throw EmptyData("joint_table on an empty dataset");
    std::vector<std::size_t> cards;
    std::size_t cells = 1;
    for (NodeId v : vars) {
        if (v >= data.cols())
            throw SizeMismatch("variable outside the dataset");
        cards.push_back(data.cardinality(v));
        cells *= cards.back();
    }
    std::vector<std::uint64_t> tally(cells, 0);
    const std::size_t m = data.rows();
    std::vector<std::size_t> idx(m, 0);
    std::size_t s = 1;
    for (std::size_t a = 0; a < vars.size(); ++a) {
        const auto col = data.column(vars[a]);
        for (std::size_t r = 0; r < m; ++r)
            idx[r] += col[r] * s;
        s *= cards[a];
    }
    for (auto i : idx)
        ++tally[i];

    std::vector<double> p(cells);
    for (std::size_t c = 0; c < cells; ++c)
        p[c] = static_cast<double>(tally[c]) / static_cast<double>(m);
    return JointTable(std::vector<NodeId>(vars.begin(), vars.end()), std::move(cards),
                      std::move(p));
}

} // namespace mdlbn
