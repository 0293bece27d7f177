#pragma once

#include <mdlbn/discretization.hpp>
#include <mdlbn/network.hpp>
#include <mdlbn/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mdlbn
{

/// A network whose node `node` has been exploded, with the known correct
/// discretization that undoes the explosion.
struct ExplodedInstance
{
    BnSpec base;
    ExplosionSpec explosion;
    JointTable joint; // exact, after explosion
    Policy correct;
    NodeId node = 0;

    const Dag& dag() const { return base.dag; }
};

/// Policy that maps every explosion group back to one value.
inline Policy correct_policy(const ExplosionSpec& spec)
{
    std::vector<std::size_t> t;
    std::size_t at = 0;
    for (std::size_t v = 0; v + 1 < spec.groups.size(); ++v) {
        at += spec.groups[v].size();
        t.push_back(at);
    }
    return Policy(spec.node, spec.exploded_cardinality(), std::move(t));
}

inline ExplodedInstance make_instance(BnSpec base, ExplosionSpec explosion)
{
    ExplodedInstance inst;
    inst.node = explosion.node;
    inst.joint = explode_joint(joint_distribution(base), explosion);
    inst.correct = correct_policy(explosion);
    inst.base = std::move(base);
    inst.explosion = std::move(explosion);
    return inst;
}

/// X1 -> X2, both on three values, with X1 exploded into six values by
/// (1/3, 2/3 | 2/7, 4/7, 1/7 | 1). The correct discretization is 12|345|6.
inline BnSpec two_node_base()
{
    BnSpec s;
    s.dag = Dag(2, {{0, 1}});
    s.names = {"X1", "X2"};
    s.cardinalities = {3, 3};
    s.cpt = {
        {0.30, 0.45, 0.25},
        {0.60, 0.30, 0.10, //
         0.20, 0.50, 0.30, //
         0.10, 0.20, 0.70},
    };
    s.validate();
    return s;
}

inline ExplosionSpec two_node_explosion()
{
    return ExplosionSpec{0, {{1.0 / 3, 2.0 / 3}, {2.0 / 7, 4.0 / 7, 1.0 / 7}, {1.0}}};
}

inline ExplodedInstance two_node_instance()
{
    return make_instance(two_node_base(), two_node_explosion());
}

/// Smallest information loss over the single threshold removals that merge
/// values from different explosion groups.
inline double min_incorrect_removal_loss(const ExplodedInstance& inst)
{
    const auto full = Policy::full(inst.node, inst.correct.m1());
    const double top = info_sum(inst.joint, inst.dag(), inst.node, full);
    double loss = std::numeric_limits<double>::infinity();
    for (auto r : inst.correct.thresholds())
        loss = std::min(loss, top - info_sum(inst.joint, inst.dag(), inst.node, full.without(r)));
    return loss;
}

/// Whether nominal sample size m makes the correct policy the strict unique
/// minimiser of dl_local: the penalty curve must increase, and m times the
/// smallest information loss of an incorrect merge must exceed the largest
/// penalty saving available from dropping thresholds.
inline bool separable(const ExplodedInstance& inst, double m)
{
    std::vector<std::size_t> cards = inst.base.cardinalities;
    cards[inst.node] = inst.correct.m1();
    const auto pc = penalty_curve(inst.dag(), inst.node, cards, inst.correct.m1(), m);
    if (!pc.strictly_increasing)
        return false;
    const double max_saving = pc.values.back() - pc.values.front();
    return m * min_incorrect_removal_loss(inst) > max_saving;
}

namespace detail
{

inline std::vector<double> random_row(Rng& rng, std::size_t len)
{
    std::vector<double> row(len);
    double sum = 0.0;
    for (auto& x : row) {
        x = rng.uniform(0.05, 1.0);
        sum += x;
    }
    for (auto& x : row)
        x /= sum;
    return row;
}

} // namespace detail

/// Random distribution-exact exploded instance with m1 values at node 0.
///
/// The node's neighbourhood is drawn from four shapes (node as parent, as
/// child, as the root of a fork, as one parent of a collider), its base
/// cardinality from 2..min(m1, 5), the group sizes as a random composition of
/// m1, and CPT rows and explosion weights at random. Instances that are not
/// separable at sample size m are redrawn.
inline ExplodedInstance random_exploded_instance(Rng& rng, std::size_t m1, double m)
{
    if (m1 < 2)
        throw DomainError("random_exploded_instance: need m1 >= 2");
    for (;;) {
        const auto shape = rng.below(4);
        const std::size_t base_card =
            2 + static_cast<std::size_t>(rng.below(std::min<std::size_t>(m1, 5) - 1));

        BnSpec s;
        switch (shape) {
        case 0:
            s.dag = Dag(2, {{0, 1}});
            break;
        case 1:
            s.dag = Dag(2, {{1, 0}});
            break;
        case 2:
            s.dag = Dag(3, {{0, 1}, {0, 2}});
            break;
        default:
            s.dag = Dag(3, {{0, 2}, {1, 2}});
            break;
        }
        const std::size_t n = s.dag.size();
        s.cardinalities.resize(n);
        s.cardinalities[0] = base_card;
        for (std::size_t i = 1; i < n; ++i)
            s.cardinalities[i] = 2 + static_cast<std::size_t>(rng.below(3));
        for (std::size_t i = 0; i < n; ++i)
            s.names.push_back("X" + std::to_string(i + 1));
        s.cpt.resize(n);
        for (NodeId i = 0; i < n; ++i) {
            const auto q = parent_configurations(s.dag, s.cardinalities, i);
            for (std::size_t j = 0; j < q; ++j) {
                const auto row = detail::random_row(rng, s.cardinalities[i]);
                s.cpt[i].insert(s.cpt[i].end(), row.begin(), row.end());
            }
        }

        // composition of m1 into base_card positive parts
        std::vector<std::size_t> gaps;
        for (std::size_t r = 1; r < m1; ++r)
            gaps.push_back(r);
        for (std::size_t i = 0; i + 1 < base_card; ++i) {
            const auto pick = i + static_cast<std::size_t>(rng.below(gaps.size() - i));
            std::swap(gaps[i], gaps[pick]);
        }
        gaps.resize(base_card - 1);
        std::sort(gaps.begin(), gaps.end());

        ExplosionSpec ex;
        ex.node = 0;
        std::size_t prev = 0;
        for (std::size_t g = 0; g < base_card; ++g) {
            const std::size_t end = g + 1 < base_card ? gaps[g] : m1;
            std::vector<double> w(end - prev);
            double sum = 0.0;
            for (auto& x : w) {
                x = rng.uniform(0.5, 1.0);
                sum += x;
            }
            for (auto& x : w)
                x /= sum;
            ex.groups.push_back(std::move(w));
            prev = end;
        }

        auto inst = make_instance(std::move(s), std::move(ex));
        if (separable(inst, m))
            return inst;
    }
}

} // namespace mdlbn
