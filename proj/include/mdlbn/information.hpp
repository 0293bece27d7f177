#pragma once

#include <mdlbn/errors.hpp>
#include <mdlbn/joint.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace mdlbn
{

/// Binary entropy in bits, with H(0) = H(1) = 0.
inline double entropy_h(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("entropy_h: argument outside [0, 1]");
    if (p == 0.0 || p == 1.0)
        return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Plug-in mutual information in bits between the variable groups `a` and
/// `b` of a joint table. Zero-probability cells contribute nothing and an
/// empty group gives 0.
inline double mutual_information(const JointTable& joint, std::span<const NodeId> a,
                                 std::span<const NodeId> b)
{
    for (NodeId x : a)
        if (std::find(b.begin(), b.end(), x) != b.end())
            throw OverlapError("mutual_information: variable groups overlap");
    if (a.empty() || b.empty())
        return 0.0;

    std::vector<NodeId> both(a.begin(), a.end());
    both.insert(both.end(), b.begin(), b.end());
    // a-digits vary fastest, so cell = ia + size_a * ib
    const JointTable ab = joint.marginal(both);
    std::size_t size_a = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        size_a *= ab.cardinalities()[i];
    const std::size_t size_b = ab.cells() / size_a;
    const auto p = ab.probabilities();

    std::vector<double> pa(size_a, 0.0), pb(size_b, 0.0);
    for (std::size_t ib = 0; ib < size_b; ++ib)
        for (std::size_t ia = 0; ia < size_a; ++ia) {
            pa[ia] += p[ia + size_a * ib];
            pb[ib] += p[ia + size_a * ib];
        }

    double info = 0.0;
    for (std::size_t ib = 0; ib < size_b; ++ib)
        for (std::size_t ia = 0; ia < size_a; ++ia) {
            const double pab = p[ia + size_a * ib];
            if (pab > 0.0)
                info += pab * std::log2(pab / (pa[ia] * pb[ib]));
        }
    return info;
}

inline double mutual_information(const JointTable& joint, std::initializer_list<NodeId> a,
                                 std::initializer_list<NodeId> b)
{
    return mutual_information(joint, std::span<const NodeId>(a.begin(), a.size()),
                              std::span<const NodeId>(b.begin(), b.size()));
}

/// Shannon entropy in bits of the full joint table.
inline double entropy(const JointTable& joint)
{
    double h = 0.0;
    for (double x : joint.probabilities())
        if (x > 0.0)
            h -= x * std::log2(x);
    return h;
}

} // namespace mdlbn
