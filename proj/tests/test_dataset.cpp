#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <numeric>

using namespace mdlbn;
using Catch::Approx;

namespace
{

DiscreteDataset make_data(std::vector<std::size_t> cards, std::vector<std::vector<std::uint32_t>> cols)
{
    return DiscreteDataset(std::move(cards), std::move(cols));
}

} // namespace

TEST_CASE("DiscreteDataset validates its columns", "[dataset]")
{
    CHECK_THROWS_AS(make_data({2}, {{0, 2}}), DomainError);
    CHECK_THROWS_AS(make_data({2, 2}, {{0, 1}, {0}}), SizeMismatch);
    CHECK_THROWS_AS(make_data({0}, {{}}), DomainError);
    const auto d = make_data({2, 3}, {{0, 1, 1}, {2, 0, 1}});
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 2);
    CHECK(d.value(0, 1) == 2);
    CHECK(d.cardinality(1) == 3);
}

TEST_CASE("relabel ranks each column's distinct values", "[dataset]")
{
    SECTION("column {2,5,11,5}")
    {
        RawDataset raw{{"x"}, {{2}, {5}, {11}, {5}}};
        const auto [data, maps] = relabel(raw);
        CHECK(data.cardinality(0) == 3);
        CHECK(std::vector<std::uint32_t>(data.column(0).begin(), data.column(0).end()) ==
              std::vector<std::uint32_t>{0, 1, 2, 1});
        CHECK(maps[0].values == std::vector<double>{2, 5, 11});
    }
    SECTION("already 1..k is the identity")
    {
        RawDataset raw{{"x"}, {{1}, {3}, {2}}};
        const auto [data, maps] = relabel(raw);
        CHECK(std::vector<std::uint32_t>(data.column(0).begin(), data.column(0).end()) ==
              std::vector<std::uint32_t>{0, 2, 1});
        CHECK(maps[0].values == std::vector<double>{1, 2, 3});
    }
    SECTION("the nine-value column keeps its order")
    {
        const std::vector<double> vals{0.38, 0.45, 0.50, 0.71, 1.37, 1.52, 2.10, 5.38, 7.11};
        RawDataset raw{{"x"}, {}};
        for (auto it = vals.rbegin(); it != vals.rend(); ++it)
            raw.rows.push_back({*it});
        const auto [data, maps] = relabel(raw);
        CHECK(data.cardinality(0) == 9);
        for (std::size_t r = 0; r < 9; ++r)
            CHECK(data.value(r, 0) == 8 - r);
    }
    SECTION("order preserving on random input")
    {
        Rng rng(3);
        RawDataset raw{{"a", "b"}, {}};
        for (int r = 0; r < 200; ++r)
            raw.rows.push_back({std::floor(rng.uniform(-5, 5) * 4) / 4, rng.uniform()});
        const auto [data, maps] = relabel(raw);
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t r = 0; r < 200; ++r)
                for (std::size_t s = 0; s < 200; ++s)
                    if (raw.rows[r][c] < raw.rows[s][c])
                        CHECK(data.value(r, c) < data.value(s, c));
    }
    CHECK_THROWS_AS(relabel(RawDataset{{"x"}, {}}), EmptyData);
}

TEST_CASE("counts", "[dataset]")
{
    SECTION("single node {1,1,2}")
    {
        const auto ct = counts(make_data({2}, {{0, 0, 1}}), Dag(1, {}));
        CHECK(ct.nodes[0].at(0, 0) == 2);
        CHECK(ct.nodes[0].at(0, 1) == 1);
    }
    SECTION("chain 1 -> 2 on rows (1,1),(1,2),(2,1)")
    {
        const auto ct = counts(make_data({2, 2}, {{0, 0, 1}, {0, 1, 0}}), Dag(2, {{0, 1}}));
        const auto& n2 = ct.nodes[1];
        CHECK(n2.configs == 2);
        CHECK(n2.at(0, 0) == 1);
        CHECK(n2.at(0, 1) == 1);
        CHECK(n2.at(1, 0) == 1);
        CHECK(n2.at(1, 1) == 0);
    }
    SECTION("mixed radix: lowest-indexed parent varies fastest")
    {
        // node 3 has parents 1 (card 2) and 2 (card 3); row (1, 2, *) -> j = 1 + 2*2 = 5
        const auto d = make_data({2, 3, 2}, {{1}, {2}, {0}});
        const Dag g(3, {{0, 2}, {1, 2}});
        CHECK(parent_configuration(g, d, 2, 0) == 5);
        CHECK(parent_configurations(g, d.cardinalities(), 2) == 6);
        CHECK(counts(d, g).nodes[2].at(5, 0) == 1);
    }
    SECTION("marginal identities on random data")
    {
        Rng rng(11);
        for (int t = 0; t < 20; ++t) {
            const auto d = testing::random_dataset(rng, {2, 3, 4, 2}, 150);
            const auto dags = enumerate_dags(4);
            const auto& g = dags[rng.below(dags.size())];
            const auto ct = counts(d, g);
            for (const auto& nc : ct.nodes) {
                std::uint64_t total = 0;
                for (std::size_t j = 0; j < nc.configs; ++j) {
                    std::uint64_t row = 0;
                    for (std::size_t k = 0; k < nc.card; ++k)
                        row += nc.at(j, k);
                    CHECK(row == nc.totals[j]);
                    total += nc.totals[j];
                }
                CHECK(total == 150);
            }
        }
    }
    CHECK_THROWS_AS(counts(make_data({2}, {{0}}), Dag(2, {})), SizeMismatch);
}

TEST_CASE("sample", "[dataset]")
{
    SECTION("one-hot CPTs force every row")
    {
        BnSpec s;
        s.dag = Dag(2, {{0, 1}});
        s.names = {"a", "b"};
        s.cardinalities = {2, 3};
        s.cpt = {{0, 1}, {1, 0, 0, 0, 0, 1}};
        const auto d = sample(s, 50, 9);
        for (std::size_t r = 0; r < 50; ++r) {
            CHECK(d.value(r, 0) == 1);
            CHECK(d.value(r, 1) == 2);
        }
    }
    SECTION("deterministic in the seed")
    {
        const auto s = testing::fork_spec();
        CHECK(sample(s, 1000, 5) == sample(s, 1000, 5));
        CHECK_FALSE(sample(s, 1000, 5) == sample(s, 1000, 6));
    }
    SECTION("frequency of value 1 with theta = (0.3, 0.7)")
    {
        BnSpec s;
        s.dag = Dag(1, {});
        s.names = {"x"};
        s.cardinalities = {2};
        s.cpt = {{0.3, 0.7}};
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto d = sample(s, 100000, seed);
            const auto col = d.column(0);
            const double ones = static_cast<double>(std::count(col.begin(), col.end(), 0u));
            CHECK(std::abs(ones / 100000.0 - 0.3) < 0.01);
        }
    }
    SECTION("invalid CPT rows are rejected")
    {
        BnSpec s;
        s.dag = Dag(1, {});
        s.names = {"x"};
        s.cardinalities = {2};
        s.cpt = {{0.3, 0.6}};
        CHECK_THROWS_AS(sample(s, 10, 1), SpecMismatch);
    }
}

TEST_CASE("explode", "[dataset]")
{
    const auto spec = two_node_explosion();
    BnSpec base = two_node_base();
    const auto data = sample(base, 100000, 21);
    const auto out = explode(data, spec, 22);

    SECTION("values land in 1..6 within their groups")
    {
        CHECK(out.cardinality(0) == 6);
        const auto back = spec.collapse_map();
        for (std::size_t r = 0; r < out.rows(); ++r)
            CHECK(back[out.value(r, 0)] == data.value(r, 0));
        CHECK(std::ranges::equal(out.column(1), data.column(1)));
    }
    SECTION("P(exploded = 4) / P(original = 2) is about 4/7")
    {
        const auto orig = data.column(0);
        const auto ex = out.column(0);
        const double twos = static_cast<double>(std::count(orig.begin(), orig.end(), 1u));
        const double fours = static_cast<double>(std::count(ex.begin(), ex.end(), 3u));
        CHECK(std::abs(fours / twos - 4.0 / 7.0) < 0.02);
    }
    SECTION("collapsing the groups recovers the input")
    {
        const auto back = spec.collapse_map();
        std::vector<std::uint32_t> col(out.rows());
        for (std::size_t r = 0; r < out.rows(); ++r)
            col[r] = back[out.value(r, 0)];
        CHECK(out.with_column(0, col, 3) == data);
    }
    SECTION("singleton groups leave the data unchanged")
    {
        const ExplosionSpec id{0, {{1.0}, {1.0}, {1.0}}};
        CHECK(explode(data, id, 1) == data);
    }
    SECTION("deterministic in the seed")
    {
        CHECK(explode(data, spec, 22) == out);
    }
    SECTION("groups must cover the cardinality")
    {
        const ExplosionSpec bad{0, {{0.5, 0.5}, {1.0}}};
        CHECK_THROWS_AS(explode(data, bad, 1), SpecMismatch);
        const ExplosionSpec unnormalised{0, {{0.5, 0.4}, {1.0}, {1.0}}};
        CHECK_THROWS_AS(explode(data, unnormalised, 1), SpecMismatch);
    }
}

TEST_CASE("joint_table", "[dataset]")
{
    const auto d = make_data({2, 2}, {{0, 0, 1, 1}, {0, 0, 1, 1}});
    const NodeId both[] = {0, 1};
    const auto j = joint_table(d, both);
    CHECK(j.probabilities()[0] == 0.5);
    CHECK(j.probabilities()[3] == 0.5);
    CHECK(j.total_mass() == 1.0);

    Rng rng(5);
    const auto r = testing::random_dataset(rng, {3, 2, 4}, 333);
    const NodeId all[] = {0, 1, 2};
    const NodeId first[] = {0};
    const auto full = joint_table(r, all);
    const auto m1 = full.marginal(first);
    const auto direct = joint_table(r, first);
    for (std::size_t v = 0; v < 3; ++v)
        CHECK(m1.probabilities()[v] == Approx(direct.probabilities()[v]).epsilon(1e-14));
    CHECK(full.total_mass() == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("JointTable validates its contents", "[dataset]")
{
    CHECK_THROWS_AS(JointTable({0, 0}, {2, 2}, {0.25, 0.25, 0.25, 0.25}), OverlapError);
    CHECK_THROWS_AS(JointTable({0}, {2}, {0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(JointTable({0}, {2}, {1.5, -0.5}), DomainError);
    CHECK_THROWS_AS(JointTable({0}, {3}, {0.5, 0.5}), SizeMismatch);
}

TEST_CASE("explode_joint", "[dataset]")
{
    const auto base = joint_distribution(two_node_base());
    const auto spec = two_node_explosion();
    const auto ex = explode_joint(base, spec);
    REQUIRE(ex.cardinality(0) == 6);

    // p~(4, j) = (4/7) p(2, j)
    for (std::size_t j = 0; j < 3; ++j) {
        const double orig = base.probabilities()[0 + 3 * j + 1];
        CHECK(ex.probabilities()[6 * j + 3] == Approx(4.0 / 7.0 * orig).epsilon(1e-14));
        CHECK(ex.probabilities()[6 * j + 0] == Approx(1.0 / 3.0 * base.probabilities()[3 * j])
                                                   .epsilon(1e-14));
    }
    CHECK(ex.total_mass() == Approx(1.0).margin(1e-12));

    const NodeId other[] = {1};
    const auto a = base.marginal(other);
    const auto b = ex.marginal(other);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(a.probabilities()[j] - b.probabilities()[j]) < 1e-15);

    const ExplosionSpec id{0, {{1.0}, {1.0}, {1.0}}};
    const auto same = explode_joint(base, id);
    CHECK(std::ranges::equal(same.probabilities(), base.probabilities()));

    CHECK_THROWS_AS(explode_joint(base, ExplosionSpec{5, {{1.0}}}), SpecMismatch);
}

TEST_CASE("explode_joint matches explode in the large-sample limit", "[dataset]")
{
    const auto spec = two_node_explosion();
    const auto data = explode(sample(two_node_base(), 200000, 31), spec, 32);
    const NodeId both[] = {0, 1};
    const auto empirical = joint_table(data, both);
    const auto exact = explode_joint(joint_distribution(two_node_base()), spec);
    for (std::size_t c = 0; c < exact.cells(); ++c)
        CHECK(std::abs(empirical.probabilities()[c] - exact.probabilities()[c]) < 0.005);
}

TEST_CASE("JointTable regroup and marginal", "[dataset]")
{
    Rng rng(8);
    const auto j = testing::random_joint(rng, {0, 2, 5}, {3, 2, 4});
    const NodeId keep[] = {5, 0};
    const auto m = j.marginal(keep);
    CHECK(m.cells() == 12);
    CHECK(m.total_mass() == Approx(1.0));
    // first listed variable varies fastest
    double p50 = 0.0;
    for (std::size_t b = 0; b < 2; ++b)
        p50 += j.probabilities()[1 + 3 * b + 6 * 2];
    CHECK(m.probabilities()[2 + 4 * 1] == Approx(p50));

    const std::uint32_t target[] = {0, 0, 1, 1};
    const auto g = j.regroup(5, target, 2);
    CHECK(g.cardinality(5) == 2);
    CHECK(g.total_mass() == Approx(1.0));
    CHECK_THROWS_AS(j.axis(7), SpecMismatch);
}
