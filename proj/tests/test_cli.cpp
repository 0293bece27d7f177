#include "commands.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace mdlbn;
using mdlbn::cli::RunConfig;

namespace
{

const std::filesystem::path data_dir = MDLBN_DATA_DIR;

std::string run_ok(const RunConfig& cfg)
{
    std::ostringstream log;
    REQUIRE(cli::run(cfg, log) == 0);
    return log.str();
}

std::size_t count_lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("simulate", "[cli]")
{
    const auto dir = testing::scratch_dir("cli_simulate");
    RunConfig cfg;
    cfg.subcommand = "simulate";
    cfg.spec = (data_dir / "fork.json").string();
    cfg.rows = 100000;
    cfg.seed = 5;
    cfg.out = (dir / "a.csv").string();
    const auto log = run_ok(cfg);
    CHECK(log.find("m = 100000, n = 3") != std::string::npos);
    const auto a = read_text(cfg.out);
    CHECK(count_lines(a) == 100001);

    cfg.out = (dir / "b.csv").string();
    run_ok(cfg);
    CHECK(read_text(cfg.out) == a);

    SECTION("one-hot spec gives a constant file")
    {
        write_text(dir / "onehot.json", R"({"nodes":[{"cardinality":2},{"cardinality":2}],
            "edges":[[1,2]],"cpt":[{"node":1,"probs":[0,1]},
            {"node":2,"config":1,"probs":[1,0]},{"node":2,"config":2,"probs":[1,0]}]})");
        RunConfig c;
        c.subcommand = "simulate";
        c.spec = (dir / "onehot.json").string();
        c.rows = 4;
        c.seed = 1;
        c.out = (dir / "onehot.csv").string();
        run_ok(c);
        CHECK(read_text(c.out) == "X1,X2\n2,1\n2,1\n2,1\n2,1\n");
    }
    SECTION("the seed is required")
    {
        RunConfig c = cfg;
        c.seed.reset();
        std::ostringstream log2;
        CHECK_THROWS_AS(cli::run(c, log2), DomainError);
    }
}

TEST_CASE("explode then discretize", "[cli]")
{
    const auto dir = testing::scratch_dir("cli_discretize");
    RunConfig sim;
    sim.subcommand = "simulate";
    sim.spec = (data_dir / "two_node.json").string();
    sim.rows = 100000;
    sim.seed = 1;
    sim.out = (dir / "base.csv").string();
    run_ok(sim);

    RunConfig ex;
    ex.subcommand = "explode";
    ex.data = sim.out;
    ex.explosion = (data_dir / "two_node_explosion.json").string();
    ex.seed = 2;
    ex.out = (dir / "exploded.csv").string();
    CHECK(run_ok(ex).find("3 -> 6 values") != std::string::npos);

    RunConfig dc;
    dc.subcommand = "discretize";
    dc.data = ex.out;
    dc.graph = (data_dir / "two_node.edges").string();
    dc.nodes = {1};
    dc.exhaustive = true;
    dc.out = (dir / "report.json").string();
    const auto log = run_ok(dc);
    CHECK(log.find("chosen 12|345|6") != std::string::npos);
    CHECK(log.find("top-down == exhaustive: true") != std::string::npos);
    const auto j = json::parse(read_text(dc.out));
    CHECK(j.at("chosen_bar") == "12|345|6");
    CHECK(discretization_report_from_json(j).agrees());

    SECTION("sequential removal finds the same policy")
    {
        RunConfig c = dc;
        c.mode = "sequential";
        c.out.clear();
        CHECK(run_ok(c).find("chosen 12|345|6") != std::string::npos);
    }
    SECTION("cycle over one node")
    {
        RunConfig c = dc;
        c.cycle = true;
        c.exhaustive = false;
        c.out = (dir / "cycle.json").string();
        CHECK(run_ok(c).find("converged") != std::string::npos);
        const auto cj = json::parse(read_text(c.out));
        CHECK(policy_from_json(cj.at("policies").at(0)) == Policy(0, 6, {2, 5}));
    }
}

TEST_CASE("discretize a single-valued column", "[cli]")
{
    const auto dir = testing::scratch_dir("cli_single");
    write_text(dir / "d.csv", "a,b\n4,1\n4,2\n4,1\n");
    write_text(dir / "g.edges", "1 2\n");
    RunConfig c;
    c.subcommand = "discretize";
    c.data = (dir / "d.csv").string();
    c.graph = (dir / "g.edges").string();
    c.nodes = {1};
    const auto log = run_ok(c);
    CHECK(log.find("single distinct value") != std::string::npos);
    CHECK(log.find("evaluations: 1") != std::string::npos);
}

TEST_CASE("discretize rejects too many values for the oracle", "[cli]")
{
    const auto dir = testing::scratch_dir("cli_toolarge");
    std::string csv = "a\n";
    for (int v = 1; v <= 17; ++v)
        csv += std::to_string(v) + "\n";
    write_text(dir / "d.csv", csv);
    RunConfig c;
    c.subcommand = "discretize";
    c.data = (dir / "d.csv").string();
    c.nodes = {1};
    c.exhaustive = true;
    std::ostringstream log;
    CHECK_THROWS_AS(cli::run(c, log), TooLarge);
}

TEST_CASE("recover", "[cli]")
{
    const auto dir = testing::scratch_dir("cli_recover");
    RunConfig sim;
    sim.subcommand = "simulate";
    sim.spec = (data_dir / "fork.json").string();
    sim.rows = 20000;
    sim.seed = 3;
    sim.out = (dir / "fork.csv").string();
    run_ok(sim);

    RunConfig rc;
    rc.subcommand = "recover";
    rc.data = sim.out;
    rc.criterion = "mdl";
    rc.out = (dir / "mdl.json").string();
    const auto log = run_ok(rc);
    CHECK(log.find("winners (mdl)") != std::string::npos);
    const auto mdl = score_report_from_json(json::parse(read_text(rc.out)));
    CHECK(mdl.candidates.size() == 25);

    rc.criterion = "bic";
    rc.out = (dir / "bic.json").string();
    run_ok(rc);
    const auto bic = score_report_from_json(json::parse(read_text(rc.out)));
    CHECK(mdl.winner_set() == bic.winner_set());
    CHECK(mdl.winner_set().size() == 3);

    SECTION("one column gives a single trivial candidate")
    {
        write_text(dir / "one.csv", "a\n1\n2\n2\n");
        RunConfig c;
        c.subcommand = "recover";
        c.data = (dir / "one.csv").string();
        c.out = (dir / "one.json").string();
        run_ok(c);
        const auto r = score_report_from_json(json::parse(read_text(c.out)));
        CHECK(r.candidates.size() == 1);
        CHECK(r.winner_set() == std::vector<std::size_t>{0});
    }
    SECTION("--graph scores just that graph")
    {
        RunConfig c = rc;
        c.graph = (data_dir / "fork.edges").string();
        c.out = (dir / "g.json").string();
        run_ok(c);
        const auto r = score_report_from_json(json::parse(read_text(c.out)));
        REQUIRE(r.candidates.size() == 1);
        CHECK(r.candidates.front().dag == testing::fork_spec().dag);
    }
    SECTION("six columns are too many to enumerate")
    {
        write_text(dir / "six.csv", "a,b,c,d,e,f\n1,2,3,4,5,6\n2,1,3,4,5,6\n");
        RunConfig c;
        c.subcommand = "recover";
        c.data = (dir / "six.csv").string();
        std::ostringstream l;
        CHECK_THROWS_AS(cli::run(c, l), TooLarge);
    }
}

TEST_CASE("bench", "[cli]")
{
    CHECK(cli::parse_sweep("4-6") == std::vector<std::size_t>{4, 5, 6});
    CHECK(cli::parse_sweep("2,4-5,16") == std::vector<std::size_t>{2, 4, 5, 16});
    CHECK_THROWS_AS(cli::parse_sweep("x"), ParseError);
    CHECK_THROWS_AS(cli::parse_sweep("6-4"), ParseError);

    const auto rows = cli::bench({2, 16}, 2, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].topdown_evaluations == 2);
    CHECK(rows[0].exhaustive_evaluations == 2);
    CHECK(rows[1].topdown_evaluations == 16);
    CHECK(rows[1].exhaustive_evaluations == 32768);
    for (const auto& r : rows) {
        CHECK(r.agree == r.reps);
        CHECK(r.correct == r.reps);
    }
    CHECK_THROWS_AS(cli::bench({17}, 1, 1), TooLarge);

    const auto dir = testing::scratch_dir("cli_bench");
    RunConfig c;
    c.subcommand = "bench";
    c.m1_sweep = "4-5";
    c.reps = 3;
    c.out = (dir / "bench.json").string();
    const auto log = run_ok(c);
    CHECK(log.find("3/3") != std::string::npos);
    CHECK(json::parse(read_text(c.out)).size() == 2);
}

TEST_CASE("unknown subcommand", "[cli]")
{
    RunConfig c;
    c.subcommand = "frobnicate";
    std::ostringstream log;
    CHECK_THROWS_AS(cli::run(c, log), ParseError);
}
