#include "qdnand/classical.hpp"
#include "qdnand/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qdnand;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems) {
        if (p.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

struct Captured {
    int code = 0;
    std::string out;
    std::string err;
};

Captured execute(const std::string& text, std::vector<std::string> overrides = {}) {
    const RunConfig c = parse_config(text, overrides);
    std::ostringstream out;
    std::ostringstream err;
    Captured r;
    r.code = run(c, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("qdnand_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace

TEST(ParseConfig, MinimalEvaluateFillsDefaults) {
    const RunConfig c = parse_config("command = evaluate\ntree.depth = 2\ntree.bits = 1011\n");
    EXPECT_EQ(c.command, Command::evaluate);
    EXPECT_EQ(c.depth, 2);
    EXPECT_EQ(c.delta, 10.0);
    EXPECT_EQ(c.gamma, 1e-6);
    EXPECT_DOUBLE_EQ(c.gamma_l + c.gamma_r, 0.1);
    EXPECT_EQ(c.output_format, "csv");
}

TEST(ParseConfig, CommentsAndWhitespace) {
    const RunConfig c = parse_config(
        "# evaluate a tree\n\n  command=evaluate   # trailing\ntree.depth = 1\ntree.bits = 01\n"
        "tree.not = 1\nphysics.t1 = balanced\n");
    EXPECT_EQ(c.not_markers, std::set<int>{1});
    EXPECT_TRUE(c.t1_balanced);
    EXPECT_NEAR(c.probe().t1 * c.probe().t1, (std::sqrt(2.0) - 1) * 0.05, 1e-15);
}

TEST(ParseConfig, BitLengthMismatchNamesBothValues) {
    const auto p = problems_of("command = evaluate\ntree.depth = 3\ntree.bits = 1011\n");
    ASSERT_EQ(p.size(), 1U);
    EXPECT_NE(p[0].find("tree.bits"), std::string::npos);
    EXPECT_NE(p[0].find('4'), std::string::npos);
    EXPECT_NE(p[0].find('8'), std::string::npos);
}

TEST(ParseConfig, SweepRangeChecked) {
    const auto p = problems_of(
        "command = sweep\ntree.depth = 1\ntree.bits = 00\nsweep.min = 0.5\nsweep.max = 0.5\n");
    EXPECT_TRUE(mentions(p, "sweep.min"));
}

TEST(ParseConfig, ReportsEveryProblem) {
    const auto p = problems_of(
        "command = evaluate\nbogus.key = 1\ntree.depth = two\ntree.bits = 01\n"
        "physics.gamma_l = -1\nphysics.delta = 1\nphysics.delta = 2\nno equals sign\n");
    EXPECT_TRUE(mentions(p, "bogus.key: unknown key"));
    EXPECT_TRUE(mentions(p, "tree.depth"));
    EXPECT_TRUE(mentions(p, "physics.gamma_l"));
    EXPECT_TRUE(mentions(p, "already set"));
    EXPECT_TRUE(mentions(p, "expected key = value"));
    EXPECT_GE(p.size(), 5U);
    EXPECT_TRUE(mentions(problems_of("tree.depth = 1\ntree.bits = 00\n"), "command: missing"));
    EXPECT_TRUE(mentions(problems_of("command = fly\n"), "unknown command"));
}

TEST(ParseConfig, OverridesReplaceKeys) {
    const std::vector<std::string> o{"tree.bits = 11", "physics.kT = 0.01"};
    const RunConfig c =
        parse_config("command = evaluate\ntree.depth = 1\ntree.bits = 00\n", o);
    EXPECT_EQ(c.bits, "11");
    EXPECT_EQ(c.kT, 0.01);
}

TEST(FormatConfig, RoundTrips) {
    const RunConfig c = parse_config(
        "command = ensemble\ntree.depth = 5\ntree.not = 3,1\nphysics.gamma = 0.1\n"
        "physics.eps0 = 0\ndisorder.sigma_eps = 0.030000000000000002\ndisorder.seed = "
        "18446744073709551615\nphysics.kT = 0.3333333333333333\n");
    const std::string text = format_config(c);
    const RunConfig back = parse_config(text);
    EXPECT_EQ(format_config(back), text);
    EXPECT_EQ(back.sigma_eps, 0.030000000000000002);
    EXPECT_EQ(back.kT, 1.0 / 3.0);
    EXPECT_EQ(back.seed, 18446744073709551615ULL);
    EXPECT_EQ(back.not_markers, (std::set<int>{1, 3}));
}

TEST(FormatReal, SeventeenDigitsReadBackExactly) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) {
        EXPECT_EQ(std::strtod(format_real(v).c_str(), nullptr), v);
    }
}

TEST(Run, EvaluateMatchesClassicalTruth) {
    const Captured r = execute("command = evaluate\ntree.depth = 3\ntree.bits = 10110010\n");
    EXPECT_EQ(r.code, kExitOk);
    const Bit truth = eval_nand(build_tree(3, "10110010"));
    EXPECT_NE(r.out.find("readout_bit," + std::to_string(truth)), std::string::npos);
    EXPECT_NE(r.out.find("classical_bit," + std::to_string(truth)), std::string::npos);
    EXPECT_NE(r.out.find("form_bit," + std::to_string(truth)), std::string::npos);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "quantity,value");
}

TEST(Run, AmbiguousReadoutExitCode) {
    const Captured r = execute(
        "command = evaluate\ntree.depth = 1\ntree.bits = 11\nphysics.gamma = 1\n"
        "physics.t1 = balanced\n");
    EXPECT_EQ(r.code, kExitAmbiguous);
    EXPECT_NE(r.out.find("readout_ambiguous,yes"), std::string::npos);
}

TEST(Run, ErrorsExitWithOne) {
    RunConfig c;
    c.depth = 0;
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run(c, out, err), kExitError);
    EXPECT_EQ(err.str().rfind("error: ", 0), 0U);
}

TEST(Run, SweepCsvColumnsAndExactValues) {
    const Captured r = execute(
        "command = sweep\ntree.depth = 2\ntree.bits = 1011\nsweep.min = -0.2\nsweep.max = 0.2\n"
        "sweep.points = 5\n");
    ASSERT_EQ(r.code, kExitOk);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "eps0,transmission,conductance");
    const TreeSpec t = build_tree(2, "1011");
    const RunConfig c = parse_config("command = sweep\ntree.depth = 2\ntree.bits = 1011\n");
    const DotParameters params = ideal_parameters(t, c.delta, c.gamma);
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string a, b, g;
        std::getline(cells, a, ',');
        std::getline(cells, b, ',');
        std::getline(cells, g, ',');
        ProbeSpec p = c.probe();
        p.eps0 = std::strtod(a.c_str(), nullptr);
        EXPECT_EQ(std::strtod(g.c_str(), nullptr), conductance(t, params, p));
        ++rows;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Run, FilesAreAtomicAndReproducible) {
    TempDir dir;
    const std::string text =
        "command = ensemble\ntree.depth = 3\ndisorder.trials = 25\ndisorder.sigma_eps = 0.05\n"
        "disorder.seed = 17\n";
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    const Captured ra = execute(text, {"output.path = " + a.string()});
    const Captured rb = execute(text, {"output.path = " + b.string(), "disorder.threads = 3"});
    ASSERT_EQ(ra.code, kExitOk) << ra.err;
    ASSERT_EQ(rb.code, kExitOk) << rb.err;
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));
    EXPECT_EQ(ra.out.rfind("wrote " + a.string(), 0), 0U);

    const RunConfig meta = parse_config(slurp(dir / "a.csv.meta"));
    EXPECT_EQ(meta.trials, 25);
    EXPECT_EQ(meta.seed, 17U);
    EXPECT_EQ(meta.sigma_eps, 0.05);
    EXPECT_EQ(meta.output_path, a.string());

    // Re-running from the sidecar reproduces the file byte for byte.
    const auto c = dir / "c.csv";
    const Captured rc = execute(slurp(dir / "a.csv.meta"), {"output.path = " + c.string()});
    ASSERT_EQ(rc.code, kExitOk);
    EXPECT_EQ(slurp(a), slurp(c));
}

TEST(Run, OtherCommands) {
    const Captured f = execute("command = feasibility\n");
    EXPECT_EQ(f.code, kExitOk);
    EXPECT_NE(f.out.find("n_max,8192"), std::string::npos);
    EXPECT_NE(f.out.find("detuning disorder"), std::string::npos);

    const Captured l = execute("command = layout\ntree.depth = 3\ntree.bits = 10110010\n");
    EXPECT_EQ(l.code, kExitOk);
    EXPECT_EQ(l.out.substr(0, l.out.find('\n')), "id,x,y,role,level,node");
    EXPECT_NE(l.out.find("inverter"), std::string::npos);

    const Captured q = execute(
        "command = classical\ntree.depth = 2\ntree.bits = 1011\ndisorder.trials = 3\n");
    EXPECT_EQ(q.code, kExitOk);
    EXPECT_EQ(q.out.substr(0, q.out.find('\n')), "run,seed,result,queries");

    const Captured t = execute(
        "command = feasibility\noutput.format = text\n");
    EXPECT_EQ(t.code, kExitOk);
    EXPECT_EQ(t.out.find(','), std::string::npos);
}
