#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "cli_runner.hpp"
#include "test_util.hpp"

using namespace lft;
using laxfactor::cli::complex_from_json;
using laxfactor::cli::format_complex;
using laxfactor::cli::parse_complex;
using laxfactor::cli::parse_complex_list;
using laxfactor::cli::parse_range;
using nlohmann::json;

TEST(ParseComplex, Forms) {
    EXPECT_EQ(parse_complex("1.5"), cplx(1.5, 0.0));
    EXPECT_EQ(parse_complex("-2j"), cplx(0.0, -2.0));
    EXPECT_EQ(parse_complex("0.3+0.8j"), cplx(0.3, 0.8));
    EXPECT_EQ(parse_complex("0.3-0.8i"), cplx(0.3, -0.8));
    EXPECT_EQ(parse_complex("i"), cplx(0.0, 1.0));
    EXPECT_EQ(parse_complex("-j"), cplx(0.0, -1.0));
    EXPECT_EQ(parse_complex("2i"), cplx(0.0, 2.0));
    EXPECT_EQ(parse_complex("1e-3-4.5e-2j"), cplx(1e-3, -4.5e-2));
    EXPECT_EQ(parse_complex(" 1+1j "), cplx(1.0, 1.0));
}

TEST(ParseComplex, Rejects) {
    for (const char* bad : {"", "abc", "1+", "1+2", "1jj", "++1", "1 2"})
        EXPECT_ANY_THROW(parse_complex(bad)) << bad;
}

TEST(ParseComplex, JsonForms) {
    EXPECT_EQ(complex_from_json(json::parse("[1.5, -2]")), cplx(1.5, -2.0));
    EXPECT_EQ(complex_from_json(json::parse("\"0.3+0.8j\"")), cplx(0.3, 0.8));
    EXPECT_EQ(complex_from_json(json::parse("2")), cplx(2.0, 0.0));
    EXPECT_ANY_THROW(complex_from_json(json::parse("[1, 2, 3]")));
    EXPECT_ANY_THROW(complex_from_json(json::parse("{}")));
}

TEST(ParseComplex, FormatRoundTrips) {
    for (cplx z : {cplx(0.1, -0.3), cplx(-1e-300, 7.0), cplx(1.0 / 3.0, 2.0 / 7.0)})
        EXPECT_EQ(parse_complex(format_complex(z)), z);
    EXPECT_EQ(format_complex(cplx(2.0, 0.0)), "2+0j");
}

TEST(ParseLists, RangesAndLists) {
    EXPECT_EQ(parse_range("3"), (std::pair{3, 3}));
    EXPECT_EQ(parse_range("2..5"), (std::pair{2, 5}));
    EXPECT_ANY_THROW(parse_range("5..2"));
    EXPECT_ANY_THROW(parse_range("x"));
    const auto l = parse_complex_list("1,-1,0.5+0.1j");
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[2], cplx(0.5, 0.1));
}

TEST(CliExit, EvalExamples) {
    auto r = run_cli("eval lax --model cm --class rational --N 2 --q 1,-1 --p 0,0 --nu 1");
    ASSERT_EQ(r.exit_code, 0);
    const json m = json::parse(r.out);
    EXPECT_EQ(m.size(), 2u);
    auto entry = [&](int i, int j) { return complex_from_json(m[i][j]); };
    EXPECT_LT(std::abs(entry(0, 0) + 0.5) + std::abs(entry(0, 1) - 0.5) + std::abs(entry(1, 0) + 0.5) +
                  std::abs(entry(1, 1) - 0.5),
              1e-15);

    r = run_cli("eval phi --class rational --eta 1 --z 1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, "2+0j\n");

    r = run_cli("eval theta --z 0.1+0.05j --tau 0.3+0.8j");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_LT(std::abs(parse_complex(r.out.substr(0, r.out.size() - 1)) - theta(cplx(0.1, 0.05), cplx(0.3, 0.8))), 1e-15);
}

TEST(CliExit, ConfigErrors) {
    EXPECT_EQ(run_cli("verify --suites \"\"").exit_code, 2);
    EXPECT_EQ(run_cli("verify --suites nonsense").exit_code, 2);
    EXPECT_EQ(run_cli("verify --suites theorem1 --tau 0.1-1j").exit_code, 2);
    EXPECT_EQ(run_cli("verify --bogus-flag").exit_code, 2);
    EXPECT_EQ(run_cli("eval phi --class rational --z notanumber").exit_code, 2);
    EXPECT_EQ(run_cli("evolve --model cm --class rational --initial '{\"q\": [1]}'").exit_code, 2);
    EXPECT_EQ(run_cli("").exit_code, 2);
}

TEST(CliExit, RuntimeAbortOnCollision) {
    const auto r = run_cli(
        "evolve --model cm --class rational --nu 1 --t-end 5 --initial '{\"q\": [-0.5, 0.5], \"p\": [0.5, -0.5]}'");
    EXPECT_EQ(r.exit_code, 3);
    const json rec = json::parse(r.out.substr(0, r.out.find('\n')));
    EXPECT_TRUE(rec.contains("abort"));
}

TEST(CliExit, EvolveFreeFlow) {
    const auto r = run_cli(
        "evolve --model cm --class rational --nu 0 --t-end 1 --initial '{\"q\": [0, 2], \"p\": [[-1, 0], \"1+0j\"]}'");
    ASSERT_EQ(r.exit_code, 0);
    std::istringstream in(r.out);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    const json rec = json::parse(last);
    EXPECT_DOUBLE_EQ(rec["t"].get<double>(), 1.0);
    EXPECT_LT(std::abs(complex_from_json(rec["q"][0]) + 1.0), 1e-10);
    EXPECT_LT(std::abs(complex_from_json(rec["q"][1]) - 3.0), 1e-10);
}

TEST(CliExit, VerifyRecordSchema) {
    const auto r = run_cli("verify --suites theorem1,rank-one --seed 3");
    ASSERT_EQ(r.exit_code, 0);
    std::istringstream in(r.out);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        const json rec = json::parse(line);
        for (const char* key : {"suite", "case-id", "residual", "tolerance", "passed", "wall_time_ms", "provenance",
                                "seed"})
            EXPECT_TRUE(rec.contains(key)) << key << " missing in " << line;
        EXPECT_EQ(rec["seed"].get<int>(), 3);
        EXPECT_TRUE(rec["passed"].is_boolean());
        ++n;
    }
    EXPECT_GT(n, 10);
}
