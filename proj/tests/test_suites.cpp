#include <cstdlib>
#include <set>

#include "laxfactor/suites.hpp"
#include "test_util.hpp"

using namespace lft;

namespace {

CaseSpec fixed_case(const std::string& id, Provenance prov, double tol, double residual) {
    CaseSpec c;
    c.suite = "unit";
    c.id = id;
    c.provenance = prov;
    c.tolerance = tol;
    c.run = [residual](std::uint64_t) { return residual; };
    return c;
}

}  // namespace

TEST(SuiteConfig, Validation) {
    SuiteConfig cfg;
    cfg.suites = {};
    EXPECT_THROW_KIND(cfg.validate(), ErrorKind::ConfigError);
    cfg.suites = {"no-such-suite"};
    EXPECT_THROW_KIND(cfg.validate(), ErrorKind::ConfigError);
    cfg.suites = {"theorem1"};
    EXPECT_NO_THROW(cfg.validate());
    cfg.N_range = std::pair{3, 2};
    EXPECT_THROW_KIND(cfg.validate(), ErrorKind::ConfigError);
    cfg.N_range.reset();
    cfg.tau = cplx(0.1, -1.0);
    EXPECT_THROW_KIND(cfg.validate(), ErrorKind::ConfigError);
    cfg.tau = cplx(0.1, 1.0);
    cfg.tolerance_overrides["theorem1"] = -1.0;
    EXPECT_THROW_KIND(cfg.validate(), ErrorKind::ConfigError);
}

TEST(Outcomes, ControlSemantics) {
    const std::vector<CaseSpec> cases{
        fixed_case("pass", Provenance::Identity, 1e-9, 1e-12),
        fixed_case("fail", Provenance::Oracle, 1e-9, 1e-3),
        fixed_case("control-fails", Provenance::Control, 1e-9, 1.0),
        fixed_case("control-passes", Provenance::Control, 1e-9, 1e-12),
    };
    const auto res = run_cases(cases, 0, 1);
    ASSERT_EQ(res.size(), 4u);
    EXPECT_EQ(res[0].outcome, Outcome::Pass);
    EXPECT_TRUE(res[0].passed);
    EXPECT_EQ(res[1].outcome, Outcome::Fail);
    EXPECT_EQ(res[2].outcome, Outcome::ExpectedFail);
    EXPECT_FALSE(res[2].passed);
    EXPECT_TRUE(res[2].ok());
    EXPECT_EQ(res[3].outcome, Outcome::UnexpectedPass);
    EXPECT_FALSE(res[3].ok());
}

TEST(Outcomes, ThrowingCaseFails) {
    CaseSpec c = fixed_case("throws", Provenance::Control, 1e-9, 0.0);
    c.run = [](std::uint64_t) -> double { fail(ErrorKind::NearSingular, "boom"); };
    const auto r = run_case(c, 0);
    EXPECT_EQ(r.outcome, Outcome::Fail);  // an error never counts as the expected failure
    EXPECT_FALSE(r.error.empty());
}

TEST(Runner, OrderAndDeterminismAcrossThreads) {
    SuiteConfig cfg;
    cfg.suites = {"theorem1", "irf-vertex"};
    cfg.seed = 7;
    const auto cases = build_cases(cfg);
    ASSERT_FALSE(cases.empty());
    std::vector<std::string> seen;
    const auto one = run_cases(cases, cfg.seed, 1, [&](const CaseResult& r) { seen.push_back(r.case_id); });
    const auto three = run_cases(cases, cfg.seed, 3);
    ASSERT_EQ(one.size(), cases.size());
    ASSERT_EQ(seen.size(), cases.size());
    for (size_t i = 0; i < cases.size(); ++i) {
        EXPECT_EQ(seen[i], cases[i].id);
        EXPECT_EQ(one[i].case_id, three[i].case_id);
        EXPECT_EQ(one[i].residual, three[i].residual) << one[i].case_id;
        EXPECT_TRUE(one[i].ok()) << one[i].case_id << " " << one[i].residual << " " << one[i].error;
    }
}

TEST(Runner, SeedChangesSamples) {
    SuiteConfig cfg;
    cfg.suites = {"theorem1"};
    const auto cases = build_cases(cfg);
    const auto a = run_case(cases.front(), 0), b = run_case(cases.front(), 1);
    EXPECT_NE(a.residual, b.residual);
}

TEST(Runner, CaseIdsAreUnique) {
    SuiteConfig cfg;
    cfg.suites = {"special-functions", "factorization", "irf-vertex", "theorem1", "theorem2",
                  "zero-curvature",    "root-systems",  "dynamics"};
    const auto cases = build_cases(cfg);
    std::set<std::string> ids;
    for (const auto& c : cases) EXPECT_TRUE(ids.insert(c.id).second) << c.id;
}

TEST(Runner, ThreadCountFromEnvironment) {
    ::setenv("LAXFACTOR_THREADS", "3", 1);
    EXPECT_EQ(default_thread_count(), 3u);
    ::setenv("LAXFACTOR_THREADS", "zero", 1);
    EXPECT_GE(default_thread_count(), 1u);
    ::unsetenv("LAXFACTOR_THREADS");
}
