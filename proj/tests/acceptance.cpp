// One line per acceptance criterion; exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "laxfactor/suites.hpp"

using namespace laxfactor;

namespace {

struct Criterion {
    int number;
    std::string name;
    std::vector<std::string> suites;  // suite field of the cases that count
    std::string builder;              // suite to build
    double time_limit_s;              // 0: no limit
    std::vector<std::string> required_controls;  // id fragments that must show up as expected-fail
};

struct Verdict {
    bool ok = true;
    std::string detail;
};

Verdict run_suite_criterion(const Criterion& c) {
    SuiteConfig cfg;
    cfg.suites = {c.builder};
    std::vector<CaseSpec> cases;
    for (auto& s : build_suite(c.builder, cfg))
        if (std::find(c.suites.begin(), c.suites.end(), s.suite) != c.suites.end()) cases.push_back(std::move(s));

    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_cases(cases, cfg.seed, default_thread_count());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Verdict v;
    int bad = 0, controls = 0;
    double worst = 0.0;
    std::string first_bad;
    for (const auto& r : results) {
        if (!r.ok()) {
            if (bad++ == 0) first_bad = r.case_id;
        }
        if (r.outcome == Outcome::ExpectedFail) ++controls;
        if (r.outcome == Outcome::Pass) worst = std::max(worst, r.residual / r.tolerance);
    }
    for (const auto& frag : c.required_controls) {
        bool found = false;
        for (const auto& r : results)
            if (r.case_id.find(frag) != std::string::npos && r.outcome == Outcome::ExpectedFail) found = true;
        if (!found) {
            v.ok = false;
            v.detail += " missing control '" + frag + "';";
        }
    }
    if (results.empty()) v.ok = false;
    if (bad) v.ok = false;
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) v.ok = false;

    char buf[256];
    std::snprintf(buf, sizeof buf, " %zu cases, %d failing, %d controls rejected, worst residual/tol %.2e, %.2f s",
                  results.size(), bad, controls, worst, secs);
    v.detail = buf + v.detail;
    if (bad) v.detail += " first failure " + first_bad;
    if (c.time_limit_s > 0) {
        std::snprintf(buf, sizeof buf, " (limit %.0f s)", c.time_limit_s);
        v.detail += buf;
    }
    return v;
}

Verdict run_cli_criterion() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = lft::run_cli("verify");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Verdict v;
    int records = 0, schema_errors = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++records;
        try {
            const auto j = nlohmann::json::parse(line);
            const bool good = j.at("suite").is_string() && j.at("case-id").is_string() &&
                              j.at("residual").is_number() && j.at("tolerance").is_number() &&
                              j.at("passed").is_boolean() && j.at("wall_time_ms").is_number() &&
                              j.at("provenance").is_string() && j.at("seed").is_number_unsigned();
            if (!good) ++schema_errors;
        } catch (const std::exception&) {
            ++schema_errors;
        }
    }
    v.ok = r.exit_code == 0 && records > 0 && schema_errors == 0 && secs < 300.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, " exit %d, %d records, %d schema errors, %.2f s (limit 300 s)", r.exit_code,
                  records, schema_errors, secs);
    v.detail = buf;
    return v;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "special functions", {"special-functions"}, "special-functions", 5.0, {}},
        {2, "factorization", {"factorization"}, "factorization", 30.0, {}},
        {3, "lax equation", {"lax-equation"}, "lax-equation", 60.0, {"corrupted-m"}},
        {4, "theorem 1", {"theorem1"}, "theorem1", 0.0, {}},
        {5, "theorem 2", {"theorem2"}, "theorem2", 0.0, {}},
        {6, "r-matrices", {"irf-vertex"}, "irf-vertex", 60.0, {}},
        {7, "schlesinger", {"zero-curvature"}, "zero-curvature", 0.0, {"residual-unshifted"}},
        {8, "root systems", {"root-systems"}, "root-systems", 0.0, {"isospectral-constraint-violated"}},
        {9, "rank one", {"rank-one"}, "rank-one", 0.0, {}},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const Verdict v = run_suite_criterion(c);
        failed += !v.ok;
        std::printf("criterion %2d %-18s %s:%s\n", c.number, c.name.c_str(), v.ok ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    const Verdict v = run_cli_criterion();
    failed += !v.ok;
    std::printf("criterion 10 %-18s %s:%s\n", "cli verify", v.ok ? "PASS" : "FAIL", v.detail.c_str());
    return failed;
}
