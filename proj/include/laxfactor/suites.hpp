#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laxfactor/rootsys.hpp"

namespace laxfactor {

// how the residual of a case is judged
//   identity: two independent routes to the same object must agree
//   oracle:   compared against an independent reference (series, closed form, exact solution)
//   control:  a deliberately broken input that must fail the same check
enum class Provenance { Identity, Oracle, Control };

const char* to_string(Provenance p);

struct CaseSpec {
    std::string suite;
    std::string id;
    Provenance provenance = Provenance::Identity;
    double tolerance = 0.0;
    // controls must reach at least this residual; defaults to the tolerance
    std::optional<double> control_threshold;
    std::function<double(std::uint64_t seed)> run;

    bool expected_fail() const { return provenance == Provenance::Control; }
};

enum class Outcome { Pass, Fail, ExpectedFail, UnexpectedPass };

const char* to_string(Outcome o);

struct CaseResult {
    std::string suite;
    std::string case_id;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;  // residual < tolerance, regardless of expectation
    double wall_time_ms = 0.0;
    Provenance provenance = Provenance::Identity;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Fail;
    std::string error;  // set when the case threw

    bool ok() const { return outcome == Outcome::Pass || outcome == Outcome::ExpectedFail; }
};

struct SuiteConfig {
    std::vector<std::string> suites;
    std::optional<std::pair<int, int>> N_range;  // overrides each suite's default sizes
    std::vector<ClassKind> classes{ClassKind::Elliptic, ClassKind::Trigonometric, ClassKind::Rational};
    std::uint64_t seed = 0;
    // moduli swept by the special-function suite and the det Xi cases
    std::vector<cplx> taus{cplx(0.0, 1.0), cplx(0.3, 0.8), cplx(0.0, 2.0)};
    // modulus of every other elliptic case
    cplx tau{0.3, 0.8};
    std::optional<RootSystem> preset;
    int points = 20;
    int special_points = 200;
    // suite name -> tolerance replacing the default of every non-control case in it
    std::map<std::string, double> tolerance_overrides;

    cplx hbar{0.17, 0.05};
    cplx c{1.3, 0.0};
    cplx nu{0.7, 0.0};

    void validate() const;  // ConfigError on unknown suites, empty lists, bad sizes
};

const std::vector<std::string>& suite_names();

// lax-equation is an alias run under dynamics; rank-one runs under factorization
std::vector<CaseSpec> build_cases(const SuiteConfig& cfg);
std::vector<CaseSpec> build_suite(const std::string& name, const SuiteConfig& cfg);

CaseResult run_case(const CaseSpec& c, std::uint64_t seed);

// Runs cases on a pool of min(threads, cases) workers. sink is called from the
// calling thread only, in case order.
std::vector<CaseResult> run_cases(const std::vector<CaseSpec>& cases, std::uint64_t seed, unsigned threads,
                                  const std::function<void(const CaseResult&)>& sink = {});

// LAXFACTOR_THREADS if set and positive, else hardware concurrency (at least 1)
unsigned default_thread_count();

}  // namespace laxfactor
