#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "laxfactor/types.hpp"

namespace laxfactor::cli {

enum ExitCode { kAllPass = 0, kFailures = 1, kConfigError = 2, kRuntimeAbort = 3 };

// "1.5", "-2j", "0.3+0.8j", "i", "2i", "1e-3-4.5e-2j"
cplx parse_complex(const std::string& text);
// JSON number, string as above, or [re, im]
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(cplx z);  // [re, im]
std::string format_complex(cplx z);       // "re+imj" at full precision

// comma separated complex entries
std::vector<cplx> parse_complex_list(const std::string& text);
// "3" or "2..5"
std::pair<int, int> parse_range(const std::string& text);

int run(int argc, char** argv);

}  // namespace laxfactor::cli
