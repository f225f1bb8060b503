#pragma once

// Command-line front end. run() never writes to the process streams; the
// caller forwards out/err.
//
// Exit codes: 0 success, 2 invalid input, 3 computation failure (including a
// failed certificate).

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "attrarith/arith.hpp"

namespace attrarith::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitComputationFailure = 3;

struct RunResult {
    int exit_code = kExitOk;
    std::string out;
    std::string err;
};

struct Environment {
    /// Value of ATTRARITH_PREC, if set.
    std::optional<std::string> prec;

    static Environment from_process();
};

/// args excludes the program name.
RunResult run(const std::vector<std::string>& args, const Environment& env);

/// disc -> monic integer coefficients, ascending degree.
using HcpCache = std::map<Int, std::vector<mpz_class>>;

/// Thrown for unreadable or malformed cache files.
class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Empty if the file does not exist.
HcpCache load_hcp_cache(const std::filesystem::path& path);

/// JSON array of {"disc", "coeffs"}, written to a temporary file and renamed
/// over path.
void save_hcp_cache(const std::filesystem::path& path, const HcpCache& cache);

} // namespace attrarith::cli
