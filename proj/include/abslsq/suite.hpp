// SPDX-License-Identifier: Apache-2.0
//
// Benchmark suites: config parsing, the method roster, the solver x problem
// runner behind `abslsq run`, and the invariant checks behind `abslsq verify`.
//
// Config files are line oriented. Blank lines and '#' comments are ignored.
// Top-level keys (before the first block):
//   tolerance = <real>          zero-test tolerance, default eps * max(m, n)
//   rcond = <real>              baseline rank cutoff, default eps * max(m, n)
//   tie_fraction = <real>       scoreboard tie band, default 0.01
//   repetitions = <count>       timing repetitions, default 3
//   workers = <count>           parallel problems, default 1
//   output_dir = <path>
//   well_conditioned = <real>   verify gate on sigma_1 / sigma_n, default 1e4
// Blocks:
//   [problem]  family, m, n, seed (one or more values), perturbation = i1 i2 i3 i4,
//              integer_solution = true|false; or file = <instance path>
//   [method]   name = huang6 | mod.huang6 | huang7 | mod.huang7 | impl.qr5 |
//              qr | svd | gqr | huang1 | huang2 | mod.huang1 | mod.huang2

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abslsq/metrics.hpp"
#include "abslsq/solvers.hpp"
#include "abslsq/testgen.hpp"

namespace abslsq {

enum class Method {
    huang1,
    huang2,
    mod_huang1,
    mod_huang2,
    huang6,
    mod_huang6,
    huang7,
    mod_huang7,
    impl_qr5,
    qr,
    svd,
    gqr,
};

std::string_view label(Method method);
std::optional<Method> parse_method(std::string_view name);
/// huang6 mod.huang6 huang7 mod.huang7 impl.qr5 qr svd gqr
std::vector<Method> default_roster();
bool is_least_squares_method(Method method);

SolveResult run_method(Method method, const DenseMatrix& A, const Vector& b, double tol,
                       double rcond);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemEntry {
    std::optional<ProblemSpec> spec;
    std::optional<std::filesystem::path> file;
};

struct SuiteConfig {
    std::vector<ProblemEntry> problems;
    std::vector<Method> roster;
    std::optional<double> tolerance;
    std::optional<double> rcond;
    double tie_fraction = 0.01;
    std::size_t repetitions = 3;
    std::size_t workers = 1;
    std::filesystem::path output_dir = "abslsq-out";
    double well_conditioned = 1e4;
};

/// Relative instance paths resolve against base_dir. Errors carry
/// "<source>:<line>:".
SuiteConfig parse_config(std::istream& in, const std::string& source,
                         const std::filesystem::path& base_dir);
SuiteConfig load_config(const std::filesystem::path& path);

struct RunOptions {
    std::optional<std::size_t> workers;
    /// Takes precedence over ABSLSQ_OUT_DIR, which beats the config value.
    std::optional<std::filesystem::path> output_dir;
    std::uint64_t seed_offset = 0;
};

/// Generates or loads every configured instance. Load failures throw
/// std::runtime_error naming the file.
std::vector<ProblemInstance> materialize(const SuiteConfig& config, std::uint64_t seed_offset);

struct SuiteOutcome {
    std::vector<ResultRow> rows;  // problem-major, roster order
    /// errors[problem][method]
    std::vector<std::vector<std::optional<ErrorPair>>> errors;
    /// Solver calls that threw something other than a breakdown.
    std::size_t failures = 0;
    std::vector<std::string> messages;
};

SuiteOutcome execute_suite(const SuiteConfig& config, const std::vector<ProblemInstance>& problems,
                           std::size_t workers);

std::filesystem::path resolve_output_dir(const SuiteConfig& config, const RunOptions& options);

/// Writes results.txt, results.csv, scoreboard_solution.txt and
/// scoreboard_residual.txt. Returns the process exit status.
int run_suite(const SuiteConfig& config, const RunOptions& options, std::ostream& out,
              std::ostream& err);

/// Prints one PASS / FAIL / SKIP / EXPECTED line per invariant and problem.
/// Returns nonzero on any FAIL.
int verify(const SuiteConfig& config, const RunOptions& options, std::ostream& out,
           std::ostream& err);

}  // namespace abslsq
