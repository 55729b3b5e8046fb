// SPDX-License-Identifier: Apache-2.0
//
// Deterministic test problems for overdetermined least squares.
//
// Matrix families (entries stored as doubles):
//   IR500, IR500R, IR500C  integers uniform in [-500, 500]; the R/C variants
//                          get two nearly dependent rows/columns
//   RR100                  reals uniform in [-100, 100]
//   IR50                   integers uniform in [-50, 50]
//   IDF1                   |i - j|
//   IDF2                   |i - j|^2   (exact rank 3)
//   IDF3                   |i + j - (m + n)/2|
//
// Random draws come from a MINSTD Lehmer generator so that any
// implementation reproduces instances bit for bit. Random matrices are filled
// column by column (i fastest). build_ls_problem then draws x* (n entries)
// followed by b~ (m entries) from the same stream.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "abslsq/linalg.hpp"

namespace abslsq {

/// x_{k+1} = 48271 x_k mod (2^31 - 1), seed in [1, 2^31 - 2].
class Rng {
public:
    static constexpr std::uint64_t modulus = 2147483647;
    static constexpr std::uint64_t multiplier = 48271;

    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// lo + (x mod (hi - lo + 1))
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// lo + (hi - lo) (x - 1) / (2^31 - 3)
    double uniform_real(double lo, double hi);

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

enum class Family { IR500, IR500R, IR500C, RR100, IDF1, IDF2, IDF3, IR50 };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view name);

/// Row variant: row i1 is copied into row i2, then a(i1, i3) = 0 and
/// a(i2, i3) = 2^-i4. Column variant: column i1 into column i2, then
/// a(i3, i1) = 0 and a(i3, i2) = 2^-i4.
struct Perturbation {
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    std::size_t i3 = 0;
    int i4 = 0;

    bool operator==(const Perturbation&) const = default;
};

/// Defaults keep the near-dependency clear of row 1, which build_ls_problem
/// overwrites.
inline constexpr Perturbation kDefaultRowPerturbation{2, 3, 1, 5};
inline constexpr Perturbation kDefaultColumnPerturbation{1, 2, 2, 5};

bool is_integer_family(Family family);

DenseMatrix generate_matrix(Family family, std::size_t m, std::size_t n, Rng& rng);
DenseMatrix perturb_rows(DenseMatrix A, const Perturbation& p);
DenseMatrix perturb_cols(DenseMatrix A, const Perturbation& p);

struct ProblemInstance {
    DenseMatrix a;
    Vector b;
    Vector x_star;
    Vector b_tilde;
    Family family;
    std::size_t m;
    std::size_t n;
    std::uint64_t seed;
    std::optional<Perturbation> perturbation;
    /// Set when redefining the first row left an all-zero column.
    bool zero_column_warning = false;
};

/// Draws x* and b~ uniform in [-10, 10] (integers when integer_solution),
/// sets b~_1 = -1, redefines row 1 as a(1, j) = sum_{i>=2} a(i, j) b~_i so
/// that A^T b~ = 0, and returns b = b~ + A x*. The family/seed/perturbation
/// metadata is left for the caller to fill in.
ProblemInstance build_ls_problem(DenseMatrix A, Rng& rng, bool integer_solution);

struct ProblemSpec {
    Family family = Family::RR100;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    /// Only used by IR500R / IR500C; defaults apply when absent.
    std::optional<Perturbation> perturbation;
    /// Defaults to integers for the integer families.
    std::optional<bool> integer_solution;

    bool operator==(const ProblemSpec&) const = default;
};

/// Full pipeline: matrix, family perturbation, right-hand side.
ProblemInstance generate_problem(const ProblemSpec& spec);

/// ||A^T b~||_inf / (||A||_F ||b~||_2)
double construction_residual(const ProblemInstance& instance);

// Text archive format:
//   abslsq-instance 1
//   family <name>
//   m <rows>
//   n <cols>
//   seed <seed>
//   perturbation <i1> <i2> <i3> <i4> | none
//   A
//   <m lines, n values each, 17 significant digits>
//   b
//   <m values, one per line>
//   x_star
//   <n values>
//   b_tilde
//   <m values>
void write_instance(std::ostream& out, const ProblemInstance& instance);
void save_instance(const std::filesystem::path& path, const ProblemInstance& instance);
/// Throws std::runtime_error naming `source` and the offending line.
ProblemInstance read_instance(std::istream& in, const std::string& source);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace abslsq
