// SPDX-License-Identifier: Apache-2.0

#include "abslsq/testgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace abslsq {

/*------------------------------------------------------------------------------
 *      Rng
 *----------------------------------------------------------------------------*/
Rng::Rng(std::uint64_t seed) : state_(seed)
{
    if (seed < 1 || seed > modulus - 1) {
        throw std::invalid_argument(fmt::format("seed {} outside [1, {}]", seed, modulus - 1));
    }
}

std::uint64_t Rng::next()
{
    state_ = (multiplier * state_) % modulus;
    return state_;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo) {
        throw std::invalid_argument("uniform_int: empty range");
    }
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
}

double Rng::uniform_real(double lo, double hi)
{
    const double u = static_cast<double>(next() - 1) / static_cast<double>(modulus - 2);
    return lo + (hi - lo) * u;
}

/*------------------------------------------------------------------------------
 *      Families
 *----------------------------------------------------------------------------*/
std::string_view to_string(Family family)
{
    switch (family) {
    case Family::IR500: return "IR500";
    case Family::IR500R: return "IR500R";
    case Family::IR500C: return "IR500C";
    case Family::RR100: return "RR100";
    case Family::IDF1: return "IDF1";
    case Family::IDF2: return "IDF2";
    case Family::IDF3: return "IDF3";
    case Family::IR50: return "IR50";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name)
{
    for (Family f : {Family::IR500, Family::IR500R, Family::IR500C, Family::RR100, Family::IDF1,
                     Family::IDF2, Family::IDF3, Family::IR50}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

bool is_integer_family(Family family)
{
    return family != Family::RR100;
}

DenseMatrix generate_matrix(Family family, std::size_t m, std::size_t n, Rng& rng)
{
    DenseMatrix A(m, n);
    auto fill_int = [&](std::int64_t bound) {
        for (std::size_t j = 1; j <= n; ++j) {
            for (double& v : A.column(j)) {
                v = static_cast<double>(rng.uniform_int(-bound, bound));
            }
        }
    };
    switch (family) {
    case Family::IR500:
    case Family::IR500R:
    case Family::IR500C:
        fill_int(500);
        break;
    case Family::IR50:
        fill_int(50);
        break;
    case Family::RR100:
        for (std::size_t j = 1; j <= n; ++j) {
            for (double& v : A.column(j)) {
                v = rng.uniform_real(-100.0, 100.0);
            }
        }
        break;
    case Family::IDF1:
    case Family::IDF2:
    case Family::IDF3: {
        const double centre = static_cast<double>(m + n) / 2.0;
        for (std::size_t j = 1; j <= n; ++j) {
            for (std::size_t i = 1; i <= m; ++i) {
                const double di = static_cast<double>(i);
                const double dj = static_cast<double>(j);
                const double d = std::abs(di - dj);
                A(i, j) = family == Family::IDF1   ? d
                          : family == Family::IDF2 ? d * d
                                                   : std::abs(di + dj - centre);
            }
        }
        break;
    }
    }
    return A;
}

namespace {

void check_perturbation(const Perturbation& p, std::size_t copy_range, std::size_t other_range,
                        const char* what)
{
    if (p.i1 < 1 || p.i1 > copy_range || p.i2 < 1 || p.i2 > copy_range) {
        throw std::out_of_range(fmt::format("{} perturbation: indices {}, {} outside 1..{}", what,
                                            p.i1, p.i2, copy_range));
    }
    if (p.i1 == p.i2) {
        throw std::invalid_argument(fmt::format("{} perturbation: i1 and i2 are both {}", what, p.i1));
    }
    if (p.i3 < 1 || p.i3 > other_range) {
        throw std::out_of_range(
            fmt::format("{} perturbation: i3 = {} outside 1..{}", what, p.i3, other_range));
    }
    if (p.i4 < 0) {
        throw std::invalid_argument(fmt::format("{} perturbation: negative exponent {}", what, p.i4));
    }
}

}  // namespace

DenseMatrix perturb_rows(DenseMatrix A, const Perturbation& p)
{
    check_perturbation(p, A.rows(), A.cols(), "row");
    for (std::size_t j = 1; j <= A.cols(); ++j) {
        A(p.i2, j) = A(p.i1, j);
    }
    A(p.i1, p.i3) = 0.0;
    A(p.i2, p.i3) = std::ldexp(1.0, -p.i4);
    return A;
}

DenseMatrix perturb_cols(DenseMatrix A, const Perturbation& p)
{
    check_perturbation(p, A.cols(), A.rows(), "column");
    for (std::size_t i = 1; i <= A.rows(); ++i) {
        A(i, p.i2) = A(i, p.i1);
    }
    A(p.i3, p.i1) = 0.0;
    A(p.i3, p.i2) = std::ldexp(1.0, -p.i4);
    return A;
}

ProblemInstance build_ls_problem(DenseMatrix A, Rng& rng, bool integer_solution)
{
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (m < 2) {
        throw DimensionError("build_ls_problem needs at least two rows");
    }
    auto draw = [&] {
        return integer_solution ? static_cast<double>(rng.uniform_int(-10, 10))
                                : rng.uniform_real(-10.0, 10.0);
    };
    Vector x_star(n);
    for (double& v : x_star) {
        v = draw();
    }
    Vector b_tilde(m);
    for (double& v : b_tilde) {
        v = draw();
    }
    b_tilde(1) = -1.0;

    bool zero_column = false;
    for (std::size_t j = 1; j <= n; ++j) {
        auto col = A.column(j);
        double s = 0.0;
        for (std::size_t i = 1; i < m; ++i) {
            s += col[i] * b_tilde[i];
        }
        col[0] = s;
        zero_column = zero_column || std::all_of(col.begin(), col.end(), [](double v) { return v == 0.0; });
    }

    Vector b = b_tilde + matvec(A, x_star);
    return ProblemInstance{
        .a = std::move(A),
        .b = std::move(b),
        .x_star = std::move(x_star),
        .b_tilde = std::move(b_tilde),
        .family = Family::RR100,
        .m = m,
        .n = n,
        .seed = 0,
        .perturbation = std::nullopt,
        .zero_column_warning = zero_column,
    };
}

ProblemInstance generate_problem(const ProblemSpec& spec)
{
    Rng rng(spec.seed);
    DenseMatrix A = generate_matrix(spec.family, spec.m, spec.n, rng);
    std::optional<Perturbation> applied;
    if (spec.family == Family::IR500R) {
        applied = spec.perturbation.value_or(kDefaultRowPerturbation);
        A = perturb_rows(std::move(A), *applied);
    } else if (spec.family == Family::IR500C) {
        applied = spec.perturbation.value_or(kDefaultColumnPerturbation);
        A = perturb_cols(std::move(A), *applied);
    }
    const bool integer_solution = spec.integer_solution.value_or(is_integer_family(spec.family));
    ProblemInstance inst = build_ls_problem(std::move(A), rng, integer_solution);
    inst.family = spec.family;
    inst.seed = spec.seed;
    inst.perturbation = applied;
    return inst;
}

double construction_residual(const ProblemInstance& instance)
{
    const Vector atb = matvec_transposed(instance.a, instance.b_tilde);
    return norm_inf(atb) / (frobenius_norm(instance.a) * norm2(instance.b_tilde));
}

/*------------------------------------------------------------------------------
 *      Text archive
 *----------------------------------------------------------------------------*/
namespace {

void write_values(std::ostream& out, const Vector& v)
{
    for (double x : v) {
        out << fmt::format("{:.17g}\n", x);
    }
}

class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw std::runtime_error(fmt::format("{}:{}: {}", source_, line_no_, msg));
    }

    std::vector<std::string> tokens()
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            std::istringstream ss(line);
            std::vector<std::string> out;
            for (std::string t; ss >> t;) {
                out.push_back(t);
            }
            if (!out.empty()) {
                return out;
            }
        }
        ++line_no_;
        fail("unexpected end of file");
    }

    std::string keyed(const std::string& key)
    {
        auto t = tokens();
        if (t.size() != 2 || t[0] != key) {
            fail(fmt::format("expected '{} <value>'", key));
        }
        return t[1];
    }

    void marker(const std::string& key)
    {
        auto t = tokens();
        if (t.size() != 1 || t[0] != key) {
            fail(fmt::format("expected section '{}'", key));
        }
    }

    double number(const std::string& text)
    {
        double v = 0.0;
        const auto* first = text.data();
        const auto* last = first + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            fail(fmt::format("'{}' is not a number", text));
        }
        return v;
    }

    std::uint64_t count(const std::string& text)
    {
        std::uint64_t v = 0;
        const auto* first = text.data();
        const auto* last = first + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            fail(fmt::format("'{}' is not a nonnegative integer", text));
        }
        return v;
    }

    Vector values(std::size_t len)
    {
        Vector v(len);
        for (std::size_t k = 0; k < len; ++k) {
            auto t = tokens();
            if (t.size() != 1) {
                fail("expected one value per line");
            }
            v[k] = number(t[0]);
        }
        return v;
    }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

}  // namespace

void write_instance(std::ostream& out, const ProblemInstance& inst)
{
    out << "abslsq-instance 1\n";
    out << "family " << to_string(inst.family) << '\n';
    out << "m " << inst.m << '\n';
    out << "n " << inst.n << '\n';
    out << "seed " << inst.seed << '\n';
    if (inst.perturbation) {
        const auto& p = *inst.perturbation;
        out << fmt::format("perturbation {} {} {} {}\n", p.i1, p.i2, p.i3, p.i4);
    } else {
        out << "perturbation none\n";
    }
    out << "A\n";
    for (std::size_t i = 1; i <= inst.m; ++i) {
        for (std::size_t j = 1; j <= inst.n; ++j) {
            out << (j == 1 ? "" : " ") << fmt::format("{:.17g}", inst.a(i, j));
        }
        out << '\n';
    }
    out << "b\n";
    write_values(out, inst.b);
    out << "x_star\n";
    write_values(out, inst.x_star);
    out << "b_tilde\n";
    write_values(out, inst.b_tilde);
}

void save_instance(const std::filesystem::path& path, const ProblemInstance& instance)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    write_instance(out, instance);
    if (!out) {
        throw std::runtime_error(fmt::format("error while writing {}", path.string()));
    }
}

ProblemInstance read_instance(std::istream& in, const std::string& source)
{
    LineReader rd(in, source);
    {
        auto t = rd.tokens();
        if (t.size() != 2 || t[0] != "abslsq-instance" || t[1] != "1") {
            rd.fail("not an abslsq-instance version 1 file");
        }
    }
    const std::string fam_name = rd.keyed("family");
    const auto family = parse_family(fam_name);
    if (!family) {
        rd.fail(fmt::format("unknown family '{}'", fam_name));
    }
    const std::size_t m = rd.count(rd.keyed("m"));
    const std::size_t n = rd.count(rd.keyed("n"));
    if (m < 2 || n < 1) {
        rd.fail("dimensions must satisfy m >= 2, n >= 1");
    }
    const std::uint64_t seed = rd.count(rd.keyed("seed"));

    std::optional<Perturbation> perturbation;
    {
        auto t = rd.tokens();
        if (t.empty() || t[0] != "perturbation") {
            rd.fail("expected 'perturbation'");
        }
        if (t.size() == 2 && t[1] == "none") {
            // nothing
        } else if (t.size() == 5) {
            perturbation = Perturbation{rd.count(t[1]), rd.count(t[2]), rd.count(t[3]),
                                        static_cast<int>(rd.count(t[4]))};
        } else {
            rd.fail("expected 'perturbation none' or four integers");
        }
    }

    rd.marker("A");
    DenseMatrix A(m, n);
    for (std::size_t i = 1; i <= m; ++i) {
        auto t = rd.tokens();
        if (t.size() != n) {
            rd.fail(fmt::format("row {} has {} values, expected {}", i, t.size(), n));
        }
        for (std::size_t j = 1; j <= n; ++j) {
            A(i, j) = rd.number(t[j - 1]);
        }
    }
    rd.marker("b");
    Vector b = rd.values(m);
    rd.marker("x_star");
    Vector x_star = rd.values(n);
    rd.marker("b_tilde");
    Vector b_tilde = rd.values(m);

    bool zero_column = false;
    for (std::size_t j = 1; j <= n; ++j) {
        auto col = A.column(j);
        zero_column = zero_column || std::all_of(col.begin(), col.end(), [](double v) { return v == 0.0; });
    }
    return ProblemInstance{
        .a = std::move(A),
        .b = std::move(b),
        .x_star = std::move(x_star),
        .b_tilde = std::move(b_tilde),
        .family = *family,
        .m = m,
        .n = n,
        .seed = seed,
        .perturbation = perturbation,
        .zero_column_warning = zero_column,
    };
}

ProblemInstance load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open instance file {}", path.string()));
    }
    return read_instance(in, path.string());
}

}  // namespace abslsq
