// SPDX-License-Identifier: Apache-2.0

#include "abslsq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace abslsq {

std::optional<ErrorPair> compute_errors(const ProblemInstance& instance, const SolveResult& result)
{
    if (result.status == SolveStatus::breakdown) {
        return std::nullopt;
    }
    if (result.x.size() != instance.n) {
        throw DimensionError(fmt::format("solution has {} entries, problem has {} unknowns",
                                         result.x.size(), instance.n));
    }
    const Vector dx = result.x - instance.x_star;
    const Vector r = matvec(instance.a, result.x) - instance.b;
    const Vector g = matvec_transposed(instance.a, r);
    const double scale = frobenius_norm(instance.a) * norm2(instance.b);

    ErrorPair e;
    e.solution_error = norm_inf(dx);
    e.solution_error_2 = norm2(dx);
    e.residual_error = scale > 0.0 ? norm2(g) / scale : norm2(g);
    if (std::isnan(e.solution_error) || std::isnan(e.residual_error)) {
        throw std::domain_error("error measure is NaN");
    }
    return e;
}

std::string_view to_string(Metric metric)
{
    return metric == Metric::solution ? "solution error" : "residual error";
}

/*------------------------------------------------------------------------------
 *      Scoreboard
 *----------------------------------------------------------------------------*/
std::size_t Scoreboard::total_wins(std::size_t i) const
{
    std::size_t t = 0;
    for (std::size_t w : wins.at(i)) {
        t += w;
    }
    return t;
}

std::size_t Scoreboard::total_ties(std::size_t i) const
{
    std::size_t t = 0;
    for (std::size_t w : near_ties.at(i)) {
        t += w;
    }
    return t;
}

std::string Scoreboard::cell(std::size_t i, std::size_t k) const
{
    if (i == k) {
        return {};
    }
    const std::size_t t = near_ties.at(i).at(k);
    return t == 0 ? fmt::format("{}", wins[i][k]) : fmt::format("{}/{}", wins[i][k], t);
}

std::string Scoreboard::total(std::size_t i) const
{
    return fmt::format("{}/{}", total_wins(i), total_ties(i));
}

Scoreboard build_scoreboard(const std::vector<std::string>& methods,
                            const std::vector<std::vector<std::optional<double>>>& errors,
                            double tie_fraction)
{
    const std::size_t q = methods.size();
    if (q < 2) {
        throw std::invalid_argument("a scoreboard needs at least two methods");
    }
    if (errors.empty()) {
        throw std::invalid_argument("a scoreboard needs at least one problem");
    }
    if (!(tie_fraction >= 0.0)) {
        throw std::invalid_argument("tie fraction must be nonnegative");
    }
    Scoreboard sb;
    sb.methods = methods;
    sb.problems = errors.size();
    sb.wins.assign(q, std::vector<std::size_t>(q, 0));
    sb.near_ties.assign(q, std::vector<std::size_t>(q, 0));

    for (std::size_t p = 0; p < errors.size(); ++p) {
        const auto& row = errors[p];
        if (row.size() != q) {
            throw DimensionError(
                fmt::format("problem {} has {} entries for {} methods", p + 1, row.size(), q));
        }
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t k = i + 1; k < q; ++k) {
                if (!row[i] || !row[k]) {
                    continue;
                }
                const double a = *row[i];
                const double b = *row[k];
                if (std::abs(a - b) <= tie_fraction * std::max(a, b)) {
                    ++sb.near_ties[i][k];
                    ++sb.near_ties[k][i];
                } else if (a < b) {
                    ++sb.wins[i][k];
                } else {
                    ++sb.wins[k][i];
                }
            }
        }
    }
    return sb;
}

Scoreboard build_scoreboard(const std::vector<std::string>& methods,
                            const std::vector<std::vector<std::optional<ErrorPair>>>& errors,
                            Metric metric, double tie_fraction)
{
    std::vector<std::vector<std::optional<double>>> picked;
    picked.reserve(errors.size());
    for (const auto& row : errors) {
        auto& out = picked.emplace_back();
        for (const auto& e : row) {
            if (e) {
                out.emplace_back(metric == Metric::solution ? e->solution_error : e->residual_error);
            } else {
                out.emplace_back();
            }
        }
    }
    return build_scoreboard(methods, picked, tie_fraction);
}

std::string format_scoreboard(const Scoreboard& board, Metric metric)
{
    std::size_t label_w = 7;
    for (const auto& m : board.methods) {
        label_w = std::max(label_w, m.size());
    }
    std::size_t col_w = 6;
    for (const auto& m : board.methods) {
        col_w = std::max(col_w, m.size() + 1);
    }

    std::string out = fmt::format("   {}  -  {}  overdetermined linear systems\n\n",
                                  to_string(metric), board.problems);
    out += fmt::format("   {:<{}}", "methods", label_w + 2);
    for (const auto& m : board.methods) {
        out += fmt::format("{:>{}}", m, col_w);
    }
    out += fmt::format("{:>10}\n\n", "total");
    for (std::size_t i = 0; i < board.methods.size(); ++i) {
        out += fmt::format("   {:<{}}", board.methods[i], label_w + 2);
        for (std::size_t k = 0; k < board.methods.size(); ++k) {
            out += fmt::format("{:>{}}", board.cell(i, k), col_w);
        }
        out += fmt::format("{:>10}\n", board.total(i));
    }
    return out;
}

/*------------------------------------------------------------------------------
 *      Result tables
 *----------------------------------------------------------------------------*/
namespace {

bool same_problem(const ResultRow& a, const ResultRow& b)
{
    return a.family == b.family && a.m == b.m && a.n == b.n && a.seed == b.seed;
}

}  // namespace

std::string format_result_table(const std::vector<ResultRow>& rows)
{
    std::string out;
    out += " matrix  dimension    method       solution  residual   rank       time\n";
    out += "           m    n                  error     error\n";
    out += " ----------------------------------------------------------------------\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const ResultRow& row = rows[r];
        out += fmt::format(" {:<7}{:>5}{:>5}    {:<12}", to_string(row.family), row.m, row.n,
                           row.method);
        if (row.errors) {
            out += fmt::format(" {:>8.1e}  {:>8.1e}  {:>5}  {:>9.2e}\n", row.errors->solution_error,
                               row.errors->residual_error, row.rank, row.time_seconds);
        } else {
            out += " --- break-down ---\n";
        }
        const bool last_of_group = r + 1 == rows.size() || !same_problem(row, rows[r + 1]);
        if (last_of_group) {
            // The first row of the group carries the condition number.
            std::size_t first = r;
            while (first > 0 && same_problem(rows[first - 1], row)) {
                --first;
            }
            if (rows[first].condition) {
                out += fmt::format(" condition number: {:>9.1e}\n", *rows[first].condition);
            }
            if (r + 1 != rows.size()) {
                out += '\n';
            }
        }
    }
    return out;
}

std::string format_result_csv(const std::vector<ResultRow>& rows)
{
    std::string out = "family,m,n,seed,method,solution_error,residual_error,rank,time_seconds,status\n";
    for (const auto& row : rows) {
        out += fmt::format("{},{},{},{},{},", to_string(row.family), row.m, row.n, row.seed,
                           row.method);
        if (row.errors) {
            out += fmt::format("{:.6e},{:.6e},", row.errors->solution_error,
                               row.errors->residual_error);
        } else {
            out += ",,";
        }
        out += fmt::format("{},{:.6e},{}\n", row.rank, row.time_seconds, to_string(row.status));
    }
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    return values.size() % 2 == 1 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

}  // namespace abslsq
