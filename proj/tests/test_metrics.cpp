// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abslsq/baselines.hpp"
#include "abslsq/metrics.hpp"

using namespace abslsq;

namespace {

using Table = std::vector<std::vector<std::optional<double>>>;

Table random_table(std::size_t problems, std::size_t methods, std::uint64_t seed)
{
    Rng rng(seed);
    Table t(problems);
    for (auto& row : t) {
        for (std::size_t k = 0; k < methods; ++k) {
            if (rng.uniform_int(0, 9) == 0) {
                row.emplace_back();
            } else {
                row.emplace_back(std::pow(10.0, rng.uniform_real(-12, -4)));
            }
        }
    }
    return t;
}

std::vector<std::string> names(std::size_t q)
{
    std::vector<std::string> out;
    for (std::size_t k = 0; k < q; ++k) {
        out.push_back("m" + std::to_string(k + 1));
    }
    return out;
}

}  // namespace

TEST(Errors, ExactAndShiftedSolutions)
{
    const ProblemInstance p = generate_problem({.family = Family::IR50, .m = 8, .n = 4, .seed = 2});
    SolveResult r{.x = p.x_star};
    const auto e = compute_errors(p, r);
    ASSERT_TRUE(e);
    EXPECT_EQ(e->solution_error, 0.0);
    EXPECT_EQ(e->solution_error_2, 0.0);

    r.x(1) += 0.25;
    const auto f = compute_errors(p, r);
    EXPECT_DOUBLE_EQ(f->solution_error, 0.25);
    EXPECT_DOUBLE_EQ(f->solution_error_2, 0.25);
}

TEST(Errors, BreakdownIsMissing)
{
    const ProblemInstance p = generate_problem({.family = Family::IR50, .m = 8, .n = 4, .seed = 2});
    SolveResult r{.x = p.x_star, .status = SolveStatus::breakdown};
    EXPECT_FALSE(compute_errors(p, r).has_value());
}

TEST(Errors, OracleResidualIsTiny)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ProblemInstance p = generate_problem({.family = Family::RR100, .m = 40, .n = 20, .seed = seed});
        const SolveResult r = svd_least_squares(p.a, p.b, default_rcond(40, 20));
        EXPECT_LE(compute_errors(p, r)->residual_error, 1e-12);
    }
}

TEST(Scoreboard, TwoMethodsOneProblem)
{
    const Scoreboard sb = build_scoreboard({"a", "b"}, Table{{1.0, 2.0}});
    EXPECT_EQ(sb.wins[0][1], 1u);
    EXPECT_EQ(sb.wins[1][0], 0u);
    EXPECT_EQ(sb.near_ties[0][1], 0u);
    EXPECT_EQ(sb.cell(0, 1), "1");
    EXPECT_EQ(sb.cell(0, 0), "");
    EXPECT_EQ(sb.total(0), "1/0");
}

TEST(Scoreboard, HalfPercentIsATie)
{
    const Scoreboard sb = build_scoreboard({"a", "b"}, Table{{1.000, 1.005}});
    EXPECT_EQ(sb.near_ties[0][1], 1u);
    EXPECT_EQ(sb.near_ties[1][0], 1u);
    EXPECT_EQ(sb.wins[0][1] + sb.wins[1][0], 0u);
    EXPECT_EQ(sb.cell(1, 0), "0/1");
    // both zero: tie
    EXPECT_EQ(build_scoreboard({"a", "b"}, Table{{0.0, 0.0}}).near_ties[0][1], 1u);
    // two percent: a win
    EXPECT_EQ(build_scoreboard({"a", "b"}, Table{{1.0, 1.02}}).wins[0][1], 1u);
}

TEST(Scoreboard, MissingEntriesAreExcluded)
{
    const Scoreboard sb = build_scoreboard({"a", "b", "c"}, Table{{1.0, std::nullopt, 3.0}});
    EXPECT_EQ(sb.wins[0][2], 1u);
    EXPECT_EQ(sb.wins[0][1] + sb.wins[1][0] + sb.near_ties[0][1], 0u);
}

TEST(Scoreboard, Errors)
{
    EXPECT_THROW(build_scoreboard({"a"}, Table{{1.0}}), std::invalid_argument);
    EXPECT_THROW(build_scoreboard({"a", "b"}, Table{}), std::invalid_argument);
    EXPECT_THROW(build_scoreboard({"a", "b"}, Table{{1.0}}), DimensionError);
}

TEST(Scoreboard, ConservationOnRandomTables)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Table t = random_table(21, 8, seed);
        const Scoreboard sb = build_scoreboard(names(8), t);
        for (std::size_t i = 0; i < 8; ++i) {
            EXPECT_EQ(sb.wins[i][i] + sb.near_ties[i][i], 0u);
            for (std::size_t k = 0; k < 8; ++k) {
                if (i == k) {
                    continue;
                }
                std::size_t both = 0;
                for (const auto& row : t) {
                    both += row[i] && row[k] ? 1 : 0;
                }
                EXPECT_EQ(sb.wins[i][k] + sb.wins[k][i] + sb.near_ties[i][k], both);
                EXPECT_EQ(sb.near_ties[i][k], sb.near_ties[k][i]);
            }
        }
    }
}

TEST(Scoreboard, ScalingUpLosesWins)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Table t = random_table(15, 4, seed);
        const Scoreboard before = build_scoreboard(names(4), t);
        for (auto& row : t) {
            if (row[0]) {
                *row[0] *= 1.5;
            }
        }
        const Scoreboard after = build_scoreboard(names(4), t);
        EXPECT_LE(after.total_wins(0), before.total_wins(0));
        for (std::size_t k = 1; k < 4; ++k) {
            EXPECT_LE(after.wins[0][k], before.wins[0][k]);
            EXPECT_GE(after.wins[k][0], before.wins[k][0]);
        }
    }
}

TEST(Scoreboard, MetricSelection)
{
    std::vector<std::vector<std::optional<ErrorPair>>> t{
        {ErrorPair{1.0, 1.0, 5.0}, ErrorPair{2.0, 2.0, 1.0}}};
    EXPECT_EQ(build_scoreboard({"a", "b"}, t, Metric::solution).wins[0][1], 1u);
    EXPECT_EQ(build_scoreboard({"a", "b"}, t, Metric::residual).wins[1][0], 1u);
}

TEST(Scoreboard, Formatting)
{
    const Scoreboard sb = build_scoreboard({"huang6", "mod.huang6"}, Table{{1.0, 2.0}, {1.0, 1.001}});
    const std::string text = format_scoreboard(sb, Metric::solution);
    EXPECT_NE(text.find("solution error  -  2  overdetermined"), std::string::npos);
    EXPECT_NE(text.find("1/1"), std::string::npos);
    EXPECT_NE(text.find("0/1"), std::string::npos);
}

TEST(ResultTable, HeaderOnlyWhenEmpty)
{
    const std::string t = format_result_table({});
    EXPECT_NE(t.find("matrix  dimension    method"), std::string::npos);
    EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 3);
    EXPECT_EQ(format_result_csv({}),
              "family,m,n,seed,method,solution_error,residual_error,rank,time_seconds,status\n");
}

TEST(ResultTable, RowsAndBreakdown)
{
    ResultRow ok{.family = Family::IDF1, .m = 105, .n = 95, .seed = 1, .method = "mod.huang7",
                 .status = SolveStatus::converged, .errors = ErrorPair{0.017, 0.02, 2.3e-16},
                 .rank = 95, .time_seconds = 0.5, .condition = 1.5e7};
    ResultRow bad = ok;
    bad.method = "impl.qr5";
    bad.status = SolveStatus::breakdown;
    bad.errors.reset();
    bad.condition.reset();
    const std::string t = format_result_table({ok, bad});
    std::istringstream lines(t);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line)) {
        all.push_back(line);
    }
    ASSERT_EQ(all.size(), 6u);
    EXPECT_NE(all[3].find("1.7e-02"), std::string::npos);
    EXPECT_NE(all[3].find("2.3e-16"), std::string::npos);
    EXPECT_NE(all[4].find("--- break-down ---"), std::string::npos);
    EXPECT_NE(all[5].find("condition number:"), std::string::npos);
    // the method column starts at the same offset on both lines
    EXPECT_EQ(all[3].find("mod.huang7"), all[4].find("impl.qr5"));

    const std::string csv = format_result_csv({ok, bad});
    EXPECT_NE(csv.find("IDF1,105,95,1,mod.huang7,1.700000e-02,2.300000e-16,95,5.000000e-01,converged"),
              std::string::npos);
    EXPECT_NE(csv.find("IDF1,105,95,1,impl.qr5,,,95,5.000000e-01,breakdown"), std::string::npos);
}

TEST(Timing, Median)
{
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0}), 2.5);
    EXPECT_THROW(median({}), std::invalid_argument);
}
