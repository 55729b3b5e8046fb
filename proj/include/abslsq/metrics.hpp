// SPDX-License-Identifier: Apache-2.0
//
// Error measures, pairwise scoreboards and the result-table writers.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "abslsq/solvers.hpp"
#include "abslsq/testgen.hpp"

namespace abslsq {

struct ErrorPair {
    double solution_error = 0.0;    // ||x - x*||_inf
    double solution_error_2 = 0.0;  // ||x - x*||_2
    double residual_error = 0.0;    // ||A^T (A x - b)||_2 / (||A||_F ||b||_2)
};

/// nullopt for a breakdown, whose iterate is meaningless.
std::optional<ErrorPair> compute_errors(const ProblemInstance& instance, const SolveResult& result);

enum class Metric { solution, residual };

std::string_view to_string(Metric metric);

struct Scoreboard {
    std::vector<std::string> methods;
    std::size_t problems = 0;
    // wins[i][k]: problems where method i beat method k outside the tie band
    std::vector<std::vector<std::size_t>> wins;
    std::vector<std::vector<std::size_t>> near_ties;

    std::size_t total_wins(std::size_t i) const;
    std::size_t total_ties(std::size_t i) const;
    /// "W" or "W/T"; empty on the diagonal.
    std::string cell(std::size_t i, std::size_t k) const;
    /// Always "W/T".
    std::string total(std::size_t i) const;
};

/// errors[problem][method]; missing entries drop the problem for every pair
/// involving that method. Two errors tie when |a - b| <= tie_fraction max(a, b).
Scoreboard build_scoreboard(const std::vector<std::string>& methods,
                            const std::vector<std::vector<std::optional<double>>>& errors,
                            double tie_fraction = 0.01);
Scoreboard build_scoreboard(const std::vector<std::string>& methods,
                            const std::vector<std::vector<std::optional<ErrorPair>>>& errors,
                            Metric metric, double tie_fraction = 0.01);

std::string format_scoreboard(const Scoreboard& board, Metric metric);

struct ResultRow {
    Family family = Family::RR100;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string method;
    SolveStatus status = SolveStatus::converged;
    std::optional<ErrorPair> errors;
    std::size_t rank = 0;
    double time_seconds = 0.0;
    /// Printed once after the problem's group of rows.
    std::optional<double> condition;
};

std::string format_result_table(const std::vector<ResultRow>& rows);
std::string format_result_csv(const std::vector<ResultRow>& rows);

double median(std::vector<double> values);

}  // namespace abslsq
