// SPDX-License-Identifier: Apache-2.0

#include "abslsq/suite.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "abslsq/abs_engine.hpp"
#include "abslsq/baselines.hpp"

namespace abslsq {

/*------------------------------------------------------------------------------
 *      Roster
 *----------------------------------------------------------------------------*/
namespace {

constexpr std::pair<Method, std::string_view> kLabels[] = {
    {Method::huang1, "huang1"},         {Method::huang2, "huang2"},
    {Method::mod_huang1, "mod.huang1"}, {Method::mod_huang2, "mod.huang2"},
    {Method::huang6, "huang6"},         {Method::mod_huang6, "mod.huang6"},
    {Method::huang7, "huang7"},         {Method::mod_huang7, "mod.huang7"},
    {Method::impl_qr5, "impl.qr5"},     {Method::qr, "qr"},
    {Method::svd, "svd"},               {Method::gqr, "gqr"},
};

}  // namespace

std::string_view label(Method method)
{
    for (const auto& [m, name] : kLabels) {
        if (m == method) {
            return name;
        }
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (const auto& [m, lbl] : kLabels) {
        if (lbl == name) {
            return m;
        }
    }
    return std::nullopt;
}

std::vector<Method> default_roster()
{
    return {Method::huang6, Method::mod_huang6, Method::huang7, Method::mod_huang7,
            Method::impl_qr5, Method::qr, Method::svd, Method::gqr};
}

bool is_least_squares_method(Method method)
{
    switch (method) {
    case Method::huang1:
    case Method::huang2:
    case Method::mod_huang1:
    case Method::mod_huang2:
        return false;
    default:
        return true;
    }
}

SolveResult run_method(Method method, const DenseMatrix& A, const Vector& b, double tol,
                       double rcond)
{
    switch (method) {
    case Method::huang1: return solve(SolverKind::huang1, A, b, tol);
    case Method::huang2: return solve(SolverKind::huang2, A, b, tol);
    case Method::mod_huang1: return solve(SolverKind::modified_huang1, A, b, tol);
    case Method::mod_huang2: return solve(SolverKind::modified_huang2, A, b, tol);
    case Method::huang6: return solve(SolverKind::ls_huang_stored_l, A, b, tol);
    case Method::mod_huang6: return solve(SolverKind::modified_ls_huang_stored_l, A, b, tol);
    case Method::huang7: return solve(SolverKind::ls_huang_no_l, A, b, tol);
    case Method::mod_huang7: return solve(SolverKind::modified_ls_huang_no_l, A, b, tol);
    case Method::impl_qr5: return solve(SolverKind::implicit_qr, A, b, tol);
    case Method::qr: return qr_least_squares(A, b);
    case Method::svd: return svd_least_squares(A, b, rcond);
    case Method::gqr: return pivoted_qr_least_squares(A, b, rcond);
    }
    throw std::logic_error("unknown method");
}

/*------------------------------------------------------------------------------
 *      Config parsing
 *----------------------------------------------------------------------------*/
namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(std::string_view s)
{
    std::istringstream ss{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; ss >> w;) {
        out.push_back(w);
    }
    return out;
}

class ConfigParser {
public:
    ConfigParser(std::string source, std::filesystem::path base_dir)
        : source_(std::move(source)), base_dir_(std::move(base_dir))
    {}

    SuiteConfig parse(std::istream& in)
    {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            std::string_view text = raw;
            if (auto hash = text.find('#'); hash != std::string_view::npos) {
                text = text.substr(0, hash);
            }
            text = trim(text);
            if (text.empty()) {
                continue;
            }
            if (text.front() == '[') {
                finish_block();
                if (text == "[problem]") {
                    block_ = Block::problem;
                } else if (text == "[method]") {
                    block_ = Block::method;
                } else {
                    fail(fmt::format("unknown section '{}'", text));
                }
                block_line_ = line_;
                keys_.clear();
                continue;
            }
            const auto eq = text.find('=');
            if (eq == std::string_view::npos) {
                fail("expected 'key = value'");
            }
            const std::string key{trim(text.substr(0, eq))};
            const std::string value{trim(text.substr(eq + 1))};
            if (key.empty() || value.empty()) {
                fail("expected 'key = value'");
            }
            if (block_ == Block::none) {
                top_level(key, value);
            } else {
                if (keys_.count(key) != 0) {
                    fail(fmt::format("duplicate key '{}'", key));
                }
                keys_.emplace(key, std::make_pair(value, line_));
            }
        }
        finish_block();
        if (config_.roster.empty()) {
            throw ConfigError(fmt::format("{}: no [method] blocks, the roster is empty", source_));
        }
        if (config_.problems.empty()) {
            throw ConfigError(fmt::format("{}: no [problem] blocks", source_));
        }
        return config_;
    }

private:
    enum class Block { none, problem, method };

    [[noreturn]] void fail(const std::string& msg, std::size_t line = 0) const
    {
        throw ConfigError(fmt::format("{}:{}: {}", source_, line == 0 ? line_ : line, msg));
    }

    double real(const std::string& text, std::size_t line = 0) const
    {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            fail(fmt::format("'{}' is not a finite number", text), line);
        }
        return v;
    }

    std::uint64_t count(const std::string& text, std::size_t line = 0) const
    {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            fail(fmt::format("'{}' is not a nonnegative integer", text), line);
        }
        return v;
    }

    void top_level(const std::string& key, const std::string& value)
    {
        if (key == "tolerance") {
            config_.tolerance = positive(value);
        } else if (key == "rcond") {
            config_.rcond = positive(value);
        } else if (key == "tie_fraction") {
            config_.tie_fraction = real(value);
            if (config_.tie_fraction < 0.0) {
                fail("tie_fraction must be nonnegative");
            }
        } else if (key == "repetitions") {
            config_.repetitions = count(value);
            if (config_.repetitions == 0) {
                fail("repetitions must be at least 1");
            }
        } else if (key == "workers") {
            config_.workers = count(value);
            if (config_.workers == 0) {
                fail("workers must be at least 1");
            }
        } else if (key == "output_dir") {
            config_.output_dir = value;
        } else if (key == "well_conditioned") {
            config_.well_conditioned = positive(value);
        } else {
            fail(fmt::format("unknown key '{}'", key));
        }
    }

    double positive(const std::string& value)
    {
        const double v = real(value);
        if (v <= 0.0) {
            fail(fmt::format("'{}' must be positive", value));
        }
        return v;
    }

    void finish_block()
    {
        if (block_ == Block::problem) {
            finish_problem();
        } else if (block_ == Block::method) {
            finish_method();
        }
        block_ = Block::none;
    }

    const std::pair<std::string, std::size_t>* find(const std::string& key) const
    {
        auto it = keys_.find(key);
        return it == keys_.end() ? nullptr : &it->second;
    }

    const std::pair<std::string, std::size_t>& require(const std::string& key) const
    {
        const auto* kv = find(key);
        if (kv == nullptr) {
            fail(fmt::format("[problem] block is missing '{}'", key), block_line_);
        }
        return *kv;
    }

    void finish_method()
    {
        for (const auto& [key, kv] : keys_) {
            if (key != "name") {
                fail(fmt::format("unknown [method] key '{}'", key), kv.second);
            }
        }
        const auto* name = find("name");
        if (name == nullptr) {
            fail("[method] block is missing 'name'", block_line_);
        }
        const auto method = parse_method(name->first);
        if (!method) {
            fail(fmt::format("unknown method '{}'", name->first), name->second);
        }
        if (std::find(config_.roster.begin(), config_.roster.end(), *method) != config_.roster.end()) {
            fail(fmt::format("method '{}' listed twice", name->first), name->second);
        }
        config_.roster.push_back(*method);
    }

    void finish_problem()
    {
        static const char* known[] = {"family", "m", "n", "seed", "perturbation",
                                      "integer_solution", "file"};
        for (const auto& [key, kv] : keys_) {
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return key == k; }) == std::end(known)) {
                fail(fmt::format("unknown [problem] key '{}'", key), kv.second);
            }
        }
        if (const auto* file = find("file")) {
            if (keys_.size() != 1) {
                fail("'file' cannot be combined with generator keys", file->second);
            }
            std::filesystem::path p = file->first;
            if (p.is_relative()) {
                p = base_dir_ / p;
            }
            config_.problems.push_back(ProblemEntry{.spec = std::nullopt, .file = p});
            return;
        }

        ProblemSpec spec;
        const auto& fam = require("family");
        const auto family = parse_family(fam.first);
        if (!family) {
            fail(fmt::format("unknown family '{}'", fam.first), fam.second);
        }
        spec.family = *family;
        const auto& m = require("m");
        const auto& n = require("n");
        spec.m = count(m.first, m.second);
        spec.n = count(n.first, n.second);
        if (spec.n < 1 || spec.m < 2 || spec.m < spec.n) {
            fail(fmt::format("dimensions {}x{} must satisfy m >= n >= 1 and m >= 2", spec.m, spec.n),
                 m.second);
        }
        if (const auto* p = find("perturbation")) {
            if (spec.family != Family::IR500R && spec.family != Family::IR500C) {
                fail("perturbation only applies to IR500R and IR500C", p->second);
            }
            const auto w = split_words(p->first);
            if (w.size() != 4) {
                fail("perturbation needs four integers i1 i2 i3 i4", p->second);
            }
            Perturbation pert{count(w[0], p->second), count(w[1], p->second),
                              count(w[2], p->second), static_cast<int>(count(w[3], p->second))};
            const bool rows = spec.family == Family::IR500R;
            const std::size_t copy = rows ? spec.m : spec.n;
            const std::size_t other = rows ? spec.n : spec.m;
            if (pert.i1 < 1 || pert.i1 > copy || pert.i2 < 1 || pert.i2 > copy || pert.i1 == pert.i2 ||
                pert.i3 < 1 || pert.i3 > other || pert.i4 > 1000) {
                fail("perturbation indices out of range", p->second);
            }
            spec.perturbation = pert;
        }
        if (const auto* is = find("integer_solution")) {
            if (is->first == "true") {
                spec.integer_solution = true;
            } else if (is->first == "false") {
                spec.integer_solution = false;
            } else {
                fail("integer_solution must be true or false", is->second);
            }
        }
        const auto& seeds = require("seed");
        for (const auto& word : split_words(seeds.first)) {
            spec.seed = count(word, seeds.second);
            if (spec.seed < 1 || spec.seed > Rng::modulus - 1) {
                fail(fmt::format("seed {} outside [1, {}]", spec.seed, Rng::modulus - 1), seeds.second);
            }
            config_.problems.push_back(ProblemEntry{.spec = spec, .file = std::nullopt});
        }
    }

    std::string source_;
    std::filesystem::path base_dir_;
    std::size_t line_ = 0;
    Block block_ = Block::none;
    std::size_t block_line_ = 0;
    std::map<std::string, std::pair<std::string, std::size_t>> keys_;
    SuiteConfig config_;
};

}  // namespace

SuiteConfig parse_config(std::istream& in, const std::string& source,
                         const std::filesystem::path& base_dir)
{
    return ConfigParser(source, base_dir).parse(in);
}

SuiteConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config {}", path.string()));
    }
    return parse_config(in, path.string(), path.parent_path());
}

/*------------------------------------------------------------------------------
 *      Running
 *----------------------------------------------------------------------------*/
std::vector<ProblemInstance> materialize(const SuiteConfig& config, std::uint64_t seed_offset)
{
    std::vector<ProblemInstance> out;
    out.reserve(config.problems.size());
    for (const auto& entry : config.problems) {
        if (entry.file) {
            out.push_back(load_instance(*entry.file));
            continue;
        }
        ProblemSpec spec = *entry.spec;
        spec.seed += seed_offset;
        if (spec.seed > Rng::modulus - 1) {
            throw std::out_of_range(fmt::format("seed {} with offset {} leaves the generator range",
                                                entry.spec->seed, seed_offset));
        }
        out.push_back(generate_problem(spec));
    }
    return out;
}

namespace {

double tolerance_for(const SuiteConfig& c, const ProblemInstance& p)
{
    return c.tolerance.value_or(default_tolerance(p.m, p.n));
}

double rcond_for(const SuiteConfig& c, const ProblemInstance& p)
{
    return c.rcond.value_or(default_rcond(p.m, p.n));
}

std::optional<double> condition_of(const ProblemInstance& p)
{
    try {
        return jacobi_svd(p.a, default_rcond(p.m, p.n)).condition_number();
    } catch (const SvdConvergenceError&) {
        return std::nullopt;
    }
}

struct ProblemOutcome {
    std::vector<ResultRow> rows;
    std::vector<std::optional<ErrorPair>> errors;
    std::size_t failures = 0;
    std::vector<std::string> messages;
};

ProblemOutcome run_problem(const SuiteConfig& config, const ProblemInstance& inst)
{
    ProblemOutcome po;
    const double tol = tolerance_for(config, inst);
    const double rcond = rcond_for(config, inst);
    const auto cond = condition_of(inst);
    for (Method method : config.roster) {
        ResultRow row;
        row.family = inst.family;
        row.m = inst.m;
        row.n = inst.n;
        row.seed = inst.seed;
        row.method = std::string(label(method));
        row.condition = po.rows.empty() ? cond : std::nullopt;
        std::optional<SolveResult> result;
        std::vector<double> times;
        try {
            for (std::size_t r = 0; r < config.repetitions; ++r) {
                SolveResult res = run_method(method, inst.a, inst.b, tol, rcond);
                times.push_back(res.wall_time);
                if (!result) {
                    result = std::move(res);
                }
            }
        } catch (const SingularMatrixError& e) {
            result.reset();
            po.messages.push_back(fmt::format("{} {}x{} seed {}: {}: {}", to_string(inst.family),
                                              inst.m, inst.n, inst.seed, row.method, e.what()));
        } catch (const BreakdownError& e) {
            result.reset();
            po.messages.push_back(fmt::format("{} {}x{} seed {}: {}: {}", to_string(inst.family),
                                              inst.m, inst.n, inst.seed, row.method, e.what()));
        } catch (const std::exception& e) {
            result.reset();
            ++po.failures;
            po.messages.push_back(fmt::format("{} {}x{} seed {}: {} failed: {}",
                                              to_string(inst.family), inst.m, inst.n, inst.seed,
                                              row.method, e.what()));
        }
        if (result) {
            row.status = result->status;
            row.rank = result->rank_detected;
            row.time_seconds = median(times);
            row.errors = compute_errors(inst, *result);
        } else {
            row.status = SolveStatus::breakdown;
        }
        po.errors.push_back(row.errors);
        po.rows.push_back(std::move(row));
    }
    return po;
}

}  // namespace

SuiteOutcome execute_suite(const SuiteConfig& config, const std::vector<ProblemInstance>& problems,
                           std::size_t workers)
{
    std::vector<ProblemOutcome> slots(problems.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < problems.size(); k = next++) {
            slots[k] = run_problem(config, problems[k]);
        }
    };
    const std::size_t nthreads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(problems.size(), 1));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    SuiteOutcome out;
    for (auto& s : slots) {
        out.rows.insert(out.rows.end(), s.rows.begin(), s.rows.end());
        out.errors.push_back(std::move(s.errors));
        out.failures += s.failures;
        out.messages.insert(out.messages.end(), s.messages.begin(), s.messages.end());
    }
    return out;
}

std::filesystem::path resolve_output_dir(const SuiteConfig& config, const RunOptions& options)
{
    if (options.output_dir) {
        return *options.output_dir;
    }
    if (const char* env = std::getenv("ABSLSQ_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return config.output_dir;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out << text;
    if (!out) {
        throw std::runtime_error(fmt::format("error while writing {}", path.string()));
    }
}

}  // namespace

int run_suite(const SuiteConfig& config, const RunOptions& options, std::ostream& out,
              std::ostream& err)
{
    std::vector<ProblemInstance> problems;
    try {
        problems = materialize(config, options.seed_offset);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    const auto dir = resolve_output_dir(config, options);

    const SuiteOutcome outcome = execute_suite(config, problems, options.workers.value_or(config.workers));
    for (const auto& msg : outcome.messages) {
        err << msg << '\n';
    }

    std::vector<std::string> names;
    for (Method m : config.roster) {
        names.emplace_back(label(m));
    }
    try {
        std::filesystem::create_directories(dir);
        write_file(dir / "results.txt", format_result_table(outcome.rows));
        write_file(dir / "results.csv", format_result_csv(outcome.rows));
        for (Metric metric : {Metric::solution, Metric::residual}) {
            const auto file = dir / (metric == Metric::solution ? "scoreboard_solution.txt"
                                                                : "scoreboard_residual.txt");
            if (names.size() < 2) {
                write_file(file, "scoreboard needs at least two methods\n");
                continue;
            }
            write_file(file, format_scoreboard(
                                 build_scoreboard(names, outcome.errors, metric, config.tie_fraction),
                                 metric));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (names.size() < 2) {
        err << "warning: scoreboards are empty, they need at least two methods\n";
    }
    out << fmt::format("{} problems x {} methods -> {}\n", problems.size(), names.size(), dir.string());
    if (outcome.failures > 0) {
        err << fmt::format("{} solver runs failed\n", outcome.failures);
        return 1;
    }
    return 0;
}

/*------------------------------------------------------------------------------
 *      Verification
 *----------------------------------------------------------------------------*/
namespace {

enum class Verdict { pass, fail, skip, expected };

class Checker {
public:
    explicit Checker(std::ostream& out) : out_(out) {}

    void problem(const ProblemInstance& p)
    {
        tag_ = fmt::format("{} {}x{} seed {}", to_string(p.family), p.m, p.n, p.seed);
    }

    void bound(const std::string& name, double value, double limit)
    {
        const bool ok = value <= limit;  // NaN fails
        emit(ok ? Verdict::pass : Verdict::fail, name, fmt::format("{:.2e} <= {:.1e}", value, limit));
    }

    void emit(Verdict v, const std::string& name, const std::string& detail)
    {
        static constexpr const char* words[] = {"PASS", "FAIL", "SKIP", "EXPECTED"};
        out_ << fmt::format("{:<9}{:<28}{:<36}{}\n", words[static_cast<int>(v)], tag_, name, detail);
        ++counts_[static_cast<int>(v)];
    }

    std::size_t count(Verdict v) const { return counts_[static_cast<int>(v)]; }

private:
    std::ostream& out_;
    std::string tag_;
    std::size_t counts_[4] = {};
};

double max_abs_diff(const DenseMatrix& X, const DenseMatrix& Y)
{
    return max_abs(X - Y);
}

double relative_gap(const Vector& x, const Vector& y)
{
    const double s = norm2(x);
    return norm2(x - y) / (s > 0.0 ? s : 1.0);
}

void check_huang(Checker& ck, const ProblemInstance& inst, double tol)
{
    // Compatible underdetermined slice: the first ceil(n/2) rows, b = A_k x*.
    const std::size_t n = inst.n;
    const std::size_t k = std::min(inst.m, (n + 1) / 2);
    DenseMatrix Ak(k, n);
    for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            Ak(i, j) = inst.a(i, j);
        }
    }
    const Vector bk = matvec(Ak, inst.x_star);
    const double scale = frobenius_norm(Ak);

    auto [state, status] = run_abs(Ak, bk, huang_parameters(n), tol, 0, true);
    if (status == TerminationStatus::incompatible) {
        ck.emit(Verdict::fail, "huang_slice_compatible", "engine reported incompatible");
        return;
    }
    const DenseMatrix H = to_dense(state.abaffian);
    ck.bound("huang_symmetry", max_abs_diff(H, H.transposed()), 1e-8);
    ck.bound("huang_idempotence", max_abs_diff(matmul(H, H), H), 1e-8);
    const DenseMatrix AkT = Ak.transposed();
    ck.bound("huang_annihilation", max_abs(matmul(H, AkT)) / scale, 1e-10);
    ck.bound("huang_transposed_annihilation", max_abs(matmul(H.transposed(), AkT)) / scale, 1e-10);

    const SolveResult h1 = huang_solve(Ak, bk, false, HuangForm::explicit_matrix, tol);
    const SolveResult h2 = huang_solve(Ak, bk, false, HuangForm::projection, tol);
    const SolveResult m1 = huang_solve(Ak, bk, true, HuangForm::explicit_matrix, tol);
    const SolveResult m2 = huang_solve(Ak, bk, true, HuangForm::projection, tol);
    ck.bound("huang_engine_agreement", relative_gap(state.x, h1.x), 1e-10);
    ck.bound("huang_explicit_vs_projection", relative_gap(h1.x, h2.x), 1e-10);
    ck.bound("mod_huang_explicit_vs_projection", relative_gap(m1.x, m2.x), 1e-10);
    const Vector xmin = min_norm_solution(Ak, bk, default_rcond(k, n));
    ck.bound("huang_minimum_norm", relative_gap(xmin, h1.x), 1e-8);
}

void check_implicit_qr(Checker& ck, const ProblemInstance& inst, double tol, bool gated)
{
    ImplicitQrTrace trace;
    const SolveResult res = implicit_qr_solve(inst.a, inst.b, tol, &trace);
    if (res.status == SolveStatus::breakdown) {
        if (gated) {
            ck.emit(Verdict::expected, "implicit_qr_breakdown",
                    fmt::format("breakdown after {} steps on an ill-conditioned matrix", res.steps_taken));
        } else {
            ck.emit(Verdict::fail, "implicit_qr_breakdown",
                    fmt::format("breakdown after {} steps", res.steps_taken));
        }
        return;
    }
    if (gated) {
        ck.emit(Verdict::skip, "implicit_qr_invariants", "ill-conditioned");
        return;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.v.size(); ++i) {
        for (std::size_t j = i + 1; j < trace.v.size(); ++j) {
            const double c = std::abs(dot(trace.v[i], trace.v[j])) /
                             (norm2(trace.v[i]) * norm2(trace.v[j]));
            worst = std::max(worst, c);
        }
    }
    ck.bound("implicit_qr_v_orthogonality", worst, 1e-8);

    try {
        auto [state, status] =
            run_abs(inst.a, inst.b, implicit_qr_parameters(inst.n), tol, inst.n, true);
        (void)status;
        const double fa = frobenius_norm(inst.a);
        ck.bound("implicit_factorization_upper", implicit_factorization_check(state, inst.a) / (fa * fa),
                 1e-9);
    } catch (const BreakdownError& e) {
        ck.emit(Verdict::fail, "implicit_factorization_upper", e.what());
    }
}

}  // namespace

int verify(const SuiteConfig& config, const RunOptions& options, std::ostream& out,
           std::ostream& err)
{
    std::vector<ProblemInstance> problems;
    try {
        problems = materialize(config, options.seed_offset);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    Checker ck(out);
    for (const auto& inst : problems) {
        ck.problem(inst);
        const double tol = tolerance_for(config, inst);
        const double rcond = rcond_for(config, inst);

        const double eps = std::numeric_limits<double>::epsilon();
        ck.bound("construction_certificate", construction_residual(inst),
                 100.0 * eps * std::sqrt(static_cast<double>(inst.m)));
        if (norm2(inst.b_tilde) == 0.0) {
            ck.emit(Verdict::fail, "construction_nonzero_b_tilde", "b~ = 0");
        }

        const SvdFactorization svd = jacobi_svd(inst.a, default_rcond(inst.m, inst.n));
        const double cond = svd.condition_number();
        const bool gated = !(cond <= config.well_conditioned);
        const std::string why = fmt::format("condition {:.1e} above {:.0e}", cond, config.well_conditioned);

        if (gated) {
            ck.emit(Verdict::skip, "huang_invariants", why);
        } else {
            check_huang(ck, inst, tol);
        }
        check_implicit_qr(ck, inst, tol, gated);
        if (gated) {
            ck.emit(Verdict::skip, "least_squares_invariants", why);
            continue;
        }

        for (bool modified : {false, true}) {
            const SolveResult s = ls_huang_solve(inst.a, inst.b, modified, true, tol);
            const SolveResult r = ls_huang_solve(inst.a, inst.b, modified, false, tol);
            ck.bound(modified ? "mod_ls_huang_stored_vs_recurrence" : "ls_huang_stored_vs_recurrence",
                     relative_gap(s.x, r.x), 1e-12);
        }

        const Vector oracle = svd_solve(svd, inst.b);
        for (Method method : config.roster) {
            if (!is_least_squares_method(method)) {
                continue;
            }
            const SolveResult res = run_method(method, inst.a, inst.b, tol, rcond);
            const std::string name{label(method)};
            if (res.status == SolveStatus::breakdown) {
                ck.emit(Verdict::fail, "oracle_" + name, "breakdown");
                continue;
            }
            ck.bound("oracle_" + name, norm_inf(res.x - oracle), 1e-8);
            ck.bound("residual_" + name, compute_errors(inst, res)->residual_error, 1e-10);
        }
    }
    out << fmt::format("{} passed, {} failed, {} skipped, {} expected\n", ck.count(Verdict::pass),
                       ck.count(Verdict::fail), ck.count(Verdict::skip), ck.count(Verdict::expected));
    return ck.count(Verdict::fail) == 0 ? 0 : 1;
}

}  // namespace abslsq
