// SPDX-License-Identifier: Apache-2.0

#include "abslsq/abs_engine.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace abslsq {

namespace {

// y - P D^{-1} P^T y, all inner products against the original y.
Vector apply_projection(const ProjectionAbaffian& h, const Vector& y)
{
    std::vector<double> coeff(h.p.size());
    for (std::size_t k = 0; k < h.p.size(); ++k) {
        coeff[k] = dot(h.p[k], y) / h.d[k];
    }
    Vector out = y;
    for (std::size_t k = 0; k < h.p.size(); ++k) {
        axpy(-coeff[k], h.p[k].span(), out.span());
    }
    return out;
}

std::size_t abaffian_order(const AbaffianRep& h)
{
    if (const auto* e = std::get_if<ExplicitAbaffian>(&h)) {
        return e->h.rows();
    }
    return std::get<ProjectionAbaffian>(h).order;
}

}  // namespace

Vector apply_abaffian(const AbaffianRep& h, const Vector& y)
{
    if (abaffian_order(h) != y.size()) {
        throw DimensionError("Abaffian applied to a vector of the wrong length");
    }
    if (const auto* e = std::get_if<ExplicitAbaffian>(&h)) {
        return matvec(e->h, y);
    }
    return apply_projection(std::get<ProjectionAbaffian>(h), y);
}

Vector apply_abaffian_transposed(const AbaffianRep& h, const Vector& y)
{
    if (abaffian_order(h) != y.size()) {
        throw DimensionError("Abaffian applied to a vector of the wrong length");
    }
    if (const auto* e = std::get_if<ExplicitAbaffian>(&h)) {
        return matvec_transposed(e->h, y);
    }
    // I - P D^{-1} P^T is symmetric
    return apply_projection(std::get<ProjectionAbaffian>(h), y);
}

DenseMatrix to_dense(const AbaffianRep& h)
{
    if (const auto* e = std::get_if<ExplicitAbaffian>(&h)) {
        return e->h;
    }
    const auto& proj = std::get<ProjectionAbaffian>(h);
    DenseMatrix H = DenseMatrix::identity(proj.order);
    for (std::size_t k = 0; k < proj.p.size(); ++k) {
        const Vector& p = proj.p[k];
        for (std::size_t j = 1; j <= proj.order; ++j) {
            axpy(-p(j) / proj.d[k], p.span(), H.column(j));
        }
    }
    return H;
}

double default_tolerance(std::size_t m, std::size_t n)
{
    return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m, n));
}

AbsParameters huang_parameters(std::size_t n, Representation rep)
{
    auto row = [](const AbsState& s, const DenseMatrix& A) { return A.row_vector(s.iter); };
    return AbsParameters{
        .choose_v = {},
        .choose_z = row,
        .choose_w = row,
        .h1 = DenseMatrix::identity(n),
        .x1 = Vector(n),
        .representation = rep,
    };
}

AbsParameters implicit_qr_parameters(std::size_t n)
{
    auto unit = [](const AbsState& s, const DenseMatrix& A) { return Vector::unit(A.cols(), s.iter); };
    return AbsParameters{
        .choose_v =
            [](const AbsState& s, const DenseMatrix& A, const Vector&) {
                const Vector p = apply_abaffian_transposed(s.abaffian, Vector::unit(A.cols(), s.iter));
                return matvec(A, p);
            },
        .choose_z = unit,
        .choose_w = unit,
        .h1 = DenseMatrix::identity(n),
        .x1 = Vector(n),
        .representation = Representation::explicit_matrix,
    };
}

AbsState initial_state(const DenseMatrix& A, const Vector& b, const AbsParameters& params,
                       bool keep_history)
{
    const std::size_t n = A.cols();
    if (b.size() != A.rows()) {
        throw DimensionError(fmt::format("right-hand side has length {}, matrix has {} rows",
                                         b.size(), A.rows()));
    }
    if (params.x1.size() != n || params.h1.rows() != n || params.h1.cols() != n) {
        throw DimensionError("initial iterate or Abaffian does not match the number of unknowns");
    }
    AbaffianRep h = ExplicitAbaffian{params.h1};
    if (params.representation == Representation::projection) {
        if (!(params.h1 == DenseMatrix::identity(n))) {
            throw std::invalid_argument("projection representation requires H_1 = I");
        }
        h = ProjectionAbaffian{.order = n, .p = {}, .d = {}};
    }
    std::optional<Vector> residual;
    if (!params.basic_class()) {
        residual = matvec(A, params.x1) - b;
    }
    std::optional<std::vector<StepRecord>> history;
    if (keep_history) {
        history.emplace();
    }
    return AbsState{
        .iter = 1,
        .x = params.x1,
        .abaffian = std::move(h),
        .residual = std::move(residual),
        .rank_detected = 0,
        .history = std::move(history),
    };
}

StepOutcome abs_step(AbsState state, const DenseMatrix& A, const Vector& b,
                     const AbsParameters& params, double tol)
{
    const std::size_t m = A.rows();
    const std::size_t i = state.iter;
    if (tol < 0.0) {
        throw std::invalid_argument("tolerance must be nonnegative");
    }
    if (i > m) {
        throw std::logic_error(fmt::format("step {} requested for a system of {} equations", i, m));
    }
    const double norm_a = frobenius_norm(A);
    const double norm_b = norm2(b);

    // (B)
    std::optional<Vector> v;
    std::optional<Vector> at_v;
    double r_v = 0.0;
    if (params.basic_class()) {
        v = Vector::unit(m, i);
        at_v = A.row_vector(i);
        r_v = dot(*at_v, state.x) - b(i);
    } else {
        const Vector& r = state.residual.value();
        if (norm2(r) <= tol * norm_b) {
            return {StepKind::solved, std::move(state)};
        }
        v = params.choose_v(state, A, b);
        if (v->size() != m) {
            throw DimensionError("choose_v returned a vector of the wrong length");
        }
        at_v = matvec_transposed(A, *v);
        r_v = dot(r, *v);
    }
    const double norm_v = norm2(*v);
    const Vector s = apply_abaffian(state.abaffian, *at_v);
    const double norm_s = norm2(s);

    if (norm_s <= tol * norm_a * norm_v) {
        if (std::abs(r_v) <= tol * norm_b * norm_v) {
            ++state.iter;
            return {StepKind::skipped, std::move(state)};
        }
        return {StepKind::incompatible, std::move(state)};
    }

    // (C)
    const Vector z = params.choose_z(state, A);
    const Vector w = params.choose_w(state, A);
    const Vector p = apply_abaffian_transposed(state.abaffian, z);
    const double p_at_v = dot(z, s);
    const double pivot = dot(w, s);
    if (std::abs(p_at_v) <= tol * norm2(z) * norm_s || std::abs(pivot) <= tol * norm2(w) * norm_s) {
        throw BreakdownError(i, fmt::format("ABS breakdown at step {}: pivot {:.3e} with |s| = {:.3e}",
                                            i, pivot, norm_s));
    }

    // (D)
    const double alpha = r_v / p_at_v;
    axpy(-alpha, p.span(), state.x.span());
    if (state.residual) {
        axpy(-alpha, matvec(A, p).span(), state.residual->span());
    }

    // (E)
    if (auto* e = std::get_if<ExplicitAbaffian>(&state.abaffian)) {
        const Vector wh = matvec_transposed(e->h, w);  // (w^T H)^T
        for (std::size_t j = 1; j <= e->h.cols(); ++j) {
            axpy(-wh(j) / pivot, s.span(), e->h.column(j));
        }
    } else {
        auto& proj = std::get<ProjectionAbaffian>(state.abaffian);
        proj.p.push_back(p);
        proj.d.push_back(pivot);
    }

    if (state.history) {
        state.history->push_back(StepRecord{.index = i, .p = p, .v = *v, .w = w, .d = pivot});
    }
    ++state.rank_detected;
    ++state.iter;
    return {StepKind::accepted, std::move(state)};
}

std::pair<AbsState, TerminationStatus> run_abs(const DenseMatrix& A, const Vector& b,
                                               const AbsParameters& params, double tol,
                                               std::size_t max_steps, bool keep_history)
{
    const std::size_t cap = max_steps == 0 ? A.rows() : max_steps;
    AbsState state = initial_state(A, b, params, keep_history);
    for (std::size_t step = 0; step < cap && state.iter <= A.rows(); ++step) {
        StepOutcome out = abs_step(std::move(state), A, b, params, tol);
        state = std::move(out.state);
        if (out.kind == StepKind::solved) {
            return {std::move(state), TerminationStatus::solved};
        }
        if (out.kind == StepKind::incompatible) {
            return {std::move(state), TerminationStatus::incompatible};
        }
    }
    return {std::move(state), TerminationStatus::completed};
}

Vector general_solution_point(const AbsState& state, const Vector& q)
{
    return state.x + apply_abaffian_transposed(state.abaffian, q);
}

double implicit_factorization_check(const AbsState& state, const DenseMatrix& A)
{
    if (!state.history) {
        throw std::logic_error("implicit_factorization_check needs a run with history kept");
    }
    const auto& steps = *state.history;
    std::vector<Vector> ap;
    ap.reserve(steps.size());
    for (const auto& st : steps) {
        ap.push_back(matvec(A, st.p));
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        for (std::size_t l = 0; l < steps.size(); ++l) {
            const double entry = dot(steps[j].v, ap[l]);
            if (l == j && entry == 0.0) {
                throw std::runtime_error(
                    fmt::format("zero diagonal entry in V^T A P at accepted step {}", j + 1));
            }
            if (l > j) {
                worst = std::max(worst, std::abs(entry));
            }
        }
    }
    return worst;
}

}  // namespace abslsq
