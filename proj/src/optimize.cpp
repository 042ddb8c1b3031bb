// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mariner-chan Authors

#include "mariner/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>

namespace mariner::optimize {

namespace {

struct Context {
    const std::function<double(const std::vector<double>&)>* f;
    std::vector<double> scratch;
    int evaluations = 0;
};

double trampoline(const gsl_vector* v, void* params)
{
    auto* ctx = static_cast<Context*>(params);
    for (std::size_t i = 0; i < ctx->scratch.size(); ++i)
        ctx->scratch[i] = gsl_vector_get(v, i);
    ++ctx->evaluations;
    const double y = (*ctx->f)(ctx->scratch);
    return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

} // namespace

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> start,
                           const NelderMeadOptions& opt)
{
    gsl_set_error_handler_off();
    const std::size_t n = start.size();
    Context ctx{&f, std::vector<double>(n), 0};

    gsl_multimin_function fn{&trampoline, n, &ctx};
    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x.get(), i, start[i]);
        gsl_vector_set(step.get(), i, opt.initial_step);
    }
    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());

    bool converged = false;
    while (ctx.evaluations < opt.max_evaluations) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS)
            break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), opt.x_tolerance) == GSL_SUCCESS) {
            converged = true;
            break;
        }
    }

    MinimizeResult out;
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.x[i] = gsl_vector_get(s->x, i);
    out.value = s->fval;
    out.evaluations = ctx.evaluations;
    out.converged = converged;
    return out;
}

namespace {

double call_scalar(double x, void* params)
{
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

constexpr std::size_t kQuadratureIntervals = 2000;

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol)
{
    if (!(b > a))
        return 0.0;
    gsl_set_error_handler_off();
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kQuadratureIntervals));
    gsl_function fn{&call_scalar, const_cast<std::function<double(double)>*>(&f)};
    double result = 0.0, abserr = 0.0;
    // a non-zero status means the tolerance was not met; the best estimate is kept
    gsl_integration_qag(&fn, a, b, abs_tol, rel_tol, kQuadratureIntervals, GSL_INTEG_GAUSS31, ws.get(), &result, &abserr);
    return result;
}

} // namespace mariner::optimize
