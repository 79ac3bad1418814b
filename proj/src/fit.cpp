#include "kapitza/fit.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace kapitza {

namespace {

struct Samples {
    Eigen::VectorXd t;
    Eigen::VectorXd y;
};

Samples finite_samples(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("fit: time and value lengths differ");
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::isfinite(t[i]) && std::isfinite(y[i])) {
            ts.push_back(t[i]);
            ys.push_back(y[i]);
        }
    }
    if (ts.size() < 3) throw std::invalid_argument("fit: fewer than three finite samples");
    return {Eigen::Map<Eigen::VectorXd>(ts.data(), ts.size()),
            Eigen::Map<Eigen::VectorXd>(ys.data(), ys.size())};
}

// model value and parameter gradient at one time
using Model = std::function<double(const Eigen::VectorXd& p, double t, double* grad)>;

double product_cos(const Eigen::VectorXd& p, double t, double* grad) {
    const double ca = std::cos(p[0] * t), cb = std::cos(p[1] * t);
    if (grad) {
        grad[0] = -0.5 * t * std::sin(p[0] * t) * cb;
        grad[1] = -0.5 * t * ca * std::sin(p[1] * t);
    }
    return 0.5 * ca * cb;
}

double cos_squared(const Eigen::VectorXd& p, double t, double* grad) {
    const double c = std::cos(p[0] * t);
    if (grad) grad[0] = -t * std::sin(2.0 * p[0] * t);
    return c * c;
}

// Functor in the form expected by Eigen's LevenbergMarquardt.
struct Residuals {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const Model* model;
    const Samples* data;
    Eigen::Index count;
    int n_params;

    int inputs() const { return n_params; }
    int values() const { return static_cast<int>(count); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        for (Eigen::Index i = 0; i < count; ++i) f[i] = (*model)(p, data->t[i], nullptr) - data->y[i];
        return 0;
    }
    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
        double grad[2];
        for (Eigen::Index i = 0; i < count; ++i) {
            (*model)(p, data->t[i], grad);
            for (int j = 0; j < n_params; ++j) jac(i, j) = grad[j];
        }
        return 0;
    }
};

double rms(const Model& model, const Samples& data, const Eigen::VectorXd& p) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < data.t.size(); ++i) {
        const double r = model(p, data.t[i], nullptr) - data.y[i];
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(data.t.size()));
}

struct Refined {
    Eigen::VectorXd p;
    bool converged;
    int evaluations;
};

Refined refine(const Model& model, const Samples& data, Eigen::VectorXd p, Eigen::Index count,
               int max_evaluations) {
    Residuals functor{&model, &data, count, static_cast<int>(p.size())};
    Eigen::LevenbergMarquardt<Residuals> lm(functor);
    lm.parameters.maxfev = max_evaluations;
    const auto status = lm.minimize(p);
    using namespace Eigen::LevenbergMarquardtSpace;
    const bool ok = status != ImproperInputParameters && status != TooManyFunctionEvaluation &&
                    status != UserAsked;
    return {p, ok, static_cast<int>(lm.nfev + lm.njev)};
}

// Seeded refinement on prefixes of 1/8, 1/4, 1/2 and the full series.
Refined progressive(const Model& model, const Samples& data, Eigen::VectorXd p, int max_evaluations) {
    const Eigen::Index n = data.t.size();
    int evaluations = 0;
    Refined r{p, false, 0};
    for (const Eigen::Index div : {8, 4, 2, 1}) {
        const Eigen::Index count = std::max<Eigen::Index>(n / div, std::min<Eigen::Index>(n, 8));
        r = refine(model, data, r.p, count, max_evaluations);
        evaluations += r.evaluations;
    }
    r.evaluations = evaluations;
    return r;
}

FitResult finish(const Model& model, const Samples& data, Refined r, int evaluations) {
    FitResult out;
    r.p = r.p.cwiseAbs();
    std::sort(r.p.data(), r.p.data() + r.p.size(), std::greater<>());
    out.params.assign(r.p.data(), r.p.data() + r.p.size());
    out.residual = rms(model, data, r.p);
    out.converged = r.converged;
    out.iterations = evaluations;
    return out;
}

FitResult fit(const Model& model, const Samples& data, const Eigen::VectorXd& seed,
              const FitOptions& options) {
    const double spread = data.y.maxCoeff() - data.y.minCoeff();
    if (spread < options.flat_tolerance) {
        FitResult out;
        out.params.assign(seed.size(), 0.0);
        out.residual = rms(model, data, Eigen::VectorXd::Zero(seed.size()));
        out.converged = true;
        out.degenerate = true;
        return out;
    }

    Refined best = progressive(model, data, seed, options.max_evaluations);
    int evaluations = best.evaluations;
    double best_rms = rms(model, data, best.p);
    if (best.converged && best_rms < options.accept_residual)
        return finish(model, data, best, evaluations);

    // coarse grid around the seed, then a full-series refinement
    const int g = std::max(options.grid_points, 2);
    Eigen::VectorXd trial = seed;
    Eigen::VectorXd grid_best = seed;
    double grid_rms = std::numeric_limits<double>::infinity();
    auto axis = [&](int dim, int i) {
        const double centre = seed[dim];
        const double lo = centre * (1.0 - options.grid_span);
        const double hi = centre * (1.0 + options.grid_span);
        return lo + (hi - lo) * i / (g - 1);
    };
    const int outer = seed.size() > 1 ? g : 1;
    for (int i = 0; i < g; ++i) {
        trial[0] = axis(0, i);
        for (int j = 0; j < outer; ++j) {
            if (seed.size() > 1) trial[1] = axis(1, j);
            const double r = rms(model, data, trial);
            if (r < grid_rms) {
                grid_rms = r;
                grid_best = trial;
            }
        }
    }
    evaluations += g * outer;
    Refined fallback = progressive(model, data, grid_best, options.max_evaluations);
    evaluations += fallback.evaluations;
    const double fallback_rms = rms(model, data, fallback.p);
    if (fallback_rms < best_rms || !best.converged) {
        best = fallback;
        best_rms = fallback_rms;
    }
    return finish(model, data, best, evaluations);
}

}  // namespace

FitResult fit_product_cos(const std::vector<double>& t, const std::vector<double>& y,
                          double seed_a, double seed_b, const FitOptions& options) {
    const Samples data = finite_samples(t, y);
    const Model model = product_cos;
    Eigen::VectorXd seed(2);
    seed << std::abs(seed_a), std::abs(seed_b);
    return fit(model, data, seed, options);
}

FitResult fit_cos_squared(const std::vector<double>& t, const std::vector<double>& y, double seed,
                          const FitOptions& options) {
    const Samples data = finite_samples(t, y);
    const Model model = cos_squared;
    Eigen::VectorXd s(1);
    s << std::abs(seed);
    return fit(model, data, s, options);
}

}  // namespace kapitza
