#pragma once

#include <Eigen/Dense>
#include <deque>
#include <functional>
#include <string>

namespace cse {

struct OptimizerOptions {
    int memory = 10;
    double gradient_tol = 1e-10;
    int max_iterations = 2000;
    double wolfe_c1 = 1e-4;  // sufficient decrease
    double wolfe_c2 = 0.9;   // curvature
    bool finite_difference = false;
    double fd_step = 1e-5;
    // observer for each accepted iterate (iteration, x, fx, |grad|)
    std::function<void(int, const Eigen::VectorXd&, double, double)> on_iterate;
};

struct OptimizeReport {
    Eigen::VectorXd x;
    double fx = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

// f(x, grad) returns the objective and fills grad.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

namespace detail {

// Strong Wolfe line search (bracket + zoom with bisection fallback).
inline bool line_search(const ObjectiveFn& f, const Eigen::VectorXd& x0, double f0,
                        const Eigen::VectorXd& g0, const Eigen::VectorXd& dir,
                        const OptimizerOptions& opts, double& alpha, Eigen::VectorXd& x_out,
                        double& f_out, Eigen::VectorXd& g_out) {
    const double d0 = g0.dot(dir);
    if (d0 >= 0.0) return false;
    const double c1 = opts.wolfe_c1, c2 = opts.wolfe_c2;
    double a_prev = 0.0, f_prev = f0, d_prev = d0;
    double a = std::min(1.0, alpha);
    Eigen::VectorXd g(x0.size());

    auto eval = [&](double t, double& fv, double& dv) {
        x_out = x0 + t * dir;
        fv = f(x_out, g);
        dv = g.dot(dir);
    };

    auto zoom = [&](double lo, double f_lo, double d_lo, double hi, double f_hi) -> bool {
        for (int it = 0; it < 50; ++it) {
            // quadratic interpolation, clipped to the interior
            double t = lo - 0.5 * d_lo * (hi - lo) * (hi - lo) /
                                (f_hi - f_lo - d_lo * (hi - lo));
            const double a_min = std::min(lo, hi), a_max = std::max(lo, hi);
            if (!(t > a_min + 0.1 * (a_max - a_min) && t < a_max - 0.1 * (a_max - a_min)))
                t = 0.5 * (lo + hi);
            double ft, dt;
            eval(t, ft, dt);
            if (ft > f0 + c1 * t * d0 || ft >= f_lo) {
                hi = t;
                f_hi = ft;
            } else {
                if (std::abs(dt) <= -c2 * d0) {
                    alpha = t;
                    f_out = ft;
                    g_out = g;
                    return true;
                }
                if (dt * (hi - lo) >= 0.0) {
                    hi = lo;
                    f_hi = f_lo;
                }
                lo = t;
                f_lo = ft;
                d_lo = dt;
            }
            if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) break;
        }
        // accept the best sufficient-decrease point found
        double ft, dt;
        eval(lo, ft, dt);
        if (ft < f0) {
            alpha = lo;
            f_out = ft;
            g_out = g;
            return true;
        }
        return false;
    };

    for (int it = 0; it < 30; ++it) {
        double fa, da;
        eval(a, fa, da);
        if (fa > f0 + c1 * a * d0 || (it > 0 && fa >= f_prev))
            return zoom(a_prev, f_prev, d_prev, a, fa);
        if (std::abs(da) <= -c2 * d0) {
            alpha = a;
            f_out = fa;
            g_out = g;
            return true;
        }
        if (da >= 0.0) return zoom(a, fa, da, a_prev, f_prev);
        a_prev = a;
        f_prev = fa;
        d_prev = da;
        a *= 2.0;
    }
    return false;
}

}  // namespace detail

inline OptimizeReport lbfgs_minimize(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                                     const OptimizerOptions& opts = {}) {
    const int n = static_cast<int>(x0.size());
    OptimizeReport rep;
    Eigen::VectorXd x = x0, g(n);
    double fx = f(x, g);
    rep.x = x;
    rep.fx = fx;
    rep.gradient_norm = g.norm();

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        rep.iterations = iter;
        if (g.norm() < opts.gradient_tol) {
            rep.converged = true;
            rep.message = "gradient tolerance reached";
            break;
        }
        // two-loop recursion
        Eigen::VectorXd q = g;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> a_coef(m);
        for (int i = m - 1; i >= 0; --i) {
            a_coef[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= a_coef[i] * y_hist[i];
        }
        if (m > 0) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (int i = 0; i < m; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (a_coef[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd dir = -q;

        double alpha = 1.0;
        if (m == 0) alpha = std::min(1.0, 1.0 / std::max(1e-12, g.norm()));
        Eigen::VectorXd x_new(n), g_new(n);
        double f_new;
        if (!detail::line_search(f, x, fx, g, dir, opts, alpha, x_new, f_new, g_new)) {
            // retry along steepest descent before giving up
            dir = -g;
            alpha = 1.0 / std::max(1e-12, g.norm());
            if (!detail::line_search(f, x, fx, g, dir, opts, alpha, x_new, f_new, g_new)) {
                rep.message = "line search failure";
                break;
            }
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        rep.x = x;
        rep.fx = fx;
        rep.gradient_norm = g.norm();
        if (opts.on_iterate) opts.on_iterate(iter, x, fx, g.norm());
    }
    if (!rep.converged && rep.message.empty()) rep.message = "max iterations reached";
    if (rep.converged || rep.message == "max iterations reached") rep.iterations += 0;
    rep.gradient_norm = g.norm();
    return rep;
}

}  // namespace cse
