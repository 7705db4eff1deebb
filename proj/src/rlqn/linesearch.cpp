//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#include "rlqn/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlqn/errors.hpp"

namespace rlqn {

SearchOutcome armijo_backtrack(Problem &problem, const Eigen::VectorXd &x,
                               const Eigen::VectorXd &d, double f_ref,
                               double g_dot_d, const LineSearchParams &params) {
  if (!(g_dot_d < 0.0))
    throw NotDescent();

  SearchOutcome out;
  double t = 1.0;
  Eigen::VectorXd trial(x.size());
  while (t >= params.t_min) {
    trial = x + t * d;
    ++out.fevals;
    try {
      const double f = problem.value(trial);
      if (f <= f_ref + params.c1 * t * g_dot_d) {
        out.t = t;
        out.f_new = f;
        out.x_new = std::move(trial);
        out.converged = true;
        return out;
      }
    } catch (const NonFiniteValue &) {
      // treated as a failed trial
    }
    t *= 0.5;
  }
  out.t = t;
  out.x_new = x;
  out.f_new = f_ref;
  return out;
}

namespace {
  // Safeguarded cubic/quadratic step between the best point stx and the
  // other endpoint sty, given the new trial stp. Updates the interval.
  void cstep(double &stx, double &fx, double &dx, double &sty, double &fy,
             double &dy, double &stp, double fp, double dp, bool &brackt,
             double stpmin, double stpmax) {
    const double sgnd = dp * (dx / std::abs(dx));
    double stpf;

    auto cubic_gamma = [](double theta, double a, double b) {
      const double s = std::max({std::abs(theta), std::abs(a), std::abs(b)});
      return s * std::sqrt(std::max(0.0, (theta / s) * (theta / s)
                                             - (a / s) * (b / s)));
    };

    if (fp > fx) {
      // higher function value: the minimum is bracketed
      const double theta = 3.0 * (fx - fp) / (stp - stx) + dx + dp;
      double gamma = cubic_gamma(theta, dx, dp);
      if (stp < stx)
        gamma = -gamma;
      const double p = (gamma - dx) + theta;
      const double q = ((gamma - dx) + gamma) + dp;
      const double stpc = stx + (p / q) * (stp - stx);
      const double stpq
          = stx + ((dx / ((fx - fp) / (stp - stx) + dx)) / 2.0) * (stp - stx);
      if (std::abs(stpc - stx) < std::abs(stpq - stx))
        stpf = stpc;
      else
        stpf = stpc + (stpq - stpc) / 2.0;
      brackt = true;
    } else if (sgnd < 0.0) {
      // derivatives of opposite sign: bracketed
      const double theta = 3.0 * (fx - fp) / (stp - stx) + dx + dp;
      double gamma = cubic_gamma(theta, dx, dp);
      if (stp > stx)
        gamma = -gamma;
      const double p = (gamma - dp) + theta;
      const double q = ((gamma - dp) + gamma) + dx;
      const double stpc = stp + (p / q) * (stx - stp);
      const double stpq = stp + (dp / (dp - dx)) * (stx - stp);
      stpf = std::abs(stpc - stp) > std::abs(stpq - stp) ? stpc : stpq;
      brackt = true;
    } else if (std::abs(dp) < std::abs(dx)) {
      // derivative magnitude decreases
      const double theta = 3.0 * (fx - fp) / (stp - stx) + dx + dp;
      double gamma = cubic_gamma(theta, dx, dp);
      if (stp > stx)
        gamma = -gamma;
      const double p = (gamma - dp) + theta;
      const double q = (gamma + (dx - dp)) + gamma;
      const double r = p / q;
      double stpc;
      if (r < 0.0 && gamma != 0.0)
        stpc = stp + r * (stx - stp);
      else if (stp > stx)
        stpc = stpmax;
      else
        stpc = stpmin;
      const double stpq = stp + (dp / (dp - dx)) * (stx - stp);

      if (brackt) {
        stpf = std::abs(stpc - stp) < std::abs(stpq - stp) ? stpc : stpq;
        if (stp > stx)
          stpf = std::min(stp + 0.66 * (sty - stp), stpf);
        else
          stpf = std::max(stp + 0.66 * (sty - stp), stpf);
      } else {
        stpf = std::abs(stpc - stp) > std::abs(stpq - stp) ? stpc : stpq;
        stpf = std::clamp(stpf, stpmin, stpmax);
      }
    } else {
      // derivative magnitude does not decrease
      if (brackt) {
        const double theta = 3.0 * (fp - fy) / (sty - stp) + dy + dp;
        double gamma = cubic_gamma(theta, dy, dp);
        if (stp > sty)
          gamma = -gamma;
        const double p = (gamma - dp) + theta;
        const double q = ((gamma - dp) + gamma) + dy;
        stpf = stp + (p / q) * (sty - stp);
      } else {
        stpf = stp > stx ? stpmax : stpmin;
      }
    }

    if (fp > fx) {
      sty = stp;
      fy = fp;
      dy = dp;
    } else {
      if (sgnd < 0.0) {
        sty = stx;
        fy = fx;
        dy = dx;
      }
      stx = stp;
      fx = fp;
      dx = dp;
    }
    stp = stpf;
  }
}  // namespace

ScalarSearchResult more_thuente_1d(const ScalarFunction &phi, double phi0,
                                   double dphi0, double t0,
                                   const LineSearchParams &params) {
  if (!(dphi0 < 0.0))
    throw NotDescent();

  const double ftol = params.c1;
  const double gtol = params.c2;
  const double stpmin = params.t_min;
  const double stpmax = params.t_max;

  ScalarSearchResult out;
  double stp = std::clamp(t0, stpmin, stpmax);

  bool brackt = false;
  int stage = 1;
  const double finit = phi0;
  const double ginit = dphi0;
  const double gtest = ftol * ginit;
  double width = stpmax - stpmin;
  double width1 = 2.0 * width;

  double stx = 0.0, fx = finit, gx = ginit;
  double sty = 0.0, fy = finit, gy = ginit;
  double stmin = 0.0;
  double stmax = stp + params.extrap_upper * stp;

  while (out.evals < params.max_evals) {
    double g = 0.0;
    double f = 0.0;
    ++out.evals;
    try {
      f = phi(stp, g);
    } catch (const NonFiniteValue &) {
      // back off toward the best point
      stp = stx + 0.5 * (stp - stx);
      if (std::abs(stp - stx) < stpmin)
        break;
      continue;
    }
    out.t = stp;
    out.phi = f;
    out.dphi = g;

    const double ftest = finit + stp * gtest;
    if (stage == 1 && f <= ftest && g >= 0.0)
      stage = 2;

    if (f <= ftest && std::abs(g) <= gtol * (-ginit)) {
      out.converged = true;
      return out;
    }
    if (brackt && (stp <= stmin || stp >= stmax))
      return out;  // rounding errors prevent progress
    if (brackt && stmax - stmin <= params.xtol * stmax)
      return out;
    if (stp == stpmax && f <= ftest && g <= gtest)
      return out;
    if (stp == stpmin && (f > ftest || g >= gtest))
      return out;

    if (stage == 1 && f <= fx && f > ftest) {
      // modified function until the sufficient decrease region is found
      double fm = f - stp * gtest;
      double fxm = fx - stx * gtest;
      double fym = fy - sty * gtest;
      double gm = g - gtest;
      double gxm = gx - gtest;
      double gym = gy - gtest;
      cstep(stx, fxm, gxm, sty, fym, gym, stp, fm, gm, brackt, stmin, stmax);
      fx = fxm + stx * gtest;
      fy = fym + sty * gtest;
      gx = gxm + gtest;
      gy = gym + gtest;
    } else {
      cstep(stx, fx, gx, sty, fy, gy, stp, f, g, brackt, stmin, stmax);
    }

    if (brackt) {
      if (std::abs(sty - stx) >= 0.66 * width1)
        stp = stx + 0.5 * (sty - stx);
      width1 = width;
      width = std::abs(sty - stx);
      stmin = std::min(stx, sty);
      stmax = std::max(stx, sty);
    } else {
      stmin = stp + params.extrap_lower * (stp - stx);
      stmax = stp + params.extrap_upper * (stp - stx);
    }

    stp = std::clamp(stp, stpmin, stpmax);
    if ((brackt && (stp <= stmin || stp >= stmax))
        || (brackt && stmax - stmin <= params.xtol * stmax))
      stp = stx;
  }
  return out;
}

SearchOutcome more_thuente(Problem &problem, const Eigen::VectorXd &x,
                           const Eigen::VectorXd &d, double f_ref,
                           double g_dot_d, double t0,
                           const LineSearchParams &params) {
  if (!(g_dot_d < 0.0))
    throw NotDescent();

  Eigen::VectorXd trial(x.size());
  Eigen::VectorXd grad(x.size());
  double last_t = -1.0;
  double last_f = 0.0;

  const ScalarFunction phi = [&](double t, double &dphi) {
    trial = x + t * d;
    last_t = -1.0;
    const double f = problem.value_and_gradient(trial, grad);
    dphi = grad.dot(d);
    last_t = t;
    last_f = f;
    return f;
  };

  const ScalarSearchResult r = more_thuente_1d(phi, f_ref, g_dot_d, t0, params);

  SearchOutcome out;
  out.fevals = r.evals;
  out.converged = r.converged && r.t == last_t;
  out.t = r.t;
  if (out.converged) {
    out.f_new = last_f;
    out.x_new = trial;
    out.g_new = grad;
  } else {
    out.f_new = f_ref;
    out.x_new = x;
  }
  return out;
}

SeedResult initial_seed_search(Problem &problem, const Eigen::VectorXd &x0,
                               double f0, const Eigen::VectorXd &g0,
                               const LineSearchParams &params) {
  const double gnorm = g0.norm();
  if (!(gnorm > 0.0))
    throw std::invalid_argument("initial_seed_search: gradient is zero");

  const Eigen::VectorXd d = -g0 / gnorm;
  SearchOutcome r = more_thuente(problem, x0, d, f0, -gnorm, 1.0, params);
  if (!r.converged)
    throw LineSearchFailed("initial search along the gradient did not converge");

  SeedResult out;
  out.x1 = std::move(r.x_new);
  out.f1 = r.f_new;
  out.g1 = std::move(*r.g_new);
  out.s0 = out.x1 - x0;
  out.y0 = out.g1 - g0;
  out.fevals = r.fevals;
  return out;
}

}  // namespace rlqn
