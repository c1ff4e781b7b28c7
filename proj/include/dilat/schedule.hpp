#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dilat/geometry.hpp"

namespace dilat {

/// Geometric scale schedule eps_k = eps0 * ratio^k, k = 0..steps-1. This is
/// how every "eps -> 0" in the model becomes something executable: geometric
/// schedules are cofinal in the end 0 of the scale group.
struct EpsSchedule {
    double eps0 = 0.5;
    double ratio = 0.5;
    int steps = 30;

    EpsSchedule() = default;
    EpsSchedule(double e0, double q, int k) : eps0(e0), ratio(q), steps(k) { validate(); }

    void validate() const {
        if (!(eps0 > 0.0) || !std::isfinite(eps0))
            throw std::invalid_argument("EpsSchedule: eps0 must be positive");
        if (!(ratio > 0.0 && ratio < 1.0))
            throw std::invalid_argument("EpsSchedule: ratio must lie in (0,1)");
        if (steps < 4)
            throw std::invalid_argument("EpsSchedule: need at least 4 steps");
    }

    std::vector<double> points() const {
        validate();
        std::vector<double> p(static_cast<std::size_t>(steps));
        double e = eps0;
        for (auto& v : p) {
            v = e;
            e *= ratio;
        }
        return p;
    }

    /// Same ratio and step count, but starting no higher than eps_max. Used by
    /// curve probes that must stay inside the parameter interval.
    EpsSchedule clamped(double eps_max) const {
        EpsSchedule s = *this;
        s.eps0 = std::min(eps0, eps_max);
        return s;
    }
};

enum class LimitStatus { converged, oscillating, diverging, inconclusive };

inline const char* to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::converged: return "converged";
        case LimitStatus::oscillating: return "oscillating";
        case LimitStatus::diverging: return "diverging";
        case LimitStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct LimitOptions {
    double tol = 1e-6;          // residual threshold for convergence
    int tail = 8;               // how many trailing samples the classifier inspects
    double osc_floor = 1e-5;    // tail diameter above this (while bounded) = oscillation
    double div_bound = 1e6;     // excursion from the first sample beyond this = divergence
    double noise_floor = 1e-14; // residual differences below this are fp dust
    bool richardson = true;     // refine the value when the residual ratio matches first order

    /// Residuals below this are treated as settled: monotone decrease is only
    /// demanded while residuals still carry signal; bounces under half the
    /// tolerance are roundoff, not trend reversals.
    double mono_slack() const { return std::max(noise_floor, 0.5 * tol); }
};

/// Classified trace of a scale-indexed quantity. `value` is the extrapolated
/// limit when converged, otherwise the last sample (statuses carry the
/// meaning).
template <typename V>
struct LimitEstimate {
    std::vector<std::pair<double, V>> samples;  // (eps_k, value_k), eps decreasing
    V value{};
    LimitStatus status = LimitStatus::inconclusive;
    double residual = 0.0;       // metric distance between the last two samples
    double tail_diameter = 0.0;  // diameter of the trailing window
    double witness_eps = 0.0;    // eps at which divergence was detected, if any

    bool converged() const { return status == LimitStatus::converged; }
};

/// One step of first-order Richardson extrapolation: v_coarse at eps,
/// v_fine at q*eps. Exact for sequences affine in eps.
template <typename V>
V richardson_extrapolate(const V& v_coarse, const V& v_fine, double q) {
    if (q == 1.0) throw std::invalid_argument("richardson_extrapolate: ratio must differ from 1");
    return affine_combine(v_fine, v_coarse, 1.0 / (1.0 - q), -q / (1.0 - q));
}

/// Evaluate `seq` on the schedule and classify the trace per the
/// LimitEstimate contract. `metric` measures distances between trace values.
template <typename V, typename Seq, typename Metric>
LimitEstimate<V> estimate_limit(Seq&& seq, Metric&& metric, const EpsSchedule& schedule,
                                const LimitOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("estimate_limit: tol must be positive");
    LimitEstimate<V> est;
    const auto eps = schedule.points();
    est.samples.reserve(eps.size());
    for (double e : eps) {
        V v = seq(e);
        est.samples.emplace_back(e, v);
        if (!all_finite(v)) {
            est.status = LimitStatus::diverging;
            est.witness_eps = e;
            est.value = v;
            return est;
        }
    }

    const std::size_t n = est.samples.size();
    est.value = est.samples.back().second;
    est.residual = metric(est.samples[n - 2].second, est.samples[n - 1].second);

    // Boundedness relative to the first sample.
    for (std::size_t k = 1; k < n; ++k) {
        if (metric(est.samples[k].second, est.samples[0].second) > opt.div_bound) {
            est.status = LimitStatus::diverging;
            est.witness_eps = est.samples[k].first;
            return est;
        }
    }

    const std::size_t tail_len = std::min<std::size_t>(static_cast<std::size_t>(opt.tail), n);
    const std::size_t tail_begin = n - tail_len;
    for (std::size_t i = tail_begin; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            est.tail_diameter = std::max(est.tail_diameter,
                                         metric(est.samples[i].second, est.samples[j].second));

    std::vector<double> res(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        res[k] = metric(est.samples[k].second, est.samples[k + 1].second);

    const std::size_t rt_begin = (n - 1 >= tail_len) ? (n - 1) - (tail_len - 1) : 0;
    const double slack = opt.mono_slack();
    bool monotone = true;
    for (std::size_t k = rt_begin + 1; k + 1 < n; ++k)
        if (res[k] > std::max(res[k - 1], slack)) monotone = false;

    if (est.residual < opt.tol && monotone) {
        est.status = LimitStatus::converged;
        if (opt.richardson && est.residual > opt.noise_floor) {
            // Extrapolate only when the tail residual ratios carry signal and
            // are consistent with a first-order model; otherwise the last
            // sample is already the best value.
            bool first_order = true;
            int usable = 0;
            for (std::size_t k = std::max(rt_begin, std::size_t{1}); k + 1 < n; ++k) {
                if (res[k - 1] <= opt.noise_floor || res[k] <= opt.noise_floor) continue;
                ++usable;
                if (std::abs(res[k] / res[k - 1] / schedule.ratio - 1.0) > 0.35)
                    first_order = false;
            }
            if (usable > 0 && first_order)
                est.value = richardson_extrapolate(est.samples[n - 2].second,
                                                   est.samples[n - 1].second, schedule.ratio);
        }
        return est;
    }

    // Distinguish oscillation from slow convergence by comparing residual
    // levels across the halves of the tail window: a decaying trace is still
    // heading somewhere even if it has not reached the tolerance yet.
    const std::size_t half = rt_begin + (n - 1 - rt_begin) / 2;
    double early = 0.0, late = 0.0;
    for (std::size_t k = rt_begin; k < half; ++k) early = std::max(early, res[k]);
    for (std::size_t k = half; k + 1 < n; ++k) late = std::max(late, res[k]);
    const bool trending_down = late < 0.5 * early + slack;
    if (!trending_down && est.tail_diameter > opt.osc_floor)
        est.status = LimitStatus::oscillating;
    else
        est.status = LimitStatus::inconclusive;
    return est;
}

}  // namespace dilat
