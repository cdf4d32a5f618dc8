#include "chemostab/rate.hpp"

#include <cmath>
#include <limits>

#include "chemostab/error.hpp"

namespace chemostab {

namespace {

constexpr std::size_t kMinSamples = 8;

}  // namespace

RateEstimate fit_rate(std::span<const double> times, std::span<const double> values,
                      double t_start, double t_end) {
    if (times.size() != values.size()) throw DomainError("fit_rate: size mismatch");

    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_start || times[k] > t_end) continue;
        if (values[k] < 0.0) throw DomainError("fit_rate: negative value in window");
        if (values[k] <= kLogFloor) continue;
        ts.push_back(times[k]);
        ys.push_back(std::log(values[k]));
    }
    if (ts.size() < kMinSamples)
        throw DomainError("fit_rate: fewer than 8 usable samples in window");

    const double n = static_cast<double>(ts.size());
    double t_mean = 0.0, y_mean = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        t_mean += ts[k];
        y_mean += ys[k];
    }
    t_mean /= n;
    y_mean /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double dt = ts[k] - t_mean;
        const double dy = ys[k] - y_mean;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (!(stt > 0.0)) throw DomainError("fit_rate: window has no time spread");

    // Log values flat to roundoff: report an exact zero rate.
    const double y_scale = std::max(1.0, std::abs(y_mean));
    const bool flat = syy <= 1e-24 * n * y_scale * y_scale;
    const double slope = flat ? 0.0 : sty / stt;
    const double intercept = y_mean - slope * t_mean;

    RateEstimate est;
    est.ell = -slope;
    est.C = std::exp(intercept);
    est.t_start = ts.front();
    est.t_end = ts.back();
    est.samples = ts.size();
    if (flat) {
        est.ell = 0.0;
        est.r2 = std::numeric_limits<double>::quiet_NaN();
        est.no_decay = true;
    } else {
        double ss_res = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double r = ys[k] - (intercept + slope * ts[k]);
            ss_res += r * r;
        }
        est.r2 = 1.0 - ss_res / syy;
        est.no_decay = std::abs(slope) * std::sqrt(stt) <= 1e-12 * std::sqrt(syy + 1.0);
    }
    return est;
}

std::array<Certification, 3> certify(const std::vector<Diagnostics>& diagnostics,
                                     double threshold_ell, double window_lo, double window_hi) {
    if (diagnostics.empty()) throw DomainError("certify: empty diagnostics");
    if (!(window_lo >= 0.0 && window_lo < window_hi && window_hi <= 1.0))
        throw DomainError("certify: window fractions must satisfy 0 <= lo < hi <= 1");

    const double t0 = diagnostics.front().time;
    const double total = diagnostics.back().time - t0;
    const double t_start = t0 + window_lo * total;
    const double t_end = t0 + window_hi * total;

    std::vector<double> times;
    std::array<std::vector<double>, 3> series;
    for (const Diagnostics& d : diagnostics) {
        times.push_back(d.time);
        series[0].push_back(d.du_inf);
        series[1].push_back(d.dv_inf);
        series[2].push_back(d.dw_inf);
    }

    static const std::array<const char*, 3> kNames{"u", "v", "w"};
    std::array<Certification, 3> out;
    for (std::size_t f = 0; f < 3; ++f) {
        out[f].field = kNames[f];
        std::size_t usable = 0;
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] >= t_start && times[k] <= t_end && series[f][k] > kLogFloor) ++usable;
        if (usable < kMinSamples) {
            out[f].status = Certification::Status::vacuous;
            continue;
        }
        const RateEstimate est = fit_rate(times, series[f], t_start, t_end);
        out[f].estimate = est;
        const bool ok = !est.no_decay && est.ell > threshold_ell && est.r2 > 0.9;
        out[f].status = ok ? Certification::Status::certified
                           : Certification::Status::not_certified;
    }
    return out;
}

std::string to_string(Certification::Status s) {
    switch (s) {
        case Certification::Status::certified: return "certified";
        case Certification::Status::not_certified: return "not-certified";
        case Certification::Status::vacuous: return "vacuous: already converged";
    }
    return "not-certified";
}

}  // namespace chemostab
