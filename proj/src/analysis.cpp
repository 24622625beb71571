/*
 * Copyright (c) 2026, The hedcore Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hedcore/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <fmt/format.h>

#include "hedcore/error.hpp"

namespace hedcore {

using Real = long double;

WeightedSample::WeightedSample(std::vector<WeightedObservation> observations)
{
    for (const auto& o : observations)
        if (!std::isfinite(o.value))
            throw Error(ErrorKind::validation, "observations must be finite");
    std::erase_if(observations, [](const WeightedObservation& o) { return o.weight == 0; });
    std::sort(observations.begin(), observations.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    for (const auto& o : observations) {
        if (!obs_.empty() && obs_.back().value == o.value)
            obs_.back().weight += o.weight;
        else
            obs_.push_back(o);
        count_ += o.weight;
    }
}

WeightedSample WeightedSample::from_values(std::span<const double> values)
{
    std::vector<WeightedObservation> obs;
    obs.reserve(values.size());
    for (double v : values)
        obs.push_back({v, 1});
    return WeightedSample(std::move(obs));
}

WeightedSample WeightedSample::from_counts(const CoreSizeHistogram::Counts& counts)
{
    std::vector<WeightedObservation> obs;
    for (const auto& [size, count] : counts)
        obs.push_back({static_cast<double>(size), count});
    return WeightedSample(std::move(obs));
}

std::uint64_t WeightedSample::digest() const noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xFF;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& o : obs_) {
        std::uint64_t bits;
        std::memcpy(&bits, &o.value, sizeof bits);
        feed(bits);
        feed(o.weight);
    }
    return h;
}

MomentsSummary moments(const WeightedSample& data)
{
    const auto count = data.count();
    if (count < 4)
        throw Error(ErrorKind::insufficient_data,
                    fmt::format("moments need at least 4 observations, got {}", count));
    const Real total = static_cast<Real>(count);
    Real sum = 0;
    for (const auto& o : data.observations())
        sum += static_cast<Real>(o.weight) * o.value;
    const Real mean = sum / total;
    Real m2 = 0, m3 = 0, m4 = 0;
    for (const auto& o : data.observations()) {
        const Real d = o.value - mean;
        const Real w = static_cast<Real>(o.weight);
        m2 += w * d * d;
        m3 += w * d * d * d;
        m4 += w * d * d * d * d;
    }
    m2 /= total;
    m3 /= total;
    m4 /= total;
    if (m2 <= 0)
        throw Error(ErrorKind::degenerate_data, "all observations are equal");

    MomentsSummary out;
    out.count = count;
    out.mean = static_cast<double>(mean);
    out.variance = static_cast<double>(m2 * total / (total - 1));
    out.skewness = static_cast<double>(m3 / std::pow(m2, Real(1.5)));
    out.kurtosis = static_cast<double>(m4 / (m2 * m2));
    return out;
}

std::pair<double, double> cullen_frey_point(const MomentsSummary& m)
{
    return {m.skewness * m.skewness, m.kurtosis};
}

std::string_view to_string(ZeroPolicy policy)
{
    switch (policy) {
    case ZeroPolicy::drop_zeros: return "drop_zeros";
    case ZeroPolicy::shift_by_one: return "shift_by_one";
    case ZeroPolicy::include_raw: return "include_raw";
    }
    return "unknown";
}

ZeroPolicy parse_zero_policy(std::string_view text)
{
    if (text == "drop_zeros" || text == "drop")
        return ZeroPolicy::drop_zeros;
    if (text == "shift_by_one" || text == "shift")
        return ZeroPolicy::shift_by_one;
    if (text == "include_raw" || text == "raw")
        return ZeroPolicy::include_raw;
    throw Error(ErrorKind::usage, fmt::format("unknown zero policy '{}'", text));
}

WeightedSample apply_zero_policy(const WeightedSample& data, ZeroPolicy policy)
{
    std::vector<WeightedObservation> obs(data.observations().begin(), data.observations().end());
    switch (policy) {
    case ZeroPolicy::drop_zeros:
        std::erase_if(obs, [](const WeightedObservation& o) { return o.value == 0.0; });
        break;
    case ZeroPolicy::shift_by_one:
        for (auto& o : obs)
            o.value += 1.0;
        break;
    case ZeroPolicy::include_raw:
        break;
    }
    return WeightedSample(std::move(obs));
}

std::string_view to_string(Family family)
{
    switch (family) {
    case Family::weibull: return "weibull";
    case Family::gamma: return "gamma";
    case Family::lognormal: return "lognormal";
    }
    return "unknown";
}

Family parse_family(std::string_view text)
{
    if (text == "weibull")
        return Family::weibull;
    if (text == "gamma")
        return Family::gamma;
    if (text == "lognormal")
        return Family::lognormal;
    throw Error(ErrorKind::usage, fmt::format("unknown distribution family '{}'", text));
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double normal_log_half_erfc(double z)
{
    // log(0.5 * erfc(z)), with the asymptotic form where erfc underflows.
    const double v = 0.5 * std::erfc(z);
    if (v > 0)
        return std::log(v);
    return -z * z - std::log(z * std::sqrt(M_PI)) - std::log(2.0);
}

}  // namespace

double Distribution::cdf(double x) const
{
    if (x <= 0)
        return 0.0;
    switch (family) {
    case Family::weibull: return -std::expm1(-std::pow(x / scale, shape));
    case Family::gamma: return boost::math::gamma_p(shape, x / scale);
    case Family::lognormal:
        return 0.5 * std::erfc(-(std::log(x) - std::log(scale)) / (shape * M_SQRT2));
    }
    return 0.0;
}

double Distribution::log_cdf(double x) const
{
    if (x <= 0)
        return kNegInf;
    switch (family) {
    case Family::weibull: return std::log(-std::expm1(-std::pow(x / scale, shape)));
    case Family::gamma: {
        const double z = x / scale;
        const double p = boost::math::gamma_p(shape, z);
        if (p > 0)
            return std::log(p);
        return shape * std::log(z) - z - std::lgamma(shape + 1.0);
    }
    case Family::lognormal:
        return normal_log_half_erfc(-(std::log(x) - std::log(scale)) / (shape * M_SQRT2));
    }
    return kNegInf;
}

double Distribution::log_sf(double x) const
{
    if (x <= 0)
        return 0.0;
    switch (family) {
    case Family::weibull: return -std::pow(x / scale, shape);
    case Family::gamma: {
        const double z = x / scale;
        const double q = boost::math::gamma_q(shape, z);
        if (q > 0)
            return std::log(q);
        return (shape - 1.0) * std::log(z) - z - std::lgamma(shape);
    }
    case Family::lognormal:
        return normal_log_half_erfc((std::log(x) - std::log(scale)) / (shape * M_SQRT2));
    }
    return 0.0;
}

double Distribution::log_pdf(double x) const
{
    if (x <= 0)
        return kNegInf;
    switch (family) {
    case Family::weibull: {
        const double lz = std::log(x) - std::log(scale);
        return std::log(shape) - std::log(scale) + (shape - 1.0) * lz - std::exp(shape * lz);
    }
    case Family::gamma:
        return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) -
               shape * std::log(scale);
    case Family::lognormal: {
        const double z = (std::log(x) - std::log(scale)) / shape;
        return -std::log(x) - std::log(shape) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
    }
    }
    return kNegInf;
}

double log_likelihood(const Distribution& dist, const WeightedSample& data)
{
    Real sum = 0;
    for (const auto& o : data.observations())
        sum += static_cast<Real>(o.weight) * dist.log_pdf(o.value);
    return static_cast<double>(sum);
}

double aic(double log_likelihood, int parameters) { return 2.0 * parameters - 2.0 * log_likelihood; }

double bic(double log_likelihood, int parameters, std::uint64_t n_obs)
{
    return parameters * std::log(static_cast<double>(n_obs)) - 2.0 * log_likelihood;
}

namespace {

// Applies the policy and checks the common fit preconditions.
WeightedSample prepare(const WeightedSample& raw, ZeroPolicy policy, Family family)
{
    auto data = apply_zero_policy(raw, policy);
    const auto obs = data.observations();
    if (!obs.empty() && obs.front().value <= 0.0)
        throw Error(ErrorKind::no_fit,
                    fmt::format("{} needs positive data; {} leaves value {}", to_string(family),
                                to_string(policy), obs.front().value));
    if (data.count() < 2)
        throw Error(ErrorKind::no_fit, fmt::format("{} fit needs at least 2 observations, got {}",
                                                   to_string(family), data.count()));
    if (obs.size() < 2)
        throw Error(ErrorKind::no_fit,
                    fmt::format("{} fit on constant data (all {})", to_string(family),
                                obs.front().value));
    return data;
}

Real mean_log(const WeightedSample& data)
{
    Real sum = 0;
    for (const auto& o : data.observations())
        sum += static_cast<Real>(o.weight) * std::log(static_cast<Real>(o.value));
    return sum / static_cast<Real>(data.count());
}

Real mean_value(const WeightedSample& data)
{
    Real sum = 0;
    for (const auto& o : data.observations())
        sum += static_cast<Real>(o.weight) * o.value;
    return sum / static_cast<Real>(data.count());
}

struct RootResult {
    double root;
    double residual;
    int iterations;
};

// Newton's method on an increasing function, falling back to bisection when a
// step leaves the bracket [lo, hi] (f(lo) < 0 < f(hi)). The positive argument
// domain is searched by halving/doubling from start.
template <class F>
RootResult increasing_root(F&& f_and_slope, double start, std::string_view what)
{
    auto value = [&](double x) { return f_and_slope(x).first; };
    double lo = start, hi = start;
    int guard = 0;
    while (value(lo) > 0 && guard++ < 2000)
        lo *= 0.5;
    guard = 0;
    while (value(hi) < 0 && guard++ < 2000)
        hi *= 2.0;
    if (!(value(lo) <= 0 && value(hi) >= 0))
        throw Error(ErrorKind::non_convergence,
                    fmt::format("{}: cannot bracket the shape (last interval [{}, {}])", what, lo,
                                hi));

    double x = std::clamp(start, lo, hi);
    for (int it = 1; it <= kMaxFitIterations; ++it) {
        const auto [f, slope] = f_and_slope(x);
        if (std::fabs(f) < kShapeEquationTolerance) {
            // One polishing step; keep it only if it helps.
            if (slope > 0) {
                const double polished = x - f / slope;
                if (polished > 0) {
                    const double pf = value(polished);
                    if (std::fabs(pf) < std::fabs(f))
                        return {polished, pf, it + 1};
                }
            }
            return {x, f, it};
        }
        if (f < 0)
            lo = x;
        else
            hi = x;
        double next = slope > 0 ? x - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        x = next;
    }
    throw Error(ErrorKind::non_convergence,
                fmt::format("{}: no convergence after {} iterations (last shape {:.17g}, residual "
                            "{:.3g})",
                            what, kMaxFitIterations, x, value(x)));
}

FitResult finish(Distribution dist, const WeightedSample& data, ZeroPolicy policy,
                 const RootResult& root)
{
    FitResult out;
    out.dist = dist;
    out.n_obs = data.count();
    out.log_likelihood = log_likelihood(dist, data);
    out.aic = aic(out.log_likelihood, kFitParameters);
    out.bic = bic(out.log_likelihood, kFitParameters, out.n_obs);
    out.gof = gof_statistics(data, dist);
    out.zero_policy = policy;
    out.iterations = root.iterations;
    out.residual = root.residual;
    out.data_digest = data.digest();
    return out;
}

}  // namespace

FitResult fit_weibull(const WeightedSample& raw, ZeroPolicy policy)
{
    const auto data = prepare(raw, policy, Family::weibull);
    const auto obs = data.observations();
    const double x_max = obs.back().value;
    const Real log_max = std::log(static_cast<Real>(x_max));
    const Real mlog = mean_log(data);

    // Working with y = x / x_max keeps y^k in (0, 1].
    std::vector<Real> log_y(obs.size());
    for (std::size_t t = 0; t < obs.size(); ++t)
        log_y[t] = std::log(static_cast<Real>(obs[t].value)) - log_max;

    auto equation = [&](double k) {
        Real s0 = 0, s1 = 0, s2 = 0;
        for (std::size_t t = 0; t < obs.size(); ++t) {
            const Real w = static_cast<Real>(obs[t].weight) * std::exp(k * log_y[t]);
            s0 += w;
            s1 += w * log_y[t];
            s2 += w * log_y[t] * log_y[t];
        }
        const Real a = s1 / s0;
        const Real f = a + log_max - 1.0L / k - mlog;
        const Real slope = s2 / s0 - a * a + 1.0L / (static_cast<Real>(k) * k);
        return std::pair<double, double>{static_cast<double>(f), static_cast<double>(slope)};
    };

    Real var_log = 0;
    for (std::size_t t = 0; t < obs.size(); ++t) {
        const Real d = log_y[t] + log_max - mlog;
        var_log += static_cast<Real>(obs[t].weight) * d * d;
    }
    var_log /= static_cast<Real>(data.count());
    const double start = static_cast<double>(1.2L / std::sqrt(var_log));

    const auto root = increasing_root(equation, start, "weibull");
    const double k = root.root;
    Real s0 = 0;
    for (std::size_t t = 0; t < obs.size(); ++t)
        s0 += static_cast<Real>(obs[t].weight) * std::exp(k * log_y[t]);
    const double scale =
        static_cast<double>(std::exp(log_max + std::log(s0 / static_cast<Real>(data.count())) / k));
    return finish({Family::weibull, k, scale}, data, policy, root);
}

FitResult fit_gamma(const WeightedSample& raw, ZeroPolicy policy)
{
    const auto data = prepare(raw, policy, Family::gamma);
    const Real mean = mean_value(data);
    const double s = static_cast<double>(std::log(mean) - mean_log(data));
    if (!(s > 0))
        throw Error(ErrorKind::no_fit, "gamma fit on data with no spread in log scale");

    // ln a - digamma(a) - s decreases in a; negate it for the increasing solver.
    auto equation = [s](double a) {
        const double f = std::log(a) - boost::math::digamma(a) - s;
        const double slope = 1.0 / a - boost::math::trigamma(a);
        return std::pair<double, double>{-f, -slope};
    };
    const double start = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    const auto root = increasing_root(equation, start, "gamma");
    const double shape = root.root;
    return finish({Family::gamma, shape, static_cast<double>(mean) / shape}, data, policy, root);
}

FitResult fit_lognormal(const WeightedSample& raw, ZeroPolicy policy)
{
    const auto data = prepare(raw, policy, Family::lognormal);
    const Real mu = mean_log(data);
    Real ss = 0;
    for (const auto& o : data.observations()) {
        const Real d = std::log(static_cast<Real>(o.value)) - mu;
        ss += static_cast<Real>(o.weight) * d * d;
    }
    const double sigma = static_cast<double>(std::sqrt(ss / static_cast<Real>(data.count())));
    return finish({Family::lognormal, sigma, static_cast<double>(std::exp(mu))}, data, policy,
                  RootResult{sigma, 0.0, 0});
}

FitResult fit(Family family, const WeightedSample& data, ZeroPolicy policy)
{
    switch (family) {
    case Family::weibull: return fit_weibull(data, policy);
    case Family::gamma: return fit_gamma(data, policy);
    case Family::lognormal: return fit_lognormal(data, policy);
    }
    throw Error(ErrorKind::usage, "unknown family");
}

GofStatistics gof_statistics(const WeightedSample& data, const Distribution& dist)
{
    GofStatistics out;
    const Real total = static_cast<Real>(data.count());
    if (data.count() == 0)
        return out;
    Real ks = 0;
    Real cvm = 1.0L / (12.0L * total);
    Real ad_sum = 0;
    Real before = 0;  // observations strictly below the current value
    for (const auto& o : data.observations()) {
        const Real w = static_cast<Real>(o.weight);
        const Real u = dist.cdf(o.value);
        ks = std::max({ks, std::fabs((before + w) / total - u), std::fabs(u - before / total)});

        // Ranks before+1 .. before+w share u; their plotting positions
        // (2i-1)/(2N) have mean (2*before + w)/(2N) and spread (w^3-w)/(12N^2).
        const Real centre = (2.0L * before + w) / (2.0L * total);
        cvm += w * (u - centre) * (u - centre) + (w * w * w - w) / (12.0L * total * total);

        const Real c_low = (before + w) * (before + w) - before * before;
        const Real c_high = w * (2.0L * total + 1.0L) -
                            ((before + w) * (before + w + 1.0L) - before * (before + 1.0L));
        ad_sum += c_low * dist.log_cdf(o.value) + c_high * dist.log_sf(o.value);
        before += w;
    }
    out.ks = static_cast<double>(ks);
    out.cvm = static_cast<double>(cvm);
    out.ad = static_cast<double>(-total - ad_sum / total);
    return out;
}

GofStatistics gof_statistics(const WeightedSample& raw, const FitResult& fit)
{
    return gof_statistics(apply_zero_policy(raw, fit.zero_policy), fit.dist);
}

ModelRanking model_compare(std::span<const FitResult> fits)
{
    ModelRanking out;
    if (fits.empty())
        return out;
    for (const auto& f : fits) {
        if (f.data_digest != fits.front().data_digest || f.n_obs != fits.front().n_obs ||
            f.zero_policy != fits.front().zero_policy)
            throw Error(ErrorKind::comparison,
                        "model comparison needs fits on the same data and zero policy");
    }
    out.by_aic.resize(fits.size());
    std::iota(out.by_aic.begin(), out.by_aic.end(), std::size_t{0});
    out.by_bic = out.by_aic;
    std::stable_sort(out.by_aic.begin(), out.by_aic.end(),
                     [&](auto a, auto b) { return fits[a].aic < fits[b].aic; });
    std::stable_sort(out.by_bic.begin(), out.by_bic.end(),
                     [&](auto a, auto b) { return fits[a].bic < fits[b].bic; });
    return out;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string export_distribution_tables(const CoreSizeHistogram& histogram, const FitsBySize& fits)
{
    std::vector<Family> columns;
    for (const auto& [n, list] : fits)
        for (const auto& f : list)
            if (std::find(columns.begin(), columns.end(), f.family()) == columns.end())
                columns.push_back(f.family());
    std::sort(columns.begin(), columns.end());

    std::string out = "players,core_size,count,frequency,ecdf";
    for (auto family : columns)
        out += fmt::format(",{}_cdf", to_string(family));
    out += '\n';

    for (const auto& [n, counts] : histogram.sizes()) {
        const std::uint64_t total = histogram.total(n);
        if (total == 0)
            continue;
        auto fit_list = fits.find(n);
        std::uint64_t running = 0;
        for (const auto& [size, count] : counts) {
            running += count;
            out += fmt::format("{},{},{},{},{}", n, size, count,
                               format_double(static_cast<double>(count) / total),
                               format_double(static_cast<double>(running) / total));
            for (auto family : columns) {
                out += ',';
                if (fit_list == fits.end())
                    continue;
                for (const auto& f : fit_list->second) {
                    if (f.family() != family)
                        continue;
                    double x = static_cast<double>(size);
                    if (f.zero_policy == ZeroPolicy::shift_by_one)
                        x += 1.0;
                    out += format_double(f.dist.cdf(x));
                    break;
                }
            }
            out += '\n';
        }
    }
    return out;
}

nlohmann::json to_json(const FitResult& fit)
{
    nlohmann::json j = {
        {"family", to_string(fit.family())},
        {"shape", fit.shape()},
        {"scale", fit.scale()},
        {"log_likelihood", fit.log_likelihood},
        {"n_obs", fit.n_obs},
        {"ks", fit.gof.ks},
        {"cvm", fit.gof.cvm},
        {"ad", fit.gof.ad},
        {"aic", fit.aic},
        {"bic", fit.bic},
        {"zero_policy", to_string(fit.zero_policy)},
        {"iterations", fit.iterations},
        {"residual", fit.residual},
    };
    if (fit.family() == Family::lognormal) {
        j["meanlog"] = std::log(fit.scale());
        j["sdlog"] = fit.shape();
    }
    return j;
}

nlohmann::json to_json(const MomentsSummary& m)
{
    const auto [sq, kurt] = cullen_frey_point(m);
    return {{"count", m.count},       {"mean", m.mean},         {"variance", m.variance},
            {"skewness", m.skewness}, {"kurtosis", m.kurtosis}, {"cullen_frey", {sq, kurt}}};
}

}  // namespace hedcore
