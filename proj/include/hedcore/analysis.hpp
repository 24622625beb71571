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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hedcore/experiment.hpp"

namespace hedcore {

struct WeightedObservation {
    double value;
    std::uint64_t weight;
};

/// Observations with integer multiplicities, kept sorted by value with equal
/// values merged and zero weights dropped.
class WeightedSample {
public:
    WeightedSample() = default;
    explicit WeightedSample(std::vector<WeightedObservation> observations);

    /// Unit weight per value.
    static WeightedSample from_values(std::span<const double> values);
    /// One observation per core size, weighted by its game count.
    static WeightedSample from_counts(const CoreSizeHistogram::Counts& counts);

    std::span<const WeightedObservation> observations() const noexcept { return obs_; }
    std::uint64_t count() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }

    /// Order-sensitive digest of values and weights, used to tell datasets apart.
    std::uint64_t digest() const noexcept;

private:
    std::vector<WeightedObservation> obs_;
    std::uint64_t count_ = 0;
};

struct MomentsSummary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased (divides by count - 1)
    double skewness = 0.0;  ///< m3 / m2^1.5
    double kurtosis = 0.0;  ///< m4 / m2^2, normal = 3
};

/// Sample moments; m2, m3, m4 are the central moments dividing by count, which
/// keeps kurtosis >= 1 + skewness^2. Fewer than 4 observations throws
/// ErrorKind::insufficient_data, zero variance ErrorKind::degenerate_data.
MomentsSummary moments(const WeightedSample& data);

/// Cullen-Frey plot coordinates (skewness^2, kurtosis).
std::pair<double, double> cullen_frey_point(const MomentsSummary& m);

/// How core size 0 enters a fit on a positive-support family.
enum class ZeroPolicy { drop_zeros, shift_by_one, include_raw };

std::string_view to_string(ZeroPolicy policy);
ZeroPolicy parse_zero_policy(std::string_view text);

/// Drops zeros, adds one to every value, or passes data through unchanged.
WeightedSample apply_zero_policy(const WeightedSample& data, ZeroPolicy policy);

enum class Family { weibull, gamma, lognormal };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

inline constexpr int kFitParameters = 2;
inline constexpr double kShapeEquationTolerance = 1e-10;
inline constexpr int kMaxFitIterations = 200;

/// Parameters of a two-parameter family: shape/scale for Weibull and Gamma;
/// for the lognormal shape is the log-sd and scale is exp(log-mean).
struct Distribution {
    Family family = Family::weibull;
    double shape = 1.0;
    double scale = 1.0;

    double cdf(double x) const;
    double log_cdf(double x) const;
    /// log(1 - cdf(x)), accurate in the upper tail.
    double log_sf(double x) const;
    double log_pdf(double x) const;
};

struct GofStatistics {
    double ks = 0.0;
    double cvm = 0.0;
    double ad = 0.0;
};

struct FitResult {
    Distribution dist;
    double log_likelihood = 0.0;
    std::uint64_t n_obs = 0;
    GofStatistics gof;
    double aic = 0.0;
    double bic = 0.0;
    ZeroPolicy zero_policy = ZeroPolicy::drop_zeros;
    int iterations = 0;
    /// Residual of the shape equation at the returned estimate (0 for closed
    /// forms).
    double residual = 0.0;
    std::uint64_t data_digest = 0;

    Family family() const noexcept { return dist.family; }
    double shape() const noexcept { return dist.shape; }
    double scale() const noexcept { return dist.scale; }
};

/// Sum of weight * log_pdf, accumulated in extended precision.
double log_likelihood(const Distribution& dist, const WeightedSample& data);

/// Weibull MLE. The shape solves the profile equation
///   sum w x^k ln x / sum w x^k - 1/k - mean(ln x) = 0
/// by safeguarded Newton until |residual| < kShapeEquationTolerance; then
/// scale = (mean of x^k)^(1/k).
FitResult fit_weibull(const WeightedSample& data, ZeroPolicy policy = ZeroPolicy::drop_zeros);

/// Gamma MLE. The shape solves ln a - digamma(a) = ln(mean x) - mean(ln x) by
/// safeguarded Newton; scale = mean / shape.
FitResult fit_gamma(const WeightedSample& data, ZeroPolicy policy = ZeroPolicy::drop_zeros);

/// Lognormal MLE (closed form).
FitResult fit_lognormal(const WeightedSample& data, ZeroPolicy policy = ZeroPolicy::drop_zeros);

FitResult fit(Family family, const WeightedSample& data, ZeroPolicy policy);

/// KS, Cramer-von Mises W^2 and Anderson-Darling A^2 of data against dist,
/// evaluated with the order-statistic sums; tied values are expanded by
/// weight in closed form. data must already have the zero policy applied.
GofStatistics gof_statistics(const WeightedSample& data, const Distribution& dist);

/// Same, for a fit: applies the fit's zero policy to raw data first.
GofStatistics gof_statistics(const WeightedSample& raw, const FitResult& fit);

double aic(double log_likelihood, int parameters);
double bic(double log_likelihood, int parameters, std::uint64_t n_obs);

struct ModelRanking {
    std::vector<std::size_t> by_aic;  ///< indices into the fits, best first
    std::vector<std::size_t> by_bic;
};

/// Ranks fits by ascending AIC (and BIC). Fits on different data or with
/// different zero policies throw ErrorKind::comparison.
ModelRanking model_compare(std::span<const FitResult> fits);

/// Fits to draw alongside the empirical CDF of each game size.
using FitsBySize = std::map<int, std::vector<FitResult>>;

/// One CSV table: players,core_size,count,frequency,ecdf followed by one
/// "<family>_cdf" column per family present in fits. Fitted CDFs are
/// evaluated at the policy-transformed core size.
std::string export_distribution_tables(const CoreSizeHistogram& histogram,
                                       const FitsBySize& fits = {});

/// JSON fit report entry; floating values are written to round-trip exactly.
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const MomentsSummary& m);

/// Decimal with 17 significant digits.
std::string format_double(double v);

}  // namespace hedcore
