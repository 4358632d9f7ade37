#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rttkit/series.hpp"

namespace rttkit {

/// Smoothing weights, each in [0, 1]: alpha for the level, beta for the
/// trend, gamma for the seasonal pattern of season_len slots.
struct HwParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::size_t season_len = 288;

    friend bool operator==(const HwParams&, const HwParams&) = default;
};

/// Smoother state after consuming a series. seasonals is empty for the
/// non-seasonal methods; phase is the season position of the next
/// observation (always 0 when non-seasonal).
struct HwState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonals;
    std::size_t phase = 0;
};

struct ForecastResult {
    /// One-step-ahead in-sample predictions: fitted[i] predicts the input at
    /// index first_fitted_index + i.
    std::vector<double> fitted;
    std::size_t first_fitted_index = 0;
    /// Out-of-sample path: horizon[k] predicts index n + k.
    std::vector<double> horizon;
    HwState state;
    /// Sum of squared one-step errors over the fitted range.
    double sse = 0.0;

    double mse() const noexcept { return fitted.empty() ? 0.0 : sse / static_cast<double>(fitted.size()); }
};

/// Simple exponential smoothing. The level starts at the first observation
/// and follows s = alpha * y + (1 - alpha) * s; the horizon is flat at the
/// final level. Fitted values start at input index 1. Throws
/// Error{empty_series}, Error{contains_missing} on non-finite input, or
/// Error{invalid_argument} for alpha outside [0, 1].
ForecastResult ses(std::span<const double> series, double alpha, std::size_t horizon);

/// Holt's trended smoothing. Level starts at y[0], trend at y[1] - y[0];
/// horizon[k] = level + (k + 1) * trend. Fitted values start at index 1.
/// Needs at least 2 points, else Error{series_too_short}.
ForecastResult holt(std::span<const double> series, double alpha, double beta,
                    std::size_t horizon);

/// Initial seasonal state from the leading complete seasons: level is the
/// mean of the first season, trend the average per-slot change between the
/// first two seasons, seasonals the per-phase mean deviation from each
/// season's own mean, re-centered to sum to zero. Needs season_len >= 2
/// (Error{bad_season}) and at least two complete seasons
/// (Error{series_too_short}).
HwState hw_init(std::span<const double> series, std::size_t season_len);

/// Additive seasonal (Holt-Winters) smoothing, initialized by hw_init over
/// the first two seasons. Fitted values start at index 2 * season_len;
/// horizon[k] = level + (k + 1) * trend + the matching seasonal.
ForecastResult hw(std::span<const double> series, const HwParams& params, std::size_t horizon);

struct FitResult {
    HwParams params;
    ForecastResult forecast;  ///< run of hw() at the chosen parameters
    double mse = 0.0;         ///< its mean squared one-step error
};

/// Picks (alpha, beta, gamma) minimizing in-sample one-step MSE: a full grid
/// at grid_step spacing (the last grid point is always exactly 1), refined
/// by coordinate descent with the step halved down to 1e-3. Ties prefer the
/// smaller (alpha, beta, gamma). Grid cells are scored independently, so the
/// choice is identical for any thread count (0 = hardware concurrency).
/// grid_step must lie in (0, 0.5], else Error{invalid_argument}.
FitResult fit(std::span<const double> series, std::size_t season_len, std::size_t horizon,
              double grid_step = 0.05, unsigned threads = 1);

/// The series values as a dense vector, for feeding the smoothers. Throws
/// Error{contains_missing} when any slot is missing; interpolate or slice
/// first.
std::vector<double> dense_values(const TimeSeries& series);

/// Writes fitted and forecast paths as CSV with header
/// "slot,timestamp,actual,fitted,forecast": one row per fitted in-sample
/// slot (forecast cell empty) and one per horizon step (actual and fitted
/// cells empty). `slot_offset` places actual[0] on the grid, so slot numbers
/// and timestamps line up with the store the series came from. Values use 6
/// fractional digits.
void write_forecast_csv(std::ostream& out, const GridSpec& grid, std::size_t slot_offset,
                        std::span<const double> actual, const ForecastResult& result);

}  // namespace rttkit
