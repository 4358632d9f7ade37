#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>

#include "rttkit/forecast.hpp"
#include "rttkit/series.hpp"

namespace rttkit {

/// Forecast quality over the scored slots. accuracy is defined here as
/// max(0, 100 - MAPE): 100 means exact, 0 means off by 100 percent or more
/// on average.
struct EvalReport {
    double mse = 0.0;
    double mae = 0.0;
    double mape = 0.0;      ///< mean absolute percentage error
    double accuracy = 0.0;  ///< max(0, 100 - mape)
    std::size_t n_scored = 0;
    std::size_t n_skipped = 0;  ///< actual slots that were missing
};

/// Scores predictions against actuals slot by slot; missing actuals are
/// skipped, not penalized. Lengths must match (Error{length_mismatch}),
/// predictions must be finite (Error{contains_missing}), and at least one
/// actual must be present (Error{no_scorable_slots}).
EvalReport score(std::span<const Observation> actual, std::span<const double> predicted);

struct HoldoutResult {
    EvalReport report;
    HwParams params;  ///< parameters fitted on the training prefix
};

/// Train/holdout evaluation: fits on the first floor(split_fraction * n)
/// slots (which must be gap-free and hold at least two seasons), forecasts
/// the rest in one shot, and scores against the held-out actuals.
/// split_fraction must lie strictly between 0 and 1.
HoldoutResult holdout_eval(const TimeSeries& series, double split_fraction,
                           std::size_t season_len, double grid_step = 0.05, unsigned threads = 1);

/// One CSV line with header "mse,mae,mape,accuracy,n_scored,n_skipped",
/// values at 6 fractional digits.
void write_report_csv(const EvalReport& report, std::ostream& out);

/// Human-readable block, one metric per line, stating what accuracy means.
void write_report_text(const EvalReport& report, std::ostream& out);

}  // namespace rttkit
