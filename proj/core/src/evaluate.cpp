#include "rttkit/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rttkit/errors.hpp"
#include "rttkit/format.hpp"

namespace rttkit {

EvalReport score(std::span<const Observation> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size())
        throw Error(Errc::length_mismatch, "actual and predicted lengths differ");
    for (double p : predicted)
        if (!std::isfinite(p))
            throw Error(Errc::contains_missing, "predictions must be finite");

    EvalReport report;
    double se = 0.0, ae = 0.0, pe = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!actual[i]) {
            ++report.n_skipped;
            continue;
        }
        const double a = *actual[i];
        if (!std::isfinite(a) || a <= 0.0)
            throw Error(Errc::invalid_value, "actuals must be finite positive RTTs");
        const double err = a - predicted[i];
        se += err * err;
        ae += std::abs(err);
        pe += 100.0 * std::abs(err) / a;
        ++report.n_scored;
    }
    if (report.n_scored == 0)
        throw Error(Errc::no_scorable_slots, "every actual slot is missing");
    const auto n = static_cast<double>(report.n_scored);
    report.mse = se / n;
    report.mae = ae / n;
    report.mape = pe / n;
    report.accuracy = std::max(0.0, 100.0 - report.mape);
    return report;
}

HoldoutResult holdout_eval(const TimeSeries& series, double split_fraction,
                           std::size_t season_len, double grid_step, unsigned threads) {
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw Error(Errc::invalid_argument, "split_fraction must lie strictly in (0, 1)");
    const auto train_len =
        static_cast<std::size_t>(split_fraction * static_cast<double>(series.size()));
    const std::vector<double> train = dense_values(slice(series, 0, train_len));
    const std::size_t holdout_len = series.size() - train_len;
    const FitResult fitted = fit(train, season_len, holdout_len, grid_step, threads);
    const std::span<const Observation> held(series.values().data() + train_len, holdout_len);
    return {score(held, fitted.forecast.horizon), fitted.params};
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
    out << "mse,mae,mape,accuracy,n_scored,n_skipped\n"
        << format_fixed6(report.mse) << ',' << format_fixed6(report.mae) << ','
        << format_fixed6(report.mape) << ',' << format_fixed6(report.accuracy) << ','
        << report.n_scored << ',' << report.n_skipped << '\n';
}

void write_report_text(const EvalReport& report, std::ostream& out) {
    out << "scored slots: " << report.n_scored << " (skipped " << report.n_skipped
        << " missing)\n"
        << "mse:          " << format_fixed6(report.mse) << '\n'
        << "mae:          " << format_fixed6(report.mae) << '\n'
        << "mape:         " << format_fixed6(report.mape) << "%\n"
        << "accuracy:     " << format_fixed6(report.accuracy)
        << "% (accuracy = max(0, 100 - mape))\n";
}

}  // namespace rttkit
