#include "rttkit/forecast.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <tuple>

#include "parallel.hpp"
#include "rttkit/errors.hpp"
#include "rttkit/format.hpp"

namespace rttkit {

namespace {

void check_weight(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0))
        throw Error(Errc::invalid_argument, std::string(name) + " must lie in [0, 1]");
}

void check_finite(std::span<const double> series) {
    for (double v : series)
        if (!std::isfinite(v))
            throw Error(Errc::contains_missing, "series values must be finite");
}

/// One Holt-Winters pass from a prepared initial state over indices
/// [2L, n). Collects one-step predictions into *fitted when given; the
/// expressions here are the single source of the recursion, so a fit()
/// grid probe and the final hw() run produce bit-identical numbers.
double hw_run(std::span<const double> y, std::size_t season_len, const HwState& init,
              const HwParams& p, std::vector<double>* fitted, HwState* end_state) {
    double level = init.level;
    double trend = init.trend;
    std::vector<double> seasonals = init.seasonals;
    double sse = 0.0;
    for (std::size_t x = 2 * season_len; x < y.size(); ++x) {
        const std::size_t phase = x % season_len;
        const double seasonal = seasonals[phase];
        const double predicted = level + trend + seasonal;
        if (fitted) fitted->push_back(predicted);
        const double err = y[x] - predicted;
        sse += err * err;
        const double next_level = p.alpha * (y[x] - seasonal) + (1.0 - p.alpha) * (level + trend);
        trend = p.beta * (next_level - level) + (1.0 - p.beta) * trend;
        seasonals[phase] = p.gamma * (y[x] - next_level) + (1.0 - p.gamma) * seasonal;
        level = next_level;
    }
    if (end_state) *end_state = {level, trend, std::move(seasonals), y.size() % season_len};
    return sse;
}

void check_hw_input(std::span<const double> series, const HwParams& params) {
    if (params.season_len < 2) throw Error(Errc::bad_season, "season_len must be at least 2");
    check_weight(params.alpha, "alpha");
    check_weight(params.beta, "beta");
    check_weight(params.gamma, "gamma");
    if (series.size() < 2 * params.season_len)
        throw Error(Errc::series_too_short, "need at least two full seasons");
    check_finite(series);
}

}  // namespace

ForecastResult ses(std::span<const double> series, double alpha, std::size_t horizon) {
    check_weight(alpha, "alpha");
    if (series.empty()) throw Error(Errc::empty_series, "nothing to smooth");
    check_finite(series);

    ForecastResult result;
    result.first_fitted_index = 1;
    result.fitted.reserve(series.size() - 1);
    double level = series[0];
    for (std::size_t x = 1; x < series.size(); ++x) {
        result.fitted.push_back(level);
        const double err = series[x] - level;
        result.sse += err * err;
        level = alpha * series[x] + (1.0 - alpha) * level;
    }
    result.horizon.assign(horizon, level);
    result.state = {level, 0.0, {}, 0};
    return result;
}

ForecastResult holt(std::span<const double> series, double alpha, double beta,
                    std::size_t horizon) {
    check_weight(alpha, "alpha");
    check_weight(beta, "beta");
    if (series.size() < 2) throw Error(Errc::series_too_short, "need at least 2 points");
    check_finite(series);

    ForecastResult result;
    result.first_fitted_index = 1;
    result.fitted.reserve(series.size() - 1);
    double level = series[0];
    double trend = series[1] - series[0];
    for (std::size_t x = 1; x < series.size(); ++x) {
        const double predicted = level + trend;
        result.fitted.push_back(predicted);
        const double err = series[x] - predicted;
        result.sse += err * err;
        const double next_level = alpha * series[x] + (1.0 - alpha) * (level + trend);
        trend = beta * (next_level - level) + (1.0 - beta) * trend;
        level = next_level;
    }
    result.horizon.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        result.horizon.push_back(level + static_cast<double>(k + 1) * trend);
    result.state = {level, trend, {}, 0};
    return result;
}

HwState hw_init(std::span<const double> series, std::size_t season_len) {
    if (season_len < 2) throw Error(Errc::bad_season, "season_len must be at least 2");
    if (series.size() < 2 * season_len)
        throw Error(Errc::series_too_short, "need at least two full seasons");
    check_finite(series);

    const std::size_t L = season_len;
    const auto Ld = static_cast<double>(L);

    double level = 0.0;
    for (std::size_t i = 0; i < L; ++i) level += series[i];
    level /= Ld;

    // Average per-slot change between the first two seasons.
    double trend = 0.0;
    for (std::size_t i = 0; i < L; ++i) trend += (series[L + i] - series[i]) / Ld;
    trend /= Ld;

    // Per-phase deviation from each complete season's own mean.
    const std::size_t seasons = series.size() / L;
    std::vector<double> seasonals(L, 0.0);
    for (std::size_t k = 0; k < seasons; ++k) {
        double season_mean = 0.0;
        for (std::size_t i = 0; i < L; ++i) season_mean += series[k * L + i];
        season_mean /= Ld;
        for (std::size_t i = 0; i < L; ++i) seasonals[i] += series[k * L + i] - season_mean;
    }
    double balance = 0.0;
    for (double& s : seasonals) {
        s /= static_cast<double>(seasons);
        balance += s;
    }
    balance /= Ld;
    for (double& s : seasonals) s -= balance;

    return {level, trend, std::move(seasonals), series.size() % L};
}

ForecastResult hw(std::span<const double> series, const HwParams& params, std::size_t horizon) {
    check_hw_input(series, params);
    const std::size_t L = params.season_len;
    const HwState init = hw_init(series.first(2 * L), L);

    ForecastResult result;
    result.first_fitted_index = 2 * L;
    result.fitted.reserve(series.size() - 2 * L);
    result.sse = hw_run(series, L, init, params, &result.fitted, &result.state);
    result.horizon.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        result.horizon.push_back(result.state.level +
                                 static_cast<double>(k + 1) * result.state.trend +
                                 result.state.seasonals[(series.size() + k) % L]);
    return result;
}

namespace {

using ParamTuple = std::tuple<double, double, double>;

/// Strict "better" order for the optimizer: smaller error first, then the
/// smaller parameter triple so ties resolve the same way everywhere.
bool better(double mse_a, const ParamTuple& a, double mse_b, const ParamTuple& b) {
    if (mse_a != mse_b) return mse_a < mse_b;
    return a < b;
}

}  // namespace

FitResult fit(std::span<const double> series, std::size_t season_len, std::size_t horizon,
              double grid_step, unsigned threads) {
    if (!(grid_step > 0.0 && grid_step <= 0.5))
        throw Error(Errc::invalid_argument, "grid_step must lie in (0, 0.5]");
    HwParams probe{0.0, 0.0, 0.0, season_len};
    check_hw_input(series, probe);
    const HwState init = hw_init(series.first(2 * season_len), season_len);
    const std::size_t denom = series.size() - 2 * season_len;
    const auto mse_of = [&](const ParamTuple& t) {
        const HwParams p{std::get<0>(t), std::get<1>(t), std::get<2>(t), season_len};
        const double sse = hw_run(series, season_len, init, p, nullptr, nullptr);
        return denom == 0 ? 0.0 : sse / static_cast<double>(denom);
    };

    // Grid axis: multiples of grid_step, with 1 always included exactly.
    std::vector<double> axis;
    for (std::size_t k = 0;; ++k) {
        const double v = static_cast<double>(k) * grid_step;
        if (v >= 1.0 - 1e-12) break;
        axis.push_back(v);
    }
    axis.push_back(1.0);

    const std::size_t a_count = axis.size();
    const std::size_t combos = a_count * a_count * a_count;
    std::vector<double> mses(combos);
    detail::parallel_chunks(combos, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const double alpha = axis[c / (a_count * a_count)];
            const double beta = axis[(c / a_count) % a_count];
            const double gamma = axis[c % a_count];
            mses[c] = mse_of({alpha, beta, gamma});
        }
    });
    // Combos are enumerated in ascending (alpha, beta, gamma), so keeping
    // the first strict minimum applies the tie-break for free.
    std::size_t best = 0;
    for (std::size_t c = 1; c < combos; ++c)
        if (mses[c] < mses[best]) best = c;
    ParamTuple current{axis[best / (a_count * a_count)], axis[(best / a_count) % a_count],
                       axis[best % a_count]};
    double current_mse = mses[best];

    // Coordinate descent around the grid winner, halving the probe step.
    for (double step = grid_step / 2.0; step >= 1e-3; step /= 2.0) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (int coord = 0; coord < 3; ++coord) {
                for (const double direction : {-1.0, 1.0}) {
                    ParamTuple candidate = current;
                    double& value = coord == 0   ? std::get<0>(candidate)
                                    : coord == 1 ? std::get<1>(candidate)
                                                 : std::get<2>(candidate);
                    value = std::clamp(value + direction * step, 0.0, 1.0);
                    if (candidate == current) continue;
                    const double mse = mse_of(candidate);
                    if (better(mse, candidate, current_mse, current)) {
                        current = candidate;
                        current_mse = mse;
                        moved = true;
                    }
                }
            }
        }
    }

    FitResult result;
    result.params = {std::get<0>(current), std::get<1>(current), std::get<2>(current), season_len};
    result.forecast = hw(series, result.params, horizon);
    result.mse = result.forecast.mse();
    return result;
}

std::vector<double> dense_values(const TimeSeries& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (const Observation& v : series.values()) {
        if (!v) throw Error(Errc::contains_missing, "series has missing slots");
        out.push_back(*v);
    }
    return out;
}

void write_forecast_csv(std::ostream& out, const GridSpec& grid, std::size_t slot_offset,
                        std::span<const double> actual, const ForecastResult& result) {
    out << "slot,timestamp,actual,fitted,forecast\n";
    for (std::size_t j = 0; j < result.fitted.size(); ++j) {
        const std::size_t index = result.first_fitted_index + j;
        const std::size_t slot = slot_offset + index;
        out << slot << ',' << grid.slot_time(slot) << ',' << format_fixed6(actual[index]) << ','
            << format_fixed6(result.fitted[j]) << ",\n";
    }
    for (std::size_t k = 0; k < result.horizon.size(); ++k) {
        const std::size_t slot = slot_offset + actual.size() + k;
        out << slot << ',' << grid.slot_time(slot) << ",,," << format_fixed6(result.horizon[k])
            << '\n';
    }
}

}  // namespace rttkit
