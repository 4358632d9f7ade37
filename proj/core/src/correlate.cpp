#include "rttkit/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "parallel.hpp"
#include "rttkit/errors.hpp"
#include "rttkit/format.hpp"

namespace rttkit {

namespace {

enum class CellStatus { defined, thin_overlap, flat };

struct CellValue {
    double rho = 0.0;
    std::size_t overlap = 0;
    CellStatus status = CellStatus::thin_overlap;
};

/// One-pass Welford co-moments over the slots where both series are
/// present. Population scaling cancels in the ratio, so none is applied.
CellValue compute_cell(const TimeSeries& x, const TimeSeries& y,
                       std::size_t min_overlap) noexcept {
    std::size_t n = 0;
    double mean_x = 0.0, mean_y = 0.0;
    double m2x = 0.0, m2y = 0.0, cxy = 0.0;
    const std::size_t len = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < len; ++i) {
        if (!x[i] || !y[i]) continue;
        const double xv = *x[i];
        const double yv = *y[i];
        ++n;
        const double dx = xv - mean_x;
        mean_x += dx / static_cast<double>(n);
        const double dy = yv - mean_y;
        mean_y += dy / static_cast<double>(n);
        const double dy_new = yv - mean_y;
        cxy += dx * dy_new;
        m2x += dx * (xv - mean_x);
        m2y += dy * dy_new;
    }
    if (n == 0 || n < min_overlap) return {0.0, n, CellStatus::thin_overlap};
    if (m2x == 0.0 || m2y == 0.0) return {0.0, n, CellStatus::flat};
    const double rho = std::clamp(cxy / std::sqrt(m2x * m2y), -1.0, 1.0);
    return {rho, n, CellStatus::defined};
}

void check_same_grid(const std::vector<const TimeSeries*>& group) {
    if (group.empty()) return;
    for (const TimeSeries* s : group) {
        if (s == nullptr) throw Error(Errc::invalid_argument, "null series in group");
        if (s->grid() != group.front()->grid())
            throw Error(Errc::grid_mismatch, "group series must share one grid");
    }
}

std::vector<SeriesKey> keys_of(const std::vector<const TimeSeries*>& group) {
    std::vector<SeriesKey> keys;
    keys.reserve(group.size());
    for (const TimeSeries* s : group) keys.push_back(s->key());
    return keys;
}

}  // namespace

CorrelationResult pearson(const TimeSeries& x, const TimeSeries& y, std::size_t min_overlap) {
    if (x.grid() != y.grid()) throw Error(Errc::grid_mismatch, "series grids differ");
    const CellValue cell = compute_cell(x, y, min_overlap);
    switch (cell.status) {
        case CellStatus::thin_overlap:
            throw Error(Errc::insufficient_overlap,
                        "overlap " + std::to_string(cell.overlap) + " is below minimum " +
                            std::to_string(min_overlap));
        case CellStatus::flat:
            throw Error(Errc::zero_variance, "a series is constant on the overlap");
        case CellStatus::defined:
            break;
    }
    return {cell.rho, cell.overlap};
}

std::vector<const TimeSeries*> group_series(const SeriesStore& store,
                                            const GroupSelector& selector) {
    std::vector<const TimeSeries*> group;
    for (const auto& [key, series] : store) {
        if (key.monitor == selector.monitor && key.asn == selector.asn && key.ind == selector.ind)
            group.push_back(&series);
    }
    return group;  // store order makes this (target, link) ascending
}

CorrelationMatrix::CorrelationMatrix(std::vector<SeriesKey> row_keys,
                                     std::vector<SeriesKey> col_keys, bool symmetric,
                                     std::vector<std::optional<double>> rho,
                                     std::vector<std::size_t> overlap)
    : row_keys_(std::move(row_keys)),
      col_keys_(std::move(col_keys)),
      symmetric_(symmetric),
      rho_(std::move(rho)),
      overlap_(std::move(overlap)) {
    const std::size_t cells = row_keys_.size() * col_keys_.size();
    if (rho_.size() != cells || overlap_.size() != cells)
        throw Error(Errc::invalid_argument, "matrix cell count does not match its keys");
    if (symmetric_ && row_keys_ != col_keys_)
        throw Error(Errc::invalid_argument, "a symmetric matrix needs identical row and column keys");
}

CorrelationMatrix correlation_matrix(const std::vector<const TimeSeries*>& group,
                                     std::size_t min_overlap, unsigned threads) {
    check_same_grid(group);
    const std::size_t n = group.size();
    std::vector<std::optional<double>> rho(n * n);
    std::vector<std::size_t> overlap(n * n, 0);

    // Upper-triangle cell list; each entry owns its mirror cell too, so
    // every output index is written by exactly one worker.
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    cells.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) cells.emplace_back(i, j);

    detail::parallel_chunks(cells.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const auto [i, j] = cells[c];
            const CellValue cell = compute_cell(*group[i], *group[j], min_overlap);
            overlap[i * n + j] = cell.overlap;
            overlap[j * n + i] = cell.overlap;
            if (cell.status == CellStatus::defined) {
                const double value = i == j ? 1.0 : cell.rho;
                rho[i * n + j] = value;
                rho[j * n + i] = value;
            }
        }
    });
    std::vector<SeriesKey> keys = keys_of(group);
    return CorrelationMatrix(keys, keys, true, std::move(rho), std::move(overlap));
}

CorrelationMatrix cross_asn_correlation(const SeriesStore& store, const std::string& monitor,
                                        std::uint32_t asn_a, std::uint32_t asn_b, int ind,
                                        std::size_t min_overlap, unsigned threads) {
    const std::vector<const TimeSeries*> rows =
        group_series(store, {monitor, asn_a, ind});
    if (asn_a == asn_b) return correlation_matrix(rows, min_overlap, threads);
    const std::vector<const TimeSeries*> cols =
        group_series(store, {monitor, asn_b, ind});

    const std::size_t nr = rows.size();
    const std::size_t nc = cols.size();
    std::vector<std::optional<double>> rho(nr * nc);
    std::vector<std::size_t> overlap(nr * nc, 0);
    detail::parallel_chunks(nr * nc, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const std::size_t i = c / nc;
            const std::size_t j = c % nc;
            const CellValue cell = compute_cell(*rows[i], *cols[j], min_overlap);
            overlap[c] = cell.overlap;
            if (cell.status == CellStatus::defined) rho[c] = cell.rho;
        }
    });
    return CorrelationMatrix(keys_of(rows), keys_of(cols), false, std::move(rho),
                             std::move(overlap));
}

namespace {

/// Applies fn(row, col, rho) to every coupling cell: the strict upper
/// triangle when symmetric, every defined cell otherwise.
template <typename Fn>
void for_each_pair(const CorrelationMatrix& matrix, Fn&& fn) {
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const std::size_t j0 = matrix.symmetric() ? i + 1 : 0;
        for (std::size_t j = j0; j < matrix.cols(); ++j) {
            const std::optional<double> r = matrix.rho(i, j);
            if (r) fn(i, j, *r);
        }
    }
}

}  // namespace

std::optional<double> mean_pairwise(const CorrelationMatrix& matrix) {
    double sum = 0.0;
    std::size_t count = 0;
    for_each_pair(matrix, [&](std::size_t, std::size_t, double r) {
        sum += r;
        ++count;
    });
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::size_t defined_pair_count(const CorrelationMatrix& matrix) {
    std::size_t count = 0;
    for_each_pair(matrix, [&](std::size_t, std::size_t, double) { ++count; });
    return count;
}

std::vector<DiscordantPair> discordance_report(const CorrelationMatrix& matrix, double hi,
                                               double lo) {
    if (!matrix.symmetric())
        throw Error(Errc::invalid_argument, "discordance needs a symmetric matrix");
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
        throw Error(Errc::invalid_argument, "thresholds must satisfy 0 <= lo < hi <= 1");

    // True when `member` is essentially uncorrelated with everyone besides
    // `partner`, wherever a correlation is defined at all.
    const auto isolated = [&](std::size_t member, std::size_t partner) {
        for (std::size_t other = 0; other < matrix.cols(); ++other) {
            if (other == member || other == partner) continue;
            const std::optional<double> r = matrix.rho(member, other);
            if (r && std::abs(*r) > lo) return false;
        }
        return true;
    };

    std::vector<DiscordantPair> report;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t j = i + 1; j < matrix.cols(); ++j) {
            const std::optional<double> r = matrix.rho(i, j);
            if (!r || *r < hi) continue;
            if (isolated(i, j) || isolated(j, i)) report.push_back({i, j, *r});
        }
    }
    std::sort(report.begin(), report.end(), [](const DiscordantPair& a, const DiscordantPair& b) {
        if (a.rho != b.rho) return a.rho > b.rho;
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    return report;
}

void write_matrix_csv(const CorrelationMatrix& matrix, std::ostream& out) {
    for (const SeriesKey& key : matrix.col_keys()) out << ',' << to_string(key);
    out << '\n';
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out << to_string(matrix.row_keys()[i]);
        for (std::size_t j = 0; j < matrix.cols(); ++j) {
            out << ',';
            const std::optional<double> r = matrix.rho(i, j);
            if (r) out << format_fixed6(*r);
        }
        out << '\n';
    }
}

}  // namespace rttkit
