#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rttkit/series.hpp"
#include "rttkit/store.hpp"

namespace rttkit {

/// Default minimum pairwise overlap: one day of 5-minute slots.
inline constexpr std::size_t kDefaultMinOverlap = 288;

struct CorrelationResult {
    double rho = 0.0;         ///< in [-1, 1]
    std::size_t overlap = 0;  ///< slots where both series were present
};

/// Pearson correlation over the slots where both series are present, using
/// population (1/n) moments. The result is clamped to [-1, 1] against
/// floating-point drift. Throws Error{grid_mismatch} when the grids differ,
/// Error{insufficient_overlap} when fewer than min_overlap slots are shared,
/// and Error{zero_variance} when either side is constant on the overlap.
CorrelationResult pearson(const TimeSeries& x, const TimeSeries& y,
                          std::size_t min_overlap = kDefaultMinOverlap);

/// Series sharing a (monitor, asn, ind) coordinate form a comparison group.
struct GroupSelector {
    std::string monitor;
    std::uint32_t asn = 0;
    int ind = 0;
};

/// The store's series matching the selector, ordered by (target, link).
/// Pointers stay valid while the store is alive and unmodified. An empty
/// result is a normal outcome.
std::vector<const TimeSeries*> group_series(const SeriesStore& store, const GroupSelector& selector);

/// Pairwise correlation grid. Cells where pearson() would refuse (thin
/// overlap, zero variance) are undefined rather than errors. Square matrices
/// from one group are symmetric with unit diagonal wherever defined.
class CorrelationMatrix {
public:
    /// Builds a matrix from pre-computed cells, row-major. `rho` entries are
    /// nullopt where undefined; `overlap` holds the pairwise present count
    /// regardless. For a symmetric matrix row and column keys coincide.
    /// Throws Error{invalid_argument} on inconsistent shapes.
    CorrelationMatrix(std::vector<SeriesKey> row_keys, std::vector<SeriesKey> col_keys,
                      bool symmetric, std::vector<std::optional<double>> rho,
                      std::vector<std::size_t> overlap);

    std::size_t rows() const noexcept { return row_keys_.size(); }
    std::size_t cols() const noexcept { return col_keys_.size(); }
    bool symmetric() const noexcept { return symmetric_; }

    const std::vector<SeriesKey>& row_keys() const noexcept { return row_keys_; }
    const std::vector<SeriesKey>& col_keys() const noexcept { return col_keys_; }

    /// nullopt = undefined cell.
    std::optional<double> rho(std::size_t row, std::size_t col) const {
        return rho_[row * col_keys_.size() + col];
    }
    std::size_t overlap(std::size_t row, std::size_t col) const {
        return overlap_[row * col_keys_.size() + col];
    }

private:
    std::vector<SeriesKey> row_keys_;
    std::vector<SeriesKey> col_keys_;
    bool symmetric_ = false;
    std::vector<std::optional<double>> rho_;
    std::vector<std::size_t> overlap_;
};

/// Full pairwise matrix over a group, symmetric with diagonal exactly 1
/// where defined. Cells are independent, so `threads` only speeds things up:
/// the result is identical for any thread count (0 = hardware concurrency).
CorrelationMatrix correlation_matrix(const std::vector<const TimeSeries*>& group,
                                     std::size_t min_overlap = kDefaultMinOverlap,
                                     unsigned threads = 1);

/// Rectangular matrix between the (monitor, asn_a, ind) group (rows) and the
/// (monitor, asn_b, ind) group (columns).
CorrelationMatrix cross_asn_correlation(const SeriesStore& store, const std::string& monitor,
                                        std::uint32_t asn_a, std::uint32_t asn_b, int ind,
                                        std::size_t min_overlap = kDefaultMinOverlap,
                                        unsigned threads = 1);

/// Mean of the defined coupling cells: the strict upper triangle for a
/// symmetric matrix, every cell otherwise. nullopt when no cell is defined.
std::optional<double> mean_pairwise(const CorrelationMatrix& matrix);

/// Number of cells mean_pairwise() would average.
std::size_t defined_pair_count(const CorrelationMatrix& matrix);

/// A strongly coupled pair whose members are nearly uncorrelated with the
/// rest of the group: evidence the coupling is specific, not group-wide.
struct DiscordantPair {
    std::size_t i = 0;  ///< row index of the first series, i < j
    std::size_t j = 0;
    double rho = 0.0;
};

/// Finds pairs with rho >= hi where at least one member has |rho| <= lo
/// against every other series it is defined with. Requires a symmetric
/// matrix and 0 <= lo < hi <= 1, else Error{invalid_argument}. Sorted by
/// descending rho, then ascending (i, j).
std::vector<DiscordantPair> discordance_report(const CorrelationMatrix& matrix, double hi = 0.5,
                                               double lo = 0.2);

/// Writes the matrix as CSV: a header row of column keys (leading cell
/// empty), then one row per row key. Cells use 6 fractional digits;
/// undefined cells are empty.
void write_matrix_csv(const CorrelationMatrix& matrix, std::ostream& out);

}  // namespace rttkit
