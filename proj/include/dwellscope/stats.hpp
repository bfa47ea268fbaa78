#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dwellscope/types.hpp"

namespace dwellscope {

struct SpearmanResult {
    double rho = 0;
    double p_value = 1;
    std::size_t n = 0;
};

/// Spearman's rank correlation: Pearson correlation of mid-ranks (ties get
/// average ranks). p-value from the large-sample t approximation with n-2
/// degrees of freedom. Throws length_mismatch / degenerate_input.
SpearmanResult spearman_rho(std::span<const double> x, std::span<const double> y);

struct BoxplotSummary {
    double min = 0; // whisker ends (non-outlier extremes)
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;
    std::vector<double> outliers; // beyond 1.5*IQR from the quartiles
};

/// Quartiles by the median-of-halves convention (odd n keeps the middle
/// element in both halves). Throws empty_input.
BoxplotSummary boxplot_summary(std::vector<double> values);

struct SurvivalCurve {
    std::vector<Timestamp> times; // 0, step, 2*step, ...
    std::vector<double> fraction_remaining;
    Timestamp median_exit = 0; // smallest grid t with fraction < 0.5
};

/// Fraction of durations still running at each grid time. A duration d is
/// present on [0, d) and gone from t = d onward, so the step-sum of the
/// curve times `step` reproduces the mean duration exactly at step = 1.
/// Throws empty_input / config_error.
SurvivalCurve survival_curve(std::vector<Timestamp> durations, Timestamp step);

struct HourlyStay {
    int hour = 0;
    std::size_t n = 0;
    double mean_stay = 0;   // defined only when n > 0
    double median_stay = 0; // defined only when n > 0
};

struct VisitStay {
    Timestamp entry = 0;
    Timestamp stay = 0;
};

/// Stays bucketed by local entry hour, restricted to days in `group`.
/// All 24 hours are reported; empty hours carry n = 0.
std::vector<HourlyStay> stay_by_entry_hour(std::span<const VisitStay> visits, DayGroup group,
                                           std::int32_t utc_offset_s = 0);

struct TimeSpan {
    Timestamp in = 0;
    Timestamp out = 0;
};

struct OccupancySeries {
    NodeId node;
    Timestamp bin_width = 60;
    Timestamp start = 0; // first bin start, aligned to the bin grid
    std::vector<std::uint32_t> counts;
    std::vector<double> normalized; // counts / max(counts)

    std::size_t bin_of(Timestamp t) const {
        return static_cast<std::size_t>((t - start) / bin_width);
    }
};

/// Concurrent-presence counts sampled at bin starts: counts[b] = number of
/// intervals with check_in <= bin_start <= check_out, normalized by the
/// series maximum.
OccupancySeries occupancy_series(std::span<const TimeSpan> intervals, Timestamp bin_width,
                                 const NodeId& node = {});

/// Kernel behind occupancy_series: counts over an explicit grid
/// [t0, t0 + width, ...). Difference-array sweep, parallel over intervals.
std::vector<std::uint32_t> occupancy_counts(std::span<const TimeSpan> intervals, Timestamp t0,
                                            Timestamp width, std::size_t n_bins);
/// Naive per-bin coverage scan; reference for tests and the benchmark.
std::vector<std::uint32_t> occupancy_counts_serial(std::span<const TimeSpan> intervals,
                                                   Timestamp t0, Timestamp width,
                                                   std::size_t n_bins);

struct ThresholdPoint {
    double occupancy = 0;
    double dwell = 0;
};

struct ThresholdPoints {
    ThresholdPoint w, x, y, z; // occupancy-ordered: w <= x <= y <= z
};

struct DwellOccupancyCurve {
    std::vector<double> occupancy_bins; // bin centers over [0, 1]
    std::vector<double> mean_dwell;     // defined only where sample_counts > 0
    std::vector<std::uint64_t> sample_counts;
    std::optional<ThresholdPoints> points;
};

/// Pairs every interval with the normalized occupancy at its check-in bin
/// (the crowd the visitor met on arrival) and averages dwell per
/// equal-width occupancy bin. Throws config_error on n_bins < 5.
DwellOccupancyCurve dwell_occupancy_curve(std::span<const TimeSpan> intervals,
                                          const OccupancySeries& occupancy, std::size_t n_bins);

struct ThresholdParams {
    int smooth_window = 3;          // centered moving average, in bins
    double plateau_fraction = 0.85; // X = first bin reaching this share of the peak
    // A suffix step counts as decreasing only if it drops by more than this
    // fraction of the smoothed curve's range; 0 demands strict decrease,
    // which on a flat plateau lets sampling noise drag Z arbitrarily left.
    double decline_tolerance = 0.02;
};

/// Characteristic points of the dwell-vs-occupancy curve, found on the
/// moving-average-smoothed nonempty bins:
///   W = lowest nonempty bin, Y = global dwell maximum,
///   X = lowest bin at or below Y with dwell >= plateau_fraction * dwell(Y),
///   Z = start of the longest decreasing suffix (decline onset).
/// Reported dwell values are the unsmoothed bin means.
/// Throws insufficient_data (< 5 nonempty bins) / flat_curve (range < 1 s).
ThresholdPoints extract_thresholds(const DwellOccupancyCurve& curve,
                                   const ThresholdParams& params = {});

} // namespace dwellscope
