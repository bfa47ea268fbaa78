#include "dwellscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <boost/math/distributions/students_t.hpp>

#include "dwellscope/error.hpp"
#include "dwellscope/timeutil.hpp"

namespace dwellscope {

namespace {

/// Mid-ranks (1-based, ties averaged) via sort.
std::vector<double> midranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson_centered(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw Error(ErrorCode::degenerate_input, "constant input has no rank correlation");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

SpearmanResult spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(ErrorCode::length_mismatch, "x has " + std::to_string(x.size()) +
                                                    " samples, y has " + std::to_string(y.size()));
    if (x.size() < 2)
        throw Error(ErrorCode::degenerate_input, "need at least 2 samples");

    const auto rx = midranks(x);
    const auto ry = midranks(y);
    SpearmanResult r;
    r.n = x.size();
    r.rho = pearson_centered(rx, ry);
    // clamp rounding spill before the t transform
    r.rho = std::min(1.0, std::max(-1.0, r.rho));

    if (r.n == 2) {
        r.p_value = 1.0; // zero degrees of freedom
        return r;
    }
    const double df = static_cast<double>(r.n - 2);
    const double denom = 1.0 - r.rho * r.rho;
    if (denom <= 0) {
        r.p_value = 0.0;
        return r;
    }
    const double t = r.rho * std::sqrt(df / denom);
    const boost::math::students_t dist(df);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    return r;
}

namespace {

/// Median of sorted[lo, hi).
double median_of_sorted(std::span<const double> sorted, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    const std::size_t mid = lo + n / 2;
    return n % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
}

} // namespace

BoxplotSummary boxplot_summary(std::vector<double> values) {
    if (values.empty())
        throw Error(ErrorCode::empty_input, "boxplot needs at least one value");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    BoxplotSummary s;
    s.median = median_of_sorted(values, 0, n);
    // halves include the middle element when n is odd
    const std::size_t half = n / 2 + (n % 2);
    s.q1 = median_of_sorted(values, 0, half);
    s.q3 = median_of_sorted(values, n - half, n);

    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.min = s.max = s.median;
    bool any_inlier = false;
    for (const double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
        } else {
            if (!any_inlier) {
                s.min = s.max = v;
                any_inlier = true;
            }
            s.min = std::min(s.min, v);
            s.max = std::max(s.max, v);
        }
    }
    return s;
}

SurvivalCurve survival_curve(std::vector<Timestamp> durations, Timestamp step) {
    if (durations.empty())
        throw Error(ErrorCode::empty_input, "survival curve needs at least one duration");
    if (step <= 0)
        throw Error(ErrorCode::config_error, "step must be positive");
    for (const auto d : durations)
        if (d < 0) throw Error(ErrorCode::config_error, "durations must be non-negative");

    std::sort(durations.begin(), durations.end());
    const auto n = static_cast<double>(durations.size());
    const Timestamp max_d = durations.back();
    // last grid point is the first multiple of step where everyone is gone
    const Timestamp t_max = ((max_d + step - 1) / step) * step;

    SurvivalCurve c;
    c.median_exit = -1;
    std::size_t gone = 0; // durations <= t, i.e. already exited at instant t
    for (Timestamp t = 0;; t += step) {
        while (gone < durations.size() && durations[gone] <= t) ++gone;
        const double remaining = (n - static_cast<double>(gone)) / n;
        c.times.push_back(t);
        c.fraction_remaining.push_back(remaining);
        if (c.median_exit < 0 && remaining < 0.5) c.median_exit = t;
        if (t >= t_max) break;
    }
    if (c.median_exit < 0) c.median_exit = t_max; // all durations equal, boundary case
    return c;
}

std::vector<HourlyStay> stay_by_entry_hour(std::span<const VisitStay> visits, DayGroup group,
                                           std::int32_t utc_offset_s) {
    std::array<std::vector<double>, 24> buckets;
    for (const auto& v : visits) {
        if (!in_day_group(v.entry, utc_offset_s, group)) continue;
        buckets[static_cast<std::size_t>(local_hour(v.entry, utc_offset_s))].push_back(
            static_cast<double>(v.stay));
    }
    std::vector<HourlyStay> out(24);
    for (int h = 0; h < 24; ++h) {
        auto& b = buckets[static_cast<std::size_t>(h)];
        out[h].hour = h;
        out[h].n = b.size();
        if (b.empty()) continue;
        std::sort(b.begin(), b.end());
        out[h].mean_stay = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
        out[h].median_stay = median_of_sorted(b, 0, b.size());
    }
    return out;
}

std::vector<std::uint32_t> occupancy_counts_serial(std::span<const TimeSpan> intervals,
                                                   Timestamp t0, Timestamp width,
                                                   std::size_t n_bins) {
    std::vector<std::uint32_t> counts(n_bins, 0);
    for (std::size_t b = 0; b < n_bins; ++b) {
        const Timestamp at = t0 + static_cast<Timestamp>(b) * width;
        std::uint32_t c = 0;
        for (const auto& iv : intervals)
            if (iv.in <= at && at <= iv.out) ++c;
        counts[b] = c;
    }
    return counts;
}

std::vector<std::uint32_t> occupancy_counts(std::span<const TimeSpan> intervals, Timestamp t0,
                                            Timestamp width, std::size_t n_bins) {
    // +1 at the first sampled bin start >= in, -1 after the last one <= out
    const auto n = static_cast<std::int64_t>(n_bins);
    int n_threads = 1;
#ifdef _OPENMP
    n_threads = omp_get_max_threads();
#endif
    std::vector<std::vector<std::int32_t>> partial(static_cast<std::size_t>(n_threads),
                                                   std::vector<std::int32_t>(n_bins + 1, 0));
    const auto n_iv = static_cast<std::int64_t>(intervals.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n_iv; ++i) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        auto& diff = partial[static_cast<std::size_t>(tid)];
        const auto& iv = intervals[i];
        // ceil для in, floor for out, both relative to the grid
        std::int64_t first = floor_div(iv.in - t0 + width - 1, width);
        std::int64_t last = floor_div(iv.out - t0, width);
        if (first < 0) first = 0;
        if (last >= n) last = n - 1;
        if (first > last) continue;
        ++diff[static_cast<std::size_t>(first)];
        --diff[static_cast<std::size_t>(last + 1)];
    }
    std::vector<std::uint32_t> counts(n_bins, 0);
    std::int64_t running = 0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        std::int64_t delta = 0;
        for (const auto& diff : partial) delta += diff[b];
        running += delta;
        counts[b] = static_cast<std::uint32_t>(running);
    }
    return counts;
}

OccupancySeries occupancy_series(std::span<const TimeSpan> intervals, Timestamp bin_width,
                                 const NodeId& node) {
    if (bin_width <= 0)
        throw Error(ErrorCode::config_error, "bin_width must be positive");
    OccupancySeries s;
    s.node = node;
    s.bin_width = bin_width;
    if (intervals.empty()) return s;

    Timestamp min_in = intervals[0].in;
    Timestamp max_out = intervals[0].out;
    for (const auto& iv : intervals) {
        min_in = std::min(min_in, iv.in);
        max_out = std::max(max_out, iv.out);
    }
    s.start = floor_div(min_in, bin_width) * bin_width;
    const auto n_bins = static_cast<std::size_t>(floor_div(max_out - s.start, bin_width) + 1);
    s.counts = occupancy_counts(intervals, s.start, bin_width, n_bins);

    const std::uint32_t peak = *std::max_element(s.counts.begin(), s.counts.end());
    s.normalized.resize(n_bins, 0.0);
    if (peak > 0)
        for (std::size_t b = 0; b < n_bins; ++b)
            s.normalized[b] = static_cast<double>(s.counts[b]) / static_cast<double>(peak);
    return s;
}

DwellOccupancyCurve dwell_occupancy_curve(std::span<const TimeSpan> intervals,
                                          const OccupancySeries& occupancy, std::size_t n_bins) {
    if (n_bins < 5)
        throw Error(ErrorCode::config_error, "need at least 5 occupancy bins");
    DwellOccupancyCurve c;
    c.occupancy_bins.resize(n_bins);
    c.mean_dwell.assign(n_bins, 0.0);
    c.sample_counts.assign(n_bins, 0);
    for (std::size_t k = 0; k < n_bins; ++k)
        c.occupancy_bins[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n_bins);

    if (occupancy.counts.empty()) return c;
    std::vector<double> sums(n_bins, 0.0);
    for (const auto& iv : intervals) {
        const std::size_t time_bin = occupancy.bin_of(iv.in);
        if (time_bin >= occupancy.normalized.size()) continue;
        const double occ = occupancy.normalized[time_bin];
        auto k = static_cast<std::size_t>(occ * static_cast<double>(n_bins));
        if (k >= n_bins) k = n_bins - 1; // occ == 1 lands in the top bin
        sums[k] += static_cast<double>(iv.out - iv.in);
        ++c.sample_counts[k];
    }
    for (std::size_t k = 0; k < n_bins; ++k)
        if (c.sample_counts[k] > 0) c.mean_dwell[k] = sums[k] / static_cast<double>(c.sample_counts[k]);
    return c;
}

ThresholdPoints extract_thresholds(const DwellOccupancyCurve& curve, const ThresholdParams& params) {
    if (params.smooth_window < 1)
        throw Error(ErrorCode::config_error, "smooth_window must be >= 1");
    if (params.plateau_fraction <= 0 || params.plateau_fraction >= 1)
        throw Error(ErrorCode::config_error, "plateau_fraction must lie in (0, 1)");

    // compress to the nonempty bins
    std::vector<std::size_t> bins;
    for (std::size_t k = 0; k < curve.sample_counts.size(); ++k)
        if (curve.sample_counts[k] > 0) bins.push_back(k);
    const std::size_t m = bins.size();
    if (m < 5)
        throw Error(ErrorCode::insufficient_data,
                    "only " + std::to_string(m) + " nonempty occupancy bins");

    std::vector<double> raw(m);
    for (std::size_t i = 0; i < m; ++i) raw[i] = curve.mean_dwell[bins[i]];
    const auto [raw_min, raw_max] = std::minmax_element(raw.begin(), raw.end());
    if (*raw_max - *raw_min < 1.0)
        throw Error(ErrorCode::flat_curve, "dwell range below 1 s across occupancy bins");

    // centered moving average, window clipped at the edges
    const std::size_t half = static_cast<std::size_t>(params.smooth_window - 1) / 2;
    std::vector<double> smooth(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(m - 1, i + half);
        double sum = 0;
        for (std::size_t k = lo; k <= hi; ++k) sum += raw[k];
        smooth[i] = sum / static_cast<double>(hi - lo + 1);
    }

    const std::size_t iw = 0;
    std::size_t iy = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (smooth[i] > smooth[iy]) iy = i;

    std::size_t ix = iy;
    const double plateau_level = params.plateau_fraction * smooth[iy];
    for (std::size_t i = 0; i <= iy; ++i) {
        if (smooth[i] >= plateau_level) {
            ix = i;
            break;
        }
    }

    const auto [s_min, s_max] = std::minmax_element(smooth.begin(), smooth.end());
    const double tol = params.decline_tolerance * (*s_max - *s_min);
    std::size_t iz = m - 1;
    while (iz > 0 && smooth[iz - 1] - smooth[iz] > tol) --iz;

    const auto point_at = [&](std::size_t i) {
        return ThresholdPoint{curve.occupancy_bins[bins[i]], curve.mean_dwell[bins[i]]};
    };
    ThresholdPoints p;
    p.w = point_at(iw);
    p.x = point_at(ix);
    p.y = point_at(iy);
    p.z = point_at(iz);
    return p;
}

} // namespace dwellscope
