#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "signpipe/model.hpp"

namespace signpipe {

// Mean / min / max of an integer-valued measurement across a population
// (frames per sample, distinct values per label, ...).
struct GroupStats {
    double mean = 0.0;
    int64_t min = 0;
    int64_t max = 0;

    friend bool operator==(const GroupStats&, const GroupStats&) = default;
};

struct StatsReport {
    // overall
    int64_t samples = 0;
    int64_t labels = 0;
    int64_t frames = 0;
    std::array<int64_t, 7> distinct_overall{};  // indexed like kAttributeNames

    // per sample
    GroupStats frames_per_sample;
    std::array<GroupStats, 7> distinct_per_sample{};

    // per label
    GroupStats samples_per_label;
    std::array<GroupStats, 7> distinct_per_label{};
};

struct CorrelationMatrix {
    std::array<std::array<double, 7>, 7> v{};  // indexed like kAttributeNames
};

// Category key of an attribute value for distinctness and correlation:
// the text itself, or the number at the dataset's canonical 6-decimal
// precision for mouth_opening.
std::string attribute_key(const AttributeValue& value);

// Distinct-value counting rule: movement attributes (indices 4 and 5) skip
// "none" — a sample whose hand never clears the threshold has 0 distinct
// movements. Orientation keeps "none": it is a legitimate below-threshold
// class, not an absence.
bool counts_as_distinct(std::size_t attribute, const std::string& key);

// Aggregates the table statistics: overall counts, frames/distinct values
// per sample, samples/distinct values per label. Throws EmptyDataset.
StatsReport dataset_stats(std::span<const PhonoSample> samples);

// Bias-corrected Cramér's V between two categorical columns given as dense
// category ids (a[i] in [0, ra), b[i] in [0, rb)). Zero-variance columns
// (one category) give 0 by convention.
double cramers_v(std::span<const int> a, int ra, std::span<const int> b, int rb);

// Pairwise bias-corrected Cramér's V over frame-level attribute columns;
// mouth_opening is discretized into `bins` equal-frequency bins first.
// Diagonal is 1 by definition. Throws InsufficientData (< 2 frames) and
// std::invalid_argument (bins < 2).
CorrelationMatrix attribute_correlation(std::span<const PhonoSample> samples, int bins = 5);

// Emission: a structured JSON document, a long-format TSV of the same
// numbers, and a plot-ready TSV matrix. All byte-stable.
std::string emit_stats_json(const StatsReport& report);
std::string emit_stats_tsv(const StatsReport& report);
std::string emit_correlation_tsv(const CorrelationMatrix& matrix);

}  // namespace signpipe
