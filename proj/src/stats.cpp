#include "signpipe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "signpipe/docio.hpp"
#include "signpipe/errors.hpp"

namespace signpipe {

std::string attribute_key(const AttributeValue& value) {
    if (value.is_numeric()) return docio::fixed6(value.number());
    return value.text();
}

bool counts_as_distinct(std::size_t attribute, const std::string& key) {
    const bool is_movement = attribute == 4 || attribute == 5;
    return !(is_movement && key == "none");
}

namespace {

GroupStats summarize(const std::vector<int64_t>& values) {
    GroupStats g;
    g.min = values.front();
    g.max = values.front();
    int64_t sum = 0;
    for (int64_t v : values) {
        g.min = std::min(g.min, v);
        g.max = std::max(g.max, v);
        sum += v;
    }
    g.mean = static_cast<double>(sum) / static_cast<double>(values.size());
    return g;
}

using DistinctSets = std::array<std::set<std::string>, 7>;

void collect_keys(const PhonoSample& sample, DistinctSets& sets) {
    for (const PhonoFrame& f : sample.frames)
        for (std::size_t a = 0; a < kAttributeNames.size(); ++a) {
            std::string key = attribute_key(attribute_by_index(f, a));
            if (counts_as_distinct(a, key)) sets[a].insert(std::move(key));
        }
}

}  // namespace

StatsReport dataset_stats(std::span<const PhonoSample> samples) {
    if (samples.empty()) throw EmptyDataset("no samples to aggregate");

    StatsReport report;
    report.samples = static_cast<int64_t>(samples.size());

    DistinctSets overall;
    std::vector<int64_t> frames_per_sample;
    std::array<std::vector<int64_t>, 7> distinct_per_sample;
    struct LabelAgg {
        int64_t samples = 0;
        DistinctSets distinct;
    };
    std::map<std::string, LabelAgg> labels;

    for (const PhonoSample& s : samples) {
        report.frames += static_cast<int64_t>(s.frames.size());
        frames_per_sample.push_back(static_cast<int64_t>(s.frames.size()));

        DistinctSets own;
        collect_keys(s, own);
        LabelAgg& agg = labels[s.meta.label];
        agg.samples += 1;
        for (std::size_t a = 0; a < 7; ++a) {
            distinct_per_sample[a].push_back(static_cast<int64_t>(own[a].size()));
            overall[a].insert(own[a].begin(), own[a].end());
            agg.distinct[a].insert(own[a].begin(), own[a].end());
        }
    }

    report.labels = static_cast<int64_t>(labels.size());
    for (std::size_t a = 0; a < 7; ++a)
        report.distinct_overall[a] = static_cast<int64_t>(overall[a].size());
    report.frames_per_sample = summarize(frames_per_sample);
    for (std::size_t a = 0; a < 7; ++a)
        report.distinct_per_sample[a] = summarize(distinct_per_sample[a]);

    std::vector<int64_t> samples_per_label;
    std::array<std::vector<int64_t>, 7> distinct_per_label;
    for (const auto& [label, agg] : labels) {
        samples_per_label.push_back(agg.samples);
        for (std::size_t a = 0; a < 7; ++a)
            distinct_per_label[a].push_back(static_cast<int64_t>(agg.distinct[a].size()));
    }
    report.samples_per_label = summarize(samples_per_label);
    for (std::size_t a = 0; a < 7; ++a)
        report.distinct_per_label[a] = summarize(distinct_per_label[a]);
    return report;
}

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

double cramers_v(std::span<const int> a, int ra, std::span<const int> b, int rb) {
    const std::size_t n = a.size();
    if (n != b.size() || n < 2) throw InsufficientData("need two aligned columns of >= 2 rows");
    if (ra < 2 || rb < 2) return 0.0;  // zero-variance convention

    std::vector<int64_t> table(static_cast<std::size_t>(ra) * rb, 0);
    std::vector<int64_t> row(ra, 0), col(rb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        table[static_cast<std::size_t>(a[i]) * rb + b[i]] += 1;
        row[a[i]] += 1;
        col[b[i]] += 1;
    }

    double chi2 = 0.0;
    const double nd = static_cast<double>(n);
    for (int i = 0; i < ra; ++i) {
        if (row[i] == 0) continue;
        for (int j = 0; j < rb; ++j) {
            if (col[j] == 0) continue;
            const double expected = static_cast<double>(row[i]) * static_cast<double>(col[j]) / nd;
            const double diff = static_cast<double>(table[static_cast<std::size_t>(i) * rb + j]) -
                                expected;
            chi2 += diff * diff / expected;
        }
    }

    // Bergsma's bias correction
    const double phi2 = chi2 / nd;
    const double correction = static_cast<double>(ra - 1) * static_cast<double>(rb - 1) / (nd - 1.0);
    const double phi2corr = std::max(0.0, phi2 - correction);
    const double r_corr = ra - static_cast<double>(ra - 1) * (ra - 1) / (nd - 1.0);
    const double c_corr = rb - static_cast<double>(rb - 1) * (rb - 1) / (nd - 1.0);
    const double denom = std::min(r_corr, c_corr) - 1.0;
    if (!(denom > 0.0)) return 0.0;
    return std::clamp(std::sqrt(phi2corr / denom), 0.0, 1.0);
}

namespace {

// Equal-frequency bin edges: values at the sorted positions (b*n)/bins.
// A value lands in the bin counting the edges at or below it.
std::vector<int> bin_numeric(const std::vector<double>& values, int bins, int& categories) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> edges;
    for (int b = 1; b < bins; ++b)
        edges.push_back(sorted[static_cast<std::size_t>(b) * n / static_cast<std::size_t>(bins)]);

    std::vector<int> raw;
    raw.reserve(n);
    for (double v : values) {
        int c = 0;
        for (double e : edges)
            if (v >= e) ++c;
        raw.push_back(c);
    }
    // densify: identical edges can leave empty bins behind
    std::map<int, int> remap;
    for (int c : raw) remap.emplace(c, 0);
    int next = 0;
    for (auto& [from, to] : remap) to = next++;
    for (int& c : raw) c = remap[c];
    categories = next;
    return raw;
}

}  // namespace

CorrelationMatrix attribute_correlation(std::span<const PhonoSample> samples, int bins) {
    if (bins < 2) throw std::invalid_argument("bins must be >= 2");
    std::size_t n = 0;
    for (const PhonoSample& s : samples) n += s.frames.size();
    if (n < 2) throw InsufficientData("attribute correlation needs at least 2 frames");

    // build dense category columns; maps keep ids deterministic
    std::array<std::vector<int>, 7> columns;
    std::array<int, 7> categories{};
    for (std::size_t a = 0; a < 7; ++a) columns[a].reserve(n);

    std::array<std::map<std::string, int>, 7> ids;
    std::vector<double> mouth;
    mouth.reserve(n);
    for (const PhonoSample& s : samples)
        for (const PhonoFrame& f : s.frames)
            for (std::size_t a = 0; a < 7; ++a) {
                const AttributeValue& v = attribute_by_index(f, a);
                if (a == 6) {
                    mouth.push_back(v.number());
                    continue;
                }
                auto [it, inserted] =
                    ids[a].emplace(attribute_key(v), static_cast<int>(ids[a].size()));
                columns[a].push_back(it->second);
            }
    // first-seen ids are insertion-ordered; remap to sorted key order so the
    // matrix is invariant under sample permutation
    for (std::size_t a = 0; a < 6; ++a) {
        std::map<std::string, int> sorted_ids;
        int next = 0;
        for (auto& [key, id] : ids[a]) sorted_ids[key] = next++;  // std::map iterates sorted
        std::vector<int> remap(ids[a].size());
        for (auto& [key, id] : ids[a]) remap[id] = sorted_ids[key];
        for (int& c : columns[a]) c = remap[c];
        categories[a] = static_cast<int>(ids[a].size());
    }
    columns[6] = bin_numeric(mouth, bins, categories[6]);

    CorrelationMatrix m;
    for (std::size_t i = 0; i < 7; ++i) {
        m.v[i][i] = 1.0;
        for (std::size_t j = i + 1; j < 7; ++j) {
            const double v = cramers_v(columns[i], categories[i], columns[j], categories[j]);
            m.v[i][j] = v;
            m.v[j][i] = v;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

void emit_group_json(std::string& out, const GroupStats& g) {
    out += "{\"mean\": ";
    docio::append_fixed6(out, g.mean);
    out += ", \"min\": ";
    docio::append_int(out, g.min);
    out += ", \"max\": ";
    docio::append_int(out, g.max);
    out += '}';
}

void emit_distinct_block(std::string& out, const std::array<GroupStats, 7>& stats) {
    out += "\"distinct_values\": {";
    for (std::size_t a = 0; a < 7; ++a) {
        out += a ? ",\n      \"" : "\n      \"";
        out += kAttributeNames[a];
        out += "\": ";
        emit_group_json(out, stats[a]);
    }
    out += "\n    }";
}

}  // namespace

std::string emit_stats_json(const StatsReport& report) {
    std::string out;
    out.reserve(2048);
    out += "{\n  \"overall\": {\n    \"samples\": ";
    docio::append_int(out, report.samples);
    out += ",\n    \"labels\": ";
    docio::append_int(out, report.labels);
    out += ",\n    \"frames\": ";
    docio::append_int(out, report.frames);
    out += ",\n    \"distinct_values\": {";
    for (std::size_t a = 0; a < 7; ++a) {
        out += a ? ", \"" : "\"";
        out += kAttributeNames[a];
        out += "\": ";
        docio::append_int(out, report.distinct_overall[a]);
    }
    out += "}\n  },\n  \"per_sample\": {\n    \"frames\": ";
    emit_group_json(out, report.frames_per_sample);
    out += ",\n    ";
    emit_distinct_block(out, report.distinct_per_sample);
    out += "\n  },\n  \"per_label\": {\n    \"samples\": ";
    emit_group_json(out, report.samples_per_label);
    out += ",\n    ";
    emit_distinct_block(out, report.distinct_per_label);
    out += "\n  }\n}\n";
    return out;
}

namespace {

void tsv_row(std::string& out, std::string_view section, std::string_view metric,
             std::string_view statistic, const std::string& value) {
    out += section;
    out += '\t';
    out += metric;
    out += '\t';
    out += statistic;
    out += '\t';
    out += value;
    out += '\n';
}

std::string int_str(int64_t v) {
    std::string s;
    docio::append_int(s, v);
    return s;
}

void tsv_group(std::string& out, std::string_view section, std::string_view metric,
               const GroupStats& g, bool distinct) {
    tsv_row(out, section, metric, distinct ? "distinct_mean" : "mean", docio::fixed6(g.mean));
    tsv_row(out, section, metric, distinct ? "distinct_min" : "min", int_str(g.min));
    tsv_row(out, section, metric, distinct ? "distinct_max" : "max", int_str(g.max));
}

}  // namespace

std::string emit_stats_tsv(const StatsReport& report) {
    std::string out;
    out.reserve(2048);
    out += "section\tmetric\tstatistic\tvalue\n";
    tsv_row(out, "overall", "samples", "count", int_str(report.samples));
    tsv_row(out, "overall", "labels", "count", int_str(report.labels));
    tsv_row(out, "overall", "frames", "count", int_str(report.frames));
    for (std::size_t a = 0; a < 7; ++a)
        tsv_row(out, "overall", kAttributeNames[a], "distinct",
                int_str(report.distinct_overall[a]));
    tsv_group(out, "per_sample", "frames", report.frames_per_sample, false);
    for (std::size_t a = 0; a < 7; ++a)
        tsv_group(out, "per_sample", kAttributeNames[a], report.distinct_per_sample[a], true);
    tsv_group(out, "per_label", "samples", report.samples_per_label, false);
    for (std::size_t a = 0; a < 7; ++a)
        tsv_group(out, "per_label", kAttributeNames[a], report.distinct_per_label[a], true);
    return out;
}

std::string emit_correlation_tsv(const CorrelationMatrix& matrix) {
    std::string out;
    out.reserve(1024);
    out += "attribute";
    for (std::string_view name : kAttributeNames) {
        out += '\t';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < 7; ++i) {
        out += kAttributeNames[i];
        for (std::size_t j = 0; j < 7; ++j) {
            out += '\t';
            docio::append_fixed6(out, matrix.v[i][j]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace signpipe
