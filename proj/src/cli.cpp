#include "signpipe/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "signpipe/docio.hpp"
#include "signpipe/errors.hpp"
#include "signpipe/ingest.hpp"
#include "signpipe/phono.hpp"
#include "signpipe/stats.hpp"
#include "signpipe/synth.hpp"

namespace signpipe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

std::string sample_id(std::size_t ordinal) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%05zu", ordinal);
    return buf;
}

// Order-independent parallel map: fn(i) must only touch its own slot.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    unsigned workers = jobs != 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (std::thread& t : pool) t.join();
}

void append_meta_fields(std::string& s, const SampleMeta& m) {
    s += "\"label\": ";
    docio::append_json_string(s, m.label);
    s += ", \"session\": ";
    docio::append_json_string(s, m.session);
    s += ", \"scene\": ";
    docio::append_json_string(s, m.scene);
    s += ", \"consultant\": ";
    docio::append_json_string(s, m.consultant);
    s += ", \"frame_start\": ";
    docio::append_int(s, m.frame_start);
    s += ", \"frame_end\": ";
    docio::append_int(s, m.frame_end);
}

struct SkipEntry {
    std::string id;
    std::string label;
    std::string reason;
    std::string detail;
};

std::string emit_skipped_document(std::size_t annotation_rows_skipped,
                                  const std::vector<std::string>& warnings,
                                  const std::vector<SkipEntry>& skipped) {
    std::string s = "{\n  \"annotation_rows_skipped\": ";
    docio::append_int(s, static_cast<int64_t>(annotation_rows_skipped));
    s += ",\n  \"annotation_warnings\": [";
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        s += i == 0 ? "\n    " : ",\n    ";
        docio::append_json_string(s, warnings[i]);
    }
    s += warnings.empty() ? "]" : "\n  ]";
    s += ",\n  \"skipped\": [";
    for (std::size_t i = 0; i < skipped.size(); ++i) {
        s += i == 0 ? "\n    " : ",\n    ";
        s += "{\"id\": ";
        docio::append_json_string(s, skipped[i].id);
        s += ", \"label\": ";
        docio::append_json_string(s, skipped[i].label);
        s += ", \"reason\": ";
        docio::append_json_string(s, skipped[i].reason);
        s += ", \"detail\": ";
        docio::append_json_string(s, skipped[i].detail);
        s += "}";
    }
    s += skipped.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return s;
}

// The run summary deliberately carries no paths, timings or job counts, so
// repeated runs over the same data are byte-identical.
class Summary {
public:
    explicit Summary(std::string_view command) {
        text_ = "{\"command\": ";
        docio::append_json_string(text_, std::string(command));
    }
    Summary& field(std::string_view key, int64_t value) {
        text_ += ", \"";
        text_ += key;
        text_ += "\": ";
        docio::append_int(text_, value);
        return *this;
    }
    std::string finish() const { return text_ + "}\n"; }

private:
    std::string text_;
};

void deliver_summary(const std::string& summary, const fs::path* out_dir, std::ostream& out) {
    if (out_dir != nullptr) docio::write_file(*out_dir / "run_summary.json", summary);
    out << summary;
}

std::vector<fs::path> sorted_json_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

// Dataset layout helper: builders put documents under <dir>/samples.
fs::path samples_dir(const fs::path& in_dir) {
    const fs::path sub = in_dir / "samples";
    return fs::is_directory(sub) ? sub : in_dir;
}

// ---------------------------------------------------------------------------
// Usage validation
// ---------------------------------------------------------------------------

void require_dir(const fs::path& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string(what) + " is required");
    if (!fs::is_directory(p))
        throw std::invalid_argument(std::string(what) + " is not a directory: " + p.string());
}

void require_file(const fs::path& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string(what) + " is required");
    if (!fs::is_regular_file(p))
        throw std::invalid_argument(std::string(what) + " is not a file: " + p.string());
}

void require_out(const fs::path& p) {
    if (p.empty()) throw std::invalid_argument("--out is required");
    fs::create_directories(p);
}

FusionConfig fusion_config(const RunConfig& cfg) {
    FusionConfig fc;
    fc.z_scale = cfg.z_scale;
    fc.side_camera_side = cfg.side_camera;
    fc.validate();  // throws std::invalid_argument
    return fc;
}

void validate_usage(const RunConfig& cfg) {
    if (cfg.source_fps < 1 || cfg.target_fps < 1)
        throw std::invalid_argument("fps values must be >= 1");
    if (cfg.source_fps % cfg.target_fps != 0)
        throw std::invalid_argument("source fps must be an integer multiple of target fps");
    if (!std::isfinite(cfg.threshold_k) || cfg.threshold_k <= 0.0)
        throw std::invalid_argument("threshold-k must be positive");
    switch (cfg.command) {
        case Command::build_3d:
            require_dir(cfg.front_dir, "--front");
            require_dir(cfg.side_dir, "--side");
            require_file(cfg.annotations, "--annotations");
            require_out(cfg.out_dir);
            fusion_config(cfg);
            break;
        case Command::build_phono:
            require_dir(cfg.in_dir, "--in");
            require_file(cfg.annotations, "--annotations");
            require_out(cfg.out_dir);
            break;
        case Command::stats:
            require_dir(cfg.in_dir, "--in");
            require_out(cfg.out_dir);
            break;
        case Command::validate:
            require_dir(cfg.in_dir, "--in");
            break;
        case Command::synth:
            if (cfg.synth_samples == 0)
                throw std::invalid_argument("--samples must be >= 1");
            if (cfg.synth_max_frames == 0)
                throw std::invalid_argument("--max-frames must be >= 1");
            require_out(cfg.out_dir);
            break;
    }
}

// ---------------------------------------------------------------------------
// build-3d
// ---------------------------------------------------------------------------

struct BuiltSlot {
    bool ok = false;
    std::string document;
    std::size_t frames = 0;
    std::vector<std::size_t> median_fallback;
    std::string reason;  // error kind when !ok
    std::string detail;
};

struct VideoPair {
    std::vector<ViewFrame2D> front;
    std::vector<ViewFrame2D> side;
};

// Loads each referenced video once and drops it as soon as the last sample
// using it is done, so memory stays bounded by the live working set.
class VideoCache {
public:
    VideoCache(fs::path front_dir, fs::path side_dir, std::span<const AnnotationRecord> records)
        : front_dir_(std::move(front_dir)), side_dir_(std::move(side_dir)) {
        for (const AnnotationRecord& r : records) ++remaining_[video_name(r.meta)];
    }

    static std::string video_name(const SampleMeta& m) { return m.session + "__" + m.scene; }

    std::shared_ptr<const VideoPair> get(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(name);
        if (it != cache_.end()) return it->second;
        auto pair = std::make_shared<VideoPair>();
        pair->front = load_view(locate(front_dir_, name), View::frontal);
        pair->side = load_view(locate(side_dir_, name), View::side);
        cache_.emplace(name, pair);
        return pair;
    }

    void release(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        if (--remaining_[name] == 0) cache_.erase(name);
    }

private:
    static fs::path locate(const fs::path& dir, const std::string& name) {
        const fs::path file = dir / (name + ".json");
        if (fs::exists(file)) return file;
        const fs::path subdir = dir / name;
        if (fs::is_directory(subdir)) return subdir;
        throw MissingView("no pose document for video '" + name + "' under " + dir.string());
    }

    fs::path front_dir_, side_dir_;
    std::mutex mu_;
    std::map<std::string, std::size_t> remaining_;
    std::unordered_map<std::string, std::shared_ptr<const VideoPair>> cache_;
};

int cmd_build_3d(const RunConfig& cfg, std::ostream& out) {
    const FusionConfig fc = fusion_config(cfg);
    const AnnotationLoad ann = load_annotations(cfg.annotations);
    const std::size_t n = ann.records.size();
    fs::create_directories(cfg.out_dir / "samples");

    VideoCache cache(cfg.front_dir, cfg.side_dir, ann.records);
    std::vector<BuiltSlot> slots(n);
    parallel_for(n, cfg.jobs, [&](std::size_t i) {
        const AnnotationRecord& rec = ann.records[i];
        BuiltSlot& slot = slots[i];
        const std::string video = VideoCache::video_name(rec.meta);
        try {
            std::shared_ptr<const VideoPair> views = cache.get(video);
            const std::vector<FramePair> pairs =
                segment_and_pair(views->front, views->side, rec, cfg.source_fps, cfg.target_fps);
            NormalizedSample norm = normalize_sample(fuse_sample(pairs, fc), fc);
            Sample3D sample{rec.meta, std::move(norm.frames)};
            slot.document = emit_sample3d_document(sample);
            slot.frames = sample.frames.size();
            slot.median_fallback = std::move(norm.median_fallback);
            slot.ok = true;
        } catch (const PipelineError& e) {
            slot.reason = e.kind();
            slot.detail = e.what();
        }
        cache.release(video);
    });

    std::string index = "{\n  \"samples\": [";
    std::vector<SkipEntry> skipped;
    int64_t written = 0, frames_written = 0, fallback_frames = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = sample_id(i);
        const BuiltSlot& slot = slots[i];
        if (!slot.ok) {
            skipped.push_back({id, ann.records[i].meta.label, slot.reason, slot.detail});
            continue;
        }
        docio::write_file(cfg.out_dir / "samples" / (id + ".json"), slot.document);
        index += written == 0 ? "\n    " : ",\n    ";
        index += "{\"id\": ";
        docio::append_json_string(index, id);
        index += ", ";
        append_meta_fields(index, ann.records[i].meta);
        index += ", \"frames\": ";
        docio::append_int(index, static_cast<int64_t>(slot.frames));
        index += ", \"median_fallback\": [";
        for (std::size_t j = 0; j < slot.median_fallback.size(); ++j) {
            if (j > 0) index += ", ";
            docio::append_int(index, static_cast<int64_t>(slot.median_fallback[j]));
        }
        index += "]}";
        ++written;
        frames_written += static_cast<int64_t>(slot.frames);
        fallback_frames += static_cast<int64_t>(slot.median_fallback.size());
    }
    index += written == 0 ? "]\n}\n" : "\n  ]\n}\n";
    docio::write_file(cfg.out_dir / "index.json", index);
    docio::write_file(cfg.out_dir / "skipped.json",
                      emit_skipped_document(ann.skipped, ann.warnings, skipped));

    const std::string summary = Summary("build-3d")
                                    .field("samples_written", written)
                                    .field("samples_skipped", static_cast<int64_t>(skipped.size()))
                                    .field("annotation_rows_skipped",
                                           static_cast<int64_t>(ann.skipped))
                                    .field("frames_written", frames_written)
                                    .field("median_fallback_frames", fallback_frames)
                                    .finish();
    deliver_summary(summary, &cfg.out_dir, out);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// build-phono
// ---------------------------------------------------------------------------

struct IndexEntry {
    std::string id;
    std::set<int> median_fallback;
};

std::vector<IndexEntry> read_index(const fs::path& dir) {
    const fs::path file = dir / "index.json";
    if (!fs::is_regular_file(file))
        throw MalformedDocument("missing index.json under " + dir.string());
    json doc;
    try {
        doc = json::parse(docio::read_file(file));
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("index.json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array())
        throw MalformedDocument("index.json: expected a top-level \"samples\" array");
    std::vector<IndexEntry> entries;
    for (const json& row : doc["samples"]) {
        if (!row.is_object() || !row.contains("id") || !row["id"].is_string())
            throw MalformedDocument("index.json: sample entries need a string \"id\"");
        IndexEntry e;
        e.id = row["id"].get<std::string>();
        if (row.contains("median_fallback"))
            for (const json& f : row["median_fallback"]) e.median_fallback.insert(f.get<int>());
        entries.push_back(std::move(e));
    }
    return entries;
}

int cmd_build_phono(const RunConfig& cfg, std::ostream& out) {
    PhonoConfig pc;
    pc.threshold_k = cfg.threshold_k;
    pc.validate();
    const AnnotationLoad ann = load_annotations(cfg.annotations);
    const std::vector<IndexEntry> index = read_index(cfg.in_dir);
    const std::size_t n = index.size();
    fs::create_directories(cfg.out_dir / "samples");

    struct PhonoSlot {
        bool ok = false;
        std::string document;
        SampleMeta meta;
        std::size_t frames = 0;
        std::string reason, detail;
    };
    std::vector<PhonoSlot> slots(n);
    parallel_for(n, cfg.jobs, [&](std::size_t i) {
        const std::string& id = index[i].id;
        PhonoSlot& slot = slots[i];
        try {
            std::size_t ordinal = 0;
            try {
                ordinal = std::stoull(id.substr(1));
            } catch (const std::exception&) {
                throw InvalidAnnotation("sample id '" + id + "' has no ordinal");
            }
            if (id.empty() || id[0] != 's' || ordinal >= ann.records.size())
                throw InvalidAnnotation("sample id '" + id + "' has no annotation row");
            const AnnotationRecord& rec = ann.records[ordinal];
            slot.meta.label = rec.meta.label;  // for the skip report
            const Sample3D sample = parse_sample3d_document(
                docio::read_file(cfg.in_dir / "samples" / (id + ".json")));
            const PhonoSample phono = extract_phono(sample, rec, pc);
            slot.document = emit_phono_document(phono);
            slot.meta = phono.meta;
            slot.frames = phono.frames.size();
            slot.ok = true;
        } catch (const PipelineError& e) {
            slot.reason = e.kind();
            slot.detail = e.what();
        }
    });

    std::string out_index = "{\n  \"samples\": [";
    std::vector<SkipEntry> skipped;
    int64_t written = 0, frames_written = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const PhonoSlot& slot = slots[i];
        if (!slot.ok) {
            skipped.push_back({index[i].id, slot.meta.label, slot.reason, slot.detail});
            continue;
        }
        docio::write_file(cfg.out_dir / "samples" / (index[i].id + ".json"), slot.document);
        out_index += written == 0 ? "\n    " : ",\n    ";
        out_index += "{\"id\": ";
        docio::append_json_string(out_index, index[i].id);
        out_index += ", ";
        append_meta_fields(out_index, slot.meta);
        out_index += ", \"frames\": ";
        docio::append_int(out_index, static_cast<int64_t>(slot.frames));
        out_index += "}";
        ++written;
        frames_written += static_cast<int64_t>(slot.frames);
    }
    out_index += written == 0 ? "]\n}\n" : "\n  ]\n}\n";
    docio::write_file(cfg.out_dir / "index.json", out_index);
    docio::write_file(cfg.out_dir / "skipped.json", emit_skipped_document(0, {}, skipped));

    const std::string summary = Summary("build-phono")
                                    .field("samples_written", written)
                                    .field("samples_skipped", static_cast<int64_t>(skipped.size()))
                                    .field("frames_written", frames_written)
                                    .finish();
    deliver_summary(summary, &cfg.out_dir, out);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

int cmd_stats(const RunConfig& cfg, std::ostream& out) {
    std::vector<PhonoSample> samples;
    for (const fs::path& f : sorted_json_files(samples_dir(cfg.in_dir)))
        samples.push_back(parse_phono_document(docio::read_file(f)));
    const StatsReport report = dataset_stats(samples);
    const CorrelationMatrix corr = attribute_correlation(samples);
    docio::write_file(cfg.out_dir / "report.json", emit_stats_json(report));
    docio::write_file(cfg.out_dir / "report.tsv", emit_stats_tsv(report));
    docio::write_file(cfg.out_dir / "correlation.tsv", emit_correlation_tsv(corr));

    const std::string summary = Summary("stats")
                                    .field("samples", report.samples)
                                    .field("labels", report.labels)
                                    .field("frames", report.frames)
                                    .finish();
    deliver_summary(summary, &cfg.out_dir, out);
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const fs::path dir = samples_dir(cfg.in_dir);
    const std::vector<fs::path> files = sorted_json_files(dir);

    // index.json (when present) tells us which frames were normalized by the
    // sample median, the only frames allowed to miss the unit-shoulder check
    std::map<std::string, std::set<int>> fallback;
    std::set<std::string> index_ids;
    bool have_index = fs::is_regular_file(cfg.in_dir / "index.json");
    if (have_index)
        for (IndexEntry& e : read_index(cfg.in_dir)) {
            index_ids.insert(e.id);
            fallback.emplace(e.id, std::move(e.median_fallback));
        }

    std::vector<std::string> violations;
    int64_t n_3d = 0, n_phono = 0, fallback_frames = 0;
    for (const fs::path& file : files) {
        const std::string id = file.stem().string();
        const std::string text = docio::read_file(file);
        std::string reason_3d;
        try {
            const Sample3D sample = parse_sample3d_document(text);
            ++n_3d;
            if (have_index && !index_ids.count(id)) {
                violations.push_back(id + ": not listed in index.json");
                continue;
            }
            const std::set<int>* fb = have_index ? &fallback[id] : nullptr;
            for (const SkeletonFrame& frame : sample.frames) {
                if (fb != nullptr && fb->count(frame.frame_index)) {
                    ++fallback_frames;
                    continue;
                }
                const Joints& body = frame.body;
                if (body.score[kShoulderRightIndex] <= 0.0 ||
                    body.score[kShoulderLeftIndex] <= 0.0) {
                    violations.push_back(id + ": frame " + std::to_string(frame.frame_index) +
                                         " has a missing shoulder outside median_fallback");
                    continue;
                }
                const double d = euclidean_distance(body.position(kShoulderRightIndex),
                                                    body.position(kShoulderLeftIndex));
                if (std::abs(d - 1.0) > 1e-9)
                    violations.push_back(id + ": frame " + std::to_string(frame.frame_index) +
                                         " shoulder distance " + docio::fixed6(d) + " != 1");
            }
            continue;
        } catch (const PipelineError& e) {
            reason_3d = e.what();
        }
        try {
            (void)parse_phono_document(text);
            ++n_phono;
        } catch (const PipelineError& e) {
            violations.push_back(id + ": not a valid document (as 3D: " + reason_3d +
                                 "; as phono: " + e.what() + ")");
        }
    }
    for (const std::string& id : index_ids)
        if (!fs::is_regular_file(dir / (id + ".json")))
            violations.push_back(id + ": listed in index.json but file is missing");

    for (const std::string& v : violations) err << "violation: " << v << "\n";
    const std::string summary = Summary("validate")
                                    .field("files", static_cast<int64_t>(files.size()))
                                    .field("samples_3d", n_3d)
                                    .field("samples_phono", n_phono)
                                    .field("median_fallback_frames", fallback_frames)
                                    .field("violations", static_cast<int64_t>(violations.size()))
                                    .finish();
    deliver_summary(summary, nullptr, out);
    return violations.empty() ? kExitSuccess : kExitData;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
    SynthOptions opt;
    opt.n_samples = cfg.synth_samples;
    opt.seed = cfg.seed;
    opt.source_stride = cfg.source_fps / cfg.target_fps;
    opt.max_frames = cfg.synth_max_frames;
    write_synth_corpus(cfg.out_dir, opt);

    const std::string summary = Summary("synth")
                                    .field("samples_written", static_cast<int64_t>(opt.n_samples))
                                    .field("seed", static_cast<int64_t>(opt.seed))
                                    .finish();
    deliver_summary(summary, &cfg.out_dir, out);
    return kExitSuccess;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_usage(cfg);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        switch (cfg.command) {
            case Command::build_3d: return cmd_build_3d(cfg, out);
            case Command::build_phono: return cmd_build_phono(cfg, out);
            case Command::stats: return cmd_stats(cfg, out);
            case Command::validate: return cmd_validate(cfg, out, err);
            case Command::synth: return cmd_synth(cfg, out);
        }
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PipelineError& e) {
        err << "error: [" << e.kind() << "] " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace signpipe
