#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "signpipe/fuse.hpp"

namespace signpipe {

enum class Command { build_3d, build_phono, stats, validate, synth };

// One invocation of the pipeline front end. Flags, environment overrides
// (SIGNPIPE_ prefix) and defaults map 1:1 onto these fields.
struct RunConfig {
    Command command = Command::validate;

    std::filesystem::path front_dir;    // build-3d: frontal-view pose documents
    std::filesystem::path side_dir;     // build-3d: side-view pose documents
    std::filesystem::path annotations;  // build-3d, build-phono
    std::filesystem::path in_dir;       // build-phono, stats, validate: input dataset
    std::filesystem::path out_dir;      // everything but validate

    int source_fps = 60;
    int target_fps = 3;
    double threshold_k = 0.30;
    double z_scale = 1.0;
    SideCameraSide side_camera = SideCameraSide::signer_right;
    unsigned jobs = 0;  // 0: available parallelism
    uint64_t seed = 0;

    // synth corpus shape
    std::size_t synth_samples = 100;
    std::size_t synth_max_frames = 12;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

// Executes one command. Writes the machine-readable run summary (one JSON
// line) to `out` and diagnostics to `err`. Returns the process exit status:
// 0 success, 1 data error, 2 usage error. Output trees are deterministic and
// independent of `jobs`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace signpipe
