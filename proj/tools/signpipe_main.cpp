#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "signpipe/cli.hpp"

namespace {

// Shared flag installers so every subcommand documents the same knobs the
// same way. Every option can also be set through SIGNPIPE_* environment
// variables.
void add_fps(CLI::App* cmd, signpipe::RunConfig& cfg) {
    cmd->add_option("--source-fps", cfg.source_fps, "frame rate of the source videos")
        ->envname("SIGNPIPE_SOURCE_FPS")
        ->capture_default_str();
    cmd->add_option("--target-fps", cfg.target_fps, "frame rate after downsampling")
        ->envname("SIGNPIPE_TARGET_FPS")
        ->capture_default_str();
}

void add_jobs(CLI::App* cmd, signpipe::RunConfig& cfg) {
    cmd->add_option("--jobs", cfg.jobs, "worker threads (0 = all available cores)")
        ->envname("SIGNPIPE_JOBS")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    signpipe::RunConfig cfg;
    std::string side_camera = "signer_right";

    CLI::App app{
        "signpipe: dual-view sign pose sequences to normalized 3D skeletons,\n"
        "phonological attributes, and dataset statistics"};
    app.require_subcommand(1);

    CLI::App* b3 = app.add_subcommand("build-3d",
                                      "fuse frontal+side 2D poses into normalized 3D samples");
    b3->add_option("--front", cfg.front_dir, "directory of frontal-view pose documents")
        ->required()
        ->envname("SIGNPIPE_FRONT");
    b3->add_option("--side", cfg.side_dir, "directory of side-view pose documents")
        ->required()
        ->envname("SIGNPIPE_SIDE");
    b3->add_option("--annotations", cfg.annotations, "annotation table (CSV or TSV)")
        ->required()
        ->envname("SIGNPIPE_ANNOTATIONS");
    b3->add_option("--out", cfg.out_dir, "output dataset directory")
        ->required()
        ->envname("SIGNPIPE_OUT");
    add_fps(b3, cfg);
    b3->add_option("--z-scale", cfg.z_scale, "side-view to frontal-view pixel scale")
        ->envname("SIGNPIPE_Z_SCALE")
        ->capture_default_str();
    b3->add_option("--side-camera", side_camera, "which side of the signer the profile camera is on")
        ->check(CLI::IsMember({"signer_right", "signer_left"}))
        ->envname("SIGNPIPE_SIDE_CAMERA")
        ->capture_default_str();
    add_jobs(b3, cfg);

    CLI::App* bp = app.add_subcommand("build-phono",
                                      "extract per-frame phonological attributes from 3D samples");
    bp->add_option("--in", cfg.in_dir, "build-3d output directory")
        ->required()
        ->envname("SIGNPIPE_IN");
    bp->add_option("--annotations", cfg.annotations, "annotation table (CSV or TSV)")
        ->required()
        ->envname("SIGNPIPE_ANNOTATIONS");
    bp->add_option("--out", cfg.out_dir, "output dataset directory")
        ->required()
        ->envname("SIGNPIPE_OUT");
    bp->add_option("--threshold-k", cfg.threshold_k, "direction classification threshold")
        ->envname("SIGNPIPE_THRESHOLD_K")
        ->capture_default_str();
    add_jobs(bp, cfg);

    CLI::App* st = app.add_subcommand("stats", "dataset statistics and attribute correlations");
    st->add_option("--in", cfg.in_dir, "build-phono output directory")
        ->required()
        ->envname("SIGNPIPE_IN");
    st->add_option("--out", cfg.out_dir, "report output directory")
        ->required()
        ->envname("SIGNPIPE_OUT");
    add_jobs(st, cfg);

    CLI::App* va = app.add_subcommand("validate", "schema- and invariant-check a dataset");
    va->add_option("--in", cfg.in_dir, "dataset directory to check")
        ->required()
        ->envname("SIGNPIPE_IN");
    add_jobs(va, cfg);

    CLI::App* sy = app.add_subcommand("synth", "generate a synthetic fixture corpus");
    sy->add_option("--out", cfg.out_dir, "corpus output directory")
        ->required()
        ->envname("SIGNPIPE_OUT");
    sy->add_option("--seed", cfg.seed, "corpus seed")
        ->envname("SIGNPIPE_SEED")
        ->capture_default_str();
    sy->add_option("--samples", cfg.synth_samples, "number of samples to generate")
        ->envname("SIGNPIPE_SAMPLES")
        ->capture_default_str();
    sy->add_option("--max-frames", cfg.synth_max_frames, "maximum frames per sample")
        ->envname("SIGNPIPE_MAX_FRAMES")
        ->capture_default_str();
    add_fps(sy, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? signpipe::kExitSuccess : signpipe::kExitUsage;
    }

    if (b3->parsed()) cfg.command = signpipe::Command::build_3d;
    if (bp->parsed()) cfg.command = signpipe::Command::build_phono;
    if (st->parsed()) cfg.command = signpipe::Command::stats;
    if (va->parsed()) cfg.command = signpipe::Command::validate;
    if (sy->parsed()) cfg.command = signpipe::Command::synth;
    cfg.side_camera = side_camera == "signer_left" ? signpipe::SideCameraSide::signer_left
                                                   : signpipe::SideCameraSide::signer_right;

    return signpipe::run(cfg, std::cout, std::cerr);
}
