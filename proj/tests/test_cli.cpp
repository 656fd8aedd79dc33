#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "signpipe/cli.hpp"
#include "signpipe/docio.hpp"

using namespace signpipe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() /
               (std::string("signpipe_cli_") + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult invoke(const RunConfig& cfg) {
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    return {code, out.str(), err.str()};
}

RunConfig synth_config(const fs::path& out, uint64_t seed, std::size_t samples) {
    RunConfig cfg;
    cfg.command = Command::synth;
    cfg.out_dir = out;
    cfg.seed = seed;
    cfg.synth_samples = samples;
    return cfg;
}

RunConfig build3d_config(const fs::path& corpus, const fs::path& out, unsigned jobs = 1) {
    RunConfig cfg;
    cfg.command = Command::build_3d;
    cfg.front_dir = corpus / "front";
    cfg.side_dir = corpus / "side";
    cfg.annotations = corpus / "annotations.csv";
    cfg.out_dir = out;
    cfg.jobs = jobs;
    return cfg;
}

RunConfig phono_config(const fs::path& in, const fs::path& annotations, const fs::path& out,
                       unsigned jobs = 1) {
    RunConfig cfg;
    cfg.command = Command::build_phono;
    cfg.in_dir = in;
    cfg.annotations = annotations;
    cfg.out_dir = out;
    cfg.jobs = jobs;
    return cfg;
}

std::vector<fs::path> tree_files(const fs::path& root) {
    std::vector<fs::path> rel;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), root));
    std::sort(rel.begin(), rel.end());
    return rel;
}

void check_identical_trees(const fs::path& a, const fs::path& b) {
    const std::vector<fs::path> fa = tree_files(a), fb = tree_files(b);
    REQUIRE(fa == fb);
    for (const fs::path& r : fa) CHECK(docio::read_file(a / r) == docio::read_file(b / r));
}

#ifdef SIGNPIPE_CLI
int run_binary(const std::string& args) {
    const int status = std::system((std::string(SIGNPIPE_CLI) + " " + args).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST_CASE("full chain: synth -> build-3d -> build-phono -> stats -> validate") {
    TempDir dir("chain");
    const fs::path corpus = dir.path / "corpus";
    REQUIRE(invoke(synth_config(corpus, 7, 10)).code == kExitSuccess);

    RunResult b3 = invoke(build3d_config(corpus, dir.path / "d3"));
    CHECK(b3.code == kExitSuccess);
    CHECK(b3.out.find("\"samples_written\": 10") != std::string::npos);
    CHECK(b3.out.find("\"samples_skipped\": 0") != std::string::npos);

    RunResult bp = invoke(phono_config(dir.path / "d3", corpus / "annotations.csv",
                                       dir.path / "ph"));
    CHECK(bp.code == kExitSuccess);
    CHECK(bp.out.find("\"samples_written\": 10") != std::string::npos);

    // phonological output equals the generator's ground truth, byte for byte
    for (const auto& e : fs::directory_iterator(corpus / "expected"))
        CHECK(docio::read_file(e.path()) ==
              docio::read_file(dir.path / "ph" / "samples" / e.path().filename()));

    RunConfig st;
    st.command = Command::stats;
    st.in_dir = dir.path / "ph";
    st.out_dir = dir.path / "st";
    RunResult sr = invoke(st);
    CHECK(sr.code == kExitSuccess);
    CHECK(fs::is_regular_file(dir.path / "st" / "report.json"));
    CHECK(fs::is_regular_file(dir.path / "st" / "report.tsv"));
    CHECK(fs::is_regular_file(dir.path / "st" / "correlation.tsv"));

    for (const char* sub : {"d3", "ph"}) {
        RunConfig va;
        va.command = Command::validate;
        va.in_dir = dir.path / sub;
        RunResult vr = invoke(va);
        CHECK(vr.code == kExitSuccess);
        CHECK(vr.out.find("\"violations\": 0") != std::string::npos);
    }
}

TEST_CASE("jobs count never changes the output tree") {
    TempDir dir("jobs");
    const fs::path corpus = dir.path / "corpus";
    REQUIRE(invoke(synth_config(corpus, 21, 24)).code == kExitSuccess);

    REQUIRE(invoke(build3d_config(corpus, dir.path / "d3_j1", 1)).code == kExitSuccess);
    REQUIRE(invoke(build3d_config(corpus, dir.path / "d3_j8", 8)).code == kExitSuccess);
    check_identical_trees(dir.path / "d3_j1", dir.path / "d3_j8");

    REQUIRE(invoke(phono_config(dir.path / "d3_j1", corpus / "annotations.csv",
                                dir.path / "ph_j1", 1))
                .code == kExitSuccess);
    REQUIRE(invoke(phono_config(dir.path / "d3_j8", corpus / "annotations.csv",
                                dir.path / "ph_j8", 8))
                .code == kExitSuccess);
    check_identical_trees(dir.path / "ph_j1", dir.path / "ph_j8");
}

TEST_CASE("synth: same seed gives byte-identical trees, new seed differs") {
    TempDir dir("seed");
    REQUIRE(invoke(synth_config(dir.path / "a", 7, 5)).code == kExitSuccess);
    REQUIRE(invoke(synth_config(dir.path / "b", 7, 5)).code == kExitSuccess);
    check_identical_trees(dir.path / "a", dir.path / "b");

    REQUIRE(invoke(synth_config(dir.path / "c", 8, 5)).code == kExitSuccess);
    CHECK(docio::read_file(dir.path / "a" / "annotations.csv") !=
          docio::read_file(dir.path / "c" / "annotations.csv"));
}

TEST_CASE("missing side view: sample skipped, listed, exit 0") {
    TempDir dir("skip");
    const fs::path corpus = dir.path / "corpus";
    REQUIRE(invoke(synth_config(corpus, 3, 5)).code == kExitSuccess);
    fs::remove(corpus / "side" / "s00002__take.json");

    RunResult b3 = invoke(build3d_config(corpus, dir.path / "d3"));
    CHECK(b3.code == kExitSuccess);
    CHECK(b3.out.find("\"samples_written\": 4") != std::string::npos);
    CHECK(b3.out.find("\"samples_skipped\": 1") != std::string::npos);

    const std::string skipped = docio::read_file(dir.path / "d3" / "skipped.json");
    CHECK(skipped.find("\"id\": \"s00002\"") != std::string::npos);
    CHECK(skipped.find("MissingView") != std::string::npos);
    CHECK(!fs::exists(dir.path / "d3" / "samples" / "s00002.json"));

    // downstream build keeps working on the survivors
    RunResult bp = invoke(phono_config(dir.path / "d3", corpus / "annotations.csv",
                                       dir.path / "ph"));
    CHECK(bp.code == kExitSuccess);
    CHECK(bp.out.find("\"samples_written\": 4") != std::string::npos);
}

TEST_CASE("stats on an empty directory: exit 1 with EmptyDataset") {
    TempDir dir("empty");
    fs::create_directories(dir.path / "nothing");
    RunConfig st;
    st.command = Command::stats;
    st.in_dir = dir.path / "nothing";
    st.out_dir = dir.path / "out";
    RunResult r = invoke(st);
    CHECK(r.code == kExitData);
    CHECK(r.err.find("EmptyDataset") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    TempDir dir("usage");

    RunConfig missing = build3d_config(dir.path / "no_such_corpus", dir.path / "out");
    RunResult r1 = invoke(missing);
    CHECK(r1.code == kExitUsage);
    CHECK(r1.err.find("usage error") != std::string::npos);

    const fs::path corpus = dir.path / "corpus";
    REQUIRE(invoke(synth_config(corpus, 1, 2)).code == kExitSuccess);
    RunConfig bad_fps = build3d_config(corpus, dir.path / "out2");
    bad_fps.source_fps = 60;
    bad_fps.target_fps = 7;  // not a divisor
    CHECK(invoke(bad_fps).code == kExitUsage);

    RunConfig bad_k = phono_config(corpus, corpus / "annotations.csv", dir.path / "out3");
    bad_k.threshold_k = 0.0;
    CHECK(invoke(bad_k).code == kExitUsage);

    RunConfig no_samples = synth_config(dir.path / "out4", 0, 0);
    CHECK(invoke(no_samples).code == kExitUsage);
}

TEST_CASE("validate flags corrupted documents and stray index entries") {
    TempDir dir("corrupt");
    const fs::path corpus = dir.path / "corpus";
    REQUIRE(invoke(synth_config(corpus, 11, 4)).code == kExitSuccess);
    REQUIRE(invoke(build3d_config(corpus, dir.path / "d3")).code == kExitSuccess);

    // break one document: make a coordinate non-numeric
    const fs::path victim = dir.path / "d3" / "samples" / "s00001.json";
    std::string text = docio::read_file(victim);
    const std::size_t pos = text.find("\"x\": [");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "\"x\": [\"boom\",");
    docio::write_file(victim, text);

    RunConfig va;
    va.command = Command::validate;
    va.in_dir = dir.path / "d3";
    RunResult r = invoke(va);
    CHECK(r.code == kExitData);
    CHECK(r.err.find("s00001") != std::string::npos);

    // a missing file behind an index entry is a violation too
    fs::remove(dir.path / "d3" / "samples" / "s00003.json");
    RunResult r2 = invoke(va);
    CHECK(r2.code == kExitData);
    CHECK(r2.err.find("s00003") != std::string::npos);
}

#ifdef SIGNPIPE_CLI
TEST_CASE("binary: help, usage errors, env overrides") {
    TempDir dir("bin");
    CHECK(run_binary("--help > /dev/null") == 0);
    CHECK(run_binary("frobnicate 2> /dev/null") == kExitUsage);
    CHECK(run_binary("build-3d 2> /dev/null") == kExitUsage);  // missing required flags

    const std::string out1 = (dir.path / "env1").string();
    const std::string out2 = (dir.path / "env2").string();
    const std::string out3 = (dir.path / "flag").string();
    CHECK(run_binary("synth --out " + out1 + " --seed 42 --samples 3 > /dev/null") == 0);
    CHECK(run_binary("synth --out " + out2 + " --samples 3 > /dev/null") != -1);
    // env seed must match the flag-set seed
    setenv("SIGNPIPE_SEED", "42", 1);
    CHECK(run_binary("synth --out " + out3 + " --samples 3 > /dev/null") == 0);
    unsetenv("SIGNPIPE_SEED");
    check_identical_trees(out1, out3);
}
#endif
