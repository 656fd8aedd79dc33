#pragma once

#include <stdexcept>
#include <string>

namespace signpipe {

// Base class for every error the pipeline can raise. The CLI maps these to
// per-sample diagnostics (data errors, exit 1); anything else escaping to
// main is a bug.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    // Stable machine-readable category name used in skip reports.
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define SIGNPIPE_DEFINE_ERROR(NAME)                                  \
    class NAME : public PipelineError {                              \
    public:                                                          \
        explicit NAME(const std::string& what)                       \
            : PipelineError(#NAME, what) {}                          \
    }

// ingest
SIGNPIPE_DEFINE_ERROR(MalformedDocument);
SIGNPIPE_DEFINE_ERROR(WrongCardinality);
SIGNPIPE_DEFINE_ERROR(MalformedCatalog);
SIGNPIPE_DEFINE_ERROR(NonIntegerStride);
SIGNPIPE_DEFINE_ERROR(ViewOutOfRange);
SIGNPIPE_DEFINE_ERROR(LengthMismatch);

// cli
SIGNPIPE_DEFINE_ERROR(MissingView);

// fuse
SIGNPIPE_DEFINE_ERROR(MissingShoulder);
SIGNPIPE_DEFINE_ERROR(DegenerateWidth);
SIGNPIPE_DEFINE_ERROR(UnnormalizableSample);

// phono
SIGNPIPE_DEFINE_ERROR(DegeneratePlane);
SIGNPIPE_DEFINE_ERROR(DegenerateMouth);
SIGNPIPE_DEFINE_ERROR(InvalidAnnotation);

// stats
SIGNPIPE_DEFINE_ERROR(EmptyDataset);
SIGNPIPE_DEFINE_ERROR(InsufficientData);

// synth
SIGNPIPE_DEFINE_ERROR(InfeasibleScript);

#undef SIGNPIPE_DEFINE_ERROR

}  // namespace signpipe
