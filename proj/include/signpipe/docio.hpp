#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace signpipe::docio {

// Emitted dataset documents use fixed 6-decimal numbers so golden files are
// byte-stable; appenders below build those documents into a growing string.

// "%.6f" with negative zero normalized to "0.000000".
void append_fixed6(std::string& out, double v);

// Shortest round-trip form (std::to_chars); used by the debug view emitter
// and the fixture generator, where inputs must survive a parse bit-exactly.
void append_shortest(std::string& out, double v);

void append_int(std::string& out, int64_t v);

// Appends s as a JSON string literal (quotes included).
void append_json_string(std::string& out, std::string_view s);

std::string fixed6(double v);

// Whole-file helpers. Throws MalformedDocument on read and std::runtime_error
// on write failures.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace signpipe::docio
