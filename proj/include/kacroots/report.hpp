#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kac {

// SHA-256 digest of a file, lowercase hex.
std::string sha256_file(const std::string& path);

// Locale-independent numeric formatting for CSV cells ("nan" for missing).
std::string format_double(double v);

struct CsvWriter {
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);
    std::string path;

private:
    void* file_ = nullptr;
};

// Everything needed to reproduce a run byte for byte.
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> parameters; // insertion order
    std::uint64_t seed = 0;
    int threads = 1;
    double duration_seconds = 0.0;
    std::vector<std::string> output_files;
};

void write_manifest(const RunManifest& m, const std::string& path);

inline constexpr const char* kToolVersion = "1.0.0";

} // namespace kac
