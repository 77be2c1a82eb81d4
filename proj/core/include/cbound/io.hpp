// Artifact output helpers: CSV with fixed 17-significant-digit floats and LF
// line endings, deterministic JSON, and the per-invocation manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cbound::io {

std::string format_float(double value);  // %.17g

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::string path_;
    std::string buffer_;
    bool closed_ = false;
};

void write_text_file(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const std::string& config_hash, const std::vector<std::string>& artifacts);

}  // namespace cbound::io
