#include "cbound/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cbound::io {

std::string format_float(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path.string()) {
    row(header);
}

CsvWriter::~CsvWriter() {
    if (!closed_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) {
        fields.push_back(format_float(v));
    }
    row(fields);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            buffer_ += ',';
        }
        buffer_ += fields[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    closed_ = true;
    write_text_file(path_, buffer_);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot open output file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::ios_base::failure("failed writing output file: " + path.string());
    }
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const std::string& config_hash, const std::vector<std::string>& artifacts) {
    nlohmann::ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["command"] = command;
    manifest["config_hash"] = config_hash;
    manifest["artifacts"] = artifacts;
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace cbound::io
