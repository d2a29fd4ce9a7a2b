#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hopw/cli/config.hpp"
#include "hopw/observables.hpp"

namespace hopw::cli {

struct EmittedFile {
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

/// Record of one run. Written as manifest.json in the output directory, also
/// when the run aborts (status "partial").
class RunManifest {
public:
    RunManifest(std::string command, RunConfig config);

    const std::filesystem::path& directory() const { return dir_; }
    const RunConfig& config() const { return config_; }
    const std::vector<EmittedFile>& files() const { return files_; }

    void set_derived(const std::string& key, const std::string& value);
    void set_check(const std::string& key, const std::string& value);

    /// Writes a dataset below the output directory and records its checksum.
    void emit(const std::string& name, const DensityField& field);
    void emit_text(const std::string& name, const std::string& text);

    /// Re-hashes every file; false if any is missing or changed.
    bool verify() const;
    void write(const std::string& status, const std::string& error = {}) const;

private:
    void record(const std::filesystem::path& path);

    std::string command_;
    RunConfig config_;
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> derived_;
    std::vector<std::pair<std::string, std::string>> checks_;
    std::vector<EmittedFile> files_;
};

std::string sha256_file(const std::filesystem::path& path);

} // namespace hopw::cli
