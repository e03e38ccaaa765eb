// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kptrack::cli {

/// Provenance record written next to each output file.
struct RunManifest {
    std::string command;
    /// Effective configuration as a JSON document.
    std::string config_json = "{}";
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, std::string>> outputs;
    std::vector<std::pair<std::string, double>> timings;
    std::string tool_version;

    std::string to_json() const;
};

/// `<output>.manifest.json`.
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& output);

/// Appends the wall time of each stage to a manifest.
class StageTimer {
public:
    explicit StageTimer(RunManifest& manifest) : manifest_(manifest), start_(std::chrono::steady_clock::now()) {}

    void lap(std::string stage);

private:
    RunManifest& manifest_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace kptrack::cli
