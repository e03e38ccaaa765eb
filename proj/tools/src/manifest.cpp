// SPDX-License-Identifier: Apache-2.0
#include "kptrack_tools/manifest.hpp"

#include <nlohmann/json.hpp>

#include "kptrack/sequence_io.hpp"

namespace kptrack::cli {

std::string RunManifest::to_json() const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["config"] = nlohmann::ordered_json::parse(config_json);
    j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [role, path] : inputs)
        j["inputs"][role] = path;
    j["outputs"] = nlohmann::ordered_json::object();
    for (const auto& [role, path] : outputs)
        j["outputs"][role] = path;
    j["timings_seconds"] = nlohmann::ordered_json::object();
    for (const auto& [stage, seconds] : timings)
        j["timings_seconds"][stage] = seconds;
    return j.dump(2) + "\n";
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output)
{
    std::filesystem::path p = output;
    p += ".manifest.json";
    return p;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& output)
{
    write_text_file_atomic(manifest_path_for(output), manifest.to_json());
}

void StageTimer::lap(std::string stage)
{
    const auto now = std::chrono::steady_clock::now();
    manifest_.timings.emplace_back(std::move(stage), std::chrono::duration<double>(now - start_).count());
    start_ = now;
}

} // namespace kptrack::cli
