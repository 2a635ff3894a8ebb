#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace songsieve::cli {

/// Records every artifact a subcommand writes, with size and CRC-32, so a
/// re-run can be checked for byte-identical output by comparing manifests.
class RunManifest {
public:
    explicit RunManifest(std::string command) : command_(std::move(command)) {}

    /// Checksum a freshly written file and add it to the manifest.
    void record(const std::string& path);

    /// Write manifest.json under `directory` with the config snapshot and seed.
    void write(const std::string& directory, const std::string& config_json,
               std::uint64_t seed) const;

private:
    struct Entry {
        std::string path;
        std::uint64_t bytes = 0;
        std::uint32_t crc32 = 0;
    };
    std::string command_;
    std::vector<Entry> entries_;
};

}  // namespace songsieve::cli
