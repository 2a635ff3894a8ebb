#include "run_manifest.hpp"

#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "songsieve/error.hpp"

namespace songsieve::cli {

void RunManifest::record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot checksum " + path);
    uLong crc = crc32(0L, Z_NULL, 0);
    std::uint64_t bytes = 0;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buf), static_cast<uInt>(in.gcount()));
        bytes += static_cast<std::uint64_t>(in.gcount());
    }
    entries_.push_back({path, bytes, static_cast<std::uint32_t>(crc)});
}

void RunManifest::write(const std::string& directory, const std::string& config_json,
                        std::uint64_t seed) const {
    std::vector<Entry> sorted = entries_;
    std::sort(sorted.begin(), sorted.end(),
              [](const Entry& a, const Entry& b) { return a.path < b.path; });

    nlohmann::json outputs = nlohmann::json::array();
    for (const Entry& e : sorted) {
        char crc_hex[16];
        std::snprintf(crc_hex, sizeof(crc_hex), "%08x", e.crc32);
        outputs.push_back({{"path", e.path}, {"bytes", e.bytes}, {"crc32", crc_hex}});
    }
    nlohmann::json manifest{
        {"command", command_},
        {"seed", seed},
        {"config", nlohmann::json::parse(config_json)},
        {"outputs", outputs},
    };

    std::filesystem::create_directories(directory);
    const std::string path = (std::filesystem::path(directory) / "manifest.json").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    out << manifest.dump(2) << '\n';
}

}  // namespace songsieve::cli
