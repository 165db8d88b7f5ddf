#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace graphseg {

class SparseWeightGraph;

/// 64-bit FNV-1a over a byte stream. Not cryptographic; used for cache keys
/// and for recording input identity in run manifests.
class ContentHash {
public:
    ContentHash& update(std::span<const std::byte> bytes);
    ContentHash& update(std::string_view s);
    ContentHash& update(std::int64_t v);
    ContentHash& update(std::uint64_t v);
    ContentHash& update(double v);

    std::uint64_t value() const noexcept { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

std::string hash_file(const std::filesystem::path& path);
std::string hash_graph(const SparseWeightGraph& graph);

/// Writes `doc` pretty-printed with sorted keys and a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

enum class LogLevel { warn, info };

/// Diagnostics on stderr. Warnings always print unless GRAPHSEG_LOG=quiet;
/// info lines need GRAPHSEG_LOG=info.
void log(LogLevel level, std::string_view message);

}  // namespace graphseg
