#include "graphseg/manifest.hpp"

#include "graphseg/error.hpp"
#include "graphseg/graph.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <vector>

namespace graphseg {

ContentHash& ContentHash::update(std::span<const std::byte> bytes) {
    for (std::byte b : bytes) {
        state_ ^= static_cast<std::uint64_t>(b);
        state_ *= 0x100000001b3ull;
    }
    return *this;
}

ContentHash& ContentHash::update(std::string_view s) { return update(std::as_bytes(std::span(s.data(), s.size()))); }

ContentHash& ContentHash::update(std::uint64_t v) {
    // Little-endian byte order regardless of host.
    std::byte bytes[8];
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<std::byte>((v >> (8 * k)) & 0xff);
    return update(std::span<const std::byte>(bytes, 8));
}

ContentHash& ContentHash::update(std::int64_t v) { return update(static_cast<std::uint64_t>(v)); }

ContentHash& ContentHash::update(double v) { return update(std::bit_cast<std::uint64_t>(v)); }

std::string ContentHash::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
}

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    ContentHash h;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const auto got = static_cast<std::size_t>(in.gcount());
        h.update(std::as_bytes(std::span(buf.data(), got)));
    }
    return h.hex();
}

std::string hash_graph(const SparseWeightGraph& graph) {
    ContentHash h;
    h.update(std::string_view("graph"));
    h.update(static_cast<std::int64_t>(graph.n_vertices()));
    for (const auto& e : graph.edges()) {
        h.update(static_cast<std::int64_t>(e.i));
        h.update(static_cast<std::int64_t>(e.j));
        h.update(e.w);
    }
    return h.hex();
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw ValidationError("error writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void log(LogLevel level, std::string_view message) {
    const char* env = std::getenv("GRAPHSEG_LOG");
    const std::string_view setting = env ? env : "warn";
    if (setting == "quiet") return;
    if (level == LogLevel::info && setting != "info") return;
    std::cerr << (level == LogLevel::warn ? "graphseg: warning: " : "graphseg: ") << message << '\n';
}

}  // namespace graphseg
