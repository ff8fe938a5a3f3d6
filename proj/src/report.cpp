#include "czk/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "czk/sha256.hpp"

namespace czk::report {

std::string sha256_hex(ByteView data) { return to_hex(sha256_bytes(data)); }

std::string sha256_hex_str(const std::string& data) {
    return sha256_hex(ByteView(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), std::streamsize(content.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

}  // namespace czk::report
