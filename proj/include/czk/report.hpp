#pragma once

#include <string>

#include "czk/bytes.hpp"

namespace czk::report {

std::string sha256_hex(ByteView data);
std::string sha256_hex_str(const std::string& data);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace czk::report
