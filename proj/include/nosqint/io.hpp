#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "nosqint/errors.hpp"

namespace nosqint {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "IoError", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "IoError", "cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("io", "IoError", "short write to '" + path + "'");
}

}  // namespace nosqint
