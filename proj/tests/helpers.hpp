#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef OPPAIRS_FIXTURE_DIR
#error "build must define OPPAIRS_FIXTURE_DIR"
#endif

inline std::string read_fixture(const std::string& name) {
    std::string path = std::string(OPPAIRS_FIXTURE_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}
