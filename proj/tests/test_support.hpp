#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ddc/entity.hpp"
#include "ddc/metamodel.hpp"

namespace test_support {

namespace fs = std::filesystem;

// Unique scratch directory, removed on destruction.
struct temp_dir {
    fs::path path;

    temp_dir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path = fs::temp_directory_path() /
               ("ddc-test-" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~temp_dir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    temp_dir(const temp_dir&) = delete;
    temp_dir& operator=(const temp_dir&) = delete;

    operator const fs::path&() const { return path; }
    fs::path operator/(const std::string& rel) const { return path / rel; }
};

inline void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ddc::entity make_entity(const std::string& type, const std::string& id,
                               const std::string& description = "Does one thing") {
    ddc::entity e;
    e.entity_type = type;
    e.id = id;
    e.name = id;
    e.description = description;
    e.status = "active";
    e.body = "\n# " + id + "\n\n## Overview\n\nBody text.\n";
    return e;
}

}  // namespace test_support
