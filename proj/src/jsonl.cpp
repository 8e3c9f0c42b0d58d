#include "reckon/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "reckon/error.hpp"

namespace reckon {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw corruption_error("cannot open " + path.string());
    }
    std::vector<nlohmann::json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw corruption_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw corruption_error("cannot open " + path.string() + " for append");
    }
    out << record.dump() << '\n';
}

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records) {
    std::ostringstream buf;
    for (const auto& r : records) {
        buf << r.dump() << '\n';
    }
    write_file_atomic(path, buf.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) {
            throw corruption_error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw corruption_error("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw corruption_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace reckon
