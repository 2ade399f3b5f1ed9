#include "qcs/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace qcs {

std::string format_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string scan_records_csv(std::span<const ScanRecord> records) {
    std::string out = "d,x,sum,normalized,r_weight\n";
    for (const ScanRecord& r : records) {
        out += std::to_string(r.d);
        out += ',';
        out += format_sig(r.x);
        out += ',';
        out += std::to_string(r.sum);
        out += ',';
        out += format_sig(r.normalized);
        out += ',';
        if (r.has_r_weight) out += format_sig(r.r_weight);
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.good()) {
            out.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("failed while writing " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move " + tmp + " to " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace qcs
