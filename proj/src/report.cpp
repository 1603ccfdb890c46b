#include "kacroots/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

namespace kac {

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256_file: cannot open " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& p) : path(p) {
    file_ = std::fopen(p.c_str(), "wb");
    if (!file_) throw std::runtime_error("CsvWriter: cannot open " + p);
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    row(cols);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    std::FILE* f = static_cast<std::FILE*>(file_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', f);
        std::fputs(cells[i].c_str(), f);
    }
    std::fputc('\n', f);
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["tool"] = "kacroots";
    j["version"] = kToolVersion;
    j["subcommand"] = m.subcommand;
    nlohmann::ordered_json params;
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = params;
    j["seed"] = m.seed;
    j["threads"] = m.threads;
    j["duration_seconds"] = m.duration_seconds;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& f : m.output_files) {
        nlohmann::ordered_json o;
        o["path"] = f;
        o["sha256"] = sha256_file(f);
        std::ifstream in(f, std::ios::binary | std::ios::ate);
        o["bytes"] = static_cast<std::uint64_t>(in.tellg());
        outs.push_back(o);
    }
    j["outputs"] = outs;
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << "\n";
}

} // namespace kac
