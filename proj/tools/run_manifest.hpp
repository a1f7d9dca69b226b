// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Content digests and the manifest written next to every CLI output.

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ldc::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string sha256_file(const std::filesystem::path& p) { return sha256_hex(read_file(p)); }

inline std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Records what a run read and wrote. Output paths are stored relative to
/// `root` so digests compare across machines and directories.
class RunManifest {
public:
    RunManifest(std::string command, std::filesystem::path root)
        : command_(std::move(command)), root_(std::move(root)), started_(utc_now()) {}

    void add_input(const std::filesystem::path& p) { inputs_[p.filename().string()] = sha256_file(p); }

    template <typename T>
    void set_parameter(const std::string& key, const T& value) {
        params_[key] = value;
    }

    void add_output(const std::filesystem::path& p) {
        outputs_[std::filesystem::relative(p, root_).generic_string()] = sha256_file(p);
    }

    /// Digest over every output's relative path and content hash.
    std::string output_digest() const {
        std::ostringstream all;
        for (const auto& [path, sha] : outputs_) all << path << '\0' << sha << '\n';
        return sha256_hex(all.str());
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command_;
        j["tool_version"] = kToolVersion;
        j["inputs"] = inputs_;
        j["parameters"] = params_;
        j["started_at"] = started_;
        j["finished_at"] = utc_now();
        j["outputs"] = outputs_;
        j["output_digest"] = output_digest();
        return j;
    }

    void write(const std::filesystem::path& p) const {
        std::ofstream out(p);
        out << to_json().dump(2) << '\n';
    }

private:
    std::string command_;
    std::filesystem::path root_;
    std::string started_;
    std::map<std::string, std::string> inputs_;
    nlohmann::json params_ = nlohmann::json::object();
    std::map<std::string, std::string> outputs_;
};

}  // namespace ldc::cli
