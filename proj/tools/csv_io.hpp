// Copyright 2026 The fockmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Versioned CSV tables, parameter files and run manifests.
//
// Every table starts with "# fockmetro-csv v1 manifest=<hash>", then a header
// row. Parameter files start with "# fockmetro-params v1 kind=<kind> d=<d>"
// followed by one value per line.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace fockmetro::cli {

inline constexpr int kCsvVersion = 1;
inline constexpr int kParamsVersion = 1;
inline constexpr int kManifestVersion = 1;

class IoError : public std::runtime_error {
  public:
    enum class Kind { kIo, kFormat, kUnsupportedVersion };

    IoError(Kind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// FNV-1a 64, printed as 16 hex digits.
std::string fnv1a_hex(const std::string &text);

/// Round-trip formatting (%.17g); NaN renders as an empty field.
std::string format_number(double value);

struct CsvTable {
    std::string manifest_hash;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const;
    double number(std::size_t row, const std::string &name) const;
};

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path, const std::string &manifest_hash,
              const std::vector<std::string> &header);

    void row(const std::vector<std::string> &fields);
    /// Flushes and reports write failures.
    void close();

  private:
    std::filesystem::path path_;
    std::string buffer_;
    std::size_t columns_;
    bool closed_ = false;
};

CsvTable read_csv(const std::filesystem::path &path);

struct ParamsFile {
    std::string kind;
    std::size_t d = 0;
    std::vector<double> values;
};

void write_params(const std::filesystem::path &path, const ParamsFile &params);
ParamsFile read_params(const std::filesystem::path &path);

/// {"fockmetro_manifest": {version, command, library, hash}, <command>: config}.
struct Manifest {
    std::string command;
    nlohmann::json config;
    std::string library_version;

    /// Hash of the numeric configuration (output location and worker count excluded).
    std::string hash() const;
    nlohmann::json to_json() const;
};

void write_manifest(const std::filesystem::path &path, const Manifest &manifest);
Manifest read_manifest(const std::filesystem::path &path);

}  // namespace fockmetro::cli
