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

#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fockmetro::cli {

namespace {

const std::string kCsvMagic = "# fockmetro-csv v";
const std::string kParamsMagic = "# fockmetro-params v";

[[noreturn]] void format_error(const std::filesystem::path &path, const std::string &what) {
    throw IoError(IoError::Kind::kFormat, path.string() + ": " + what);
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

// "v<digits>" at the start of `rest`; returns the version and advances past it.
int parse_version(const std::filesystem::path &path, std::string &rest) {
    int version = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), version);
    if (ec != std::errc() || ptr == rest.data()) {
        format_error(path, "missing version number");
    }
    rest.erase(0, static_cast<std::size_t>(ptr - rest.data()));
    return version;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(IoError::Kind::kIo, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
        throw IoError(IoError::Kind::kIo, "cannot write " + path.string());
    }
}

double parse_double(const std::filesystem::path &path, const std::string &text) {
    if (text.empty()) {
        return std::nan("");
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            format_error(path, "bad number '" + text + "'");
        }
        return v;
    } catch (const std::logic_error &) {
        format_error(path, "bad number '" + text + "'");
    }
}

}  // namespace

std::string fnv1a_hex(const std::string &text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::size_t CsvTable::column(const std::string &name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw IoError(IoError::Kind::kFormat, "missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string &name) const {
    return parse_double("table", rows.at(row).at(column(name)));
}

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::string &manifest_hash,
                     const std::vector<std::string> &header)
    : path_(path), columns_(header.size()) {
    buffer_ = kCsvMagic + std::to_string(kCsvVersion) + " manifest=" + manifest_hash + "\n";
    row(header);
}

void CsvWriter::row(const std::vector<std::string> &fields) {
    if (fields.size() != columns_) {
        throw IoError(IoError::Kind::kFormat, path_.string() + ": row has " + std::to_string(fields.size()) +
                                                  " fields, header has " + std::to_string(columns_));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        buffer_ += (i == 0 ? "" : ",") + fields[i];
    }
    buffer_ += "\n";
}

void CsvWriter::close() {
    if (!closed_) {
        write_file(path_, buffer_);
        closed_ = true;
    }
}

CsvTable read_csv(const std::filesystem::path &path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind(kCsvMagic, 0) != 0) {
        format_error(path, "not a fockmetro CSV table");
    }
    std::string rest = line.substr(kCsvMagic.size());
    const int version = parse_version(path, rest);
    if (version != kCsvVersion) {
        throw IoError(IoError::Kind::kUnsupportedVersion,
                      path.string() + ": unsupported CSV schema version " + std::to_string(version));
    }
    CsvTable table;
    const std::string key = " manifest=";
    if (rest.rfind(key, 0) != 0) {
        format_error(path, "missing manifest hash");
    }
    table.manifest_hash = rest.substr(key.size());
    if (!std::getline(in, line)) {
        format_error(path, "missing header row");
    }
    table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != table.header.size()) {
            format_error(path, "row width does not match header");
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

void write_params(const std::filesystem::path &path, const ParamsFile &params) {
    std::string out = kParamsMagic + std::to_string(kParamsVersion) + " kind=" + params.kind +
                      " d=" + std::to_string(params.d) + "\n";
    for (double v : params.values) {
        out += format_number(v) + "\n";
    }
    write_file(path, out);
}

ParamsFile read_params(const std::filesystem::path &path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind(kParamsMagic, 0) != 0) {
        format_error(path, "not a fockmetro parameter file");
    }
    std::string rest = line.substr(kParamsMagic.size());
    const int version = parse_version(path, rest);
    if (version != kParamsVersion) {
        throw IoError(IoError::Kind::kUnsupportedVersion,
                      path.string() + ": unsupported parameter file version " + std::to_string(version));
    }
    ParamsFile out;
    std::istringstream header(rest);
    std::string token;
    while (header >> token) {
        if (token.rfind("kind=", 0) == 0) {
            out.kind = token.substr(5);
        } else if (token.rfind("d=", 0) == 0) {
            out.d = static_cast<std::size_t>(parse_double(path, token.substr(2)));
        }
    }
    if (out.kind.empty() || out.d == 0) {
        format_error(path, "header lacks kind or depth");
    }
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.values.push_back(parse_double(path, line));
        }
    }
    std::size_t per_layer = 0;
    if (out.kind == "jc") {
        per_layer = 3;
    } else if (out.kind == "kerr") {
        per_layer = 2;
    } else {
        format_error(path, "unknown kind '" + out.kind + "'");
    }
    if (out.values.size() != per_layer * out.d) {
        format_error(path, std::to_string(out.values.size()) + " values for " + out.kind + " depth " +
                               std::to_string(out.d));
    }
    return out;
}

std::string Manifest::hash() const {
    nlohmann::json numeric = config;
    if (numeric.is_object()) {
        for (const char *key : {"out", "workers", "config"}) {
            numeric.erase(key);
        }
    }
    return fnv1a_hex(command + "\n" + numeric.dump());
}

nlohmann::json Manifest::to_json() const {
    nlohmann::json j;
    j["fockmetro_manifest"] = {
        {"version", kManifestVersion}, {"command", command}, {"library", library_version}, {"hash", hash()}};
    j[command] = config;
    return j;
}

void write_manifest(const std::filesystem::path &path, const Manifest &manifest) {
    write_file(path, manifest.to_json().dump(2) + "\n");
}

Manifest read_manifest(const std::filesystem::path &path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        format_error(path, e.what());
    }
    if (!j.contains("fockmetro_manifest")) {
        format_error(path, "not a fockmetro manifest");
    }
    const auto &meta = j["fockmetro_manifest"];
    if (meta.value("version", 0) != kManifestVersion) {
        throw IoError(IoError::Kind::kUnsupportedVersion, path.string() + ": unsupported manifest version");
    }
    Manifest m;
    m.command = meta.value("command", "");
    m.library_version = meta.value("library", "");
    if (!j.contains(m.command)) {
        format_error(path, "manifest lacks the '" + m.command + "' section");
    }
    m.config = j[m.command];
    return m;
}

}  // namespace fockmetro::cli
