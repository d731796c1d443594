/*
   Copyright 2026 The ffhybrid Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


// Output files and the character-table cache for the command-line tool.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <ffhybrid/chargroup.hpp>

namespace ffh::io {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr const char* kCacheEnv = "FFHYBRID_CACHE_DIR";

/// stdout when the path is empty or "-".
class Sink {
   public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

   private:
    std::unique_ptr<std::ofstream> file_;
};

inline void write_json(std::ostream& os, const std::string& command, const json& config, const json& results) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["results"] = results;
    os << std::setw(2) << doc << '\n';
}

inline std::string format_double(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

/// CSV with '#' header lines carrying the schema version and the config echo.
class CsvWriter {
   public:
    CsvWriter(std::ostream& os, const std::string& command, const json& config, const std::vector<std::string>& columns) : os_(os), width_(columns.size()) {
        os_ << "# schema_version: " << kSchemaVersion << '\n';
        os_ << "# command: " << command << '\n';
        os_ << "# config: " << config.dump() << '\n';
        row(columns);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
            if (!quote) {
                os_ << cells[i];
                continue;
            }
            os_ << '"';
            for (char c : cells[i]) os_ << (c == '"' ? "\"\"" : std::string(1, c));
            os_ << '"';
        }
        os_ << '\n';
    }

   private:
    std::ostream& os_;
    std::size_t width_;
};

/// The flag wins over the environment; an empty result disables caching.
inline std::filesystem::path cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kCacheEnv)) return env;
    return {};
}

inline json character_table(const UnitGroup& g) {
    json t;
    t["modulus"] = to_text(g.modulus());
    t["order"] = g.order();
    t["exponent"] = g.exponent();
    t["orders"] = g.orders();
    json gens = json::array();
    for (auto gen : g.generators()) gens.push_back(to_text(g.ring().element(gen)));
    t["generators"] = gens;
    json rows = json::array();
    std::uint64_t prim = 0;
    for (const auto& c : g.all_characters()) {
        rows.push_back({{"index", c.index}, {"exponents", c.exponents}, {"primitive", c.primitive}, {"even", c.even}});
        prim += c.primitive;
    }
    t["primitive_count"] = prim;
    t["characters"] = rows;
    return t;
}

/// Character table from the cache when present and matching, else built and stored.
inline json cached_character_table(const UnitGroup& g, const std::filesystem::path& dir, bool* hit = nullptr) {
    if (hit) *hit = false;
    if (dir.empty()) return character_table(g);
    const auto file = dir / ("chartable_q" + std::to_string(g.ring().field()->q()) + "_r" + std::to_string(g.modulus().index()) + ".json");
    if (std::ifstream in(file); in) {
        try {
            json t = json::parse(in);
            if (t.value("schema_version", 0) == kSchemaVersion && t["table"]["modulus"] == to_text(g.modulus())) {
                if (hit) *hit = true;
                return t["table"];
            }
        } catch (const json::exception&) {
            // Unreadable entries are rebuilt.
        }
    }
    json t = character_table(g);
    std::filesystem::create_directories(dir);
    std::ofstream out(file);
    out << json{{"schema_version", kSchemaVersion}, {"table", t}}.dump() << '\n';
    return t;
}

}  // namespace ffh::io
