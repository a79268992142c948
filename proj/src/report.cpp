#include "latflow/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace latflow {

std::string version_string() { return "latflow 0.1.0"; }

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void Report::kv(const std::string& key, const std::string& value) {
    lines_.push_back(key + " = " + value);
}
void Report::kv(const std::string& key, double value) { kv(key, fmt_double(value)); }
void Report::kv(const std::string& key, long long value) { kv(key, std::to_string(value)); }
void Report::kv(const std::string& key, std::size_t value) { kv(key, std::to_string(value)); }
void Report::line(std::string raw) { lines_.push_back(std::move(raw)); }
void Report::blank() { lines_.emplace_back(); }

std::string Report::str(bool with_timestamp) const {
    std::string out = "# " + version_string() + "\n# report: " + title_ + "\n";
    if (with_timestamp) out += "# generated: " + timestamp_utc() + "\n";
    for (const auto& l : lines_) out += l + "\n";
    return out;
}

void Report::write(const std::string& path, bool with_timestamp) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << str(with_timestamp);
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
    std::string l;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) l += ',';
        l += header[i];
    }
    lines_.push_back(std::move(l));
}

void Csv::row(std::vector<std::string> cells) {
    if (cells.size() != width_) throw std::invalid_argument("csv row width mismatch");
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) l += ',';
        l += cells[i];
    }
    lines_.push_back(std::move(l));
}

std::string Csv::str() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
}

void Csv::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << str();
}

}  // namespace latflow
