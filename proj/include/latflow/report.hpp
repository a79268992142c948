#pragma once
// Plain-text and CSV report writers with fixed number formatting, so a report
// generated twice from the same inputs is byte-identical apart from the
// optional timestamp line.

#include <string>
#include <vector>

namespace latflow {

std::string version_string();

// %.17g: round-trips doubles exactly
std::string fmt_double(double v);
// %.12g: for human-facing summaries
std::string fmt_short(double v);

std::string timestamp_utc();

class Report {
  public:
    explicit Report(std::string title) : title_(std::move(title)) {}

    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, long long value);
    void kv(const std::string& key, std::size_t value);
    void line(std::string raw);
    void blank();

    // with_timestamp adds a "# generated:" comment, which is the only
    // nondeterministic line a report can contain
    std::string str(bool with_timestamp) const;
    void write(const std::string& path, bool with_timestamp) const;

  private:
    std::string title_;
    std::vector<std::string> lines_;
};

class Csv {
  public:
    explicit Csv(std::vector<std::string> header);
    void row(std::vector<std::string> cells);
    std::string str() const;
    void write(const std::string& path) const;

  private:
    std::size_t width_;
    std::vector<std::string> lines_;
};

}  // namespace latflow
