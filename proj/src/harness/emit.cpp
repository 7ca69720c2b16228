#include <charconv>
#include <fstream>
#include <stdexcept>

#include "jrc/harness/run.hpp"
#include "jrc/io.hpp"

namespace jrc::harness {
namespace {

const char* kHeader = "scenario,series,variable,value,metric,metric_value,ci_half_width,trials,seed";

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

std::vector<std::vector<std::string>> split_records(const std::string& text) {
    std::vector<std::vector<std::string>> recs;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
            continue;
        }
        any = true;
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            fields.push_back(std::move(cur));
            cur.clear();
            recs.push_back(std::move(fields));
            fields.clear();
            any = false;
        } else {
            cur += ch;
        }
    }
    if (quoted) throw std::runtime_error("csv: unterminated quoted field");
    if (any || !fields.empty() || !cur.empty()) {
        fields.push_back(std::move(cur));
        recs.push_back(std::move(fields));
    }
    return recs;
}

double to_double(const std::string& s) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("csv: bad integer '" + s + "'");
    return v;
}

std::optional<double> to_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return to_double(s);
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string s = std::string(kHeader) + "\n";
    for (const auto& r : rows) {
        s += quote(r.scenario) + ',' + quote(r.series) + ',' + quote(r.variable) + ',' + opt(r.value) + ',' + quote(r.metric) +
             ',' + io::format_double(r.metric_value) + ',' + opt(r.ci_half_width) + ',' + std::to_string(r.trials) + ',' +
             std::to_string(r.seed) + '\n';
    }
    return s;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
    const auto recs = split_records(text);
    if (recs.empty()) throw std::runtime_error("csv: missing header");
    std::string header;
    for (std::size_t i = 0; i < recs[0].size(); ++i) header += (i ? "," : "") + recs[0][i];
    if (header != kHeader) throw std::runtime_error("csv: unexpected header");
    std::vector<ResultRow> rows;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& f = recs[i];
        if (f.size() != 9) throw std::runtime_error("csv: line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) + " fields");
        rows.push_back({f[0], f[1], f[2], to_opt(f[3]), f[4], to_double(f[5]), to_opt(f[6]), to_u64(f[7]), to_u64(f[8])});
    }
    return rows;
}

void emit(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(path + ": cannot open for writing");
    const std::string s = to_csv(rows);
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
    f.close();
    if (!f) throw std::runtime_error(path + ": write failed");
}

}  // namespace jrc::harness
