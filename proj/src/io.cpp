#include "ndextrap/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace ndextrap {

namespace {

constexpr const char* kMagic = "NDSIG1";
constexpr const char* kMetricsHeader = "iteration,nmse_db,residual,contraction";

/// Reads one '\n'-terminated header line starting at `pos`.
std::string header_line(const std::string& bytes, std::size_t& pos) {
    const auto end = bytes.find('\n', pos);
    if (end == std::string::npos) {
        throw FormatError("NDSIG header line is not terminated", static_cast<long long>(pos));
    }
    std::string line = bytes.substr(pos, end - pos);
    pos = end + 1;
    return line;
}

std::optional<double> parse_optional(const std::string& cell, std::size_t line) {
    if (cell.empty()) {
        return std::nullopt;
    }
    if (cell == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    if (cell == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) {
            throw std::invalid_argument(cell);
        }
        return v;
    } catch (const std::exception&) {
        throw FormatError("metrics line " + std::to_string(line) + ": bad number '" + cell + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v < 0 ? "-inf" : "inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string encode_signal(const Signal& f) {
    std::string out = std::string(kMagic) + "\ndims:";
    for (std::size_t d : f.shape().dims()) {
        out += ' ';
        out += std::to_string(d);
    }
    out += "\ndtype: f64le\n";
    const std::size_t header = out.size();
    out.resize(header + 8 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(f[i]);
        for (int b = 0; b < 8; ++b) {
            out[header + 8 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
        }
    }
    return out;
}

Signal decode_signal(const std::string& bytes) {
    std::size_t pos = 0;
    if (bytes.compare(0, 7, std::string(kMagic) + "\n") != 0) {
        throw FormatError("not an NDSIG file: bad magic", 0);
    }
    pos = 7;
    const std::size_t dims_offset = pos;
    const std::string dims_line = header_line(bytes, pos);
    if (dims_line.rfind("dims:", 0) != 0) {
        throw FormatError("expected 'dims:' header line", static_cast<long long>(dims_offset));
    }
    std::vector<std::size_t> dims;
    {
        std::istringstream is(dims_line.substr(5));
        std::string tok;
        while (is >> tok) {
            if (tok.find_first_not_of("0123456789") != std::string::npos) {
                throw FormatError("bad dimension '" + tok + "'", static_cast<long long>(dims_offset));
            }
            dims.push_back(std::stoull(tok));
        }
    }
    if (dims.empty() || std::find(dims.begin(), dims.end(), 0) != dims.end()) {
        throw FormatError("dims must be a non-empty list of positive integers", static_cast<long long>(dims_offset));
    }
    const std::size_t dtype_offset = pos;
    if (header_line(bytes, pos) != "dtype: f64le") {
        throw FormatError("unsupported dtype line", static_cast<long long>(dtype_offset));
    }
    GridShape shape(dims);
    const std::size_t expected = 8 * shape.size();
    const std::size_t available = bytes.size() - pos;
    if (available < expected) {
        std::ostringstream os;
        os << "truncated payload: expected " << expected << " bytes after offset " << pos << ", found " << available;
        throw FormatError(os.str(), static_cast<long long>(bytes.size()));
    }
    if (available > expected) {
        std::ostringstream os;
        os << "payload of " << available << " bytes is inconsistent with dims (" << expected << " bytes)";
        throw FormatError(os.str(), static_cast<long long>(pos + expected));
    }
    std::vector<double> values(shape.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + 8 * i + b])) << (8 * b);
        }
        values[i] = std::bit_cast<double>(bits);
        if (!std::isfinite(values[i])) {
            throw FormatError("non-finite sample", static_cast<long long>(pos + 8 * i));
        }
    }
    return Signal(shape, std::move(values));
}

void write_signal(const Signal& f, const std::filesystem::path& path) {
    write_text_file(path, encode_signal(f));
}

Signal read_signal(const std::filesystem::path& path) {
    return decode_signal(read_text_file(path));
}

std::string format_metrics_csv(const std::vector<IterationRecord>& records) {
    std::string out = std::string(kMetricsHeader) + "\n";
    for (const IterationRecord& r : records) {
        out += std::to_string(r.iteration);
        out += ',';
        if (r.nmse_db) {
            out += format_double(*r.nmse_db);
        }
        out += ',';
        out += format_double(r.residual);
        out += ',';
        if (r.contraction) {
            out += format_double(*r.contraction);
        }
        out += '\n';
    }
    return out;
}

void write_metrics_csv(const IterationReport& report, const std::filesystem::path& path) {
    if (report.records.empty()) {
        throw ParameterError("cannot write an empty metrics report");
    }
    write_text_file(path, format_metrics_csv(report.records));
}

std::vector<IterationRecord> read_metrics_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
        throw FormatError("metrics CSV header mismatch", 0);
    }
    std::vector<IterationRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.back() == ',') {
            cells.emplace_back();
        }
        if (cells.size() != 4) {
            throw FormatError("metrics line " + std::to_string(lineno) + " needs 4 columns");
        }
        IterationRecord r;
        const auto it = parse_optional(cells[0], lineno);
        const auto res = parse_optional(cells[2], lineno);
        if (!it || !res) {
            throw FormatError("metrics line " + std::to_string(lineno) + " misses iteration or residual");
        }
        r.iteration = static_cast<std::size_t>(*it);
        r.nmse_db = parse_optional(cells[1], lineno);
        r.residual = *res;
        r.contraction = parse_optional(cells[3], lineno);
        out.push_back(r);
    }
    return out;
}

std::string encode_pgm(const Signal& f) {
    if (f.shape().rank() != 2) {
        throw ParameterError("PGM export needs a 2-D signal");
    }
    const std::size_t rows = f.shape().dim(0);
    const std::size_t cols = f.shape().dim(1);
    const auto [lo_it, hi_it] = std::minmax_element(f.values().begin(), f.values().end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::string out = "P5 " + std::to_string(cols) + " " + std::to_string(rows) + " 65535\n";
    out.reserve(out.size() + 2 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        unsigned v = 32768;
        if (hi > lo) {
            v = static_cast<unsigned>(std::lround((f[i] - lo) / (hi - lo) * 65535.0));
            v = std::min(v, 65535u);
        }
        out += static_cast<char>((v >> 8) & 0xFF);
        out += static_cast<char>(v & 0xFF);
    }
    return out;
}

void export_pgm(const Signal& f, const std::filesystem::path& path) {
    write_text_file(path, encode_pgm(f));
}

}  // namespace ndextrap
