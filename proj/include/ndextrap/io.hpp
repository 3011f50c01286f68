#pragma once

// File formats.
//
// NDSIG (signals), byte-exact:
//   "NDSIG1\n"
//   "dims: d1 d2 ... dN\n"
//   "dtype: f64le\n"
//   (d1*...*dN) IEEE-754 binary64 values, little-endian, row-major.
//
// Metrics CSV: header "iteration,nmse_db,residual,contraction", one row per
// record, %.17g numbers, "-inf" for an exact reconstruction, empty cells for
// absent values.
//
// PGM: binary P5, maxval 65535 (big-endian samples), header "P5 W H 65535\n"
// where H = dims[0] and W = dims[1].

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ndextrap/engine.hpp"
#include "ndextrap/grid.hpp"

namespace ndextrap {

void write_signal(const Signal& f, const std::filesystem::path& path);
Signal read_signal(const std::filesystem::path& path);

/// In-memory NDSIG encoding; write_signal and read_signal wrap these.
std::string encode_signal(const Signal& f);
Signal decode_signal(const std::string& bytes);

void write_metrics_csv(const IterationReport& report, const std::filesystem::path& path);
std::string format_metrics_csv(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> read_metrics_csv(const std::filesystem::path& path);

void export_pgm(const Signal& f, const std::filesystem::path& path);
std::string encode_pgm(const Signal& f);

/// Shortest round-tripping decimal ("%.17g"), "inf"/"-inf"/"nan" for non-finite.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ndextrap
