#pragma once

/// Deterministic serialization: every artifact the toolkit writes (JSON
/// summaries, CSV scans) goes through these helpers so that identical inputs
/// produce byte-identical files.  Floating-point values are always printed
/// with "%.17g" (17 significant digits round-trips any double), object keys
/// are emitted in sorted order, and no locale-dependent formatting is used.

#include "json.hpp"

#include <string>
#include <vector>

namespace finsler::io {

/// "%.17g" rendering of a double (C locale semantics).
std::string format_g17(double x);

/// JSON text with sorted keys, 2-space indentation, and %.17g numbers.
/// Non-finite numbers serialize as null (standard JSON has no inf/nan).
std::string dump_deterministic(const nlohmann::json& j);

/// 64-bit FNV-1a of a byte string, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Whole-file read; throws std::domain_error if the file cannot be opened.
std::string read_text_file(const std::string& path);

/// Atomic-enough whole-file write (truncate + write + flush); throws
/// std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& content);

/// CSV with a header row and %.17g cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace finsler::io
