#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace biaseval {

/// Bad input data, files or configuration. Mapped to exit code 1 by the CLI.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while running the pipeline (model calls, I/O). Exit code 2.
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace util {

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
bool iequals_ascii(std::string_view a, std::string_view b);

std::vector<std::string> split(std::string_view s, char delim);
/// Splits on `delim` at most `max_fields - 1` times; the remainder stays in
/// the last field untouched.
std::vector<std::string> split_limit(std::string_view s, char delim, size_t max_fields);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(uint64_t v);

/// Decimal rendering of `n` left-padded with zeros to at least `width`.
std::string zero_pad(size_t n, int width);

/// Fixed-point formatting, e.g. format_fixed(0.7584, 3) == "0.758".
std::string format_fixed(double v, int decimals);
/// Strength formatting for prompts and JSON text: minimal decimals, at least
/// one, at most two ("0.6", "0.85", "1.0").
std::string format_strength(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
std::vector<std::string> read_lines(const std::string& path);

} // namespace util
} // namespace biaseval
