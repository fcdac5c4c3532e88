#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace kms {

/// Shortest round-trip decimal form (17 significant digits).
std::string format_g17(double x);

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::string fnv1a64_hex(const std::string& bytes);

/// Write via a temporary in the same directory plus rename, so readers never
/// observe a partial file.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Comma-separated table with a fixed header; all values print as %.17g, so a
/// rerun with identical inputs is byte-identical.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);
    void row(const std::vector<double>& values);
    const std::string& content() const { return buf_; }
    void write(const std::string& path) const;

  private:
    std::string buf_;
    std::size_t ncols_;
};

/// First free path of the form dir/stem.ext, dir/stem-2.ext, dir/stem-3.ext...
std::string unique_path(const std::string& dir, const std::string& stem,
                        const std::string& ext);

/// CSV plus a JSON descriptor (same stem) naming the abscissa and ordinates.
/// Returns the CSV path actually used.
std::string emit_plotdata(const std::string& dir, const std::string& stem,
                          const std::vector<std::string>& columns,
                          const std::vector<std::vector<double>>& rows,
                          const std::string& title);

/// Row-major float64 little-endian payload in base.bin described by base.json
/// (dtype, count, checksum, caller metadata).
void write_binary_dump(const std::string& base_path, const std::vector<double>& data,
                       const nlohmann::json& meta);

std::vector<double> read_binary_dump(const std::string& base_path,
                                     nlohmann::json* header = nullptr);

}  // namespace kms
