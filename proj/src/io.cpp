#include "kms/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace kms {

static_assert(std::endian::native == std::endian::little,
              "binary dumps assume a little-endian host");

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_file: cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : ncols_(columns.size()) {
    if (columns.empty()) throw std::invalid_argument("CsvWriter: no columns");
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k) buf_ += ',';
        buf_ += columns[k];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) buf_ += ',';
        buf_ += format_g17(values[k]);
    }
    buf_ += '\n';
}

void CsvWriter::write(const std::string& path) const { atomic_write(path, buf_); }

std::string unique_path(const std::string& dir, const std::string& stem,
                        const std::string& ext) {
    namespace fs = std::filesystem;
    fs::path candidate = fs::path(dir) / (stem + ext);
    for (int k = 2; fs::exists(candidate); ++k)
        candidate = fs::path(dir) / (stem + "-" + std::to_string(k) + ext);
    return candidate.string();
}

std::string emit_plotdata(const std::string& dir, const std::string& stem,
                          const std::vector<std::string>& columns,
                          const std::vector<std::vector<double>>& rows,
                          const std::string& title) {
    const std::string csv_path = unique_path(dir, stem, ".csv");
    CsvWriter csv(columns);
    for (const auto& r : rows) csv.row(r);
    csv.write(csv_path);

    nlohmann::json desc;
    desc["title"] = title;
    desc["csv"] = std::filesystem::path(csv_path).filename().string();
    desc["columns"] = columns;
    desc["x"] = columns.front();
    desc["y"] = std::vector<std::string>(columns.begin() + 1, columns.end());
    const std::string json_path =
        csv_path.substr(0, csv_path.size() - 4) + ".json";
    atomic_write(json_path, desc.dump(2) + "\n");
    return csv_path;
}

void write_binary_dump(const std::string& base_path, const std::vector<double>& data,
                       const nlohmann::json& meta) {
    std::string payload(reinterpret_cast<const char*>(data.data()),
                        data.size() * sizeof(double));
    atomic_write(base_path + ".bin", payload);
    nlohmann::json header = meta;
    header["dtype"] = "float64";
    header["byte_order"] = "little";
    header["layout"] = "row_major";
    header["count"] = data.size();
    header["checksum_fnv1a64"] = fnv1a64_hex(payload);
    atomic_write(base_path + ".json", header.dump(2) + "\n");
}

std::vector<double> read_binary_dump(const std::string& base_path, nlohmann::json* header) {
    const auto head = nlohmann::json::parse(read_file(base_path + ".json"));
    const auto payload = read_file(base_path + ".bin");
    const auto count = head.at("count").get<std::size_t>();
    if (payload.size() != count * sizeof(double))
        throw std::runtime_error("read_binary_dump: payload size mismatch");
    if (head.at("checksum_fnv1a64").get<std::string>() != fnv1a64_hex(payload))
        throw std::runtime_error("read_binary_dump: checksum mismatch");
    std::vector<double> data(count);
    std::memcpy(data.data(), payload.data(), payload.size());
    if (header) *header = head;
    return data;
}

}  // namespace kms
