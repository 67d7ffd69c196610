#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mhd2d/diagnostics.hpp"
#include "mhd2d/kinematics.hpp"

namespace mhd2d {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Columns: t, norm labels sorted, then residual labels sorted. Every record
// must carry the same label sets. No records gives the header "t" alone.
std::string records_to_csv(std::span<const EnergyRecord> records);
void write_records_csv(const std::filesystem::path& path, std::span<const EnergyRecord> records);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  // Index of a column or throws FormatError.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

// Binary checkpoint, little endian:
//   "MHD2", u32 version = 1, u32 n, f64 L, t, nu, kappa, m,
//   then eta1, eta2, u1, u2 as interleaved (re, im) f64 in mode order.
constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<unsigned char> encode_checkpoint(const FlowMapState& state);
// Throws FormatError for a bad magic or version, a payload whose length does
// not match the header, or coefficients violating Hermitian symmetry.
FlowMapState decode_checkpoint(std::span<const unsigned char> bytes);

void save_checkpoint(const std::filesystem::path& path, const FlowMapState& state);
FlowMapState load_checkpoint(const std::filesystem::path& path);

}  // namespace mhd2d
