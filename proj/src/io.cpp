#include "mhd2d/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mhd2d/error.hpp"

namespace mhd2d {
namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', '2'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 5 * 8;

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
  const T le = to_little(v);
  const auto* p = reinterpret_cast<const unsigned char*>(&le);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(std::span<const unsigned char> bytes, std::size_t& offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  offset += sizeof(T);
  return to_little(v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void check_hermitian(const SpectralField& f, const char* name) {
  const Grid& g = f.grid();
  double scale = 0.0;
  for (const Complex& c : f.coeffs()) scale = std::max(scale, std::abs(c));
  const double tol = 1e-12 * scale + 1e-300;
  for (int col : {0, g.n() / 2}) {
    for (int r = 0; r < g.n(); ++r) {
      const Complex a = f(r, col);
      const Complex b = std::conj(f(g.conjugate_row(r), col));
      if (std::abs(a - b) > tol)
        throw FormatError(std::string("checkpoint: ") + name +
                          " violates Hermitian symmetry at mode row " + std::to_string(r) +
                          ", column " + std::to_string(col));
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string records_to_csv(std::span<const EnergyRecord> records) {
  std::string out = "t";
  if (records.empty()) return out + "\n";
  const EnergyRecord& first = records.front();
  for (const auto& [label, value] : first.norms) out += "," + label;
  for (const auto& [label, value] : first.residuals) out += "," + label;
  out += "\n";
  double last_t = -INFINITY;
  for (const EnergyRecord& rec : records) {
    if (rec.norms.size() != first.norms.size() || rec.residuals.size() != first.residuals.size())
      throw StructuralError("records_to_csv: records carry different label sets");
    if (!(rec.t > last_t)) throw StructuralError("records_to_csv: times must strictly increase");
    last_t = rec.t;
    out += format_double(rec.t);
    auto emit = [&](const std::map<std::string, double>& have,
                    const std::map<std::string, double>& want) {
      for (const auto& [label, unused] : want) {
        const auto it = have.find(label);
        if (it == have.end())
          throw StructuralError("records_to_csv: record at t = " + format_double(rec.t) +
                                " lacks column " + label);
        out += "," + format_double(it->second);
      }
    };
    emit(rec.norms, first.norms);
    emit(rec.residuals, first.residuals);
    out += "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_records_csv(const std::filesystem::path& path, std::span<const EnergyRecord> records) {
  write_text(path, records_to_csv(records));
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw FormatError("csv: no column named " + name);
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (table.header.empty()) {
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size())
      throw FormatError("csv line " + std::to_string(number) + ": expected " +
                        std::to_string(table.header.size()) + " fields");
    std::vector<double> row;
    for (const std::string& cell : cells) {
      double v = 0.0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (r.ec != std::errc{} || r.ptr != cell.data() + cell.size())
        throw FormatError("csv line " + std::to_string(number) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw FormatError("csv: missing header");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::vector<unsigned char> encode_checkpoint(const FlowMapState& state) {
  const Grid& g = state.grid();
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 4 * g.mode_count() * 16);
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  for (double v : {g.period(), state.t, state.nu, state.kappa, state.m}) put<double>(out, v);
  for (const VectorField* f : {&state.eta, &state.u})
    for (int c = 0; c < 2; ++c)
      for (const Complex& z : (*f)[c].coeffs()) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
      }
  return out;
}

FlowMapState decode_checkpoint(std::span<const unsigned char> bytes) {
  if (bytes.size() < kHeaderBytes)
    throw FormatError("checkpoint: truncated header (" + std::to_string(bytes.size()) + " bytes)");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("checkpoint: bad magic");
  std::size_t off = 4;
  const auto version = get<std::uint32_t>(bytes, off);
  if (version != kCheckpointVersion)
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  const auto n = get<std::uint32_t>(bytes, off);
  const double period = get<double>(bytes, off);
  const double t = get<double>(bytes, off);
  const double nu = get<double>(bytes, off);
  const double kappa = get<double>(bytes, off);
  const double m = get<double>(bytes, off);
  if (n < 8 || n % 2 != 0 || n > (1u << 16))
    throw FormatError("checkpoint: invalid grid size " + std::to_string(n));
  if (!(period > 0.0) || !std::isfinite(period)) throw FormatError("checkpoint: invalid period");
  const std::size_t modes = static_cast<std::size_t>(n) * (n / 2 + 1);
  const std::size_t expected = kHeaderBytes + 4 * modes * 16;
  if (bytes.size() != expected)
    throw FormatError("checkpoint: payload has " + std::to_string(bytes.size() - kHeaderBytes) +
                      " bytes, header n = " + std::to_string(n) + " needs " +
                      std::to_string(expected - kHeaderBytes));
  const Grid grid(static_cast<int>(n), period);
  FlowMapState state(grid);
  state.t = t;
  state.nu = nu;
  state.kappa = kappa;
  state.m = m;
  const char* names[] = {"eta1", "eta2", "u1", "u2"};
  int which = 0;
  for (VectorField* f : {&state.eta, &state.u})
    for (int c = 0; c < 2; ++c, ++which) {
      for (Complex& z : (*f)[c].coeffs()) {
        const double re = get<double>(bytes, off);
        const double im = get<double>(bytes, off);
        if (!std::isfinite(re) || !std::isfinite(im))
          throw FormatError(std::string("checkpoint: non-finite coefficient in ") + names[which]);
        z = Complex(re, im);
      }
      check_hermitian((*f)[c], names[which]);
    }
  return state;
}

void save_checkpoint(const std::filesystem::path& path, const FlowMapState& state) {
  const auto bytes = encode_checkpoint(state);
  write_text(path, std::string(bytes.begin(), bytes.end()));
}

FlowMapState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return decode_checkpoint(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace mhd2d
