#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include "mhd2d/config.hpp"
#include "mhd2d/error.hpp"
#include "mhd2d/io.hpp"
#include "support/oracles.hpp"

namespace mhd2d {
namespace {

FlowMapState sample_state(int n, std::uint64_t seed) {
  const Grid g(n, 3.5);
  std::mt19937_64 rng(seed);
  FlowMapState s(oracle::random_vector(g, 3, rng), oracle::random_vector(g, 3, rng), 1.25, 0.01,
                 0.0, 17.0);
  return s;
}

bool same_bits(const SpectralField& a, const SpectralField& b) {
  const auto x = a.coeffs(), y = b.coeffs();
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size_bytes()) == 0;
}

void expect_format_error(const std::vector<unsigned char>& bytes, const std::string& fragment) {
  try {
    decode_checkpoint(bytes);
    FAIL() << "expected FormatError containing '" << fragment << "'";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Csv, EmptyRecordsGiveHeaderOnly) {
  EXPECT_EQ(records_to_csv({}), "t\n");
  const CsvTable table = parse_csv("t\n");
  EXPECT_EQ(table.header, std::vector<std::string>{"t"});
  EXPECT_TRUE(table.rows.empty());
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  std::vector<EnergyRecord> records;
  for (int i = 0; i < 20; ++i) {
    EnergyRecord r;
    r.t = 0.1 * i + 1e-17 * i;
    r.norms = {{"b_H2", dist(rng)}, {"a_H1", std::ldexp(dist(rng), -900)}};
    r.residuals = {{"div_A", 1.0 / 3.0 * dist(rng)}};
    records.push_back(r);
  }
  const CsvTable table = parse_csv(records_to_csv(records));
  EXPECT_EQ(table.header, (std::vector<std::string>{"t", "a_H1", "b_H2", "div_A"}));
  ASSERT_EQ(table.rows.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(table.rows[i][0], records[i].t);
    EXPECT_EQ(table.rows[i][table.column("a_H1")], records[i].norms.at("a_H1"));
    EXPECT_EQ(table.rows[i][table.column("b_H2")], records[i].norms.at("b_H2"));
    EXPECT_EQ(table.rows[i][table.column("div_A")], records[i].residuals.at("div_A"));
  }
  EXPECT_THROW(table.column("missing"), FormatError);
}

TEST(Csv, RejectsInconsistentRecords) {
  EnergyRecord a, b;
  a.t = 0.0;
  a.norms = {{"x", 1.0}};
  b.t = 1.0;
  b.norms = {{"y", 1.0}};
  const std::vector<EnergyRecord> mixed{a, b};
  EXPECT_THROW(records_to_csv(mixed), StructuralError);
  b.norms = {{"x", 1.0}};
  b.t = 0.0;
  const std::vector<EnergyRecord> repeated{a, b};
  EXPECT_THROW(records_to_csv(repeated), StructuralError);
}

TEST(Csv, RejectsMalformedText) {
  EXPECT_THROW(parse_csv(""), FormatError);
  EXPECT_THROW(parse_csv("t,x\n1,2,3\n"), FormatError);
  EXPECT_THROW(parse_csv("t,x\n1,abc\n"), FormatError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(third)), third);
}

TEST(Checkpoint, RoundTripIsBitwise) {
  const FlowMapState s = sample_state(16, 2);
  const FlowMapState r = decode_checkpoint(encode_checkpoint(s));
  EXPECT_EQ(r.grid().n(), 16);
  EXPECT_EQ(r.grid().period(), 3.5);
  EXPECT_EQ(r.t, s.t);
  EXPECT_EQ(r.nu, s.nu);
  EXPECT_EQ(r.kappa, s.kappa);
  EXPECT_EQ(r.m, s.m);
  for (int c = 0; c < 2; ++c) {
    EXPECT_TRUE(same_bits(r.eta[c], s.eta[c]));
    EXPECT_TRUE(same_bits(r.u[c], s.u[c]));
  }
}

TEST(Checkpoint, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "mhd2d_checkpoint_test.bin";
  const FlowMapState s = sample_state(8, 3);
  save_checkpoint(path, s);
  const FlowMapState r = load_checkpoint(path);
  std::filesystem::remove(path);
  for (int c = 0; c < 2; ++c) EXPECT_TRUE(same_bits(r.u[c], s.u[c]));
  EXPECT_THROW(load_checkpoint(path), FormatError);
}

TEST(Checkpoint, HeaderLayout) {
  const auto bytes = encode_checkpoint(sample_state(8, 4));
  EXPECT_EQ(std::memcmp(bytes.data(), "MHD2", 4), 0);
  std::uint32_t version = 0, n = 0;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&n, bytes.data() + 8, 4);
  EXPECT_EQ(version, kCheckpointVersion);
  EXPECT_EQ(n, 8u);
  EXPECT_EQ(bytes.size(), 52u + 4u * 8u * 5u * 16u);
}

TEST(Checkpoint, RejectsCorruptInput) {
  const auto good = encode_checkpoint(sample_state(8, 5));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  expect_format_error(bad_magic, "magic");
  auto bad_version = good;
  bad_version[4] = 2;
  expect_format_error(bad_version, "version");
  auto truncated = good;
  truncated.resize(good.size() - 8);
  expect_format_error(truncated, "payload");
  expect_format_error(std::vector<unsigned char>(good.begin(), good.begin() + 20), "truncated");
  auto wrong_n = good;
  wrong_n[8] = 16;
  expect_format_error(wrong_n, "header n = 16");
  auto odd_n = good;
  odd_n[8] = 9;
  expect_format_error(odd_n, "grid size");
}

TEST(Checkpoint, RejectsNonHermitianPayload) {
  auto bytes = encode_checkpoint(sample_state(8, 6));
  // imaginary part of the (0, 0) coefficient of eta1
  const double poison = 0.5;
  std::memcpy(bytes.data() + 52 + 8, &poison, 8);
  expect_format_error(bytes, "Hermitian");
}

ConfigDocument doc_of(const std::string& text) { return ConfigDocument::parse(text, "test.yaml"); }

TEST(Config, DefaultsFromEmptyDocument) {
  const SimConfig c = sim_config_from(doc_of(""));
  EXPECT_EQ(c.n, 64);
  EXPECT_EQ(c.scheme, Scheme::etd_rk4);
  EXPECT_NO_THROW(validate_config(c, true));
}

TEST(Config, ReadsNestedKeys) {
  const SimConfig c = sim_config_from(doc_of(
      "grid: {n: 32}\nphysics: {nu: 0, kappa: 2, m: 7}\n"
      "data: {family: random_symmetric, seed: 9, epsilon_mode: inverse_m}\n"
      "stepping: {scheme: imex_bdf2}\nsweep: {m_list: [10, 20, 40]}\n"));
  EXPECT_EQ(c.n, 32);
  EXPECT_EQ(c.kappa, 2.0);
  EXPECT_EQ(c.nu, 0.0);
  EXPECT_EQ(c.data.family, DataFamily::random_symmetric);
  EXPECT_EQ(c.data.seed, 9u);
  EXPECT_DOUBLE_EQ(c.epsilon_for(7.0), 1.0 / 7.0);
  EXPECT_EQ(c.scheme, Scheme::imex_bdf2);
  EXPECT_EQ(c.m_list, (std::vector<double>{10.0, 20.0, 40.0}));
  EXPECT_EQ(c.sweep_slope_target, -2.0);
}

TEST(Config, UnknownKeyNamed) {
  try {
    sim_config_from(doc_of("grid:\n  n: 32\n  nn: 3\n"));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("grid.nn"), std::string::npos) << e.what();
  }
}

TEST(Config, TypedErrorsNameKeyAndLine) {
  try {
    sim_config_from(doc_of("physics:\n  m: strong\n"));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("test.yaml:2"), std::string::npos) << what;
    EXPECT_NE(what.find("physics.m"), std::string::npos) << what;
  }
  EXPECT_THROW(sim_config_from(doc_of("grid: {n: 3.5}\n")), FormatError);
  EXPECT_THROW(sim_config_from(doc_of("stepping: {dealias: maybe}\n")), FormatError);
  EXPECT_THROW(sim_config_from(doc_of("stepping: {scheme: euler}\n")), FormatError);
  EXPECT_THROW(sim_config_from(doc_of("data: {seed: -1}\n")), FormatError);
  EXPECT_THROW(sim_config_from(doc_of("data: {epsilon_mode: inverse_m, epsilon: 0.1}\n")),
               FormatError);
  EXPECT_THROW(doc_of("grid: [1, 2\n"), FormatError);
  EXPECT_THROW(doc_of("- 1\n- 2\n"), FormatError);
  EXPECT_THROW(doc_of("grid: {n: 1}\ngrid: {n: 2}\n"), FormatError);
}

TEST(Config, ValidationRejectsBadValues) {
  auto rejects = [](const std::string& text, bool lagrangian, const std::string& key) {
    const SimConfig c = sim_config_from(doc_of(text));
    try {
      validate_config(c, lagrangian);
      ADD_FAILURE() << "expected FormatError for " << text;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  };
  rejects("grid: {n: 6}\n", true, "grid.n");
  rejects("grid: {n: 31}\n", true, "grid.n");
  rejects("physics: {nu: -0.1}\n", true, "physics.nu");
  rejects("physics: {nu: 0.1, kappa: 1}\n", true, "physics.nu");
  rejects("physics: {nu: 0, kappa: 0}\n", true, "physics.nu");
  rejects("physics: {kappa: -1}\n", false, "physics.kappa");
  rejects("physics: {m: 0}\n", true, "physics.m");
  rejects("sweep: {m_list: [10, 5, 20]}\n", true, "sweep.m_list");
  rejects("data: {family: from_file}\n", true, "data.path");
  rejects("stepping: {dealias: false}\n", true, "stepping.dealias");
  const SimConfig both = sim_config_from(doc_of("physics: {nu: 0.1, kappa: 1}\n"));
  EXPECT_NO_THROW(validate_config(both, false));
}

TEST(Config, OverridesApply) {
  ConfigDocument doc = doc_of("grid: {n: 32}\n");
  doc.set("grid.n", "48");
  doc.set("physics.m", "12.5");
  const SimConfig c = sim_config_from(doc);
  EXPECT_EQ(c.n, 48);
  EXPECT_EQ(c.m, 12.5);
  EXPECT_THROW(doc.set("bad key", "1"), FormatError);
}

}  // namespace
}  // namespace mhd2d
