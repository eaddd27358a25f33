#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nprev/asymptotics.hpp"
#include "nprev/corners.hpp"
#include "nprev/geometry.hpp"
#include "nprev/spectral.hpp"

namespace nprev {

enum class Command { spectrum, asymptotics, convergence, corners, kernels_dump };

std::string to_string(Command c);

struct RunConfig {
  Command command = Command::spectrum;
  bool command_given = false;  // the file may omit it; the CLI supplies one
  GeneratingCurve curve = GeneratingCurve::circle(2.0, 1.0);
  std::vector<int> n_list;
  std::optional<FitWindow> fit_window;  // default_fit_window(n) when absent
  std::string output_dir;
  bool write_csv = true;
  bool write_json = true;
  std::uint64_t seed = 0;
  ClusteringOptions clustering;
  nlohmann::ordered_json echo;  // the parsed document, for the manifest
};

/// Strict parse: unknown keys, wrong types and invalid values throw
/// ConfigError naming the key. Curve geometry problems throw GeometryError.
RunConfig parse_config(const nlohmann::ordered_json& doc);
RunConfig load_config(const std::string& path);

GeneratingCurve parse_curve(const nlohmann::ordered_json& spec);

/// Minimal CSV writer: header row, numbers with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();
  void close();

 private:
  std::string path_;
  std::string buf_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

std::string format_double(double v);
std::string hex_id(std::uint64_t id);

nlohmann::ordered_json to_json(const SpectrumResult& s);
nlohmann::ordered_json to_json(const AsymptoticsReport& r);
nlohmann::ordered_json to_json(const CornerPrediction& p);
nlohmann::ordered_json to_json(const ClusteringReport& r);

void write_json(const nlohmann::ordered_json& doc, const std::string& path);

/// eigenvalues.csv layout: j, rho_abs, sign (1 or -1), by descending modulus.
void write_eigenvalues_csv(const SpectrumResult& s, const std::string& path);

/// Re-parses a file written by the tool (.csv, .json or .bin).
/// Throws std::runtime_error describing the first problem.
void validate_file(const std::string& path);

}  // namespace nprev
