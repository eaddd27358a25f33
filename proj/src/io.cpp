#include "nprev/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nprev/discretize.hpp"
#include "nprev/errors.hpp"

namespace nprev {

using nlohmann::ordered_json;

namespace {

void check_keys(const ordered_json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected a table");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double get_number(const ordered_json& obj, const std::string& where, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(where, key), "missing required key");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(where, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(where, key), "expected a finite number");
  return d;
}

long long get_integer(const ordered_json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<long long>();
}

std::vector<double> get_numbers(const ordered_json& obj, const std::string& where, const std::string& key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(where, key), "expected an array of numbers");
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(join(where, key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Command parse_command(const ordered_json& v) {
  if (!v.is_string()) throw ConfigError("command", "expected a string");
  const std::string s = v.get<std::string>();
  for (Command c : {Command::spectrum, Command::asymptotics, Command::convergence, Command::corners,
                    Command::kernels_dump}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("command", "unknown command '" + s + "'");
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::asymptotics: return "asymptotics";
    case Command::convergence: return "convergence";
    case Command::corners: return "corners";
    case Command::kernels_dump: return "kernels_dump";
  }
  return "unknown";
}

GeneratingCurve parse_curve(const ordered_json& spec) {
  const std::string w = "curve";
  if (!spec.is_object()) throw ConfigError(w, "expected a table");
  if (!spec.contains("kind") || !spec.at("kind").is_string()) throw ConfigError("curve.kind", "missing curve kind");
  const std::string kind = spec.at("kind").get<std::string>();
  std::optional<GeneratingCurve> curve;
  if (kind == "circle") {
    check_keys(spec, w, {"kind", "center_height", "radius", "center_x"});
    curve = GeneratingCurve::circle(get_number(spec, w, "center_height"), get_number(spec, w, "radius"),
                                    get_number(spec, w, "center_x", 0.0));
  } else if (kind == "ellipse") {
    check_keys(spec, w, {"kind", "center_height", "semi_x", "semi_y", "center_x"});
    curve = GeneratingCurve::ellipse(get_number(spec, w, "center_height"), get_number(spec, w, "semi_x"),
                                     get_number(spec, w, "semi_y"), get_number(spec, w, "center_x", 0.0));
  } else if (kind == "fourier_star") {
    check_keys(spec, w,
               {"kind", "center_height", "base_radius", "cos_coeffs", "sin_coeffs", "rough_amplitude", "rough_alpha",
                "center_x"});
    FourierStar s;
    s.center_height = get_number(spec, w, "center_height");
    s.base_radius = get_number(spec, w, "base_radius");
    s.cos_coeffs = get_numbers(spec, w, "cos_coeffs");
    s.sin_coeffs = get_numbers(spec, w, "sin_coeffs");
    s.rough_amplitude = get_number(spec, w, "rough_amplitude", 0.0);
    s.rough_alpha = get_number(spec, w, "rough_alpha", 1.0);
    s.center_x = get_number(spec, w, "center_x", 0.0);
    curve = GeneratingCurve::fourier_star(std::move(s));
  } else if (kind == "square") {
    check_keys(spec, w, {"kind", "center_height", "side", "center_x"});
    curve = GeneratingCurve::square(get_number(spec, w, "center_height"), get_number(spec, w, "side"),
                                    get_number(spec, w, "center_x", 0.0));
  } else if (kind == "polygon") {
    check_keys(spec, w, {"kind", "vertices", "arc_angles"});
    if (!spec.contains("vertices") || !spec.at("vertices").is_array())
      throw ConfigError("curve.vertices", "expected an array of [x, y] pairs");
    CurvilinearPolygon p;
    for (const auto& v : spec.at("vertices")) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError("curve.vertices", "expected an array of [x, y] pairs");
      p.vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    p.arc_angles = get_numbers(spec, w, "arc_angles");
    curve = GeneratingCurve::polygon(std::move(p));
  } else {
    throw ConfigError("curve.kind", "unknown curve kind '" + kind + "'");
  }
  curve->validate();
  return *curve;
}

RunConfig parse_config(const ordered_json& doc) {
  check_keys(doc, "", {"command", "curve", "n_list", "fit_window", "output_dir", "formats", "seed", "corners"});
  RunConfig c;
  c.echo = doc;
  if (doc.contains("command")) {
    c.command = parse_command(doc.at("command"));
    c.command_given = true;
  }

  if (!doc.contains("n_list") || !doc.at("n_list").is_array() || doc.at("n_list").empty())
    throw ConfigError("n_list", "expected a non-empty array of grid sizes");
  for (const auto& v : doc.at("n_list")) {
    const long long n = get_integer(v, "n_list");
    if (n < 8) throw ConfigError("n_list", "grid size " + std::to_string(n) + " is below 8");
    if (n % 2 != 0) throw ConfigError("n_list", "grid size " + std::to_string(n) + " is odd");
    if (n > 8192) throw ConfigError("n_list", "grid size " + std::to_string(n) + " exceeds 8192");
    if (!c.n_list.empty() && n <= c.n_list.back()) throw ConfigError("n_list", "grid sizes must be ascending");
    c.n_list.push_back(static_cast<int>(n));
  }

  if (doc.contains("fit_window")) {
    const auto& fw = doc.at("fit_window");
    if (!fw.is_array() || fw.size() != 2) throw ConfigError("fit_window", "expected [j_min, j_max]");
    FitWindow win{static_cast<int>(get_integer(fw[0], "fit_window")),
                  static_cast<int>(get_integer(fw[1], "fit_window"))};
    if (win.j_min < 1 || win.j_max < win.j_min) throw ConfigError("fit_window", "expected 1 <= j_min <= j_max");
    if (win.size() < kMinFitPoints) throw ConfigError("fit_window", "window holds fewer than 10 points");
    c.fit_window = win;
  }

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }

  if (doc.contains("formats")) {
    const auto& f = doc.at("formats");
    if (!f.is_array() || f.empty()) throw ConfigError("formats", "expected a non-empty subset of [\"csv\", \"json\"]");
    c.write_csv = c.write_json = false;
    for (const auto& v : f) {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "csv") c.write_csv = true;
      else if (s == "json") c.write_json = true;
      else throw ConfigError("formats", "unknown format " + v.dump());
    }
  }

  if (doc.contains("seed")) {
    const long long s = get_integer(doc.at("seed"), "seed");
    if (s < 0) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  }

  if (doc.contains("corners")) {
    const auto& co = doc.at("corners");
    check_keys(co, "corners", {"bins", "margin", "zero_exclusion"});
    if (co.contains("bins")) {
      c.clustering.bins = static_cast<int>(get_integer(co.at("bins"), "corners.bins"));
      if (c.clustering.bins < 1) throw ConfigError("corners.bins", "expected a positive integer");
    }
    c.clustering.margin = get_number(co, "corners", "margin", c.clustering.margin);
    if (c.clustering.margin < 0) throw ConfigError("corners.margin", "expected a non-negative number");
    c.clustering.zero_exclusion = get_number(co, "corners", "zero_exclusion", c.clustering.zero_exclusion);
    if (c.clustering.zero_exclusion < 0)
      throw ConfigError("corners.zero_exclusion", "expected a non-negative number");
  }

  if (!doc.contains("curve")) throw ConfigError("curve", "missing required key");
  c.curve = parse_curve(doc.at("curve"));

  if (c.curve.has_corners()) {
    const int edges = c.curve.segment_count();
    for (int n : c.n_list) {
      if (n % edges != 0)
        throw ConfigError("n_list", "grid size " + std::to_string(n) + " is not a multiple of the " +
                                        std::to_string(edges) + " polygon edges");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot open " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("parse error: ") + e.what());
  }
  return parse_config(doc);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex_id(std::uint64_t id) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) cell(header[i]);
  end_row();
}

CsvWriter& CsvWriter::cell(double v) {
  if (in_row_++) buf_ += ',';
  buf_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  if (in_row_++) buf_ += ',';
  buf_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (in_row_++) buf_ += ',';
  if (v.find_first_of(",\"\r\n") == std::string::npos) {
    buf_ += v;
  } else {
    buf_ += '"';
    for (char ch : v) {
      if (ch == '"') buf_ += '"';
      buf_ += ch;
    }
    buf_ += '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CsvWriter: row has the wrong number of cells");
  buf_ += "\r\n";
  in_row_ = 0;
}

void CsvWriter::close() {
  std::ofstream os(path_, std::ios::binary);
  os << buf_;
  if (!os) throw std::runtime_error("cannot write " + path_);
}

ordered_json to_json(const SpectrumResult& s) {
  ordered_json j;
  j["n"] = s.n;
  j["curve_id"] = hex_id(s.curve_id);
  j["route"] = s.route == SpectrumRoute::symmetrized ? "symmetrized" : "nystrom";
  j["symmetrization_residual"] = s.symmetrization_residual;  // NaN -> null
  j["max_imag"] = s.max_imag;
  j["zero_count"] = s.zero_count;
  j["exceeds_half"] = s.exceeds_half();
  j["positive_count"] = s.pos_eigs.size();
  j["negative_count"] = s.neg_eigs.size();
  j["all_eigs"] = s.all_eigs;
  j["pos_eigs"] = s.pos_eigs;
  j["neg_eigs"] = s.neg_eigs;
  return j;
}

ordered_json to_json(const AsymptoticsReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["c0_plus"] = r.c0_plus;
  j["c0_minus"] = r.c0_minus;
  j["c0"] = r.c0;
  j["hyperbolic_area_over_4pi"] = r.hyperbolic_area_over_4pi;
  j["fitted_c0_plus"] = r.fitted_c0_plus;
  j["fitted_c0_minus"] = r.fitted_c0_minus;
  j["fitted_c0"] = r.fitted_c0;
  j["fit_window"] = {r.fit_window.j_min, r.fit_window.j_max};
  j["relative_errors"] = {{"c0_plus", r.rel_err_plus}, {"c0_minus", r.rel_err_minus}, {"c0", r.rel_err_all}};
  j["residual_sd"] = {{"c0_plus", r.sd_plus}, {"c0_minus", r.sd_minus}, {"c0", r.sd_all}};
  j["decay_exponent"] = r.decay.slope;
  j["decay_fit"] = {{"slope", r.decay.slope},
                    {"intercept", r.decay.intercept},
                    {"std_error", r.decay.std_error},
                    {"band95", r.decay.band}};
  return j;
}

ordered_json to_json(const CornerPrediction& p) {
  ordered_json j;
  j["angles"] = p.angles;
  j["b"] = p.b;
  j["predicted_interval"] = {p.lower(), p.upper()};
  return j;
}

ordered_json to_json(const ClusteringReport& r) {
  ordered_json j;
  j["interval"] = {r.lo, r.hi};
  j["bin_edges"] = r.bin_edges;
  j["grid_sizes"] = r.grid_sizes;
  j["counts"] = r.counts;
  j["bin_grows"] = r.bin_grows;
  j["totals"] = r.totals;
  j["total_strictly_increasing"] = r.total_strictly_increasing;
  j["total_stable"] = r.total_stable;
  j["zero_exclusion"] = r.zero_exclusion;
  j["outer_totals"] = r.outer_totals;
  j["outer_strictly_increasing"] = r.outer_strictly_increasing;
  j["outer_stable"] = r.outer_stable;
  return j;
}

void write_json(const ordered_json& doc, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  os << doc.dump(2) << '\n';
  if (!os) throw std::runtime_error("cannot write " + path);
}

void write_eigenvalues_csv(const SpectrumResult& s, const std::string& path) {
  CsvWriter w(path, {"j", "rho_abs", "sign"});
  for (std::size_t i = 0; i < s.all_eigs.size(); ++i) {
    w.cell(static_cast<long long>(i + 1)).cell(std::abs(s.all_eigs[i])).cell(s.all_eigs[i] > 0 ? 1 : -1);
    w.end_row();
  }
  w.close();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, const std::string& where) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw std::runtime_error(where + ": unterminated quote");
  out.push_back(cur);
  return out;
}

void validate_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t columns = 0, row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = path + ":" + std::to_string(row + 1);
    const auto cells = split_csv_line(line, where);
    if (row == 0) {
      columns = cells.size();
      for (const auto& c : cells)
        if (c.empty()) throw std::runtime_error(where + ": empty header cell");
    } else {
      if (cells.size() != columns) throw std::runtime_error(where + ": wrong number of cells");
      for (const auto& c : cells) {
        if (c.empty()) continue;
        std::size_t used = 0;
        try {
          std::stod(c, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != c.size() && c != "nan") throw std::runtime_error(where + ": non-numeric cell '" + c + "'");
      }
    }
    ++row;
  }
  if (row == 0) throw std::runtime_error(path + ": missing header row");
}

}  // namespace

void validate_file(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") {
    validate_csv(path);
  } else if (ext == ".json") {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    try {
      if (!ordered_json::accept(is)) throw std::runtime_error(path + ": invalid JSON");
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  } else if (ext == ".bin") {
    (void)read_kernel_matrix(path);
  } else {
    throw std::runtime_error(path + ": unrecognized file type");
  }
}

}  // namespace nprev
