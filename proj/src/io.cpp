#include "ssalab/io.hpp"

#include "ssalab/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ssalab {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string(what) + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

TimeSeries read_series_csv(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string cell = trim(line);
    if (cell.empty()) continue;
    double value = 0.0;
    if (!parse_double(cell, value)) {
      if (values.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw ParseError(source + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
    }
    if (!std::isfinite(value)) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": non-finite value '" + cell + "'");
    }
    values.push_back(value);
  }
  if (in.bad()) throw IoError(source + ": read failed");
  if (values.size() < 3) {
    throw ParseError(source + ": series needs at least 3 values, got " + std::to_string(values.size()));
  }
  return TimeSeries(std::span<const double>(values));
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_series_csv(in, path.string());
}

void write_series_csv(std::ostream& out, const TimeSeries& series, const std::string& header) {
  out << header << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < series.size(); ++i) out << series[i] << '\n';
}

std::string eigentriples_to_json(const EigentripleSet& ets) {
  json j;
  j["method"] = std::string(to_string(ets.method));
  j["L"] = ets.window;
  j["K"] = ets.columns;
  json sigmas = json::array();
  json u = json::array();
  json v = json::array();
  for (const auto& t : ets.triples) {
    sigmas.push_back(t.sigma);
    u.push_back(to_std(t.u));
    v.push_back(to_std(t.v));
  }
  j["sigmas"] = std::move(sigmas);
  j["u"] = std::move(u);
  j["v"] = std::move(v);
  return j.dump(1);
}

EigentripleSet eigentriples_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("decomposition JSON: ") + e.what());
  }
  try {
    EigentripleSet ets;
    ets.method = parse_method(j.at("method").get<std::string>());
    ets.window = j.at("L").get<Eigen::Index>();
    ets.columns = j.at("K").get<Eigen::Index>();
    const json& sigmas = j.at("sigmas");
    const json& u = j.at("u");
    const json& v = j.at("v");
    if (!sigmas.is_array() || !u.is_array() || !v.is_array() || u.size() != sigmas.size() ||
        v.size() != sigmas.size()) {
      throw ParseError("decomposition JSON: sigmas, u and v must be arrays of equal length");
    }
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      Eigentriple t{sigmas[i].get<double>(), vector_from(u[i], "u"), vector_from(v[i], "v")};
      if (t.u.size() != ets.window || t.v.size() != ets.columns) {
        throw ParseError("decomposition JSON: triple " + std::to_string(i + 1) + " has wrong vector lengths");
      }
      ets.triples.push_back(std::move(t));
    }
    return ets;
  } catch (const json::exception& e) {
    throw ParseError(std::string("decomposition JSON: ") + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string("decomposition JSON: ") + e.what());
  }
}

std::string signal_model_to_json(const SignalModel& model) {
  json terms = json::array();
  for (const auto& term : model.terms) {
    json coeffs = json::array();
    for (const auto& c : term.coefficients) coeffs.push_back({c.real(), c.imag()});
    terms.push_back({{"re", term.pole.real()},
                     {"im", term.pole.imag()},
                     {"multiplicity", term.coefficients.size()},
                     {"coefficients", std::move(coeffs)}});
  }
  return terms.dump(1);
}

void write_params_csv(std::ostream& out, const std::vector<ParamEstimate>& params) {
  out << "frequency,damping,modulus\n" << std::fixed << std::setprecision(12);
  for (const auto& p : params) out << p.frequency << ',' << p.damping << ',' << p.modulus << '\n';
}

void write_pseudospectrum_csv(std::ostream& out, const Pseudospectrum& ps) {
  out << "omega,value\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < ps.grid.size(); ++k) out << ps.grid[k] << ',' << ps.values[k] << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace ssalab
