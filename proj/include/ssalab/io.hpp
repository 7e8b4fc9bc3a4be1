#pragma once

#include "ssalab/estimate.hpp"
#include "ssalab/forecast.hpp"
#include "ssalab/series.hpp"
#include "ssalab/ssa.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssalab {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// File content is malformed.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One value per line, optional single header line. Blank lines are skipped.
// Rejects NaN/Inf and series shorter than 3.
TimeSeries read_series_csv(std::istream& in, const std::string& source = "<stream>");
TimeSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(std::ostream& out, const TimeSeries& series, const std::string& header = "value");

// {method, L, K, sigmas[], u[][], v[][]}; u and v are lists of vectors.
std::string eigentriples_to_json(const EigentripleSet& ets);
EigentripleSet eigentriples_from_json(const std::string& text);

// List of {re, im, multiplicity, coefficients: [[re, im], ...]}.
std::string signal_model_to_json(const SignalModel& model);

void write_params_csv(std::ostream& out, const std::vector<ParamEstimate>& params);
void write_pseudospectrum_csv(std::ostream& out, const Pseudospectrum& ps);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ssalab
