#include "popindex/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "popindex/errors.hpp"

namespace popindex {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

double parse_double(const std::string& cell, int line_no, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("line " + std::to_string(line_no) + ", column " + column +
                          ": cannot parse '" + cell + "' as a number");
  return value;
}

long long parse_integer(const std::string& cell, int line_no, const std::string& column) {
  long long value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("line " + std::to_string(line_no) + ", column " + column +
                          ": cannot parse '" + cell + "' as an integer");
  return value;
}

const std::array<const char*, 9> kDatasetColumns = {
    "year",      "count_f",  "count_m",  "effort",       "harvest_f",
    "harvest_m", "survey_f", "survey_m", "survey_sd_log"};

}  // namespace

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  out << kDatasetHeader << "\n";
  for (const YearRecord& rec : data.years) {
    out << rec.year << ',' << rec.count_f << ',' << rec.count_m << ','
        << format_double(rec.effort) << ',' << format_double(rec.harvest_f) << ','
        << format_double(rec.harvest_m) << ',';
    if (rec.survey) {
      out << format_double(rec.survey->est_f) << ',' << format_double(rec.survey->est_m)
          << ',' << format_double(rec.survey->sd_log);
    } else {
      out << ",,";
    }
    out << "\n";
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset CSV is empty");
  const std::vector<std::string> header = split_line(line);
  for (const char* expected : kDatasetColumns) {
    bool found = false;
    for (const auto& cell : header)
      if (cell == expected) found = true;
    if (!found)
      throw ValidationError(std::string("dataset CSV is missing column '") + expected +
                            "'");
  }
  if (header.size() != kDatasetColumns.size())
    throw ValidationError("dataset CSV has unexpected extra columns");
  for (std::size_t i = 0; i < kDatasetColumns.size(); ++i)
    if (header[i] != kDatasetColumns[i])
      throw ValidationError("dataset CSV columns must appear in the order: " +
                            std::string(kDatasetHeader));

  Dataset data;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != kDatasetColumns.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(kDatasetColumns.size()) + " cells, got " +
                            std::to_string(cells.size()));
    YearRecord rec;
    rec.year = static_cast<int>(parse_integer(cells[0], line_no, "year"));
    rec.count_f = parse_integer(cells[1], line_no, "count_f");
    rec.count_m = parse_integer(cells[2], line_no, "count_m");
    rec.effort = parse_double(cells[3], line_no, "effort");
    rec.harvest_f = parse_double(cells[4], line_no, "harvest_f");
    rec.harvest_m = parse_double(cells[5], line_no, "harvest_m");
    const bool any_survey = !cells[6].empty() || !cells[7].empty() || !cells[8].empty();
    const bool all_survey = !cells[6].empty() && !cells[7].empty() && !cells[8].empty();
    if (any_survey && !all_survey)
      throw ValidationError("line " + std::to_string(line_no) +
                            ": survey cells must be all present or all empty");
    if (all_survey) {
      SurveyRecord survey;
      survey.est_f = parse_double(cells[6], line_no, "survey_f");
      survey.est_m = parse_double(cells[7], line_no, "survey_m");
      survey.sd_log = parse_double(cells[8], line_no, "survey_sd_log");
      rec.survey = survey;
    }
    data.years.push_back(rec);
  }
  return data;
}

void write_draws_csv(const ChainOutput& chain, const StateLayout& layout, int first_year,
                     std::ostream& out) {
  const std::vector<std::string> names = layout.decoded_names(first_year);
  out << "draw,log_posterior";
  for (const auto& name : names) out << ',' << name;
  out << "\n";
  // The traces are per iteration; stored draws sit on every thin-th entry
  // of the sampling phase.
  const std::size_t sampling_offset =
      chain.log_posterior_trace.size() - static_cast<std::size_t>(chain.n_steps);
  const std::size_t thin =
      chain.draws.rows() > 0 ? static_cast<std::size_t>(chain.n_steps / chain.draws.rows())
                             : 1;
  for (Eigen::Index i = 0; i < chain.draws.rows(); ++i) {
    const Eigen::VectorXd decoded = layout.decode(chain.draws.row(i).transpose());
    out << (i + 1);
    out << ',' << format_double(
        chain.log_posterior_trace[sampling_offset + (i + 1) * thin - 1]);
    for (Eigen::Index j = 0; j < decoded.size(); ++j)
      out << ',' << format_double(decoded[j]);
    out << "\n";
  }
}

void write_unconstrained_draws_csv(const ChainOutput& chain, std::ostream& out) {
  out << "draw";
  for (const auto& name : chain.coordinate_names) out << ',' << name;
  out << "\n";
  for (Eigen::Index i = 0; i < chain.draws.rows(); ++i) {
    out << (i + 1);
    for (Eigen::Index j = 0; j < chain.draws.cols(); ++j)
      out << ',' << format_double(chain.draws(i, j));
    out << "\n";
  }
}

void write_trace_csv(const ChainOutput& chain, std::ostream& out) {
  out << "iteration,step_size,log_posterior\n";
  for (std::size_t i = 0; i < chain.step_size_trace.size(); ++i)
    out << (i + 1) << ',' << format_double(chain.step_size_trace[i]) << ','
        << format_double(chain.log_posterior_trace[i]) << "\n";
}

int NumericTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

NumericTable read_numeric_csv(std::istream& in) {
  NumericTable table;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("CSV is empty");
  table.columns = split_line(line);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != table.columns.size())
      throw ValidationError("line " + std::to_string(line_no) +
                            ": cell count does not match the header");
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      row[i] = parse_double(cells[i], line_no, table.columns[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace popindex
