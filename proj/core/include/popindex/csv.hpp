#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "popindex/sampler.hpp"
#include "popindex/transforms.hpp"
#include "popindex/types.hpp"

namespace popindex {

// Dataset CSV schema (exact header, LF line endings, '.' decimal separator):
//   year,count_f,count_m,effort,harvest_f,harvest_m,survey_f,survey_m,survey_sd_log
// Empty survey cells mean no survey that year.
inline constexpr const char* kDatasetHeader =
    "year,count_f,count_m,effort,harvest_f,harvest_m,survey_f,survey_m,survey_sd_log";

void write_dataset_csv(const Dataset& data, std::ostream& out);
// Throws ValidationError on malformed input; messages carry the line
// number and the offending column name.
Dataset read_dataset_csv(std::istream& in);

// Shortest round-trip decimal formatting; used by every CSV/JSON writer so
// identical runs produce identical bytes.
std::string format_double(double value);

// Stored draws, one row per draw. The decoded file carries natural-scale
// values plus derived sigmas and the log posterior; the raw file carries
// the unconstrained coordinates.
void write_draws_csv(const ChainOutput& chain, const StateLayout& layout, int first_year,
                     std::ostream& out);
void write_unconstrained_draws_csv(const ChainOutput& chain, std::ostream& out);

// Per-iteration step size and log posterior (trace-plot material).
void write_trace_csv(const ChainOutput& chain, std::ostream& out);

// Generic numeric table reader for draw CSVs: header + double rows.
struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a column; -1 when absent.
  int column(const std::string& name) const;
};
NumericTable read_numeric_csv(std::istream& in);

}  // namespace popindex
