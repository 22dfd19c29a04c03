#ifndef PMCDM_CSV_HPP
#define PMCDM_CSV_HPP

#include <string>
#include <vector>

namespace pmcdm::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

/// Parses simple comma-separated text (no quoting; the bundled formats never
/// need it). Blank lines are skipped; every row must match the header width.
Table parse(const std::string& text, const std::string& source_name);
Table read_file(const std::string& path);

double to_number(const std::string& field, const std::string& context);

}  // namespace pmcdm::csv

#endif
