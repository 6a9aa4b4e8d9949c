#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "sskdyn/errors.hpp"

namespace sskdyn {

// Numeric CSV with full double round-trip precision (17 significant digits).
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw io_error("write_csv: cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < header.size(); ++c)
    std::fprintf(out, "%s%s", header[c].c_str(), c + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      std::fprintf(out, "%.17g%s", row[c], c + 1 < row.size() ? "," : "\n");
  }
  const bool bad = std::ferror(out) != 0;
  std::fclose(out);
  if (bad) throw io_error("write_csv: short write to '" + path + "'");
}

}  // namespace sskdyn
