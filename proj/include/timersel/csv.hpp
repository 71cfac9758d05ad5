#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "timersel/scheme1.hpp"
#include "timersel/scheme2.hpp"

// CSV conventions shared by the library serializers and the CLI: UTF-8,
// comma separators, '.' decimal point, reals printed with 17 significant
// digits so files are byte-reproducible and round-trip exactly.

namespace timersel {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_scheme1_csv(std::ostream& os, const Scheme1Solution& s) {
  os << "# k=" << s.mapping.params().k << ",N=" << s.mapping.params().n_slots
     << ",p_star=" << format_real(s.p_star) << "\n";
  os << "j,alpha\n";
  const auto& alphas = s.mapping.alphas();
  for (std::size_t j = 0; j < alphas.size(); ++j)
    os << j << "," << format_real(alphas[j]) << "\n";
}

inline void write_scheme1_csv(std::ostream& os, const Scheme1AsymptoticSolution& s) {
  os << "# k=inf,N=" << s.mapping.n_slots << ",p_star=" << format_real(s.p_star) << "\n";
  os << "j,beta\n";
  for (std::size_t j = 0; j < s.mapping.betas.size(); ++j)
    os << j << "," << format_real(s.mapping.betas[j]) << "\n";
}

inline void write_scheme2_csv(std::ostream& os, const Scheme2Solution& s, double eta) {
  os << "# k=" << s.mapping.params().k << ",N=" << s.mapping.params().n_slots
     << ",p_star=" << format_real(s.p_success) << ",eta=" << format_real(eta)
     << ",lambda_star=" << format_real(s.lambda) << ",p=" << format_real(s.p_success)
     << ",gamma=" << format_real(s.expected_time) << "\n";
  os << "j,alpha\n";
  const auto& alphas = s.mapping.alphas();
  for (std::size_t j = 0; j < alphas.size(); ++j)
    os << j << "," << format_real(alphas[j]) << "\n";
}

inline void write_scheme2_csv(std::ostream& os, const Scheme2AsymptoticSolution& s,
                              double eta) {
  os << "# k=inf,N=" << s.mapping.n_slots << ",p_star=" << format_real(s.p_success)
     << ",eta=" << format_real(eta) << ",lambda_star=" << format_real(s.lambda)
     << ",p=" << format_real(s.p_success) << ",gamma=" << format_real(s.expected_time)
     << "\n";
  os << "j,beta\n";
  for (std::size_t j = 0; j < s.mapping.betas.size(); ++j)
    os << j << "," << format_real(s.mapping.betas[j]) << "\n";
}

// Parsed scheme CSV: either a module file (header "j,alpha" / "j,beta") or a
// single-(k,N) slice of the CLI sweep format "k,N,j,alpha_or_beta,p_star".
struct MappingCsv {
  bool is_beta = false;
  std::vector<double> values;
  std::optional<int> k;
  std::map<std::string, std::string> meta;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw CsvError(std::string("trailing characters in ") + what);
    return v;
  } catch (const CsvError&) {
    throw;
  } catch (const std::exception&) {
    throw CsvError(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

inline long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw CsvError(std::string("trailing characters in ") + what);
    return v;
  } catch (const CsvError&) {
    throw;
  } catch (const std::exception&) {
    throw CsvError(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

}  // namespace detail

inline MappingCsv read_mapping_csv(std::istream& is) {
  MappingCsv out;
  std::string line;
  std::string header;
  std::vector<std::string> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // metadata: comma-separated key=value pairs after '#'
      std::istringstream meta(line.substr(1));
      std::string item;
      while (std::getline(meta, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        std::string key = item.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        out.meta[key] = item.substr(eq + 1);
      }
      continue;
    }
    if (header.empty()) {
      header = line;
    } else {
      rows.push_back(line);
    }
  }
  if (header.empty()) throw CsvError("mapping file: missing header line");
  if (rows.empty()) throw CsvError("mapping file: no data rows");

  if (auto it = out.meta.find("k"); it != out.meta.end() && it->second != "inf")
    out.k = static_cast<int>(detail::parse_int(it->second, "k metadata"));

  if (header == "j,alpha" || header == "j,beta") {
    out.is_beta = header == "j,beta";
    for (const auto& row : rows) {
      const auto f = detail::split_csv_line(row);
      if (f.size() != 2) throw CsvError("mapping file: expected 'j,value' rows");
      const long j = detail::parse_int(f[0], "j");
      if (j != static_cast<long>(out.values.size()))
        throw CsvError("mapping file: j indices must be consecutive from 0");
      out.values.push_back(detail::parse_real(f[1], "interval length"));
    }
    return out;
  }

  if (header == "k,N,j,alpha_or_beta,p_star") {
    std::string k_field;
    for (const auto& row : rows) {
      const auto f = detail::split_csv_line(row);
      if (f.size() != 5) throw CsvError("mapping file: expected 5-column sweep rows");
      if (k_field.empty()) {
        k_field = f[0];
        out.is_beta = k_field == "inf";
        if (!out.is_beta) out.k = static_cast<int>(detail::parse_int(f[0], "k"));
      } else if (f[0] != k_field) {
        throw CsvError("mapping file: sweep contains more than one k; pick one");
      }
      const long j = detail::parse_int(f[2], "j");
      if (j == 0 && !out.values.empty())
        throw CsvError("mapping file: sweep contains more than one N; pick one");
      if (j != static_cast<long>(out.values.size()))
        throw CsvError("mapping file: j indices must be consecutive from 0");
      out.values.push_back(detail::parse_real(f[3], "interval length"));
    }
    return out;
  }

  throw CsvError("mapping file: unrecognized header '" + header + "'");
}

// Tabulated CDF file: rows "x,F" with optional '#' comments.
inline std::vector<std::pair<double, double>> read_cdf_table_csv(std::istream& is) {
  std::vector<std::pair<double, double>> points;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 2) throw CsvError("cdf table: expected 'x,F' rows");
    if (points.empty() && f[0] == "x") continue;  // optional header
    points.emplace_back(detail::parse_real(f[0], "x"), detail::parse_real(f[1], "F"));
  }
  if (points.size() < 2) throw CsvError("cdf table: need at least 2 points");
  return points;
}

}  // namespace timersel
