#include "outputs.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "levyspec/error.hpp"
#include "levyspec/format.hpp"

namespace levyspec::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_flag(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw Error(ErrorKind::config, "expected a 0/1 flag, got '" + s + "'");
}

long parse_integer(const std::string& s, const char* what) {
  const double v = parse_double(s, what);
  if (v != static_cast<double>(static_cast<long>(v)))
    throw Error(ErrorKind::config, std::string("expected an integer ") + what + ", got '" + s + "'");
  return static_cast<long>(v);
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorKind::config, "CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw Error(ErrorKind::config, "CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                         " fields, expected " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw Error(ErrorKind::config, "CSV input is empty");
  return t;
}

void write_energies_csv(const SpectralResult& r, std::ostream& out) {
  out << "n,E,converged,iterations\n";
  for (std::size_t i = 0; i < r.energies.size(); ++i)
    out << i + 1 << ',' << format_double(r.energies[i]) << ',' << (r.converged[i] ? 1 : 0) << ',' << r.iterations
        << '\n';
}

std::vector<EnergyRow> read_energies_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const std::size_t cn = t.column("n"), ce = t.column("E"), cc = t.column("converged"), ci = t.column("iterations");
  std::vector<EnergyRow> rows;
  for (const auto& f : t.rows)
    rows.push_back({static_cast<int>(parse_integer(f[cn], "n")), parse_double(f[ce], "E"), parse_flag(f[cc]),
                    static_cast<std::size_t>(parse_integer(f[ci], "iterations"))});
  return rows;
}

void write_eigenfunctions_csv(const SpectralResult& r, std::ostream& out) {
  out << 'x';
  for (std::size_t i = 0; i < r.eigenfunctions.size(); ++i) out << ",psi_" << i + 1;
  out << '\n';
  for (std::size_t j = 0; j < r.grid.size(); ++j) {
    out << format_double(r.grid.x(j));
    for (const auto& f : r.eigenfunctions) out << ',' << format_double(f[j]);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_eigenfunctions_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  std::vector<std::vector<double>> cols(t.header.size());
  for (const auto& f : t.rows)
    for (std::size_t c = 0; c < f.size(); ++c) cols[c].push_back(parse_double(f[c], "value"));
  return cols;
}

void write_history_header(std::size_t n_states, std::ostream& out) {
  out << 'k';
  for (std::size_t i = 0; i < n_states; ++i) out << ",E_" << i + 1;
  out << '\n';
}

void write_history_row(std::size_t k, std::span<const double> energies, std::ostream& out) {
  out << k;
  for (double e : energies) out << ',' << format_double(e);
  out << '\n';
}

void write_history_csv(const SpectralResult& r, std::ostream& out) {
  const std::size_t n = r.history.size();
  write_history_header(n, out);
  std::vector<double> row(n);
  const std::size_t steps = n == 0 ? 0 : r.history.front().size();
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) row[i] = r.history[i][k];
    write_history_row(k + 1, row, out);
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "param,n,E,converged\n";
  for (const auto& r : rows)
    out << format_double(r.param) << ',' << r.n << ',' << format_double(r.E) << ',' << (r.converged ? 1 : 0) << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const std::size_t cp = t.column("param"), cn = t.column("n"), ce = t.column("E"), cc = t.column("converged");
  std::vector<SweepRow> rows;
  for (const auto& f : t.rows)
    rows.push_back({parse_double(f[cp], "param"), static_cast<int>(parse_integer(f[cn], "n")),
                    parse_double(f[ce], "E"), parse_flag(f[cc])});
  return rows;
}

}  // namespace levyspec::cli
