#ifndef LEVYSPEC_CLI_OUTPUTS_HPP
#define LEVYSPEC_CLI_OUTPUTS_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levyspec/propagator.hpp"

namespace levyspec::cli {

struct EnergyRow {
  int n = 0;
  double E = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct SweepRow {
  double param = 0.0;
  int n = 0;
  double E = 0.0;
  bool converged = false;
};

/// Columns: n,E,converged,iterations
void write_energies_csv(const SpectralResult& r, std::ostream& out);
std::vector<EnergyRow> read_energies_csv(std::istream& in);

/// Columns: x,psi_1..psi_n
void write_eigenfunctions_csv(const SpectralResult& r, std::ostream& out);
/// Returns columns: [0] = x, [i] = psi_i.
std::vector<std::vector<double>> read_eigenfunctions_csv(std::istream& in);

/// Columns: k,E_1..E_n
void write_history_header(std::size_t n_states, std::ostream& out);
void write_history_row(std::size_t k, std::span<const double> energies, std::ostream& out);
void write_history_csv(const SpectralResult& r, std::ostream& out);

/// Columns: param,n,E,converged
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Splits a CSV file into header names and rows of fields; blank lines skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};
CsvTable read_csv(std::istream& in);

}  // namespace levyspec::cli

#endif  // LEVYSPEC_CLI_OUTPUTS_HPP
