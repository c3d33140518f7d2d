// CSV and JSON emission helpers shared by the CLI and the persistence paths.
#pragma once

#include "dqc/types.hpp"

#include <string>
#include <vector>

namespace dqc {

/// Two-column CSV (re, im) with header.
void save_eigenvalues_csv(const std::string& path, const DenseVector& eigenvalues);

/// Parses an eigenvalue CSV; malformed rows raise with the line number.
std::vector<cplx> load_eigenvalues_csv(const std::string& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void save_csv(const std::string& path, const CsvTable& table);
CsvTable load_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dqc
