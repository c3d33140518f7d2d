#include "dqc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dqc {

void save_eigenvalues_csv(const std::string& path, const DenseVector& eigenvalues) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("save_eigenvalues_csv: cannot open " + path);
    out << "re,im\n";
    char buf[64];
    for (long j = 0; j < eigenvalues.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", eigenvalues(j).real(),
                      eigenvalues(j).imag());
        out << buf;
    }
}

std::vector<cplx> load_eigenvalues_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_eigenvalues_csv: cannot open " + path);
    std::vector<cplx> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("re", 0) == 0) continue;  // header
        double re = 0.0, im = 0.0;
        char extra = 0;
        const int matched = std::sscanf(line.c_str(), "%lf,%lf %c", &re, &im, &extra);
        if (matched != 2)
            throw std::runtime_error("load_eigenvalues_csv: parse error at " + path + ":" +
                                     std::to_string(line_no) + ": '" + line + "'");
        out.emplace_back(re, im);
    }
    return out;
}

void save_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path);
    for (size_t i = 0; i < table.header.size(); ++i)
        out << table.header[i] << (i + 1 < table.header.size() ? "," : "");
    out << "\n";
    char buf[64];
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << buf << (i + 1 < row.size() ? "," : "");
        }
        out << "\n";
    }
}

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        if (line_no == 1) {
            while (std::getline(ss, field, ',')) table.header.push_back(field);
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw std::runtime_error("load_csv: parse error at " + path + ":" +
                                         std::to_string(line_no) + ": '" + field + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
    out << content;
}

}  // namespace dqc
