#include "learndag/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "learndag/errors.hpp"

namespace learndag::io {

namespace {

char detect_delimiter(const std::string& header) {
    return header.find('\t') != std::string::npos ? '\t' : ',';
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \r\n");
    return s.substr(begin, end - begin + 1);
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::string> read_header(std::ifstream& in, const std::string& path, char& delim) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("'" + path + "' is empty", 1);
    delim = detect_delimiter(line);
    auto names = split(trim(line), delim);
    for (auto& name : names) name = trim(name);
    if (names.size() < 1 || (names.size() == 1 && names[0].empty()))
        throw parse_error("'" + path + "' has no header names", 1);
    return names;
}

// Shared row loop for the two matrix readers.
template <typename Value, typename Parse>
void read_rows(std::ifstream& in, const std::string& path, char delim, std::size_t width,
               Parse parse, std::vector<Value>& values, int& rows) {
    std::string line;
    int line_no = 1;
    rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto trimmed = trim(line);
        if (trimmed.empty()) continue;
        auto fields = split(trimmed, delim);
        if (fields.size() != width)
            throw parse_error("line " + std::to_string(line_no) + " of '" + path + "' has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(width),
                              line_no);
        for (std::size_t col = 0; col < fields.size(); ++col)
            values.push_back(parse(trim(fields[col]), line_no, static_cast<int>(col) + 1));
        ++rows;
    }
}

double parse_double(const std::string& field, const std::string& path, int line, int column) {
    errno = 0;
    char* end = nullptr;
    double value = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
        throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                              " of '" + path + "': '" + field + "' is not a number",
                          line, column);
    return value;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

Dataset read_counts(const std::string& path) {
    auto in = open_for_read(path);
    char delim = ',';
    auto names = read_header(in, path, delim);
    const auto width = names.size();

    std::vector<std::int64_t> values;
    int rows = 0;
    read_rows(in, path, delim, width,
              [&](const std::string& field, int line, int column) -> std::int64_t {
                  double value = parse_double(field, path, line, column);
                  auto rounded = static_cast<std::int64_t>(std::llround(value));
                  if (value != static_cast<double>(rounded))
                      throw parse_error("line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + " of '" + path + "': '" +
                                            field + "' is not an integer",
                                        line, column);
                  if (rounded < 0)
                      throw parse_error("line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + " of '" + path +
                                            "': negative count " + field,
                                        line, column);
                  return rounded;
              },
              values, rows);
    if (rows == 0) throw parse_error("'" + path + "' has a header but no data rows", 1);
    return Dataset{CountMatrix(rows, static_cast<int>(width), std::move(values)), std::move(names)};
}

RealDataset read_real_matrix(const std::string& path) {
    auto in = open_for_read(path);
    char delim = ',';
    auto names = read_header(in, path, delim);
    const auto width = names.size();

    std::vector<double> values;
    int rows = 0;
    read_rows(in, path, delim, width,
              [&](const std::string& field, int line, int column) -> double {
                  double value = parse_double(field, path, line, column);
                  if (value < 0.0)
                      throw parse_error("line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + " of '" + path +
                                            "': negative value " + field,
                                        line, column);
                  return value;
              },
              values, rows);
    if (rows == 0) throw parse_error("'" + path + "' has a header but no data rows", 1);
    preprocess::RealMatrix matrix;
    matrix.n = rows;
    matrix.p = static_cast<int>(width);
    matrix.values = std::move(values);
    return RealDataset{std::move(matrix), std::move(names)};
}

void write_counts(const std::string& path, const CountMatrix& data,
                  const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != data.p())
        throw validation_error("name count does not match the column count");
    auto out = open_for_write(path);
    for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << names[j];
    out << "\n";
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << data(i, j);
        out << "\n";
    }
}

void write_real_matrix(const std::string& path, const preprocess::RealMatrix& data,
                       const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != data.p)
        throw validation_error("name count does not match the column count");
    auto out = open_for_write(path);
    for (int j = 0; j < data.p; ++j) out << (j ? "," : "") << names[j];
    out << "\n";
    for (int i = 0; i < data.n; ++i) {
        for (int j = 0; j < data.p; ++j) out << (j ? "," : "") << format_double(data.at(i, j));
        out << "\n";
    }
}

void write_edge_list(const std::string& path, const Dag& dag,
                     const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != dag.p())
        throw validation_error("name count does not match the node count");
    auto out = open_for_write(path);
    out << "from,to\n";
    for (auto [from, to] : dag.edges()) out << names[from] << "," << names[to] << "\n";
}

Dag read_edge_list(const std::string& path, const std::vector<std::string>& names) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);

    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("'" + path + "' is empty", 1);
    char delim = detect_delimiter(line);

    std::vector<std::pair<int, int>> edges;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto trimmed = trim(line);
        if (trimmed.empty()) continue;
        auto fields = split(trimmed, delim);
        if (fields.size() != 2)
            throw parse_error("line " + std::to_string(line_no) + " of '" + path +
                                  "' must have exactly two fields",
                              line_no);
        auto resolve = [&](const std::string& name, int column) {
            auto it = index.find(trim(name));
            if (it == index.end())
                throw parse_error("line " + std::to_string(line_no) + " of '" + path +
                                      "': unknown node '" + trim(name) + "'",
                                  line_no, column);
            return it->second;
        };
        edges.emplace_back(resolve(fields[0], 1), resolve(fields[1], 2));
    }
    return Dag(static_cast<int>(names.size()), edges);
}

void write_skeleton(const std::string& path, const NeighborSets& sets,
                    const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != sets.p())
        throw validation_error("name count does not match the node count");
    auto out = open_for_write(path);
    out << "from,to\n";
    for (auto [a, b] : sets.pairs()) out << names[a] << "," << names[b] << "\n";
}

void write_dot(const std::string& path, const Dag& dag, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != dag.p())
        throw validation_error("name count does not match the node count");
    auto out = open_for_write(path);
    out << "digraph learned {\n";
    for (int v = 0; v < dag.p(); ++v) out << "  \"" << names[v] << "\";\n";
    for (auto [from, to] : dag.edges())
        out << "  \"" << names[from] << "\" -> \"" << names[to] << "\";\n";
    out << "}\n";
}

void write_sweep_rows(const std::string& path, const std::vector<simulate::SweepRow>& rows) {
    auto out = open_for_write(path);
    out << "kind,p,n,variant,replicate,tp,fp,fn,precision,recall,f1,seconds\n";
    for (const auto& r : rows) {
        out << r.kind << "," << r.p << "," << r.n << "," << r.variant << "," << r.replicate << ",";
        if (r.failed) {
            out << ",,,,,," << format_double(r.seconds) << "\n";
            continue;
        }
        out << r.metrics.tp << "," << r.metrics.fp << "," << r.metrics.fn << ","
            << format_double(r.metrics.precision) << "," << format_double(r.metrics.recall) << ","
            << format_double(r.metrics.f1) << "," << format_double(r.seconds) << "\n";
    }
}

void write_sweep_summary(const std::string& path,
                         const std::vector<simulate::SweepSummary>& summary) {
    auto out = open_for_write(path);
    out << "kind,p,n,variant,replicates,failures,"
           "tp_mean,tp_sd,fp_mean,fp_sd,fn_mean,fn_sd,"
           "precision_mean,precision_sd,recall_mean,recall_sd,f1_mean,f1_sd,seconds_mean\n";
    for (const auto& s : summary) {
        out << s.kind << "," << s.p << "," << s.n << "," << s.variant << "," << s.replicates << ","
            << s.failures << "," << format_double(s.tp_mean) << "," << format_double(s.tp_sd) << ","
            << format_double(s.fp_mean) << "," << format_double(s.fp_sd) << ","
            << format_double(s.fn_mean) << "," << format_double(s.fn_sd) << ","
            << format_double(s.precision_mean) << "," << format_double(s.precision_sd) << ","
            << format_double(s.recall_mean) << "," << format_double(s.recall_sd) << ","
            << format_double(s.f1_mean) << "," << format_double(s.f1_sd) << ","
            << format_double(s.seconds_mean) << "\n";
    }
}

std::vector<std::string> default_names(int p) {
    std::vector<std::string> names;
    names.reserve(p);
    for (int j = 1; j <= p; ++j) names.push_back("X" + std::to_string(j));
    return names;
}

}  // namespace learndag::io
