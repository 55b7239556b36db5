#ifndef LEARNDAG_IO_HPP
#define LEARNDAG_IO_HPP

#include <string>
#include <vector>

#include "learndag/count_matrix.hpp"
#include "learndag/dag.hpp"
#include "learndag/neighbor_sets.hpp"
#include "learndag/preprocess.hpp"
#include "learndag/simulate.hpp"

namespace learndag::io {

struct Dataset {
    CountMatrix data;
    std::vector<std::string> names;
};

struct RealDataset {
    preprocess::RealMatrix data;
    std::vector<std::string> names;
};

// Delimited text with a header row of variable names; comma or tab, detected
// from the header. Throws parse_error with line/column on malformed input.
Dataset read_counts(const std::string& path);
RealDataset read_real_matrix(const std::string& path);

void write_counts(const std::string& path, const CountMatrix& data,
                  const std::vector<std::string>& names);
void write_real_matrix(const std::string& path, const preprocess::RealMatrix& data,
                       const std::vector<std::string>& names);

// Directed edge list: header "from,to", one row per edge, nodes by name.
void write_edge_list(const std::string& path, const Dag& dag,
                     const std::vector<std::string>& names);
Dag read_edge_list(const std::string& path, const std::vector<std::string>& names);

// Undirected skeleton, one row per unordered pair (smaller column index first).
void write_skeleton(const std::string& path, const NeighborSets& sets,
                    const std::vector<std::string>& names);

void write_dot(const std::string& path, const Dag& dag, const std::vector<std::string>& names);

void write_sweep_rows(const std::string& path, const std::vector<simulate::SweepRow>& rows);
void write_sweep_summary(const std::string& path,
                         const std::vector<simulate::SweepSummary>& summary);

std::vector<std::string> default_names(int p);

}  // namespace learndag::io

#endif  // LEARNDAG_IO_HPP
